import pytest

from weylbranch import kernels
from weylbranch.rootsys import LieType, build_root_system


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the jit kernels once so timed tests measure steady-state work
    rs = build_root_system(LieType("A", 1))
    kernels.freudenthal_table(rs, (2,))
    kernels.weyl_orbit_array(rs, (1,))
