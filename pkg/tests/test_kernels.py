"""Parity between the jit and pure kernel paths, plus capacity guards."""

import numpy as np
import pytest

from weylbranch import kernels
from weylbranch.checker import dominant_weights_bounded
from weylbranch.rootsys import LieType, build_root_system


CASES = [
    ("A", 3, (1, 1, 1)),
    ("B", 3, (2, 0, 1)),
    ("C", 4, (1, 0, 0, 2)),
    ("D", 4, (0, 1, 0, 1)),
    ("B", 5, (1, 0, 0, 0, 1)),
]


def _run(kind, rs, lam, bits):
    sat = kernels.PURE_KERNELS if kind == "pure" else kernels.JIT_KERNELS
    keys, hts, status = sat["saturate"](
        np.array(lam, dtype=np.int64),
        rs.cartan_np,
        rs.pos_wc_np,
        rs.pos_height_np,
        np.int64(bits),
        np.int64(10**6),
    )
    assert status == kernels.OK
    mults, status = sat["freudenthal"](
        keys, hts, rs.cartan_np, rs.pos_wc_np, rs.pos_rc_np, rs.slen2_np, rs.gram_np, np.int64(bits)
    )
    assert status == kernels.OK
    return keys, hts, mults


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("fam,n,lam", CASES)
def test_jit_pure_parity(fam, n, lam):
    rs = build_root_system(LieType(fam, n))
    bits = kernels.saturate_bits(rs, lam)
    k1, h1, m1 = _run("pure", rs, lam, bits)
    k2, h2, m2 = _run("jit", rs, lam, bits)
    assert np.array_equal(k1, k2)
    assert np.array_equal(h1, h2)
    assert np.array_equal(m1, m2)


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")
def test_orbit_parity():
    rs = build_root_system(LieType("D", 4))
    for lam in dominant_weights_bounded(4, 2):
        bits = kernels.orbit_bits(rs, lam)
        a1, s1 = kernels.PURE_KERNELS["orbit"](np.array(lam, dtype=np.int64), rs.cartan_np, np.int64(bits), np.int64(10**6))
        a2, s2 = kernels.JIT_KERNELS["orbit"](np.array(lam, dtype=np.int64), rs.cartan_np, np.int64(bits), np.int64(10**6))
        assert s1 == s2 == kernels.OK
        assert {tuple(r) for r in a1.tolist()} == {tuple(r) for r in a2.tolist()}


def test_env_flag_dispatch(monkeypatch):
    if not kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    monkeypatch.delenv(kernels.ENV_FLAG, raising=False)
    assert kernels.use_jit() is True
    monkeypatch.setenv(kernels.ENV_FLAG, "1")
    assert kernels.use_jit() is False
    # results identical through the dispatcher on both settings
    rs = build_root_system(LieType("B", 3))
    doms1, _, m1 = kernels.freudenthal_table(rs, (1, 1, 0))
    monkeypatch.delenv(kernels.ENV_FLAG)
    doms2, _, m2 = kernels.freudenthal_table(rs, (1, 1, 0))
    assert np.array_equal(doms1, doms2) and np.array_equal(m1, m2)


def test_capacity_guard():
    rs = build_root_system(LieType("B", 8))
    with pytest.raises(kernels.KernelCapacityError):
        kernels.saturate_bits(rs, (10**6,) * 8)
    with pytest.raises(kernels.KernelCapacityError):
        kernels.weyl_orbit_array(rs, (1, 1, 1, 1, 1, 1, 1, 1), cap=10)


def test_dominant_rep_array():
    rs = build_root_system(LieType("A", 2))
    rep, steps = kernels.dominant_rep_array(rs, (-1, -1))
    assert tuple(rep) == (1, 1) and steps >= 1
