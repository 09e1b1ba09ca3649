"""Weyl-group actions: reflections, orbits, longest word."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylbranch.kernels import KernelCapacityError
from weylbranch.rootsys import LieType, build_root_system
from weylbranch.weylgroup import (
    dominant_representative,
    longest_word_image,
    orbit_enumerate,
    orbit_size,
    reflect,
)

TYPES = [
    LieType(f, n)
    for f, lo in (("A", 1), ("B", 2), ("C", 2), ("D", 3))
    for n in range(lo, 7)
]


def simple(rs, i):
    return tuple(1 if k == i else 0 for k in range(rs.rank))


def test_reflect_examples():
    rs = build_root_system(LieType("A", 1))
    assert reflect(rs, (1,), (1,)) == (-1,)
    rs = build_root_system(LieType("B", 4))
    assert reflect(rs, (0, 0, 0, 1), simple(rs, 3)) == (0, 0, 1, -1)
    for alpha in rs.positive_roots:
        assert reflect(rs, (0, 0, 0, 0), alpha) == (0, 0, 0, 0)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(TYPES), st.data())
def test_reflect_involution_and_domrep_invariance(t, data):
    rs = build_root_system(t)
    w = tuple(data.draw(st.integers(-3, 3)) for _ in range(t.rank))
    alpha = data.draw(st.sampled_from(rs.positive_roots))
    r = reflect(rs, w, alpha)
    assert reflect(rs, r, alpha) == w
    assert dominant_representative(rs, r)[0] == dominant_representative(rs, w)[0]


def test_dominant_representative():
    rs = build_root_system(LieType("A", 2))
    assert dominant_representative(rs, (2, 1)) == ((2, 1), 0)
    rep, _ = dominant_representative(rs, (-1, -1))
    assert rep == (1, 1)
    rs = build_root_system(LieType("B", 3))
    w = (0, 0, 1)
    minus = tuple(a - b for a, b in zip(w, (2, 0, 0)))  # lambda_3 - e_1
    # lambda_3 - alpha_1 - alpha_2 - alpha_3 is Weyl-conjugate to lambda_3
    v = [0, 0, 1]
    for j in range(3):
        for i in range(3):
            v[i] -= rs.cartan[j][i]
    rep, steps = dominant_representative(rs, tuple(v))
    assert rep == (0, 0, 1) and steps > 0


def test_orbit_sizes():
    for n in (2, 3, 5, 6):
        rs = build_root_system(LieType("B", n))
        lam_n = tuple(0 if i < n - 1 else 1 for i in range(n))
        s = orbit_size(rs, lam_n)
        assert s.orbit_size == 2**n
        assert s.stabilizer_type == (LieType("A", n - 1),)
    for n in (4, 5, 6):
        rs = build_root_system(LieType("D", n))
        w = tuple(1 if i == n - 2 else 0 for i in range(n))
        assert orbit_size(rs, w).orbit_size == 2 ** (n - 1)
    rs = build_root_system(LieType("C", 3))
    assert orbit_size(rs, (0, 0, 0)).orbit_size == 1


def test_orbit_enumerate_examples():
    rs = build_root_system(LieType("A", 2))
    assert orbit_enumerate(rs, (1, 0)) == [(-1, 1), (0, -1), (1, 0)]
    rs = build_root_system(LieType("C", 2))
    assert len(orbit_enumerate(rs, (1, 0))) == 4
    rs = build_root_system(LieType("D", 4))
    assert orbit_enumerate(rs, (0, 0, 0, 0)) == [(0, 0, 0, 0)]
    with pytest.raises(KernelCapacityError):
        orbit_enumerate(rs, (1, 1, 1, 1), cap=10)


def test_orbit_enumerate_counts_match_sizes():
    # full stated range: every dominant weight with coefficient sum <= 3, rank <= 6
    from weylbranch.checker import dominant_weights_bounded

    for f, lo in (("A", 1), ("B", 2), ("C", 2), ("D", 3)):
        for n in range(lo, 7):
            rs = build_root_system(LieType(f, n))
            for lam in dominant_weights_bounded(n, 3):
                summary = orbit_size(rs, lam)
                assert len(orbit_enumerate(rs, lam)) == summary.orbit_size


def test_longest_word():
    rs = build_root_system(LieType("B", 4))
    assert longest_word_image(rs, (1, 2, 0, 3)) == (-1, -2, 0, -3)
    rs = build_root_system(LieType("A", 2))
    assert longest_word_image(rs, (1, 0)) == (0, -1)
    rs = build_root_system(LieType("D", 4))
    assert longest_word_image(rs, (0, 0, 1, 0)) == (0, 0, -1, 0)
    rs = build_root_system(LieType("D", 5))
    assert longest_word_image(rs, (0, 0, 0, 0, 1)) == (0, 0, 0, -1, 0)
    for t in TYPES:
        rs = build_root_system(t)
        w = tuple((i % 3) for i in range(t.rank))
        img = longest_word_image(rs, w)
        assert longest_word_image(rs, img) == w
        # dominant to anti-dominant
        assert dominant_representative(rs, img)[0] == w
        assert all(c <= 0 for c in img)


def test_orbit_stabilizer_types_with_fork():
    rs = build_root_system(LieType("D", 5))
    s = orbit_size(rs, (1, 0, 0, 0, 0))
    assert s.orbit_size == 10  # 2n vectors of the natural quadric
    assert s.stabilizer_type == (LieType("D", 4),)
    s = orbit_size(rs, (0, 0, 1, 0, 0))
    assert s.stabilizer_type == (LieType("A", 1), LieType("A", 1), LieType("A", 2))
    rs = build_root_system(LieType("C", 4))
    s = orbit_size(rs, (0, 1, 0, 0))
    assert s.stabilizer_type == (LieType("A", 1), LieType("C", 2))
    assert s.orbit_size == (2**4 * 24) // (2 * 8)
