"""Weyl-group actions on weights: reflections, orbits, longest-word image."""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import factorial

from . import kernels
from .rootsys import LieType, RootSystem, is_root, pairing, root_coords_to_weight

DEFAULT_CAP = 1_000_000


def orbit_cap() -> int:
    """Enumeration cap; overridable through WEYLBRANCH_CAP."""
    v = os.environ.get("WEYLBRANCH_CAP", "")
    if v:
        try:
            return int(v)
        except ValueError:
            pass
    return DEFAULT_CAP


@dataclass(frozen=True)
class OrbitSummary:
    dominant_rep: tuple
    orbit_size: int
    stabilizer_type: tuple  # sorted tuple of LieType


def reflect(rs: RootSystem, w, alpha_rc):
    """s_alpha(w) = w - <w, alpha> alpha; involutive."""
    if not is_root(rs, alpha_rc):
        raise ValueError(f"{alpha_rc} is not a root of {rs.lie_type}")
    w = rs.check_weight(w)
    k = pairing(rs, w, alpha_rc)
    alpha_w = root_coords_to_weight(rs, alpha_rc)
    return tuple(w[i] - k * alpha_w[i] for i in range(rs.rank))


def dominant_representative(rs: RootSystem, w):
    """The unique dominant weight in the orbit of w, plus a word length."""
    w = rs.check_weight(w)
    rep, steps = kernels.dominant_rep_array(rs, w)
    return tuple(int(x) for x in rep), steps


def _component_type(rs: RootSystem, nodes):
    """Lie type of one connected subset of simple-root nodes (0-based)."""
    fam = rs.lie_type.family
    n = rs.rank
    k = len(nodes)
    nodeset = set(nodes)
    if fam in ("B", "C") and (n - 1) in nodeset:
        return LieType(fam, k) if k >= 2 else LieType("A", 1)
    if fam == "D" and (n - 2) in nodeset and (n - 1) in nodeset:
        # connected with both fork nodes forces the branch node too (k >= 3)
        return LieType("D", k)
    return LieType("A", k)


def _stabilizer_components(rs: RootSystem, dom):
    """Connected components of the zero-pairing simple roots of a dominant weight."""
    nodes = [i for i in range(rs.rank) if dom[i] == 0]
    nodeset = set(nodes)
    adj = {i: [] for i in nodes}
    for i in nodes:
        for j in nodes:
            if i < j and rs.cartan[i][j] != 0:
                adj[i].append(j)
                adj[j].append(i)
    comps = []
    left = set(nodes)
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        left -= comp
        comps.append(sorted(comp))
    return comps


def weyl_order_of_type(t: LieType) -> int:
    if t.family == "A":
        return factorial(t.rank + 1)
    if t.family in ("B", "C"):
        return (1 << t.rank) * factorial(t.rank)
    return (1 << (t.rank - 1)) * factorial(t.rank)


def orbit_size(rs: RootSystem, w) -> OrbitSummary:
    """|W| / |W_stab| via the parabolic stabilizer of the dominant representative."""
    dom, _ = dominant_representative(rs, w)
    comps = _stabilizer_components(rs, dom)
    types = tuple(sorted(_component_type(rs, c) for c in comps))
    stab = 1
    for t in types:
        stab *= weyl_order_of_type(t)
    total = rs.weyl_order()
    assert total % stab == 0
    return OrbitSummary(dominant_rep=dom, orbit_size=total // stab, stabilizer_type=types)


def orbit_enumerate(rs: RootSystem, w, cap=None):
    """The full orbit, deduplicated, in lexicographic order."""
    cap = orbit_cap() if cap is None else cap
    size = orbit_size(rs, w).orbit_size
    if size > cap:
        raise kernels.KernelCapacityError(
            f"orbit of {w} on {rs.lie_type} has {size} elements, cap {cap}"
        )
    arr = kernels.weyl_orbit_array(rs, rs.check_weight(w), cap=cap)
    out = sorted(tuple(int(x) for x in row) for row in arr)
    return out


def longest_word_image(rs: RootSystem, w):
    """w_0 . w: equals -w unless the diagram flip acts (A_n, D_n with n odd)."""
    w = rs.check_weight(w)
    n = rs.rank
    fam = rs.lie_type.family
    if fam == "A":
        return tuple(-w[n - 1 - i] for i in range(n))
    if fam == "D" and n % 2 == 1:
        flipped = list(w)
        flipped[n - 2], flipped[n - 1] = flipped[n - 1], flipped[n - 2]
        return tuple(-c for c in flipped)
    return tuple(-c for c in w)
