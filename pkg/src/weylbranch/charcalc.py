"""Characters and dimensions for Weyl modules of the classical groups.

Freudenthal multiplicity tables, Weyl's dimension formula, saturation of
dominant weight sets, the closed-form irreducible dimensions with their
congruence cases, Levi reduction of multiplicity computations, and the
Weyl-character subtraction routine that serves as the branching oracle.
"""

from __future__ import annotations

import functools
import heapq
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .rootsys import (
    LieType,
    RootSystem,
    build_root_system,
    weight_to_root_coords,
)
from .weylgroup import dominant_representative, orbit_cap, orbit_size


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Characteristic:
    """Field characteristic; 0 means characteristic zero."""

    p: int

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"characteristic must be 0 or prime, got {self.p}")

    def divides(self, value: int) -> bool:
        if self.p == 0:
            return value == 0
        return value % self.p == 0


@dataclass(frozen=True)
class CharacterTable:
    highest_weight: tuple
    entries: dict  # dominant Weight -> multiplicity
    total_dim: int

    def multiplicity(self, rs: RootSystem, w) -> int:
        rep, _ = dominant_representative(rs, w)
        return self.entries.get(rep, 0)


def _require_dominant(lam):
    if any(c < 0 for c in lam):
        raise ValueError(f"weight {lam} is not dominant")
    return tuple(int(c) for c in lam)


@functools.lru_cache(maxsize=None)
def _freudenthal_cached(t: LieType, lam):
    rs = build_root_system(t)
    try:
        doms, hts, mults = kernels.freudenthal_table(rs, lam)
        entries = {tuple(int(x) for x in row): int(m) for row, m in zip(doms, mults)}
    except kernels.KernelCapacityError:
        if kernels.saturate_bits_fit(rs, lam):
            raise
        entries = kernels.freudenthal_table_bigrank(rs, lam)
    total = 0
    for w, m in entries.items():
        total += m * orbit_size(rs, w).orbit_size
    return CharacterTable(highest_weight=tuple(lam), entries=entries, total_dim=total)


def freudenthal(rs: RootSystem, lam) -> CharacterTable:
    """Full dominant multiplicity table of the Weyl module W(lam)."""
    lam = _require_dominant(rs.check_weight(lam))
    return _freudenthal_cached(rs.lie_type, lam)


def weyl_dim(rs: RootSystem, lam) -> int:
    """Weyl's dimension formula, evaluated exactly."""
    lam = _require_dominant(rs.check_weight(lam))
    n = rs.rank
    num = 1
    den = 1
    for rc in rs.positive_roots:
        a = 0
        b = 0
        for i in range(n):
            if rc[i]:
                a += rc[i] * (lam[i] + 1) * rs.slen2[i]
                b += rc[i] * rs.slen2[i]
        num *= a
        den *= b
    assert num % den == 0
    return num // den


def saturate(rs: RootSystem, lam):
    """All dominant weights under lam (the dominant support of W(lam))."""
    lam = _require_dominant(rs.check_weight(lam))
    try:
        _, doms, _, _ = kernels.dominant_table(rs, lam)
    except kernels.KernelCapacityError:
        if kernels.saturate_bits_fit(rs, lam):
            raise
        return set(kernels._dominant_table_bigrank(rs, lam, 2_000_000))
    return {tuple(int(x) for x in row) for row in doms}


def premet_applies(rs: RootSystem, chi: Characteristic) -> bool:
    """True iff p = 0 or p > e(G); then L(lam) and W(lam) share their weight set."""
    return chi.p == 0 or chi.p > rs.eG


def chain_multiplicity(lam, i: int, d: int) -> int:
    """lam - d*alpha_i is a weight of L(lam) of multiplicity 1 for 1 <= d <= a_i."""
    a_i = lam[i - 1]
    if not 1 <= d <= a_i:
        raise ValueError(f"need 1 <= d <= a_i = {a_i}, got d = {d}")
    return 1


def mult_rule_118(c: int, d: int, length_case: str, chi: Characteristic) -> int:
    """m(lam - alpha - beta) for adjacent simple roots with coefficients c, d > 0."""
    if c <= 0 or d <= 0:
        raise ValueError("both coefficients must be positive")
    p = chi.p
    if p == 0:
        return 2
    if length_case == "equal":
        return 1 if c + d == p - 1 else 2
    if length_case == "double":
        return 1 if (2 * c + d + 2) % p == 0 else 2
    if length_case == "triple":
        return 1 if (3 * c + d + 3) % p == 0 else 2
    raise ValueError(f"unknown length case {length_case!r}")


def mult_rule_s816(a: int, b: int, i: int, j: int, chi: Characteristic) -> int:
    """m(lam - (alpha_r + ... + alpha_s)) for lam = a lam_i + b lam_j on A_n."""
    if not (i < j and a > 0 and b > 0):
        raise ValueError("need i < j and a, b > 0")
    if chi.p and (a + b + j - i) % chi.p == 0:
        return j - i
    return j - i + 1


def mult_rule_bwt(n: int, chi: Characteristic) -> int:
    """m(lam_n) in L(lam_1 + lam_n) on B_n, p != 2."""
    if chi.p == 2:
        raise ValueError("rule not available at p = 2")
    if chi.p and (2 * n + 1) % chi.p == 0:
        return n - 1
    return n


def mult_rule_c2l3(a: int, chi: Characteristic) -> int:
    """m(lam - alpha_{n-2} - 2 alpha_{n-1} - alpha_n) for C_n, lam = lam_{n-1} + a lam_n."""
    p = chi.p
    if p == 0 or not 0 <= a < p or (2 * a + 3) % p != 0:
        raise ValueError("requires 0 <= a < p and 2a + 3 = 0 (mod p)")
    return 1


def _binom(n, k):
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def _is_p_restricted(lam, chi: Characteristic) -> bool:
    return chi.p == 0 or all(c < chi.p for c in lam)


def irr_dim_with_rule(rs: RootSystem, lam, chi: Characteristic):
    """(dim L(lam) or None, rule name).  lam must be p-restricted."""
    lam = _require_dominant(rs.check_weight(lam))
    if not _is_p_restricted(lam, chi):
        raise ValueError(f"{lam} is not {chi.p}-restricted")
    n = rs.rank
    fam = rs.lie_type.family
    p = chi.p
    if all(c == 0 for c in lam):
        return 1, "trivial"
    if p == 0:
        return weyl_dim(rs, lam), "weyl-char-0"

    support = [(i + 1, c) for i, c in enumerate(lam) if c]

    def is_fund(k):
        return support == [(k, 1)]

    # single-orbit (minimal weight) modules: dimension is characteristic-free
    if fam == "A" and len(support) == 1 and support[0][1] == 1:
        k = support[0][0]
        return _binom(n + 1, k), "minimal"
    if fam == "B" and is_fund(n):
        if p == 2:
            return None, "unknown"
        return 1 << n, "spin"
    if fam == "C" and is_fund(1):
        return 2 * n, "minimal"
    if fam == "D" and is_fund(1):
        return 2 * n, "minimal"
    if fam == "D" and (is_fund(n - 1) or is_fund(n)):
        return 1 << (n - 1), "spin"

    if fam == "A":
        if len(support) == 1 and support[0][0] in (1, n):
            a = support[0][1]
            return _binom(n + a, a), "table"
        return None, "unknown"

    if fam == "B":
        if p == 2:
            return None, "unknown"
        if support == [(1, 2)]:
            return n * (2 * n + 3) - (1 if (2 * n + 1) % p == 0 else 0), "table"
        if is_fund(2):
            return 4 if n == 2 else n * (2 * n + 1), "table"
        if support == [(1, 1), (n, 1)]:
            if (2 * n + 1) % p == 0:
                return (1 << n) * (2 * n - 1), "table"
            return (1 << (n + 1)) * n, "table"
        return None, "unknown"

    if fam == "C":
        if support == [(1, 2)]:
            return 2 * n if p == 2 else n * (2 * n + 1), "table"
        if is_fund(2):
            return (n - 1) * (2 * n + 1) - (1 if n % p == 0 else 0), "table"
        if p > 2:
            a = (p - 3) // 2
            sz_support = [(n - 1, 1)] + ([(n, a)] if a else [])
            if support == sz_support:
                return (p**n - 1) // 2, "sz"
            if n >= 2 and support == [(n, (p - 1) // 2)]:
                return (p**n + 1) // 2, "sz"
        return None, "unknown"

    # D
    if support == [(1, 2)]:
        if p == 2:
            return 2 * n, "table"
        return (n + 1) * (2 * n - 1) - (1 if n % p == 0 else 0), "table"
    if is_fund(2) and n >= 4:
        if p == 2:
            return n * (2 * n - 1) - (2 if n % 2 == 0 else 1), "table"
        return n * (2 * n - 1), "table"
    if support in ([(n - 1, 2)], [(n, 2)]):
        if p == 2:
            return 1 << (n - 1), "table"
        return _binom(2 * n, n) // 2, "table"
    if support in ([(1, 1), (n - 1, 1)], [(1, 1), (n, 1)]):
        if n % p == 0:
            return (1 << n) * (n - 1), "table"
        return (1 << (n - 1)) * (2 * n - 1), "table"
    return None, "unknown"


def irr_dim(rs: RootSystem, lam, chi: Characteristic):
    """Exact dim L(lam) when a closed form applies, else None ("unknown")."""
    return irr_dim_with_rule(rs, lam, chi)[0]


# ---------------------------------------------------------------------------
# Levi reduction


def _connected_components(rs: RootSystem, nodes):
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


def levi_subdiagram_type(rs: RootSystem, nodes):
    """(LieType, Bourbaki-ordered original nodes) for a connected subset."""
    fam = rs.lie_type.family
    n = rs.rank
    k = len(nodes)
    nodeset = set(nodes)
    order = sorted(nodes)
    if fam in ("B", "C") and (n - 1) in nodeset:
        sub = LieType(fam, k) if k >= 2 else LieType("A", 1)
        return sub, order
    if fam == "D" and (n - 2) in nodeset and (n - 1) in nodeset:
        if k < 3:
            raise ValueError("disconnected fork nodes")
        return LieType("D", k), order
    return LieType("A", k), order


def levi_reduce(rs: RootSystem, lam, mu):
    """Reduce m_{V}(mu) to a Levi subsystem when lam - mu has connected support.

    Returns (sub RootSystem or None, sub lam, sub mu); None with empty weights
    for the trivial case mu = lam.
    """
    lam = rs.check_weight(lam)
    mu = rs.check_weight(mu)
    diff = tuple(a - b for a, b in zip(lam, mu))
    rc = weight_to_root_coords(rs, diff)
    if any(x.denominator != 1 or x < 0 for x in rc):
        raise ValueError("lam - mu is not a non-negative root-lattice element")
    nodes = [i for i, x in enumerate(rc) if x != 0]
    if not nodes:
        return None, (), ()
    comps = _connected_components(rs, nodes)
    if len(comps) > 1:
        raise ValueError("support of lam - mu is not connected")
    sub_type, order = levi_subdiagram_type(rs, comps[0])
    sub_rs = build_root_system(sub_type)
    sub_lam = tuple(lam[i] for i in order)
    sub_mu = tuple(mu[i] for i in order)
    return sub_rs, sub_lam, sub_mu


# ---------------------------------------------------------------------------
# full characters and the branching oracle


@functools.lru_cache(maxsize=2048)
def _full_character_cached(t: LieType, lam, cap):
    rs = build_root_system(t)
    table = freudenthal(rs, lam)
    out = {}
    for dom, m in table.entries.items():
        arr = kernels.weyl_orbit_array(rs, dom, cap=cap)
        for row in arr:
            out[tuple(int(x) for x in row)] = m
    return out


def full_character(rs: RootSystem, lam, cap=None):
    """The complete W-invariant weight multiset of W(lam)."""
    cap = orbit_cap() if cap is None else cap
    lam = _require_dominant(rs.check_weight(lam))
    return _full_character_cached(rs.lie_type, lam, cap)


@functools.lru_cache(maxsize=4096)
def _product_character_cached(types, hw_parts, cap):
    chars = []
    for t, hw in zip(types, hw_parts):
        rs = build_root_system(t)
        chars.append(full_character(rs, hw, cap))
    prod = {(): 1}
    for c in chars:
        nxt = {}
        for base, bm in prod.items():
            for w, m in c.items():
                nxt[base + w] = bm * m
        prod = nxt
    return prod


def _height_scalers(rs_list):
    """Integer per-coordinate height vectors, common scale across factors."""
    vecs = []
    denom = 1
    for rs in rs_list:
        hv = []
        for i in range(rs.rank):
            s = sum((rs.inverse_cartan[i][j] for j in range(rs.rank)), Fraction(0))
            hv.append(s)
            denom = denom * s.denominator // np.gcd(denom, s.denominator)
        vecs.append(hv)
    out = []
    for hv in vecs:
        out.append(tuple(int(x * denom) for x in hv))
    return out


def weyl_character_subtract(rs_list, weight_multiset, cap=None):
    """Express a W-invariant multiset as a sum of product Weyl characters.

    ``rs_list`` gives the factors of the product root system; keys of
    ``weight_multiset`` are flat tuples holding the concatenated factor
    coordinates, optionally followed by extra coordinates (central charges)
    that are carried through unchanged.  Returns {highest weight: multiplicity}.
    Raises ValueError when the input is not a genuine character.
    """
    cap = orbit_cap() if cap is None else cap
    rs_list = tuple(rs_list)
    ranks = [rs.rank for rs in rs_list]
    total_rank = sum(ranks)
    types = tuple(rs.lie_type for rs in rs_list)
    hvecs = _height_scalers(rs_list)

    remaining = {}
    for w, m in weight_multiset.items():
        if m < 0:
            raise ValueError(f"negative input multiplicity at {w}")
        if m:
            remaining[tuple(w)] = int(m)

    def height(key):
        h = 0
        off = 0
        for hv, r in zip(hvecs, ranks):
            for i in range(r):
                h += key[off + i] * hv[i]
            off += r
        return h

    heap = []
    for key in remaining:
        heapq.heappush(heap, (-height(key), tuple(-c for c in key), key))

    def split(key):
        parts = []
        off = 0
        for r in ranks:
            parts.append(key[off:off + r])
            off += r
        return tuple(parts), key[off:]

    out = {}
    while remaining:
        while heap:
            _, _, key = heapq.heappop(heap)
            if key in remaining:
                break
        else:
            raise AssertionError("heap exhausted with weights remaining")
        mult = remaining[key]
        parts, charge = split(key)
        for part in parts:
            if any(c < 0 for c in part):
                raise ValueError(f"maximal weight {key} is not dominant: not a character")
        prod = _product_character_cached(types, parts, cap)
        for w, c in prod.items():
            full = w + charge
            have = remaining.get(full, 0) - mult * c
            if have < 0:
                raise ValueError(f"subtraction drives multiplicity negative at {full}")
            if have:
                remaining[full] = have
            else:
                remaining.pop(full, None)
        out[key] = out.get(key, 0) + mult
    return out


def product_weyl_dim(rs_list, hw_flat):
    """Product of factor Weyl dimensions for a flat concatenated weight."""
    dim = 1
    off = 0
    for rs in rs_list:
        dim *= weyl_dim(rs, hw_flat[off:off + rs.rank])
        off += rs.rank
    return dim
