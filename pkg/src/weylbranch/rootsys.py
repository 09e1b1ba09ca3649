"""Exact root-system data and weight-lattice arithmetic for types A/B/C/D.

All data is in Bourbaki labelling.  Weights are plain tuples of ints giving
coefficients in the fundamental-weight basis; root coordinates are tuples of
exact rationals (``fractions.Fraction``) giving coefficients in the simple
roots.  Every operation is exact: no floats anywhere.

Root lengths are normalized so that short roots have squared length 1
(A/D: all roots length 1; B_n: alpha_n short; C_n: alpha_n long).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

FAMILIES = ("A", "B", "C", "D")

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3}


@dataclass(frozen=True, order=True)
class LieType:
    """A classical type label: family in {A,B,C,D} and positive rank."""

    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.rank < _MIN_RANK[self.family]:
            raise ValueError(
                f"rank {self.rank} too small for {self.family} "
                f"(need >= {_MIN_RANK[self.family]})"
            )

    def __str__(self):
        return f"{self.family}{self.rank}"


def _cartan_matrix(t: LieType):
    """cartan[i][j] = <alpha_i, alpha_j> = 2(alpha_i,alpha_j)/(alpha_j,alpha_j)."""
    n = t.rank
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    if t.family == "A":
        nbonds = n - 1
    elif t.family == "D":
        nbonds = n - 3
    else:
        nbonds = n - 2
    for i in range(nbonds):
        a[i][i + 1] = -1
        a[i + 1][i] = -1
    if t.family == "A":
        pass
    elif t.family == "B":
        # alpha_n short: <alpha_{n-1}, alpha_n> = -2, <alpha_n, alpha_{n-1}> = -1
        if n >= 2:
            a[n - 2][n - 1] = -2
            a[n - 1][n - 2] = -1
    elif t.family == "C":
        # alpha_n long: <alpha_{n-1}, alpha_n> = -1, <alpha_n, alpha_{n-1}> = -2
        if n >= 2:
            a[n - 2][n - 1] = -1
            a[n - 1][n - 2] = -2
    elif t.family == "D":
        a[n - 3][n - 2] = -1
        a[n - 2][n - 3] = -1
        a[n - 3][n - 1] = -1
        a[n - 1][n - 3] = -1
    return tuple(tuple(row) for row in a)


def _root_lengths(t: LieType):
    """Squared lengths of the simple roots, short root = 1."""
    n = t.rank
    if t.family in ("A", "D"):
        return (1,) * n
    if t.family == "B":
        return (2,) * (n - 1) + (1,)
    return (1,) * (n - 1) + (2,)  # C


def _positive_roots(cartan):
    """All positive roots in root coordinates, via reflection closure."""
    n = len(cartan)
    seen = set()
    frontier = []
    for i in range(n):
        r = tuple(1 if j == i else 0 for j in range(n))
        seen.add(r)
        frontier.append(r)
    while frontier:
        nxt = []
        for r in frontier:
            for j in range(n):
                # <r, alpha_j> = sum_i r_i * cartan[i][j]
                pr = sum(r[i] * cartan[i][j] for i in range(n))
                s = tuple(r[i] - (pr if i == j else 0) for i in range(n))
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    pos = [r for r in seen if all(c >= 0 for c in r)]
    pos.sort(key=lambda r: (sum(r), r))
    return tuple(pos)


def _invert_fraction_matrix(mat):
    n = len(mat)
    aug = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1, 1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


class RootSystem:
    """Root-system data for one classical type.

    Attributes follow the obvious meanings: ``cartan`` with
    cartan[i][j] = <alpha_i, alpha_j>, ``root_lengths`` the squared simple-root
    lengths (short = 1), ``positive_roots`` in integer root coordinates,
    ``rho`` the half-sum of positive roots in weight coordinates (all ones),
    and ``eG`` the maximal squared length ratio (1 for A/D, 2 for B/C).

    Instances are immutable; obtain them through :func:`build_root_system`,
    which caches per type.
    """

    def __init__(self, lie_type: LieType):
        self.lie_type = lie_type
        n = lie_type.rank
        self.rank = n
        self.cartan = _cartan_matrix(lie_type)
        self.root_lengths = _root_lengths(lie_type)
        self.positive_roots = _positive_roots(self.cartan)
        self.rho = (1,) * n
        self.eG = 1 if lie_type.family in ("A", "D") else 2
        self.inverse_cartan = _invert_fraction_matrix(self.cartan)

        # Scaled integer bilinear form on the weight lattice:
        # gram[i][j] = scale * (lambda_i, lambda_j), slen2[i] = scale * len_i / 2,
        # where (lambda_i, lambda_j) = invcartan[i][j] * len_j / 2.
        gram_frac = [
            [self.inverse_cartan[i][j] * Fraction(self.root_lengths[j], 2) for j in range(n)]
            for i in range(n)
        ]
        denoms = {x.denominator for row in gram_frac for x in row}
        denoms |= {Fraction(l, 2).denominator for l in self.root_lengths}
        scale = 1
        for d in denoms:
            scale = scale * d // _gcd(scale, d)
        self.form_scale = scale
        self.gram_scaled = tuple(
            tuple(int(x * scale) for x in row) for row in gram_frac
        )
        self.slen2 = tuple(int(Fraction(l, 2) * scale) for l in self.root_lengths)

        # numpy mirrors for the kernels
        self.cartan_np = np.array(self.cartan, dtype=np.int64)
        self.pos_rc_np = np.array(self.positive_roots, dtype=np.int64)
        self.pos_wc_np = self.pos_rc_np @ self.cartan_np
        self.pos_height_np = self.pos_rc_np.sum(axis=1)
        self.gram_np = np.array(self.gram_scaled, dtype=np.int64)
        self.slen2_np = np.array(self.slen2, dtype=np.int64)

    def __repr__(self):
        return f"RootSystem({self.lie_type})"

    def check_weight(self, w):
        if len(w) != self.rank:
            raise ValueError(f"weight {w} has wrong length for {self.lie_type}")
        return tuple(int(c) for c in w)

    def weyl_order(self) -> int:
        return weyl_group_order(self.lie_type)

    def form(self, v_rc, w_rc):
        """Exact inner product of two vectors given in root coordinates."""
        n = self.rank
        acc = Fraction(0)
        for i in range(n):
            if v_rc[i] == 0:
                continue
            for j in range(n):
                if w_rc[j] == 0:
                    continue
                # (alpha_i, alpha_j) = cartan[i][j] * len_j / 2
                acc += Fraction(v_rc[i]) * Fraction(w_rc[j]) * self.cartan[i][j] * Fraction(self.root_lengths[j], 2)
        return acc

    def form_weight_root(self, w, alpha_rc):
        """(w, alpha) for w in weight coordinates, alpha in root coordinates."""
        return sum(
            (Fraction(alpha_rc[i]) * w[i] * Fraction(self.root_lengths[i], 2) for i in range(self.rank)),
            Fraction(0),
        )


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def weyl_group_order(t: LieType) -> int:
    n = t.rank
    if t.family == "A":
        return factorial(n + 1)
    if t.family in ("B", "C"):
        return (1 << n) * factorial(n)
    return (1 << (n - 1)) * factorial(n)


@functools.lru_cache(maxsize=None)
def build_root_system(t: LieType) -> RootSystem:
    """Build (and cache) the full root-system data for a valid type."""
    return RootSystem(t)


def is_root(rs: RootSystem, alpha_rc) -> bool:
    a = tuple(alpha_rc)
    if all(x == int(x) for x in a):
        ai = tuple(int(x) for x in a)
        neg = tuple(-x for x in ai)
        pos = set(rs.positive_roots)
        return ai in pos or neg in pos
    return False


def pairing(rs: RootSystem, w, alpha_rc) -> int:
    """<w, alpha> = 2 (w, alpha) / (alpha, alpha), exactly; alpha must be a root."""
    if not is_root(rs, alpha_rc):
        raise ValueError(f"{alpha_rc} is not a root of {rs.lie_type}")
    w = rs.check_weight(w)
    num = 2 * rs.form_weight_root(w, alpha_rc)
    den = rs.form(alpha_rc, alpha_rc)
    val = num / den
    if val.denominator != 1:
        raise ArithmeticError("pairing of a weight with a coroot must be integral")
    return int(val)


def weight_to_root_coords(rs: RootSystem, w):
    """Exact rational coordinates of a weight in the simple-root basis."""
    w = rs.check_weight(w)
    n = rs.rank
    return tuple(
        sum((Fraction(w[i]) * rs.inverse_cartan[i][j] for i in range(n)), Fraction(0))
        for j in range(n)
    )


def root_coords_to_weight(rs: RootSystem, rc):
    """Inverse of :func:`weight_to_root_coords`; exact, errors if non-integral."""
    n = rs.rank
    out = []
    for j in range(n):
        v = sum((Fraction(rc[i]) * rs.cartan[i][j] for i in range(n)), Fraction(0))
        if v.denominator != 1:
            raise ArithmeticError(f"root coordinates {rc} do not give an integral weight")
        out.append(int(v))
    return tuple(out)


def fundamental_weight(rs: RootSystem, i: int):
    """lambda_i as a Weight (1-based index)."""
    if not 1 <= i <= rs.rank:
        raise ValueError(f"index {i} out of range for {rs.lie_type}")
    return tuple(1 if j == i - 1 else 0 for j in range(rs.rank))


def minimal_weights(t: LieType):
    """The non-zero minimal dominant weights of the given type."""
    n = t.rank

    def lam(i):
        return tuple(1 if j == i - 1 else 0 for j in range(n))

    if t.family == "A":
        return {lam(i) for i in range(1, n + 1)}
    if t.family == "B":
        return {lam(n)}
    if t.family == "C":
        return {lam(1)}
    return {lam(1), lam(n - 1), lam(n)}
