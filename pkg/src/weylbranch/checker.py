"""Branching verification engine.

At characteristic zero the composition factors of a restriction are computed
exactly: the full Weyl character is pushed through the embedding and
decomposed into product Weyl characters.  At positive characteristic only
necessary conditions (restriction-orbit membership, the h and ell invariants,
multiplicity bookkeeping) and closed-form dimension identities are evaluated;
anything beyond them is reported INCONCLUSIVE rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import charcalc, kernels
from .charcalc import Characteristic, freudenthal, weyl_dim
from .embeddings import (
    Embedding,
    GeomFamily,
    build_embedding,
    central_multiplicity,
    component_orbit_set,
    ell_value,
    existence_ok,
    kappa_of,
    restrict_weight,
)
from .rootsys import LieType, build_root_system
from .weylgroup import orbit_cap

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class ClassificationEntry:
    ambient: LieType
    family: GeomFamily
    lam: tuple
    p_condition: str
    expected_restriction: tuple | None  # semisimple coordinates only
    expected_kappa: int | None
    source: str
    entry_id: str


@dataclass
class BranchReport:
    factors: dict
    dims: dict
    verdict: str
    reasons: list = field(default_factory=list)
    kappa_found: int | None = None
    dim_lhs: int | None = None
    dim_rhs: int | None = None


def p_condition_ok(cond: str, p: int) -> bool:
    cond = cond.strip()
    if cond in ("", "any"):
        return True
    for clause in cond.split("&"):
        clause = clause.strip()
        if clause.startswith("p!="):
            if p == int(clause[3:]):
                return False
        elif clause.startswith("p>="):
            if p < int(clause[3:]):
                return False
        elif clause.startswith("p="):
            if p != int(clause[2:]):
                return False
        else:
            raise ValueError(f"unparseable p-condition {cond!r}")
    return True


# ---------------------------------------------------------------------------
# characteristic-zero branching


def restricted_multiset(rs, lam, e: Embedding, cap=None):
    """Push the full Weyl character of W(lam) through the restriction map."""
    cap = orbit_cap() if cap is None else cap
    table = freudenthal(rs, lam)
    out = {}
    for dom in sorted(table.entries):
        m = table.entries[dom]
        arr = kernels.weyl_orbit_array(rs, dom, cap=cap)
        res = arr @ e.restriction
        uniq, counts = np.unique(res, axis=0, return_counts=True)
        for row, c in zip(uniq, counts):
            key = tuple(int(x) for x in row)
            out[key] = out.get(key, 0) + m * int(c)
    return out


def clifford_classify(e: Embedding, factors):
    """(irreducible?, kappa, reasons) for a factor multiset at p = 0."""
    reasons = []
    hws = sorted(factors)
    orbit = component_orbit_set(e, hws[-1])
    kappa = sum(factors.values())
    if set(hws) != set(orbit):
        reasons.append({
            "kind": "factors-not-single-orbit",
            "orbit_size": len(orbit),
            "factor_count": len(hws),
        })
        return False, kappa, reasons
    mults = {factors[h] for h in hws}
    if len(mults) != 1:
        reasons.append({"kind": "unequal-orbit-multiplicities", "mults": sorted(mults)})
        return False, kappa, reasons
    mult = mults.pop()
    allowed = central_multiplicity(e, hws[-1])
    if mult != allowed:
        reasons.append({
            "kind": "multiplicity-without-central-cover",
            "mult": mult,
            "allowed": allowed,
        })
        return False, kappa, reasons
    return True, kappa, reasons


def branch_p0(rs, lam, e: Embedding, cap=None) -> BranchReport:
    """Exact composition factors of the restriction at p = 0."""
    lam = tuple(int(c) for c in lam)
    if any(c < 0 for c in lam) or not any(lam):
        raise ValueError("highest weight must be dominant and non-zero")
    multiset = restricted_multiset(rs, lam, e, cap=cap)
    factors = charcalc.weyl_character_subtract(e.factor_systems, multiset, cap=cap)
    dims = {}
    total = 0
    for hw, m in factors.items():
        d = charcalc.product_weyl_dim(e.factor_systems, hw)
        dims[hw] = d
        total += m * d
    expected = weyl_dim(rs, lam)
    if total != expected:
        # conservation is structural; a failure means a genuine bug
        raise AssertionError(
            f"branch conservation failed: {total} != {expected} for {rs.lie_type} {lam}"
        )
    ok, kappa, reasons = clifford_classify(e, factors)
    return BranchReport(
        factors=factors,
        dims=dims,
        verdict=PASS if ok else FAIL,
        reasons=reasons,
        kappa_found=kappa,
        dim_lhs=expected,
        dim_rhs=total,
    )


# ---------------------------------------------------------------------------
# necessary-condition filters (valid in every characteristic)


def _under(e: Embedding, w, c):
    """Is w under c: difference in the non-negative factor root lattice, equal charges."""
    pw, chw = e.split(w)
    pc, chc = e.split(c)
    if chw != chc:
        return False
    for f, rs in enumerate(e.factor_systems):
        diff = tuple(a - b for a, b in zip(pc[f], pw[f]))
        inv = rs.inverse_cartan
        for j in range(rs.rank):
            v = sum(diff[i] * inv[i][j] for i in range(rs.rank))
            if v < 0 or v.denominator != 1:
                return False
    return True


def _diagram_paths(rs):
    """Connected chains in the Dynkin diagram as 0-based node lists.

    Index windows are connected for every classical diagram except the
    two-element window across the D fork; D additionally has the chains
    running to the far fork tip.
    """
    n = rs.rank
    fam = rs.lie_type.family
    paths = []
    for i in range(n):
        for j in range(i, n):
            if fam == "D" and i == n - 2 and j == n - 1:
                continue  # the fork tips are not adjacent
            paths.append(list(range(i, j + 1)))
    if fam == "D":
        for i in range(n - 2):
            paths.append(list(range(i, n - 2)) + [n - 1])
    return paths


def _chain_weights(rs, lam, chi):
    """lam minus connected simple-root chains, certified to lie in L(lam).

    Each chain sums to a positive root beta.  The weight lam - beta is
    guaranteed for every characteristic when <lam, beta-coroot> does not
    vanish mod p (the commutator [e, f] acts by it on the highest vector),
    and for all of the Weyl support when p = 0 or p > e(G).
    """
    from .rootsys import pairing

    cartan = rs.cartan_np
    out = []
    saturated = chi.p == 0 or chi.p > rs.eG
    for nodes in _diagram_paths(rs):
        if not any(lam[k] for k in nodes):
            continue
        beta = tuple(1 if k in nodes else 0 for k in range(rs.rank))
        c = pairing(rs, lam, beta)
        if c <= 0 or (not saturated and c % chi.p == 0):
            continue
        vec = np.array(lam, dtype=np.int64)
        for k in nodes:
            vec -= cartan[k]
        out.append(((nodes[0] + 1, nodes[-1] + 1), tuple(int(x) for x in vec)))
    return out


def necessary_filters(rs, lam, e: Embedding, chi: Characteristic):
    """Disqualifying findings for the candidate highest weight lam.

    Every finding is a certificate that the restriction cannot be irreducible:
    a known weight of L(lam) whose restriction escapes the component orbit of
    lam, or more weights landing on one restricted weight than the factors can
    carry.  Sound in every characteristic.
    """
    lam = tuple(int(c) for c in lam)
    lam_h = restrict_weight(e, lam)
    orbit = component_orbit_set(e, lam_h)
    findings = []
    groups = {}
    for chain, mu in _chain_weights(rs, lam, chi):
        mu_h = restrict_weight(e, mu)
        above = [c for c in orbit if _under(e, mu_h, c)]
        if not above:
            finding = {
                "kind": "restriction-not-under-orbit",
                "chain": list(chain),
                "mu": list(mu),
                "h_mu": int(sum(mu_h[: e.semisimple_rank])),
                "h_lam": int(sum(lam_h[: e.semisimple_rank])),
            }
            if e.family.tag == "c4ii":
                ident = tuple(range(len(e.factors)))
                try:
                    ell, _ = ell_value(e, mu_h, lam_h, ident)
                    finding["ell"] = str(ell)
                except ValueError:
                    pass
            findings.append(finding)
        else:
            groups.setdefault(mu_h, []).append((chain, mu, above))
    for mu_h, items in sorted(groups.items()):
        if len(items) < 2:
            continue
        conjs = set()
        for _, _, above in items:
            conjs.update(above)
        if len(conjs) != 1:
            continue
        (c0,) = conjs
        if not _is_simple_root_drop(e, mu_h, c0):
            continue
        capacity = central_multiplicity(e, c0)
        if len(items) > capacity:
            findings.append({
                "kind": "multiplicity-bound-exceeded",
                "target": list(mu_h),
                "witnesses": [list(mu) for _, mu, _ in items],
                "capacity": capacity,
            })
    return findings


def _is_simple_root_drop(e: Embedding, w, c):
    """True iff c - w is a single simple root of a single factor."""
    pw, chw = e.split(w)
    pc, chc = e.split(c)
    if chw != chc:
        return False
    hits = 0
    for f, rs in enumerate(e.factor_systems):
        diff = tuple(a - b for a, b in zip(pc[f], pw[f]))
        if all(d == 0 for d in diff):
            continue
        inv = rs.inverse_cartan
        coords = []
        for j in range(rs.rank):
            v = sum(diff[i] * inv[i][j] for i in range(rs.rank))
            if v.denominator != 1 or v < 0:
                return False
            coords.append(int(v))
        if sum(coords) != 1:
            return False
        hits += 1
    return hits == 1


def ford_condition_check(lam, n: int, chi: Characteristic) -> bool:
    """The three congruence conditions for the orthogonal-pair family on B_n."""
    if chi.p == 2:
        raise ValueError("condition undefined at p = 2")
    p = chi.p
    lam = tuple(int(c) for c in lam)
    if len(lam) != n:
        raise ValueError("weight length does not match the rank")
    if lam[n - 1] != 1:
        return False

    def cong(a, b):
        return a == b if p == 0 else (a - b) % p == 0

    support = [i + 1 for i in range(n - 1) if lam[i]]
    for x, y in zip(support, support[1:]):
        if not cong(lam[x - 1] + lam[y - 1], x - y):
            return False
    if support:
        i = support[-1]
        if not cong(2 * lam[i - 1], -2 * (n - i) - 1):
            return False
    return True


# ---------------------------------------------------------------------------
# entry verification and candidate scans


def _semisimple_part(e: Embedding, hw):
    return tuple(hw[: e.semisimple_rank])


def verify_entry(entry: ClassificationEntry, chi: Characteristic, cap=None) -> BranchReport:
    p = chi.p
    rep = BranchReport(factors={}, dims={}, verdict=INCONCLUSIVE)
    if not p_condition_ok(entry.p_condition, p):
        rep.reasons.append({"kind": "p-condition-unsatisfied", "condition": entry.p_condition, "p": p})
        return rep
    e = build_embedding(entry.ambient, entry.family)
    if not existence_ok(e, p):
        rep.reasons.append({"kind": "subgroup-existence", "condition": e.existence, "p": p})
        return rep
    rs = build_root_system(entry.ambient)
    lam = tuple(int(c) for c in entry.lam)
    if p > 0 and any(c >= p for c in lam):
        rep.reasons.append({"kind": "not-p-restricted", "p": p})
        return rep
    lam_h = restrict_weight(e, lam)
    orbit = component_orbit_set(e, lam_h)
    if entry.expected_restriction is not None:
        expected = tuple(entry.expected_restriction)
        found = {_semisimple_part(e, c) for c in orbit}
        if expected not in found:
            rep.verdict = FAIL
            rep.reasons.append({
                "kind": "restriction-mismatch",
                "expected": list(expected),
                "found": sorted(list(x) for x in found),
            })
            return rep
    kappa = kappa_of(e, lam_h)
    rep.kappa_found = kappa
    if entry.expected_kappa is not None and kappa != entry.expected_kappa:
        rep.verdict = FAIL
        rep.reasons.append({
            "kind": "kappa-mismatch",
            "expected": entry.expected_kappa,
            "found": kappa,
        })
        return rep
    findings = necessary_filters(rs, lam, e, chi)
    if findings:
        rep.verdict = FAIL
        rep.reasons.extend(findings)
        return rep
    if p == 0:
        br = branch_p0(rs, lam, e, cap=cap)
        rep.factors = br.factors
        rep.dims = br.dims
        rep.dim_lhs = br.dim_lhs
        rep.dim_rhs = br.dim_rhs
        rep.kappa_found = br.kappa_found
        expected_factors = {c: central_multiplicity(e, c) for c in orbit}
        if br.factors != expected_factors:
            rep.verdict = FAIL
            rep.reasons.append({
                "kind": "branch-structure-mismatch",
                "expected": sorted((list(k), v) for k, v in expected_factors.items()),
                "found": sorted((list(k), v) for k, v in br.factors.items()),
            })
            return rep
        if entry.expected_kappa is not None and br.kappa_found != entry.expected_kappa:
            rep.verdict = FAIL
            rep.reasons.append({
                "kind": "kappa-mismatch",
                "expected": entry.expected_kappa,
                "found": br.kappa_found,
            })
            return rep
        rep.verdict = PASS
        return rep
    # positive characteristic: closed-form dimension identity or inconclusive
    dim_g = charcalc.irr_dim(rs, lam, chi)
    if dim_g is None:
        rep.reasons.append({"kind": "dimension-unknown", "side": "ambient"})
        return rep
    total = 0
    for c in orbit:
        d = 1
        for f, frs in enumerate(e.factor_systems):
            part = e.split(c)[0][f]
            if any(x >= p for x in part):
                rep.reasons.append({"kind": "factor-not-p-restricted", "factor": f + 1})
                return rep
            df = charcalc.irr_dim(frs, part, chi)
            if df is None:
                rep.reasons.append({
                    "kind": "dimension-unknown",
                    "side": f"factor-{f + 1}",
                    "weight": list(part),
                })
                return rep
            d *= df
        total += central_multiplicity(e, c) * d
    rep.dim_lhs = dim_g
    rep.dim_rhs = total
    if dim_g == total:
        rep.verdict = PASS
        rep.reasons.append({"kind": "dimension-identity", "lhs": str(dim_g), "rhs": str(total)})
    else:
        rep.verdict = FAIL
        rep.reasons.append({"kind": "dimension-identity-failed", "lhs": str(dim_g), "rhs": str(total)})
    return rep


def dominant_weights_bounded(n, bound, p=0):
    """Non-zero dominant weights with coefficient sum <= bound (p-restricted if p > 0)."""
    out = []

    def rec(prefix, remaining):
        if len(prefix) == n:
            if any(prefix):
                out.append(tuple(prefix))
            return
        top = remaining if p == 0 else min(remaining, p - 1)
        for c in range(top + 1):
            rec(prefix + [c], remaining - c)

    rec([], bound)
    return sorted(out)


IRREDUCIBLE = "IRREDUCIBLE"
REDUCIBLE = "REDUCIBLE"
FILTERED = "FILTERED"
UNRESOLVED = "UNRESOLVED"


def scan_candidates(ambient: LieType, e: Embedding, chi: Characteristic, coeff_sum_bound: int, cap=None):
    """Classify all bounded dominant candidates for one embedding.

    p = 0: IRREDUCIBLE / REDUCIBLE / FILTERED (exact, via the branching
    oracle).  p > 0: FILTERED / UNRESOLVED (necessary conditions only).
    """
    rs = build_root_system(ambient)
    results = []
    for lam in dominant_weights_bounded(ambient.rank, coeff_sum_bound, chi.p):
        findings = necessary_filters(rs, lam, e, chi)
        if findings:
            results.append((lam, FILTERED))
            continue
        if chi.p != 0:
            results.append((lam, UNRESOLVED))
            continue
        rep = branch_p0(rs, lam, e, cap=cap)
        results.append((lam, IRREDUCIBLE if rep.verdict == PASS else REDUCIBLE))
    return results
