"""Branching oracle, necessary filters, entry verification, scans."""

import pytest

from weylbranch.charcalc import Characteristic
from weylbranch.checker import (
    ClassificationEntry,
    branch_p0,
    dominant_weights_bounded,
    ford_condition_check,
    necessary_filters,
    p_condition_ok,
    scan_candidates,
    verify_entry,
)
from weylbranch.embeddings import build_embedding, geom_family
from weylbranch.rootsys import LieType, build_root_system

P0 = Characteristic(0)


def lam(n, *pairs):
    w = [0] * n
    for i, c in pairs:
        w[i - 1] = c
    return tuple(w)


def entry(ambient, fam, weight, cond="any", restr=None, kappa=None):
    return ClassificationEntry(
        ambient=ambient,
        family=fam,
        lam=weight,
        p_condition=cond,
        expected_restriction=restr,
        expected_kappa=kappa,
        source="test",
        entry_id="test",
    )


def test_branch_spin_through_pair():
    rs = build_root_system(LieType("B", 3))
    e = build_embedding(LieType("B", 3), geom_family("c1", sub="Dn"))
    rep = branch_p0(rs, (0, 0, 1), e)
    assert rep.factors == {(0, 0, 1): 1, (0, 1, 0): 1}
    assert rep.kappa_found == 2 and rep.verdict == "PASS"
    assert rep.dim_lhs == 8 == rep.dim_rhs


def test_branch_natural_imprimitive():
    rs = build_root_system(LieType("C", 2))
    e = build_embedding(LieType("C", 2), geom_family("c2", l=1, t=2))
    rep = branch_p0(rs, (1, 0), e)
    assert rep.factors == {(1, 0): 1, (0, 1): 1}
    assert rep.dim_lhs == 4


def test_branch_middle_exterior_power():
    rs = build_root_system(LieType("A", 5))
    e = build_embedding(LieType("A", 5), geom_family("c6"))
    rep = branch_p0(rs, (0, 0, 1, 0, 0), e)
    assert rep.factors == {(0, 0, 2): 1, (0, 2, 0): 1}
    assert rep.dims[(0, 0, 2)] == 10 and rep.dim_lhs == 20


def test_branch_spin_multiplicity_two():
    rs = build_root_system(LieType("B", 4))
    e = build_embedding(LieType("B", 4), geom_family("c2", l=1, t=3))
    rep = branch_p0(rs, (0, 0, 0, 1), e)
    assert rep.factors == {(1, 1, 1): 2}
    assert rep.verdict == "PASS" and rep.kappa_found == 2


def test_branch_rejects_zero_weight():
    rs = build_root_system(LieType("B", 3))
    e = build_embedding(LieType("B", 3), geom_family("c1", sub="Dn"))
    with pytest.raises(ValueError):
        branch_p0(rs, (0, 0, 0), e)


def test_filters_examples():
    rs = build_root_system(LieType("B", 5))
    e = build_embedding(LieType("B", 5), geom_family("c1", sub="DlB", l=2))
    assert necessary_filters(rs, lam(5, (2, 1), (5, 1)), e, P0)
    assert not necessary_filters(rs, lam(5, (5, 1)), e, P0)
    rs = build_root_system(LieType("B", 3))
    e = build_embedding(LieType("B", 3), geom_family("c1", sub="Dn"))
    assert not necessary_filters(rs, lam(3, (3, 1)), e, P0)
    rs = build_root_system(LieType("C", 4))
    e = build_embedding(LieType("C", 4), geom_family("c2", l=2, t=2))
    assert not necessary_filters(rs, lam(4, (1, 1)), e, P0)


def test_filters_chain_certification_at_small_p():
    # at p = 2 on C_2 the chain running to the long root is not certified,
    # so the symplectic-form row lambda_2 must pass the filters
    rs = build_root_system(LieType("C", 2))
    e = build_embedding(LieType("C", 2), geom_family("c2", l=1, t=2))
    assert necessary_filters(rs, (0, 1), e, P0)  # reducible at p = 0
    assert not necessary_filters(rs, (0, 1), e, Characteristic(2))


def test_ford_condition():
    assert ford_condition_check((0, 0, 1), 3, Characteristic(7)) is True
    assert ford_condition_check((1, 0, 1), 3, Characteristic(7)) is True
    assert ford_condition_check((1, 0, 1), 3, Characteristic(5)) is False
    assert ford_condition_check((0, 0, 1), 3, P0) is True
    assert ford_condition_check((1, 0, 1), 3, P0) is False
    assert ford_condition_check((0, 0, 2), 3, Characteristic(7)) is False
    with pytest.raises(ValueError):
        ford_condition_check((0, 0, 1), 3, Characteristic(2))
    # adjacent-support congruence: a_i + a_j = i - j (mod p)
    assert ford_condition_check((0, 2, 3, 1), 4, Characteristic(3)) is True
    assert ford_condition_check((0, 2, 3, 1), 4, Characteristic(7)) is False


def test_verify_spin_identities():
    ent = entry(LieType("B", 5), geom_family("c1", sub="DlB", l=2), lam(5, (5, 1)), "p!=2", kappa=2)
    assert verify_entry(ent, P0).verdict == "PASS"
    rep = verify_entry(ent, Characteristic(7))
    assert rep.verdict == "PASS" and rep.dim_lhs == 32 == rep.dim_rhs


def test_verify_exterior_power():
    ent = entry(LieType("A", 5), geom_family("c6"), lam(5, (3, 1)), "p!=2", restr=(0, 0, 2), kappa=2)
    rep = verify_entry(ent, P0)
    assert rep.verdict == "PASS" and rep.dim_lhs == 20


def test_verify_c4ii_dimension_identity():
    ent = entry(LieType("C", 4), geom_family("c4ii", l=1, t=3), lam(4, (2, 1)), "p!=2", restr=(0, 2, 2), kappa=3)
    rep = verify_entry(ent, Characteristic(5))
    assert rep.verdict == "PASS" and rep.dim_lhs == 27 == rep.dim_rhs


def test_verify_condition_gates():
    ent = entry(LieType("D", 4), geom_family("c4ii", kind="Cl", l=1, t=3), lam(4, (3, 1)), "p=2")
    rep = verify_entry(ent, Characteristic(3))
    assert rep.verdict == "INCONCLUSIVE"
    assert rep.reasons[0]["kind"] == "p-condition-unsatisfied"
    ent = entry(LieType("C", 3), geom_family("c6"), lam(3, (3, 1)), "any")
    rep = verify_entry(ent, Characteristic(3))
    assert rep.verdict == "INCONCLUSIVE"
    assert rep.reasons[0]["kind"] == "subgroup-existence"


def test_verify_detects_wrong_expectations():
    ent = entry(LieType("B", 3), geom_family("c1", sub="Dn"), lam(3, (3, 1)), "p!=2", kappa=3)
    rep = verify_entry(ent, P0)
    assert rep.verdict == "FAIL" and rep.reasons[0]["kind"] == "kappa-mismatch"
    ent = entry(LieType("B", 3), geom_family("c1", sub="Dn"), lam(3, (3, 1)), "p!=2", restr=(1, 0, 0))
    rep = verify_entry(ent, P0)
    assert rep.verdict == "FAIL" and rep.reasons[0]["kind"] == "restriction-mismatch"
    # a genuinely reducible weight fails through the filters or the branch
    ent = entry(LieType("B", 3), geom_family("c1", sub="Dn"), lam(3, (1, 1)), "p!=2")
    assert verify_entry(ent, P0).verdict == "FAIL"


def test_verify_ford_row_at_p7():
    # B_3: lambda_1 + lambda_3 satisfies the congruences at p = 7
    ent = entry(LieType("B", 3), geom_family("c1", sub="Dn"), lam(3, (1, 1), (3, 1)), "p!=2", kappa=2)
    rep = verify_entry(ent, Characteristic(7))
    assert rep.verdict == "PASS"
    assert rep.dim_lhs == 40 == rep.dim_rhs  # 2^n(2n-1) = 2 * 20
    # same weight at p = 5 fails the Ford congruence: the filters reject it
    rep5 = verify_entry(ent, Characteristic(5))
    assert rep5.verdict == "FAIL"


def test_scan_examples():
    res = scan_candidates(LieType("B", 3), build_embedding(LieType("B", 3), geom_family("c1", sub="Dn")), P0, 2)
    assert [l for l, v in res if v == "IRREDUCIBLE"] == [(0, 0, 1)]
    res = scan_candidates(
        LieType("D", 4), build_embedding(LieType("D", 4), geom_family("c2", kind="Dl", l=2, t=2)), P0, 1
    )
    assert [l for l, v in res if v == "IRREDUCIBLE"] == [(0, 0, 0, 1), (0, 0, 1, 0), (1, 0, 0, 0)]
    res = scan_candidates(LieType("C", 4), build_embedding(LieType("C", 4), geom_family("c2", l=2, t=2)), P0, 2)
    assert [l for l, v in res if v == "IRREDUCIBLE"] == [(1, 0, 0, 0)]
    res = scan_candidates(LieType("A", 3), build_embedding(LieType("A", 3), geom_family("c2", l=1, t=2)), P0, 1)
    assert [l for l, v in res if v == "IRREDUCIBLE"] == [(0, 0, 1), (1, 0, 0)]
    assert dict(res)[(0, 1, 0)] == "FILTERED"


def test_scan_p_positive_is_filter_only():
    res = scan_candidates(
        LieType("B", 3), build_embedding(LieType("B", 3), geom_family("c1", sub="Dn")), Characteristic(7), 2
    )
    verdicts = {v for _, v in res}
    assert verdicts <= {"FILTERED", "UNRESOLVED"}
    assert dict(res)[(0, 0, 1)] == "UNRESOLVED"


def test_dominant_weights_bounded():
    ws = dominant_weights_bounded(2, 2)
    assert ws == [(0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
    assert dominant_weights_bounded(2, 3, p=2) == [(0, 1), (1, 0), (1, 1)]


def test_p_condition_ok():
    assert p_condition_ok("any", 0)
    assert p_condition_ok("p!=2", 3) and not p_condition_ok("p!=2", 2)
    assert p_condition_ok("p=2", 2) and not p_condition_ok("p=2", 0)
    assert p_condition_ok("p!=2&p!=3", 5) and not p_condition_ok("p!=2&p!=3", 3)
    assert p_condition_ok("p>=3", 5) and not p_condition_ok("p>=3", 0)
    with pytest.raises(ValueError):
        p_condition_ok("q=1", 0)


def test_branch_concurrent_callers_agree():
    # pure functions over immutable inputs: parallel callers see identical results
    from concurrent.futures import ThreadPoolExecutor

    rs = build_root_system(LieType("B", 4))
    e = build_embedding(LieType("B", 4), geom_family("c2", l=1, t=3))
    weights = dominant_weights_bounded(4, 2)

    def job(w):
        rep = branch_p0(rs, w, e)
        return w, sorted(rep.factors.items())

    with ThreadPoolExecutor(max_workers=8) as pool:
        parallel = dict(pool.map(job, weights * 3))
    serial = {w: sorted(branch_p0(rs, w, e).factors.items()) for w in weights}
    assert parallel == serial
