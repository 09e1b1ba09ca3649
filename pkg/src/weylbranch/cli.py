"""Command-line surface: dim, branch, verify, scan, rootsys-info, orbit.

Reports are emitted as line-delimited JSON records with stable field names
and deterministic ordering; human-oriented summaries go to stderr.  The
WEYLBRANCH_CAP environment variable overrides the orbit enumeration cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from . import charcalc, tables
from .charcalc import Characteristic
from .checker import (
    FAIL,
    IRREDUCIBLE,
    branch_p0,
    scan_candidates,
    verify_entry,
)
from .embeddings import build_embedding, format_h0_weight, geom_family
from .kernels import KernelCapacityError
from .rootsys import LieType, build_root_system, minimal_weights
from .weylgroup import orbit_enumerate, orbit_size

SHIPPED = ("all", "c136", "c2", "c4i", "c4ii")


def _lie_type(family: str, rank: str) -> LieType:
    return LieType(family.upper(), int(rank))


def _weight(text: str, n: int):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise ValueError(f"expected {n} comma-separated coefficients, got {len(parts)}")
    return tuple(int(p) for p in parts)


def parse_family_spec(spec: str, ambient: LieType):
    """'c1:Dn', 'c2:l=1,t=2', 'c2:Dl,l=2,t=2', 'c6:Dm', 'c4i:a=1,b=2', ...'"""
    tag, _, rest = spec.partition(":")
    tag = tag.strip()
    flags = []
    params = {}
    if rest:
        for token in rest.split(","):
            token = token.strip()
            if not token:
                continue
            if "=" in token:
                k, v = token.split("=")
                params[k.strip()] = int(v)
            else:
                flags.append(token)
    if tag == "c1":
        if "Dn" in flags:
            return geom_family("c1", sub="Dn")
        sub = "DlB" if ambient.family == "B" else "DlD"
        return geom_family("c1", sub=sub, **params)
    if tag == "c2":
        if ambient.family == "D":
            kind = "Bl" if "Bl" in flags else "Dl"
            return geom_family("c2", kind=kind, **params)
        return geom_family("c2", **params)
    if tag == "c3":
        return geom_family("c3")
    if tag == "c4i":
        return geom_family("c4i", **params)
    if tag == "c4ii":
        if ambient.family == "D":
            kind = "Dl" if "Dl" in flags else "Cl"
            return geom_family("c4ii", kind=kind, **params)
        return geom_family("c4ii", **params)
    if tag == "c6":
        return geom_family("c6")
    raise ValueError(f"unknown family spec {spec!r}")


def _shipped_rows(name: str):
    pkg = resources.files("weylbranch")
    path = pkg.joinpath(f"data/table_{name}.tsv")
    return tables.parse_table(path.read_text(encoding="utf-8"), source=f"table_{name}.tsv")


def _load_rows(spec: str):
    if spec.startswith("shipped:"):
        name = spec.split(":", 1)[1]
        if name not in SHIPPED:
            raise ValueError(f"unknown shipped table {name!r}; choose from {SHIPPED}")
        return _shipped_rows(name)
    return tables.load_table(spec)


def cmd_dim(args) -> int:
    t = _lie_type(args.family, args.rank)
    rs = build_root_system(t)
    lam = _weight(args.coeffs, t.rank)
    chi = Characteristic(args.p)
    val, rule = charcalc.irr_dim_with_rule(rs, lam, chi)
    if val is None:
        print(f"unknown\trule={rule}")
    else:
        print(f"{val}\trule={rule}")
    return 0


def cmd_branch(args) -> int:
    t = _lie_type(args.family, args.rank)
    rs = build_root_system(t)
    lam = _weight(args.coeffs, t.rank)
    fam = parse_family_spec(args.subgroup, t)
    e = build_embedding(t, fam)
    rep = branch_p0(rs, lam, e)
    pieces = []
    for hw in sorted(rep.factors):
        m = rep.factors[hw]
        d = rep.dims[hw]
        pieces.append(f"{m} x {d}")
        print(f"factor\t{format_h0_weight(e, hw)}\tmult={m}\tdim={d}")
    print(f"kappa\t{rep.kappa_found}")
    print(f"conservation\t{rep.dim_lhs} = {' + '.join(pieces)}")
    print(f"clifford\t{rep.verdict}")
    return 0


def _emit(record, out):
    out.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")


def cmd_verify(args) -> int:
    try:
        rows = _load_rows(args.table)
    except tables.TableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    ps = [int(x) for x in args.p.split(",")] if args.p else [0]
    any_fail = False
    counts = {}
    out = sys.stdout
    for p in ps:
        chi = Characteristic(p)
        entries = tables.instantiate_rows(rows, args.rank_cap, chi, args.pattern_bound)
        for entry in entries:
            rep = verify_entry(entry, chi)
            counts[rep.verdict] = counts.get(rep.verdict, 0) + 1
            any_fail |= rep.verdict == FAIL
            _emit(
                {
                    "entry_id": entry.entry_id,
                    "p": p,
                    "verdict": rep.verdict,
                    "kappa_expected": entry.expected_kappa,
                    "kappa_found": rep.kappa_found,
                    "dim_lhs": rep.dim_lhs,
                    "dim_rhs": rep.dim_rhs,
                    "reasons": rep.reasons,
                },
                out,
            )
    summary = " ".join(f"{k}={counts[k]}" for k in sorted(counts))
    print(f"verify: {summary or 'no entries'}", file=sys.stderr)
    return 1 if any_fail else 0


def cmd_scan(args) -> int:
    t = _lie_type(args.family, args.rank)
    fam = parse_family_spec(args.subgroup, t)
    e = build_embedding(t, fam)
    chi = Characteristic(args.p)
    results = scan_candidates(t, e, chi, args.bound)
    out = sys.stdout
    for lam, verdict in results:
        _emit({"weight": list(lam), "verdict": verdict}, out)
    if args.assert_tables:
        if chi.p != 0:
            print("error: --assert requires --p 0 (full verdicts)", file=sys.stderr)
            return 2
        rows = _shipped_rows("all")
        entries = tables.instantiate_rows(rows, t.rank, chi, args.bound)
        expected = sorted(
            entry.lam
            for entry in entries
            if entry.ambient == t
            and entry.family == fam
            and sum(entry.lam) <= args.bound
            and verify_entry_applicable(entry, chi)
        )
        found = sorted(lam for lam, v in results if v == IRREDUCIBLE)
        record = {"assert": found == expected, "expected": [list(x) for x in expected], "found": [list(x) for x in found]}
        _emit(record, out)
        if found != expected:
            print("scan: assertion FAILED", file=sys.stderr)
            return 1
        print("scan: assertion passed", file=sys.stderr)
    return 0


def verify_entry_applicable(entry, chi) -> bool:
    from .checker import p_condition_ok
    from .embeddings import existence_ok

    if not p_condition_ok(entry.p_condition, chi.p):
        return False
    e = build_embedding(entry.ambient, entry.family)
    return existence_ok(e, chi.p)


def cmd_rootsys_info(args) -> int:
    t = _lie_type(args.family, args.rank)
    rs = build_root_system(t)
    print(f"type\t{t}")
    print(f"positive_roots\t{len(rs.positive_roots)}")
    print(f"eG\t{rs.eG}")
    print(f"weyl_order\t{rs.weyl_order()}")
    for i, row in enumerate(rs.cartan):
        print(f"cartan[{i + 1}]\t{' '.join(str(x) for x in row)}")
    mins = sorted(minimal_weights(t))
    print(f"minimal_weights\t{'; '.join(','.join(map(str, m)) for m in mins)}")
    return 0


def cmd_orbit(args) -> int:
    t = _lie_type(args.family, args.rank)
    rs = build_root_system(t)
    w = _weight(args.coeffs, t.rank)
    summary = orbit_size(rs, w)
    print(f"dominant_rep\t{','.join(map(str, summary.dominant_rep))}")
    print(f"orbit_size\t{summary.orbit_size}")
    stab = " x ".join(str(x) for x in summary.stabilizer_type) or "trivial"
    print(f"stabilizer\t{stab}")
    if args.list:
        for el in orbit_enumerate(rs, w):
            print(",".join(map(str, el)))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="weylbranch", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="closed-form irreducible dimension")
    p.add_argument("family")
    p.add_argument("rank")
    p.add_argument("coeffs")
    p.add_argument("--p", type=int, default=0)
    p.set_defaults(fn=cmd_dim)

    p = sub.add_parser("branch", help="characteristic-zero branching of one module")
    p.add_argument("family")
    p.add_argument("rank")
    p.add_argument("coeffs")
    p.add_argument("subgroup", help="family spec, e.g. c1:Dn or c2:l=1,t=2")
    p.set_defaults(fn=cmd_branch)

    p = sub.add_parser("verify", help="verify classification-table rows")
    p.add_argument("table", help="path to a table file, or shipped:all / shipped:c2 / ...")
    p.add_argument("--p", default="0", help="comma-separated characteristics")
    p.add_argument("--rank-cap", type=int, default=8)
    p.add_argument("--pattern-bound", type=int, default=3)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("scan", help="classify all bounded dominant candidates")
    p.add_argument("family")
    p.add_argument("rank")
    p.add_argument("subgroup")
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--assert", dest="assert_tables", action="store_true",
                   help="compare the irreducible set against the shipped tables")
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("rootsys-info", help="root-system data for one type")
    p.add_argument("family")
    p.add_argument("rank")
    p.set_defaults(fn=cmd_rootsys_info)

    p = sub.add_parser("orbit", help="Weyl-orbit summary of a weight")
    p.add_argument("family")
    p.add_argument("rank")
    p.add_argument("coeffs")
    p.add_argument("--list", action="store_true")
    p.set_defaults(fn=cmd_orbit)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KernelCapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
