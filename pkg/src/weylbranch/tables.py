"""Classification-table files: parsing, serialization and instantiation.

One record per line, seven tab-separated fields:

    family  ambient  params  lambda  p_cond  kappa  restriction

``ambient`` is a family letter, optionally ``:rank`` to pin the rank.
``params`` is ``-`` or ``;``-separated clauses: string selectors
(``sub=Dn``, ``kind=Bl``) and integer constraints (``l>=2``, ``t%2=0``,
``l=1``) over the enumerated parameters.  ``lambda`` is a sum of ``L(i)``
terms with integer-expression indices, optionally ``@k=lo..hi`` iterated,
or one of the generic patterns ``ford``/``sz``/``noan``.  ``kappa`` is an
integer expression; ``restriction`` a sum of ``w(f,j)`` terms and
``S(i=lo..hi, expr)`` sums, ``-`` when there is no semisimple part, or the
pattern name for pattern rows.  Lines starting with ``#`` are comments.

Rank-generic rows are instantiated up to a rank cap; pattern rows are
expanded at a concrete characteristic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb

from .checker import ClassificationEntry, ford_condition_check, p_condition_ok
from .charcalc import Characteristic
from .embeddings import geom_family
from .rootsys import LieType


@dataclass
class TableRow:
    family: str
    ambient: str
    params: str
    lam: str
    p_cond: str
    kappa: str
    restriction: str
    source: str = ""
    lineno: int = 0

    def serialize(self) -> str:
        return "\t".join(
            [self.family, self.ambient, self.params, self.lam, self.p_cond, self.kappa, self.restriction]
        )


class TableError(ValueError):
    pass


def parse_table(text: str, source: str = "<table>"):
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 7:
            raise TableError(f"{source}:{lineno}: expected 7 tab-separated fields, got {len(parts)}")
        rows.append(TableRow(*[p.strip() for p in parts], source=source, lineno=lineno))
    return rows


def load_table(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_table(fh.read(), source=str(path))


# ---------------------------------------------------------------------------
# integer expression mini-language


_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\*\*|//|[-+*/()^,])")


def _tokenize(s):
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise TableError(f"bad expression {s!r} at position {pos}")
        out.append(m.group(1))
        pos = m.end()
    out.append("<end>")
    return out


class _Parser:
    def __init__(self, tokens, env):
        self.toks = tokens
        self.i = 0
        self.env = env

    def peek(self):
        return self.toks[self.i]

    def take(self, expect=None):
        t = self.toks[self.i]
        if expect is not None and t != expect:
            raise TableError(f"expected {expect!r}, got {t!r}")
        self.i += 1
        return t

    def expr(self):
        v = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self.peek() in ("*", "//", "/"):
            op = self.take()
            w = self.factor()
            if op == "*":
                v = v * w
            else:
                if w == 0 or v % w != 0:
                    raise TableError("non-exact division in table expression")
                v = v // w
        return v

    def factor(self):
        v = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            w = self.factor()
            v = v**w
        return v

    def atom(self):
        t = self.take()
        if t == "-":
            return -self.atom()
        if t == "(":
            v = self.expr()
            self.take(")")
            return v
        if t.isdigit():
            return int(t)
        if t == "binom":
            self.take("(")
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take(")")
            return comb(a, b)
        if t in self.env:
            return int(self.env[t])
        raise TableError(f"unknown symbol {t!r}")


def eval_int(expr: str, env) -> int:
    p = _Parser(_tokenize(expr), env)
    v = p.expr()
    if p.peek() != "<end>":
        raise TableError(f"trailing input in expression {expr!r}")
    return v


_CMP = re.compile(r"^(.*?)(>=|<=|!=|%|=|<|>)(.*)$")


def check_clause(clause: str, env) -> bool:
    """Constraint clauses: 'l>=2', 't%2=0', 'l=1', 'sub=Dn', 'a>b'."""
    m = re.match(r"^(\w+)%(\d+)=(\d+)$", clause)
    if m:
        return eval_int(m.group(1), env) % int(m.group(2)) == int(m.group(3))
    for op in (">=", "<=", "!=", "=", "<", ">"):
        if op in clause:
            lhs, rhs = clause.split(op, 1)
            lhs = lhs.strip()
            rhs = rhs.strip()
            if lhs in ("sub", "kind"):
                sval = str(env.get(lhs, ""))
                return (sval == rhs) if op == "=" else (sval != rhs)
            a = eval_int(lhs, env)
            b = eval_int(rhs, env)
            return {"=": a == b, "!=": a != b, ">=": a >= b, "<=": a <= b, "<": a < b, ">": a > b}[op]
    raise TableError(f"bad params clause {clause!r}")


def params_match(params: str, env) -> bool:
    if params.strip() in ("-", ""):
        return True
    return all(check_clause(c.strip(), env) for c in params.split(";"))


# ---------------------------------------------------------------------------
# lambda and restriction expressions


def parse_lambda(expr: str, env, n: int):
    """A concrete weight from a lambda expression (no patterns, no iterator)."""
    coeffs = [0] * n
    for term in _split_sum(expr):
        term = term.strip()
        coef = 1
        if "*" in term and not term.startswith("L("):
            c, term = term.split("*", 1)
            coef = eval_int(c, env)
        m = re.fullmatch(r"L\((.*)\)", term.strip())
        if not m:
            raise TableError(f"bad lambda term {term!r}")
        idx = eval_int(m.group(1), env)
        if not 1 <= idx <= n:
            raise TableError(f"lambda index {idx} out of range 1..{n}")
        coeffs[idx - 1] += coef
    return tuple(coeffs)


def _split_top(expr, sep=","):
    parts = []
    depth = 0
    cur = []
    for ch in expr:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _split_sum(expr):
    parts = []
    depth = 0
    cur = []
    for ch in expr:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_restriction(expr: str, env, emb):
    """Semisimple expected restriction as a coefficient tuple, or None for '-'."""
    expr = expr.strip()
    if expr == "-":
        return None
    width = emb.semisimple_rank
    out = [0] * width

    def w_index(f, j):
        grp = emb.factor_groups[f - 1]
        # materialized D2 factors expose their two A1 coordinates as j = 1, 2
        if len(grp) > 1:
            mi = grp[j - 1]
            return emb.factor_offsets[mi]
        return emb.factor_offsets[grp[0]] + (j - 1)

    def add_terms(e, scope):
        for term in _split_sum(e):
            coef = 1
            if "*" in term and not term.startswith(("w(", "S(")):
                c, term2 = term.split("*", 1)
                coef = eval_int(c, scope)
                term = term2.strip()
            if term.startswith("S("):
                inner = term[2:-1]
                head, body = _split_top(inner, ",")[0], ",".join(_split_top(inner, ",")[1:])
                var, rng = head.split("=")
                lo, hi = rng.split("..")
                for v in range(eval_int(lo, scope), eval_int(hi, scope) + 1):
                    sub = dict(scope)
                    sub[var.strip()] = v
                    for _ in range(coef):
                        add_terms(body, sub)
                continue
            m = re.fullmatch(r"w\((.*)\)", term)
            if not m:
                raise TableError(f"bad restriction term {term!r}")
            args = _split_top(m.group(1), ",")
            if len(args) != 2:
                raise TableError(f"bad w() term {term!r}")
            f = eval_int(args[0], scope)
            j = eval_int(args[1], scope)
            out[w_index(f, j)] += coef

    add_terms(expr, env)
    return tuple(out)


# ---------------------------------------------------------------------------
# parameter enumeration per family


def _int_solutions(tag, amb, n):
    """Yield parameter dicts for every instance of the family at rank n."""
    if tag == "c1":
        if amb == "B" and n >= 3:
            yield {"sub": "Dn"}
            for l in range(1, n):
                yield {"sub": "DlB", "l": l}
        if amb == "D" and n >= 4:
            for l in range(1, (n + 1) // 2):
                if 2 * l < n:
                    yield {"sub": "DlD", "l": l}
    elif tag == "c2":
        if amb == "A":
            for t in range(2, n + 2):
                if (n + 1) % t == 0:
                    yield {"l": (n + 1) // t - 1, "t": t}
        elif amb == "B":
            for t in range(3, 2 * n + 2, 2):
                if (2 * n + 1) % t == 0 and (2 * n + 1) // t >= 3:
                    yield {"l": ((2 * n + 1) // t - 1) // 2, "t": t}
        elif amb == "C":
            for t in range(2, n + 1):
                if n % t == 0:
                    yield {"l": n // t, "t": t}
        elif amb == "D" and n >= 4:
            for t in range(2, 2 * n + 1, 2):
                if (2 * n) % t == 0 and (2 * n) // t % 2 == 1 and (2 * n) // t >= 3:
                    yield {"kind": "Bl", "l": ((2 * n) // t - 1) // 2, "t": t}
            for t in range(2, n + 1):
                if n % t == 0:
                    yield {"kind": "Dl", "l": n // t, "t": t}
    elif tag == "c3":
        if amb == "C" or (amb == "D" and n % 2 == 0):
            yield {}
    elif tag == "c4i":
        if amb == "C":
            for b in range(2, n):
                if n % (2 * b) == 0:
                    yield {"a": n // (2 * b), "b": b}
        elif amb == "D":
            for b in range(2, n):
                if n % (2 * b) == 0 and n // (2 * b) > b:
                    yield {"a": n // (2 * b), "b": b}
    elif tag == "c4ii":
        if amb == "A":
            for l in range(2, n):
                d = l + 1
                t = 0
                v = n + 1
                while v % d == 0:
                    v //= d
                    t += 1
                if v == 1 and t >= 2:
                    yield {"l": l, "t": t}
        elif amb == "B":
            for l in range(1, n):
                d = 2 * l + 1
                t = 0
                v = 2 * n + 1
                while v % d == 0:
                    v //= d
                    t += 1
                if v == 1 and t >= 2:
                    yield {"l": l, "t": t}
        elif amb in ("C", "D"):
            for l in range(1, n):
                d = 2 * l
                t = 0
                v = 2 * n
                while v % d == 0 and v > 1:
                    v //= d
                    t += 1
                if v == 1 and t >= 2:
                    if amb == "C":
                        if t % 2 == 1 and t >= 3:
                            yield {"l": l, "t": t}
                    else:
                        yield {"kind": "Cl", "l": l, "t": t}
                        if l >= 3:
                            yield {"kind": "Dl", "l": l, "t": t}
    elif tag == "c6":
        if amb == "A" and n % 2 == 1 and (n + 1) // 2 >= 3:
            yield {"m": (n + 1) // 2}
        if amb == "C" and n >= 3:
            yield {}


def _family_from_params(tag, params):
    clean = {k: v for k, v in params.items() if k != "m"}
    return geom_family(tag, **clean)


_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3}


def instantiate_rows(rows, rank_cap: int, chi: Characteristic, pattern_bound: int = 3):
    """Expand table rows into concrete classification entries at one characteristic."""
    from .embeddings import build_embedding  # local to avoid import cycles

    entries = []
    for row in rows:
        amb_spec = row.ambient
        if ":" in amb_spec:
            letter, fixed = amb_spec.split(":")
            ranks = [int(fixed)]
        else:
            letter = amb_spec
            ranks = range(_MIN_RANK[letter], rank_cap + 1)
        for n in ranks:
            if n > rank_cap:
                continue
            for params in _int_solutions(row.family, letter, n):
                env = {"n": n, "p": chi.p, **params}
                if not params_match(row.params, env):
                    continue
                ambient = LieType(letter, n)
                fam = _family_from_params(row.family, params)
                try:
                    emb = build_embedding(ambient, fam)
                except ValueError:
                    continue
                for lam, scope in _expand_lambda(row, env, n, chi, pattern_bound):
                    if chi.p and any(c >= chi.p for c in lam):
                        continue
                    kappa = eval_int(row.kappa, scope) if row.kappa != "-" else None
                    restr = _expected_restriction(row, scope, emb, lam)
                    pid = ";".join(f"{k}={v}" for k, v in sorted(params.items()))
                    entry_id = (
                        f"{row.source.rsplit('/', 1)[-1]}:{row.lineno}:"
                        f"{letter}{n}:{pid}:{','.join(map(str, lam))}"
                    )
                    entries.append(
                        ClassificationEntry(
                            ambient=ambient,
                            family=fam,
                            lam=lam,
                            p_condition=row.p_cond,
                            expected_restriction=restr,
                            expected_kappa=kappa,
                            source=f"{row.source}:{row.lineno}",
                            entry_id=entry_id,
                        )
                    )
    entries.sort(key=lambda e: e.entry_id)
    return entries


def _expand_lambda(row, env, n, chi, pattern_bound):
    """Yield (weight, scope) pairs for one row at one parameter assignment."""
    expr = row.lam
    p = chi.p
    if expr == "ford":
        if not p_condition_ok(row.p_cond, p):
            return
        for lam in _bounded_weights(n, pattern_bound, p):
            if lam[n - 1] != 1:
                continue
            if ford_condition_check(lam, n, chi):
                yield lam, dict(env)
        return
    if expr == "noan":
        if not p_condition_ok(row.p_cond, p):
            return
        for lam in _bounded_weights(n, pattern_bound, p):
            if lam[n - 1] == 0:
                yield lam, dict(env)
        return
    if expr == "sz":
        if p < 3:
            return
        a = (p - 3) // 2
        lam = [0] * n
        lam[n - 2] += 1
        lam[n - 1] += a
        scope = dict(env)
        scope["a"] = a
        yield tuple(lam), scope
        return
    if "@" in expr:
        body, it = expr.split("@")
        var, rng = it.split("=")
        lo, hi = rng.split("..")
        for v in range(eval_int(lo, env), eval_int(hi, env) + 1):
            scope = dict(env)
            scope[var.strip()] = v
            yield parse_lambda(body.strip(), scope, n), scope
        return
    yield parse_lambda(expr, env, n), dict(env)


def _bounded_weights(n, bound, p):
    from .checker import dominant_weights_bounded

    return dominant_weights_bounded(n, bound, p)


def _expected_restriction(row, scope, emb, lam):
    expr = row.restriction.strip()
    if expr in ("ford", "noan", "sz"):
        # pattern rows: the printed closed formula, evaluated on the coefficients
        n = emb.ambient.rank
        a = list(lam)
        out = [0] * emb.semisimple_rank
        if expr == "ford":
            # sum_{i<n} a_i w_i + (a_{n-1} + 1) w_n, using a_n = 1
            for i in range(1, n):
                out[i - 1] = a[i - 1]
            out[n - 1] = a[n - 2] + 1
            return tuple(out)
        if expr == "noan":
            # sum_{i<n} a_i w_i + a_{n-1} w_n (a_n = 0)
            for i in range(1, n):
                out[i - 1] = a[i - 1]
            out[n - 1] = a[n - 2]
            return tuple(out)
        # sz on C_n with t = 2: (a+1) w_{1,l} + w_{2,l-1} + a w_{2,l}
        l = scope["l"]
        av = scope["a"]
        if l == 1:
            return (av + 1, av)
        out[l - 1] = av + 1
        out[2 * l - 2] = 1
        out[2 * l - 1] = av
        return tuple(out)
    return parse_restriction(expr, scope, emb)
