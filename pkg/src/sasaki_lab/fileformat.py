"""Line-oriented algebra file format.

::

    algebra fig7_ex2
    kind lambda                      # lattice | lambda | semiring | pseudoring | poset
    elements 0 a b c d 1
    covers 0<a 0<b a<c a<d b<c b<d c<1 d<1
    complete-from-order              # lambda only: fill ⊔/⊓ from the order
    choice join a b = 1              # needed where a cone has several members
    choice meet c d = 0
    unary neg: 0=1 a=b b=a c=d d=c 1=0
    binop plus:                      # followed by one row per element
    row 0: 0 a b c d 1
    const zero 0
    order covers 0<a ...             # semiring order
    expect adjoint=true C1=false

Comments start with ``#``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from sasaki_lab.algebras import (
    Algebra,
    lambda_algebra,
    lattice_from_poset,
    lattice_from_tables,
    pseudoring_algebra,
    semiring_algebra,
)
from sasaki_lab.core import FinitePoset, bound_indices, cone_indices, poset_from_covers
from sasaki_lab.errors import (
    AlgebraSyntaxError,
    NotALattice,
    NotAPseudoring,
    SasakiLabError,
    ValidationError,
)

CORE_TABLES = {
    "lattice": ("join", "meet"),
    "lambda": ("lsup", "linf"),
    "semiring": ("plus", "times"),
    "pseudoring": ("plus", "times"),
    "poset": (),
}


@dataclass
class AlgebraFile:
    name: str
    algebra: Algebra
    expect: dict[str, bool] = field(default_factory=dict)


@dataclass
class _Raw:
    name: str = ""
    kind: str | None = None
    elements: list[str] | None = None
    covers: list[tuple[str, str]] | None = None
    order_covers: list[tuple[str, str]] | None = None
    unary: dict = field(default_factory=dict)
    binop: dict = field(default_factory=dict)
    const: dict = field(default_factory=dict)
    complete: bool = False
    choices: dict = field(default_factory=dict)
    expect: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)  # keyword -> line number


def _tokens(line: str):
    """Whitespace tokens with their 1-based columns."""
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def _pairs(toks, lineno):
    pairs = []
    for tok, col in toks:
        if tok.count("<") != 1 or tok.startswith("<") or tok.endswith("<"):
            raise AlgebraSyntaxError(f"expected A<B, found {tok!r}", lineno, col)
        lo, hi = tok.split("<")
        pairs.append((lo, hi))
    return pairs


def parse_algebra_text(text: str) -> _Raw:
    raw = _Raw()
    current = None  # (name, rows, lineno) of an open binop block
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].rstrip()
        toks = _tokens(line)
        if not toks:
            continue
        head, col = toks[0]
        if head == "row":
            if current is None:
                raise AlgebraSyntaxError("row outside a binop block", lineno, col)
            if len(toks) < 2 or not toks[1][0].endswith(":"):
                raise AlgebraSyntaxError("expected 'row E: V1 ... Vn'", lineno, col)
            current[1][toks[1][0][:-1]] = ([t for t, _ in toks[2:]], lineno)
            continue
        current = None
        raw.lines.setdefault(head, lineno)
        if head == "algebra":
            if len(toks) != 2:
                raise AlgebraSyntaxError("expected 'algebra NAME'", lineno, col)
            raw.name = toks[1][0]
        elif head == "kind":
            if len(toks) != 2 or toks[1][0] not in CORE_TABLES:
                raise AlgebraSyntaxError("expected kind lattice|lambda|semiring|pseudoring|poset", lineno, col)
            raw.kind = toks[1][0]
        elif head == "elements":
            if len(toks) < 2:
                raise AlgebraSyntaxError("elements line is empty", lineno, col + len(head))
            raw.elements = [t for t, _ in toks[1:]]
        elif head == "covers":
            raw.covers = (raw.covers or []) + _pairs(toks[1:], lineno)
        elif head == "order":
            if len(toks) < 2 or toks[1][0] != "covers":
                raise AlgebraSyntaxError("expected 'order covers A<B ...'", lineno, col)
            raw.order_covers = (raw.order_covers or []) + _pairs(toks[2:], lineno)
        elif head == "unary":
            if len(toks) < 2 or not toks[1][0].endswith(":"):
                raise AlgebraSyntaxError("expected 'unary NAME: A=B ...'", lineno, col)
            mapping = {}
            for tok, c in toks[2:]:
                if tok.count("=") != 1:
                    raise AlgebraSyntaxError(f"expected A=B, found {tok!r}", lineno, c)
                a, b = tok.split("=")
                mapping[a] = b
            raw.unary[toks[1][0][:-1]] = (mapping, lineno)
        elif head == "binop":
            if len(toks) != 2 or not toks[1][0].endswith(":"):
                raise AlgebraSyntaxError("expected 'binop NAME:'", lineno, col)
            current = (toks[1][0][:-1], {}, lineno)
            raw.binop[current[0]] = current
        elif head == "const":
            if len(toks) != 3 or toks[1][0] not in ("zero", "one"):
                raise AlgebraSyntaxError("expected 'const zero|one E'", lineno, col)
            raw.const[toks[1][0]] = toks[2][0]
        elif head == "complete-from-order":
            raw.complete = True
        elif head == "choice":
            words = [t for t, _ in toks]
            if len(words) != 6 or words[1] not in ("join", "meet") or words[4] != "=":
                raise AlgebraSyntaxError("expected 'choice join|meet A B = C'", lineno, col)
            key = (words[1], frozenset((words[2], words[3])))
            raw.choices[key] = (words[5], lineno)
        elif head == "expect":
            for tok, c in toks[1:]:
                name, _, value = tok.partition("=")
                if value not in ("true", "false"):
                    raise AlgebraSyntaxError(f"expected COND=true|false, found {tok!r}", lineno, c)
                raw.expect[name] = value == "true"
        else:
            raise AlgebraSyntaxError(f"unknown keyword {head!r}", lineno, col)
    if raw.kind is None:
        raise AlgebraSyntaxError("missing 'kind' line", 1)
    if raw.elements is None:
        raise AlgebraSyntaxError("missing 'elements' line", 1)
    return raw


def _index(raw: _Raw, name: str, lineno: int) -> int:
    try:
        return raw.elements.index(name)
    except ValueError:
        raise AlgebraSyntaxError(f"unknown element {name!r}", lineno) from None


def _unary_table(raw: _Raw, key: str) -> np.ndarray:
    mapping, lineno = raw.unary[key]
    out = np.empty(len(raw.elements), dtype=np.int64)
    for i, e in enumerate(raw.elements):
        if e not in mapping:
            raise AlgebraSyntaxError(f"unary {key} has no value for {e!r}", lineno)
        out[i] = _index(raw, mapping[e], lineno)
    for e in mapping:
        _index(raw, e, lineno)
    return out


def _binop_table(raw: _Raw, key: str) -> np.ndarray:
    _, rows, lineno = raw.binop[key]
    n = len(raw.elements)
    out = np.empty((n, n), dtype=np.int64)
    for i, e in enumerate(raw.elements):
        if e not in rows:
            raise AlgebraSyntaxError(f"binop {key} has no row for {e!r}", lineno)
        vals, rl = rows[e]
        if len(vals) != n:
            raise AlgebraSyntaxError(f"row {e} of {key} has {len(vals)} entries, expected {n}", rl)
        out[i] = [_index(raw, v, rl) for v in vals]
    return out


def _order(raw: _Raw, covers, what="covers") -> FinitePoset:
    try:
        return poset_from_covers(raw.elements, covers or [])
    except SasakiLabError as exc:
        raise AlgebraSyntaxError(str(exc), raw.lines.get(what, 1)) from None


def _complete(raw: _Raw) -> tuple[np.ndarray, np.ndarray]:
    order = _order(raw, raw.covers)
    leq = order.leq
    n = len(order)
    lsup = np.empty((n, n), dtype=np.int64)
    linf = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if leq[i, j]:
                lsup[i, j], linf[i, j] = j, i
            elif leq[j, i]:
                lsup[i, j], linf[i, j] = i, j
            else:
                upper, lower = cone_indices(leq, i, j)
                pair = (raw.elements[i], raw.elements[j])
                for kind, cone, tbl in (("join", upper, lsup), ("meet", lower, linf)):
                    key = (kind, frozenset(pair))
                    if key in raw.choices:
                        val, lineno = raw.choices[key]
                        v = _index(raw, val, lineno)
                        if v not in cone:
                            raise ValidationError(f"choice {kind} {pair[0]} {pair[1]} outside the cone", pair)
                    elif len(cone) == 1:
                        v = int(cone[0])
                    elif len(cone) == 0:
                        raise ValidationError("NoBounds", pair)
                    else:
                        raise ValidationError(f"missing choice {kind}", pair)
                    tbl[i, j] = v
    return lsup, linf


def build_algebra(raw: _Raw) -> Algebra:
    kind = raw.kind
    name = raw.name
    extra = {}
    neg = _unary_table(raw, "neg") if "neg" in raw.unary else None
    for key in raw.unary:
        if key != "neg":
            extra[key] = _unary_table(raw, key)
    for key in raw.binop:
        if key not in CORE_TABLES[kind]:
            extra[key] = _binop_table(raw, key)
    try:
        if kind == "poset":
            order = _order(raw, raw.covers)
            ops = dict(extra)
            if neg is not None:
                ops["neg"] = neg
            bottom, top = bound_indices(order)
            consts = {k: v for k, v in (("zero", bottom), ("one", top)) if v is not None}
            return Algebra("poset", raw.elements, ops, consts, order, name)
        if kind == "lattice":
            if "join" in raw.binop or "meet" in raw.binop:
                alg = lattice_from_tables(raw.elements, _binop_table(raw, "join"), _binop_table(raw, "meet"), neg, name)
                if raw.covers is not None and _order(raw, raw.covers) != alg.order:
                    raise ValidationError("covers agree with tables")
            else:
                alg = lattice_from_poset(_order(raw, raw.covers), neg, name)
        elif kind == "lambda":
            if raw.complete:
                lsup, linf = _complete(raw)
            else:
                lsup, linf = _binop_table(raw, "lsup"), _binop_table(raw, "linf")
            alg = lambda_algebra(raw.elements, lsup, linf, neg, name)
        elif kind == "semiring":
            if neg is None:
                raise AlgebraSyntaxError("semiring needs 'unary neg:'", raw.lines.get("kind", 1))
            if "zero" not in raw.const:
                raise AlgebraSyntaxError("semiring needs 'const zero E'", raw.lines.get("kind", 1))
            order = _order(raw, raw.order_covers, "order")
            alg = semiring_algebra(
                raw.elements,
                _binop_table(raw, "plus"),
                _binop_table(raw, "times"),
                neg,
                raw.const["zero"],
                order,
                raw.const.get("one"),
                name,
            )
        else:
            for key in ("zero", "one"):
                if key not in raw.const:
                    raise AlgebraSyntaxError(f"pseudoring needs 'const {key} E'", raw.lines.get("kind", 1))
            alg = pseudoring_algebra(
                raw.elements, _binop_table(raw, "plus"), _binop_table(raw, "times"), raw.const["zero"], raw.const["one"], name
            )
    except NotALattice as exc:
        raise ValidationError("NotALattice", exc.pair) from None
    except NotAPseudoring as exc:
        raise ValidationError("NotAPseudoring", str(exc)) from None
    if extra:
        alg = alg.with_ops(**extra)
    return alg


def loads(text: str) -> AlgebraFile:
    raw = parse_algebra_text(text)
    return AlgebraFile(raw.name, build_algebra(raw), dict(raw.expect))


def load_algebra_file(path) -> AlgebraFile:
    return loads(Path(path).read_text(encoding="utf-8"))


def load_algebra(path) -> Algebra:
    """Parse and validate an algebra file."""
    return load_algebra_file(path).algebra


# --------------------------------------------------------------------------
# writing


def format_binop(name: str, elements, table) -> str:
    lines = [f"binop {name}:"]
    for e, row in zip(elements, np.asarray(table)):
        lines.append(f"row {e}: " + " ".join(elements[int(v)] for v in row))
    return "\n".join(lines)


def format_unary(name: str, elements, table) -> str:
    return f"unary {name}: " + " ".join(f"{e}={elements[int(v)]}" for e, v in zip(elements, table))


def _covers_line(keyword: str, order: FinitePoset) -> str:
    pairs = order.cover_pairs()
    return (keyword + " " + " ".join(f"{a}<{b}" for a, b in pairs)).rstrip()


def dumps(alg: Algebra, expect: dict[str, bool] | None = None) -> str:
    """Serialise an algebra so that :func:`loads` rebuilds identical tables."""
    out = []
    if alg.name:
        out.append(f"algebra {alg.name}")
    out.append(f"kind {alg.kind}")
    out.append("elements " + " ".join(alg.elements))
    core = CORE_TABLES[alg.kind]
    if alg.kind in ("poset", "lattice"):
        out.append(_covers_line("covers", alg.order))
    for key in core:
        out.append(format_binop(key, alg.elements, alg.op(key)))
    for key, tbl in sorted(alg.ops.items()):
        if tbl.ndim == 1:
            out.append(format_unary(key, alg.elements, tbl))
    for key, tbl in sorted(alg.ops.items()):
        if tbl.ndim == 2 and key not in core and not (alg.kind == "lattice" and key in ("join", "meet")):
            out.append(format_binop(key, alg.elements, tbl))
    if alg.kind in ("semiring", "pseudoring"):
        for key in ("zero", "one"):
            if key in alg.constants:
                out.append(f"const {key} {alg.elements[alg.constants[key]]}")
    if alg.kind == "semiring":
        out.append(_covers_line("order covers", alg.order))
    if expect:
        out.append("expect " + " ".join(f"{k}={'true' if v else 'false'}" for k, v in expect.items()))
    return "\n".join(out) + "\n"


def dump_algebra(alg: Algebra, path, expect=None) -> None:
    Path(path).write_text(dumps(alg, expect), encoding="utf-8")
