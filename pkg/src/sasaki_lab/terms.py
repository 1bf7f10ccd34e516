"""Term language, parser, and exhaustive law checker.

Terms are evaluated over *all* assignments at once: every variable becomes
an integer vector running through the universe in lexicographic order (the
first variable, alphabetically, is the most significant digit), and table
lookups are numpy fancy indexing.  Tables may optionally carry a leading
"model" axis, which lets one call check a law on thousands of algebras that
share a universe size.  That is what the countermodel sweeps use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence, Union

import numpy as np

from sasaki_lab.errors import (
    MissingOperation,
    TermSyntaxError,
    TooManyVariables,
    UnboundVariable,
)

DEFAULT_MAX_VARS = 4
# assignments evaluated per chunk when a single law is checked
CHUNK = 1 << 20


# --------------------------------------------------------------------------
# syntax


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: int  # 0 or 1

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Unary:
    child: "Term"

    def __str__(self):
        return f"{_wrap(self.child, 100)}'"


@dataclass(frozen=True)
class Binary:
    op: str  # join meet lsup linf plus times odot imp
    left: "Term"
    right: "Term"

    def __str__(self):
        prec = _PRECEDENCE[self.op]
        return f"{_wrap(self.left, prec)} {_SYMBOL[self.op]} {_wrap(self.right, prec + 1)}"


Term = Union[Var, Const, Unary, Binary]

_SYMBOL = {
    "join": "v",
    "meet": "^",
    "lsup": "⊔",
    "linf": "⊓",
    "plus": "+",
    "times": "*",
    "odot": "o",
    "imp": "->",
}
_PRECEDENCE = {"imp": 1, "plus": 2, "join": 2, "lsup": 2, "odot": 2, "times": 3, "meet": 3, "linf": 3}


def _wrap(t: Term, prec: int) -> str:
    if isinstance(t, Binary) and _PRECEDENCE[t.op] < prec:
        return f"({t})"
    return str(t)


@dataclass(frozen=True)
class Relation:
    kind: str  # "identity" or "inequality"
    left: Term
    right: Term

    def __str__(self):
        return f"{self.left} {'=' if self.kind == 'identity' else '<='} {self.right}"


@dataclass(frozen=True)
class Law:
    """An identity, an inequality, or a quasi-identity ``premises => conclusion``."""

    conclusion: Relation
    premises: tuple[Relation, ...] = ()
    name: str = ""

    @property
    def kind(self) -> str:
        return self.conclusion.kind

    @property
    def is_quasi(self) -> bool:
        return bool(self.premises)

    def identifiers(self) -> set[str]:
        out: set[str] = set()
        for rel in (*self.premises, self.conclusion):
            out |= term_identifiers(rel.left) | term_identifiers(rel.right)
        return out

    def uses_order(self) -> bool:
        return any(r.kind == "inequality" for r in (*self.premises, self.conclusion))

    def __str__(self):
        body = str(self.conclusion)
        if self.premises:
            body = " & ".join(map(str, self.premises)) + " => " + body
        return body


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking a law or condition.

    On failure ``witness`` maps variable names to element names and
    re-evaluating the law there fails too.
    """

    holds: bool
    witness: dict | None = None
    checked_count: int = 0
    name: str = ""
    detail: str = field(default="", compare=False)

    def __bool__(self):
        return self.holds

    def renamed(self, name: str) -> "Verdict":
        return Verdict(self.holds, self.witness, self.checked_count, name, self.detail)

    def describe(self) -> str:
        label = self.name or "law"
        if self.holds:
            return f"{label}: holds ({self.checked_count} checked)"
        wit = " ".join(f"{k}={v}" for k, v in (self.witness or {}).items())
        extra = f" [{self.detail}]" if self.detail else ""
        return f"{label}: FAILS at {wit}{extra}".rstrip()


def term_identifiers(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, Unary):
        return term_identifiers(t.child)
    return term_identifiers(t.left) | term_identifiers(t.right)


# --------------------------------------------------------------------------
# tokenizer and parser

_UNICODE = {
    "∨": "v",
    "∧": "^",
    "⊔": "⊔",
    "⊓": "⊓",
    "⊙": "o",
    "→": "->",
    "≤": "<=",
    "≈": "=",
    "′": "'",
    "·": "*",
}
_TOKEN = re.compile(
    r"\s*(?:(?P<op>=>|->|<=|[=()'+*^&⊔⊓∨∧⊙→≤≈′·])|(?P<num>[01])(?![A-Za-z0-9_])|(?P<id>[A-Za-z_][A-Za-z0-9_]*))"
)
_RESERVED = {"v": "join", "o": "odot"}


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            while src[pos].isspace():
                pos += 1
            raise TermSyntaxError(f"unexpected character {src[pos]!r}", pos)
        start = m.start(m.lastgroup)
        text = m.group(m.lastgroup)
        if m.lastgroup == "op":
            tokens.append(("op", _UNICODE.get(text, text), start))
        elif m.lastgroup == "num":
            tokens.append(("num", text, start))
        elif text in _RESERVED:
            tokens.append(("op", text, start))
        else:
            tokens.append(("id", text, start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    _ADD = {"+": "plus", "v": "join", "⊔": "lsup", "o": "odot"}
    _MUL = {"*": "times", "^": "meet", "⊓": "linf"}

    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, val, pos = self.take()
        if val != text or kind == "end":
            raise TermSyntaxError(f"expected {text!r}, found {val or 'end of input'!r}", pos)

    def at_end(self):
        kind, _, pos = self.peek()
        if kind != "end":
            raise TermSyntaxError(f"unexpected {self.peek()[1]!r}", pos)

    def term(self) -> Term:
        left = self.additive()
        while self.peek()[1] == "->" and self.peek()[0] == "op":
            self.take()
            left = Binary("imp", left, self.additive())
        return left

    def additive(self) -> Term:
        left = self.multiplicative()
        while self.peek()[0] == "op" and self.peek()[1] in self._ADD:
            op = self._ADD[self.take()[1]]
            left = Binary(op, left, self.multiplicative())
        return left

    def multiplicative(self) -> Term:
        left = self.postfix()
        while self.peek()[0] == "op" and self.peek()[1] in self._MUL:
            op = self._MUL[self.take()[1]]
            left = Binary(op, left, self.postfix())
        return left

    def postfix(self) -> Term:
        t = self.atom()
        while self.peek()[0] == "op" and self.peek()[1] == "'":
            self.take()
            t = Unary(t)
        return t

    def atom(self) -> Term:
        kind, val, pos = self.take()
        if kind == "id":
            return Var(val)
        if kind == "num":
            return Const(int(val))
        if val == "(":
            t = self.term()
            self.expect(")")
            return t
        raise TermSyntaxError(f"expected a term, found {val or 'end of input'!r}", pos)

    def relation(self) -> Relation:
        left = self.term()
        kind, val, pos = self.take()
        if val == "=" and kind == "op":
            rel = "identity"
        elif val == "<=" and kind == "op":
            rel = "inequality"
        else:
            raise TermSyntaxError(f"expected '=' or '<=', found {val or 'end of input'!r}", pos)
        return Relation(rel, left, self.term())

    def law(self) -> Law:
        rels = [self.relation()]
        while self.peek()[1] == "&":
            self.take()
            rels.append(self.relation())
        if self.peek()[1] == "=>":
            self.take()
            concl = self.relation()
            self.at_end()
            return Law(concl, tuple(rels))
        self.at_end()
        if len(rels) > 1:
            raise TermSyntaxError("premises must be followed by '=>'", self.peek()[2])
        return Law(rels[0])


@lru_cache(maxsize=None)
def parse_term(src: str) -> Term:
    """Parse a term; postfix ``'`` binds tightest, ``->`` weakest."""
    p = _Parser(src)
    t = p.term()
    p.at_end()
    return t


@lru_cache(maxsize=None)
def parse_law(src: str, name: str = "") -> Law:
    law = _Parser(src).law()
    return Law(law.conclusion, law.premises, name)


# --------------------------------------------------------------------------
# evaluation


class Interpretation:
    """Concrete tables a term is evaluated against.

    ``ops`` maps connective names (``join``, ``meet``, ``lsup``, ``linf``,
    ``plus``, ``times``, ``odot``, ``imp``, ``neg``) to integer tables.
    Names listed in ``batched`` carry a leading axis of length ``batch``;
    ``leq`` may be batched in the same way.
    """

    def __init__(
        self,
        size: int,
        ops: Mapping[str, np.ndarray],
        constants: Mapping[str, int] | None = None,
        leq: np.ndarray | None = None,
        elements: Sequence[str] | None = None,
        batch: int | None = None,
        batched: frozenset | set = frozenset(),
        leq_batched: bool = False,
        label: str = "",
    ):
        self.size = size
        self.ops = dict(ops)
        self.constants = dict(constants or {})
        self.leq = leq
        self.elements = tuple(elements) if elements is not None else tuple(map(str, range(size)))
        self.element_index = {e: i for i, e in enumerate(self.elements)}
        self.batch = batch
        self.batched = frozenset(batched)
        self.leq_batched = leq_batched
        self.label = label

    def table(self, name: str) -> np.ndarray:
        try:
            return self.ops[name]
        except KeyError:
            what = self.label or "this algebra"
            raise MissingOperation(f"{what} has no operation '{name}'") from None

    def constant(self, value: int) -> int:
        key = "zero" if value == 0 else "one"
        if key not in self.constants:
            what = self.label or "this algebra"
            raise MissingOperation(f"{what} has no constant {value}")
        return self.constants[key]

    def _take(self, tbl: np.ndarray, idx: np.ndarray) -> np.ndarray:
        flat = tbl.reshape(self.batch, -1)
        idx = np.broadcast_to(idx, (self.batch, idx.shape[-1]))
        return np.take_along_axis(flat, idx, axis=1)

    def unary(self, name: str, x: np.ndarray) -> np.ndarray:
        tbl = self.table(name)
        if name in self.batched:
            return self._take(tbl, x)
        return tbl[x]

    def binary(self, name: str, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        tbl = self.table(name)
        if name in self.batched:
            return self._take(tbl, x * self.size + y)
        return tbl[x, y]

    def le(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.leq is None:
            what = self.label or "this algebra"
            raise MissingOperation(f"{what} carries no order, so '<=' cannot be evaluated")
        if self.leq_batched:
            return self._take(self.leq, x * self.size + y)
        return self.leq[x, y]


def _eval(t: Term, it: Interpretation, env: Mapping[str, np.ndarray], shape) -> np.ndarray:
    if isinstance(t, Var):
        if t.name in env:
            return env[t.name]
        if t.name in it.element_index:
            return np.full(shape, it.element_index[t.name], dtype=np.int64)
        raise UnboundVariable(t.name)
    if isinstance(t, Const):
        return np.full(shape, it.constant(t.value), dtype=np.int64)
    if isinstance(t, Unary):
        return it.unary("neg", _eval(t.child, it, env, shape))
    return it.binary(t.op, _eval(t.left, it, env, shape), _eval(t.right, it, env, shape))


def _holds(rel: Relation, it: Interpretation, env, shape) -> np.ndarray:
    left = _eval(rel.left, it, env, shape)
    right = _eval(rel.right, it, env, shape)
    if rel.kind == "identity":
        return left == right
    return it.le(left, right)


def assignment_grid(n: int, k: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows of ``(stop-start)`` assignments of ``k`` variables, lexicographic order."""
    total = n**k
    stop = total if stop is None else stop
    flat = np.arange(start, stop, dtype=np.int64)
    out = np.empty((k, flat.size), dtype=np.int64)
    for j in range(k - 1, -1, -1):
        out[j] = flat % n
        flat = flat // n
    return out


def decode_assignment(n: int, variables: Sequence[str], flat: int) -> list[int]:
    digits = []
    for _ in variables:
        digits.append(flat % n)
        flat //= n
    return digits[::-1]


def law_variables(law: Law, it: Interpretation) -> list[str]:
    return sorted(v for v in law.identifiers() if v not in it.element_index)


def evaluate_term_grid(it: Interpretation, t: Term, variables: Sequence[str]) -> np.ndarray:
    """Value of ``t`` at every assignment of ``variables``, flattened lexicographically."""
    k = len(variables)
    grid = assignment_grid(it.size, k)
    env = {v: grid[j] for j, v in enumerate(variables)}
    shape = (it.size**k,)
    val = _eval(t, it, env, shape)
    if it.batch is not None and val.ndim == 1:
        val = np.broadcast_to(val, (it.batch, val.size))
    return val


def _law_masks(law: Law, it: Interpretation, env, shape):
    premise = None
    for rel in law.premises:
        m = _holds(rel, it, env, shape)
        premise = m if premise is None else premise & m
    concl = _holds(law.conclusion, it, env, shape)
    if premise is None:
        return None, concl
    return premise, concl


def check_law_interp(
    it: Interpretation, law: Law, max_vars: int = DEFAULT_MAX_VARS, name: str | None = None
) -> Verdict:
    """Exhaustively check ``law`` on an unbatched interpretation."""
    variables = law_variables(law, it)
    k = len(variables)
    if k > max_vars:
        raise TooManyVariables(f"{k} variables exceed the cap of {max_vars}")
    n = it.size
    total = n**k
    checked = 0
    label = law.name if name is None else name
    for start in range(0, total, CHUNK):
        stop = min(total, start + CHUNK)
        grid = assignment_grid(n, k, start, stop)
        env = {v: grid[j] for j, v in enumerate(variables)}
        shape = (stop - start,)
        premise, concl = _law_masks(law, it, env, shape)
        concl = np.broadcast_to(concl, shape)
        if premise is None:
            fail = ~concl
            tested = shape[0]
        else:
            premise = np.broadcast_to(premise, shape)
            fail = premise & ~concl
            tested = int(premise.sum())
        if fail.any():
            first = int(np.argmax(fail))
            checked += int(premise[: first + 1].sum()) if premise is not None else first + 1
            digits = decode_assignment(n, variables, start + first)
            witness = {v: it.elements[d] for v, d in zip(variables, digits)}
            return Verdict(False, witness, checked, label)
        checked += tested
    return Verdict(True, None, checked, label)


def check_law_batch(it: Interpretation, law: Law, max_vars: int = DEFAULT_MAX_VARS):
    """Check ``law`` on every model of a batched interpretation.

    Returns ``(holds, first_fail)``: a boolean vector over models and the
    flat index of the least failing assignment (-1 where the law holds).
    """
    variables = law_variables(law, it)
    k = len(variables)
    if k > max_vars:
        raise TooManyVariables(f"{k} variables exceed the cap of {max_vars}")
    grid = assignment_grid(it.size, k)
    env = {v: grid[j] for j, v in enumerate(variables)}
    shape = (it.size**k,)
    premise, concl = _law_masks(law, it, env, shape)
    fail = ~concl if premise is None else premise & ~concl
    fail = np.broadcast_to(fail, (it.batch, shape[0]))
    bad = fail.any(axis=1)
    first = np.where(bad, fail.argmax(axis=1), -1)
    return ~bad, first


def eval_term(alg, t: Term | str, assignment: Mapping[str, str] | None = None) -> str:
    """Evaluate a term in an algebra at a name-valued assignment; returns a name.

    Identifiers not bound by ``assignment`` resolve to the element of that
    name, if any.
    """
    if isinstance(t, str):
        t = parse_term(t)
    it = alg.interpretation() if hasattr(alg, "interpretation") else alg
    env = {}
    for var, elem in (assignment or {}).items():
        if elem not in it.element_index:
            from sasaki_lab.errors import UnknownName

            raise UnknownName(elem)
        env[var] = np.array([it.element_index[elem]], dtype=np.int64)
    val = _eval(t, it, env, (1,))
    return it.elements[int(np.asarray(val).reshape(-1)[0])]


def check_law(alg, law: Law | str, max_vars: int = DEFAULT_MAX_VARS, name: str | None = None) -> Verdict:
    """Check a law on every assignment of its variables in ``alg``.

    Quasi-identities only count assignments satisfying all premises in
    ``checked_count``.  The reported witness is the lexicographically
    least failing assignment, variables taken in alphabetical order.
    """
    if isinstance(law, str):
        law = parse_law(law)
    it = alg.interpretation() if hasattr(alg, "interpretation") else alg
    return check_law_interp(it, law, max_vars, name)
