"""Algebra kinds, their axiom suites, and constructions.

Four kinds carry operation tables: ``lattice`` (join, meet, optional neg),
``lambda`` (lsup, linf, optional neg), ``semiring`` (plus, times, neg, zero,
explicit order) and ``pseudoring`` (plus, times, zero, one).  A fifth kind,
``poset``, is a bare order with optional extra tables; it is what the
adjointness checker and the fig4 fixture work on.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from sasaki_lab.core import FinitePoset, bound_indices, transitive_closure, unary_properties
from sasaki_lab.errors import (
    InducedOrderMismatch,
    KindMismatch,
    MissingOperation,
    NotALattice,
    NotAPseudoring,
    NotOrthomodular,
    SizeOutOfRange,
    UnknownName,
    ValidationError,
)
from sasaki_lab.terms import (
    Interpretation,
    Verdict,
    check_law_interp,
    evaluate_term_grid,
    parse_law,
    parse_term,
)

KINDS = ("lattice", "lambda", "semiring", "pseudoring", "poset")

SIGNATURE = {
    "lattice": ("join", "meet"),
    "lambda": ("lsup", "linf"),
    "semiring": ("plus", "times", "neg"),
    "pseudoring": ("plus", "times"),
    "poset": (),
}


def _ro(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.flags.writeable = False
    return a


class Algebra:
    """A finite algebra: universe, named tables, constants and an optional order.

    Instances are immutable.  Use the kind-specific builders
    (:func:`lattice_from_poset`, :func:`lambda_algebra`, ...) which validate
    the kind's axioms; the bare constructor only checks table shapes.
    """

    def __init__(
        self,
        kind: str,
        elements: Sequence[str],
        ops: Mapping[str, np.ndarray],
        constants: Mapping[str, int] | None = None,
        order: FinitePoset | None = None,
        name: str = "",
    ):
        if kind not in KINDS:
            raise KindMismatch(f"unknown kind {kind!r}")
        self.kind = kind
        self.elements = tuple(elements)
        self.name = name
        n = len(self.elements)
        tables = {}
        for key, tbl in ops.items():
            tbl = _ro(tbl)
            if tbl.shape not in ((n,), (n, n)):
                raise ValidationError(f"table {key} has shape {tbl.shape}")
            if tbl.size and (tbl.min() < 0 or tbl.max() >= n):
                raise ValidationError(f"table {key} is not total on the universe")
            tables[key] = tbl
        self.ops = tables
        self.constants = dict(constants or {})
        if order is not None and order.elements != self.elements:
            raise ValidationError("order universe differs from algebra universe")
        self.order = order
        self._index = {e: i for i, e in enumerate(self.elements)}

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Algebra{label} kind={self.kind} size={self.size} ops={sorted(self.ops)}>"

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownName(name) from None

    def op(self, name: str) -> np.ndarray:
        try:
            return self.ops[name]
        except KeyError:
            raise MissingOperation(f"{self.name or self.kind} has no table '{name}'") from None

    def has(self, name: str) -> bool:
        return name in self.ops

    def replace(self, **changes) -> "Algebra":
        fields = dict(
            kind=self.kind,
            elements=self.elements,
            ops=self.ops,
            constants=self.constants,
            order=self.order,
            name=self.name,
        )
        fields.update(changes)
        return Algebra(**fields)

    def with_ops(self, **tables) -> "Algebra":
        ops = dict(self.ops)
        ops.update(tables)
        return self.replace(ops=ops)

    def without(self, *names) -> "Algebra":
        return self.replace(ops={k: v for k, v in self.ops.items() if k not in names})

    def same_tables(self, other: "Algebra") -> bool:
        if self.elements != other.elements or set(self.ops) != set(other.ops):
            return False
        if self.constants != other.constants:
            return False
        return all((self.ops[k] == other.ops[k]).all() for k in self.ops)

    def element_of(self, i) -> str:
        return self.elements[int(i)]

    @cached_property
    def _interp(self) -> Interpretation:
        ops = dict(self.ops)
        if self.kind == "lambda":
            ops["join"] = self.ops["lsup"]
            ops["meet"] = self.ops["linf"]
        elif self.kind == "pseudoring" and "neg" not in ops and "one" in self.constants:
            ops["neg"] = self.ops["plus"][self.constants["one"]]
        return Interpretation(
            self.size,
            ops,
            self.constants,
            None if self.order is None else self.order.leq,
            self.elements,
            label=self.name or f"{self.kind} algebra",
        )

    def interpretation(self) -> Interpretation:
        return self._interp


def check(alg, src: str, name: str = "") -> Verdict:
    return check_law_interp(alg.interpretation(), parse_law(src), name=name or src)


def table_of(alg, src: str, variables=("x", "y")) -> np.ndarray:
    """Materialise a term as a table indexed by ``variables``."""
    val = evaluate_term_grid(alg.interpretation(), parse_term(src), variables)
    return val.reshape((alg.size,) * len(variables))


def first_failure(verdicts) -> Verdict:
    total = 0
    for v in verdicts:
        total += v.checked_count
        if not v.holds:
            return v
    return Verdict(True, None, total)


# --------------------------------------------------------------------------
# lattices


def extremal_tables(leq: np.ndarray):
    """Least-upper and greatest-lower bound tables of an order.

    Returns ``(join, meet, missing)`` where ``missing`` is None or the least
    pair ``(i, j, what)`` lacking a lub or glb.
    """
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    out = []
    ok = np.ones((n, n), dtype=bool)
    oks = []
    for rel in (leq, leq.T):
        ub = rel[:, None, :] & rel[None, :, :]
        least = ub & (~ub[:, :, None, :] | rel[None, None, :, :]).all(axis=-1)
        count = least.sum(axis=-1)
        oks.append(count == 1)
        out.append(np.where(count == 1, least.argmax(axis=-1), 0))
    ok = oks[0] & oks[1]
    missing = None
    if not ok.all():
        i, j = map(int, np.argwhere(~ok)[0])
        missing = (i, j, "lub" if not oks[0][i, j] else "glb")
    return out[0], out[1], missing


def _bounds_constants(order: FinitePoset) -> dict[str, int]:
    bottom, top = bound_indices(order)
    consts = {}
    if bottom is not None:
        consts["zero"] = bottom
    if top is not None:
        consts["one"] = top
    return consts


def lattice_from_poset(p: FinitePoset, neg=None, name: str = "") -> Algebra:
    """Read lattice tables off an order; raises NotALattice with the least bad pair."""
    join, meet, missing = extremal_tables(p.leq)
    if missing is not None:
        i, j, what = missing
        raise NotALattice((p.elements[i], p.elements[j]), what)
    ops = {"join": join, "meet": meet}
    if neg is not None:
        ops["neg"] = neg
    return Algebra("lattice", p.elements, ops, _bounds_constants(p), p, name)


def lattice_from_tables(elements, join, meet, neg=None, name: str = "") -> Algebra:
    """Build a lattice from tables; the order is read from meet and cross-checked."""
    meet = np.asarray(meet)
    n = len(elements)
    leq = meet == np.arange(n)[:, None]
    try:
        order = FinitePoset(elements, leq)
    except Exception as exc:
        raise ValidationError("meet induces a partial order", str(exc)) from None
    alg = lattice_from_poset(order, neg, name)
    for key, tbl in (("join", join), ("meet", meet)):
        diff = np.argwhere(np.asarray(tbl) != alg.ops[key])
        if diff.size:
            i, j = map(int, diff[0])
            raise ValidationError(f"{key} is the lattice {key}", (elements[i], elements[j]))
    return alg


LATTICE_LAWS = {
    "modular": "x <= z => x v (y ^ z) = (x v y) ^ z",
    "distributive": "x ^ (y v z) = (x ^ y) v (x ^ z)",
    "top_complement": "x v x' = 1",
    "bottom_complement": "x ^ x' = 0",
    "orthomodular_law": "x v ((x v y) ^ x') = x v y",
    "weakly_orthomodular": "x = (x ^ y) v (x ^ (x ^ y)')",
    "dually_weakly_orthomodular": "x = (x v y) ^ (x v (x v y)')",
}

FLAG_NAMES = (
    "modular",
    "distributive",
    "complemented",
    "orthomodular",
    "weakly_orthomodular",
    "dually_weakly_orthomodular",
    "pseudocomplemented",
    "dually_pseudocomplemented",
)
_NEEDS_NEG = {"complemented", "orthomodular", "weakly_orthomodular", "dually_weakly_orthomodular"}


def _pseudocomplement_verdict(alg: Algebra, dual: bool) -> Verdict:
    name = "dually_pseudocomplemented" if dual else "pseudocomplemented"
    bottom, top = bound_indices(alg.order)
    edge = top if dual else bottom
    if edge is None:
        return Verdict(False, None, 0, name, "no top" if dual else "no bottom")
    tbl = alg.op("join" if dual else "meet")
    leq = alg.order.leq.T if dual else alg.order.leq
    for x in range(alg.size):
        cands = np.flatnonzero(tbl[x] == edge)
        best = [c for c in cands if leq[cands, c].all()]
        if not best:
            return Verdict(False, {"x": alg.elements[x]}, x + 1, name)
    return Verdict(True, None, alg.size, name)


def lattice_flags(alg: Algebra, names: Sequence[str] | None = None) -> dict[str, Verdict]:
    """Order-theoretic flags of a lattice, each with a witness when false."""
    if alg.kind != "lattice":
        raise KindMismatch(f"lattice_flags needs a lattice, got {alg.kind}")
    if names is None:
        names = [f for f in FLAG_NAMES if alg.has("neg") or f not in _NEEDS_NEG]
    out = {}
    for flag in names:
        if flag in _NEEDS_NEG and not alg.has("neg"):
            raise MissingOperation(f"flag {flag} needs a unary operation")
        if flag in ("modular", "distributive", "weakly_orthomodular", "dually_weakly_orthomodular"):
            out[flag] = check(alg, LATTICE_LAWS[flag], flag)
        elif flag == "complemented":
            out[flag] = _complemented(alg)
        elif flag == "orthomodular":
            out[flag] = _orthomodular(alg)
        elif flag == "pseudocomplemented":
            out[flag] = _pseudocomplement_verdict(alg, dual=False)
        elif flag == "dually_pseudocomplemented":
            out[flag] = _pseudocomplement_verdict(alg, dual=True)
        else:
            raise KeyError(flag)
    return out


def _complemented(alg: Algebra) -> Verdict:
    bottom, top = bound_indices(alg.order)
    if bottom is None or top is None:
        return Verdict(False, None, 0, "complemented", "unbounded")
    v = first_failure(
        [check(alg, LATTICE_LAWS["top_complement"]), check(alg, LATTICE_LAWS["bottom_complement"])]
    )
    return v.renamed("complemented")


def _orthomodular(alg: Algebra) -> Verdict:
    comp = _complemented(alg)
    if not comp:
        return Verdict(False, comp.witness, comp.checked_count, "orthomodular", "not complemented")
    props = unary_properties(alg.order, alg.op("neg"))
    for key in ("antitone", "involution"):
        if not props[key]:
            return Verdict(False, props[key].witness, props[key].checked_count, "orthomodular", f"not {key}")
    om = check(alg, LATTICE_LAWS["orthomodular_law"])
    if not om:
        return Verdict(False, om.witness, om.checked_count, "orthomodular", "orthomodular law")
    return Verdict(True, None, om.checked_count, "orthomodular")


def is_orthomodular(alg: Algebra) -> bool:
    return alg.kind == "lattice" and alg.has("neg") and bool(_orthomodular(alg))


def make_constant_unary(alg: Algebra, c: str) -> np.ndarray:
    return _ro(np.full(alg.size, alg.index(c)))


# --------------------------------------------------------------------------
# lambda-lattices

LAMBDA_AXIOMS = (
    ("lsup_commutative", "x v y = y v x"),
    ("linf_commutative", "x ^ y = y ^ x"),
    ("lsup_weak_associative", "x v ((x v y) v z) = (x v y) v z"),
    ("linf_weak_associative", "x ^ ((x ^ y) ^ z) = (x ^ y) ^ z"),
    ("lsup_absorption", "x v (x ^ y) = x"),
    ("linf_absorption", "x ^ (x v y) = x"),
)
LAMBDA_IDEMPOTENCE = (("lsup_idempotent", "x v x = x"), ("linf_idempotent", "x ^ x = x"))


def check_lambda_axioms(universe: Sequence[str], lsup, linf) -> Verdict:
    """The six defining identities, then the derived idempotent laws."""
    n = len(universe)
    lsup, linf = np.asarray(lsup), np.asarray(linf)
    for key, tbl in (("lsup", lsup), ("linf", linf)):
        if tbl.shape != (n, n) or tbl.min() < 0 or tbl.max() >= n:
            return Verdict(False, None, 0, f"{key}_total")
    it = Interpretation(n, {"join": lsup, "meet": linf}, elements=universe, label="lambda tables")
    total = 0
    for name, src in LAMBDA_AXIOMS + LAMBDA_IDEMPOTENCE:
        v = check_law_interp(it, parse_law(src), name=name)
        total += v.checked_count
        if not v:
            return v
    return Verdict(True, None, total, "lambda_axioms")


def induced_leq(lsup: np.ndarray, linf: np.ndarray) -> np.ndarray:
    n = lsup.shape[0]
    by_sup = lsup == np.arange(n)[None, :]
    by_inf = linf == np.arange(n)[:, None]
    if not (by_sup == by_inf).all():
        i, j = map(int, np.argwhere(by_sup != by_inf)[0])
        raise InducedOrderMismatch(f"x v y = y and x ^ y = x disagree at ({i}, {j})")
    return by_sup


def lambda_algebra(elements, lsup, linf, neg=None, name: str = "") -> Algebra:
    """Validate λ-lattice tables and attach the induced order."""
    elements = tuple(elements)
    v = check_lambda_axioms(elements, lsup, linf)
    if not v:
        raise ValidationError(v.name, v.witness)
    order = FinitePoset(elements, induced_leq(np.asarray(lsup), np.asarray(linf)))
    ops = {"lsup": lsup, "linf": linf}
    if neg is not None:
        ops["neg"] = neg
    return Algebra("lambda", elements, ops, _bounds_constants(order), order, name)


def induced_order(alg: Algebra) -> FinitePoset:
    """The order x <= y iff x ⊔ y = y (checked to agree with x ⊓ y = x)."""
    if alg.kind == "lattice":
        return FinitePoset(alg.elements, induced_leq(alg.op("join"), alg.op("meet")))
    return FinitePoset(alg.elements, induced_leq(alg.op("lsup"), alg.op("linf")))


def as_lambda(alg: Algebra) -> Algebra:
    """View a lattice as a λ-lattice (same tables, renamed)."""
    if alg.kind == "lambda":
        return alg
    if alg.kind != "lattice":
        raise KindMismatch(f"cannot view a {alg.kind} as a λ-lattice")
    ops = {"lsup": alg.op("join"), "linf": alg.op("meet")}
    if alg.has("neg"):
        ops["neg"] = alg.op("neg")
    return Algebra("lambda", alg.elements, ops, alg.constants, alg.order, alg.name)


def is_lattice_lambda(alg: Algebra) -> Verdict:
    """True iff ⊔ and ⊓ are monotone for the induced order."""
    if alg.kind == "lattice":
        alg = as_lambda(alg)
    checks = [
        check(alg, "x <= y => x v z <= y v z", "lsup_monotone"),
        check(alg, "x <= y => x ^ z <= y ^ z", "linf_monotone"),
    ]
    for c in checks:
        if not c:
            return c
    return Verdict(True, None, sum(c.checked_count for c in checks), "is_lattice")


# --------------------------------------------------------------------------
# semirings and pseudorings

SEMIRING_AXIOMS = (
    ("plus_commutative", "x + y = y + x"),
    ("plus_associative", "(x + y) + z = x + (y + z)"),
    ("plus_neutral", "x + 0 = x"),
    ("times_commutative", "x * y = y * x"),
    ("times_associative", "(x * y) * z = x * (y * z)"),
    ("times_zero", "x * 0 = 0"),
    ("distributive", "x * (y + z) = x * y + x * z"),
    ("orthogonal_neg", "x * x' = 0"),
)

PSEUDORING_AXIOMS = (
    ("plus_commutative", "x + y = y + x"),
    ("plus_neutral", "x + 0 = x"),
    ("times_commutative", "x * y = y * x"),
    ("times_associative", "(x * y) * z = x * (y * z)"),
    ("times_idempotent", "x * x = x"),
    ("times_neutral", "x * 1 = x"),
    ("nilpotent", "x + x = 0"),
    ("times_zero", "x * 0 = 0"),
    ("shifted_associativity", "(x + 1) + y = x + (1 + y)"),
    ("p4", "(1 + x * y) * x = x + x * y * x"),
    ("p5", "(1 + x) * (1 + x * y) = 1 + x"),
    ("p6", "(1 + x * (1 + y)) * (1 + y * (1 + x)) = 1 + (x + y)"),
    ("p7", "(x + x * y) + x * y = x"),
)


def _suite(alg: Algebra, axioms) -> Verdict:
    total = 0
    for name, src in axioms:
        v = check(alg, src, name)
        total += v.checked_count
        if not v:
            return v
    return Verdict(True, None, total, "axioms")


def check_semiring(alg: Algebra) -> Verdict:
    """Commutative semiring axioms plus x·x′ = 0; the order must be present."""
    if alg.order is None:
        return Verdict(False, None, 0, "order", "no order attached")
    for key in ("plus", "times", "neg"):
        if not alg.has(key):
            return Verdict(False, None, 0, key, "missing table")
    if "zero" not in alg.constants:
        return Verdict(False, None, 0, "zero", "missing constant")
    return _named(_suite(alg, SEMIRING_AXIOMS), "semiring")


def _named(v: Verdict, name: str) -> Verdict:
    return v.renamed(name) if v.holds else v


def semiring_algebra(elements, plus, times, neg, zero: str, order: FinitePoset, one=None, name="") -> Algebra:
    elements = tuple(elements)
    consts = {"zero": elements.index(zero)}
    if one is not None:
        consts["one"] = elements.index(one)
    alg = Algebra("semiring", elements, {"plus": plus, "times": times, "neg": neg}, consts, order, name)
    v = check_semiring(alg)
    if not v:
        raise ValidationError(v.name, v.witness)
    return alg


def check_pseudoring(alg: Algebra) -> Verdict:
    """The seven defining identities plus the groupoid / semilattice structure."""
    for key in ("plus", "times"):
        if not alg.has(key):
            return Verdict(False, None, 0, key, "missing table")
    for key in ("zero", "one"):
        if key not in alg.constants:
            return Verdict(False, None, 0, key, "missing constant")
    return _named(_suite(alg, PSEUDORING_AXIOMS), "pseudoring")


def pseudoring_algebra(elements, plus, times, zero, one, name: str = "") -> Algebra:
    """Validate pseudoring tables; the order is x <= y iff x·y = x."""
    elements = tuple(elements)
    consts = {"zero": elements.index(zero), "one": elements.index(one)}
    raw = Algebra("pseudoring", elements, {"plus": plus, "times": times}, consts, None, name)
    v = check_pseudoring(raw)
    if not v:
        raise NotAPseudoring(f"{v.name} fails at {v.witness}")
    n = len(elements)
    order = FinitePoset(elements, raw.op("times") == np.arange(n)[:, None])
    return raw.replace(order=order)


def oml_to_pseudoring(alg: Algebra, name: str = "") -> Algebra:
    """x+y := (x∧y′)∨(x′∧y), xy := x∧y."""
    if not is_orthomodular(alg):
        raise NotOrthomodular(alg.name or "lattice")
    plus = table_of(alg, "(x ^ y') v (x' ^ y)")
    return pseudoring_algebra(
        alg.elements,
        plus,
        alg.op("meet"),
        alg.element_of(alg.constants["zero"]),
        alg.element_of(alg.constants["one"]),
        name or alg.name,
    )


def pseudoring_to_oml(alg: Algebra, name: str = "") -> Algebra:
    """x∨y := 1+(1+x)(1+y), x∧y := xy, x′ := 1+x; the result carries neg."""
    v = check_pseudoring(alg)
    if not v:
        raise NotAPseudoring(f"{v.name} fails at {v.witness}")
    join = table_of(alg, "1 + (1 + x) * (1 + y)")
    neg = alg.op("plus")[alg.constants["one"]]
    lat = lattice_from_tables(alg.elements, join, alg.op("times"), neg, name or alg.name)
    if not is_orthomodular(lat):
        raise NotOrthomodular("translated lattice")
    return lat


# --------------------------------------------------------------------------
# constructions


def _product_order(a: FinitePoset, b: FinitePoset, elements) -> FinitePoset:
    leq = a.leq[:, None, :, None] & b.leq[None, :, None, :]
    n = len(elements)
    return FinitePoset(elements, leq.reshape(n, n))


def direct_product(a: Algebra, b: Algebra, name: str = "") -> Algebra:
    """Componentwise product; elements are named ``x.y``."""
    if a.kind != b.kind:
        raise KindMismatch(f"{a.kind} x {b.kind}")
    if set(a.ops) != set(b.ops) or set(a.constants) != set(b.constants):
        raise KindMismatch("factors have different signatures")
    na, nb = a.size, b.size
    elements = tuple(f"{x}.{y}" for x in a.elements for y in b.elements)
    ops = {}
    for key, ta in a.ops.items():
        tb = b.ops[key]
        if ta.ndim == 1:
            ops[key] = (ta[:, None] * nb + tb[None, :]).reshape(-1)
        else:
            ops[key] = (ta[:, None, :, None] * nb + tb[None, :, None, :]).reshape(na * nb, na * nb)
    consts = {k: a.constants[k] * nb + b.constants[k] for k in a.constants}
    order = None
    if a.order is not None and b.order is not None:
        order = _product_order(a.order, b.order, elements)
    name = name or (f"{a.name}x{b.name}" if a.name and b.name else "")
    return Algebra(a.kind, elements, ops, consts, order, name)


def subalgebra_generated(alg: Algebra, seed: Sequence[str], name: str = "") -> Algebra:
    """Closure of ``seed`` under every table and constant, with restricted tables."""
    members = np.zeros(alg.size, dtype=bool)
    for s in seed:
        members[alg.index(s)] = True
    for c in alg.constants.values():
        members[c] = True
    interp_ops = alg.interpretation().ops
    while True:
        idx = np.flatnonzero(members)
        grown = members.copy()
        for tbl in interp_ops.values():
            vals = tbl[idx] if tbl.ndim == 1 else tbl[np.ix_(idx, idx)]
            grown[vals.reshape(-1)] = True
        if (grown == members).all():
            break
        members = grown
    idx = np.flatnonzero(members)
    remap = np.full(alg.size, -1)
    remap[idx] = np.arange(idx.size)
    elements = tuple(alg.elements[i] for i in idx)
    ops = {
        k: remap[t[idx]] if t.ndim == 1 else remap[t[np.ix_(idx, idx)]] for k, t in alg.ops.items()
    }
    consts = {k: int(remap[c]) for k, c in alg.constants.items()}
    order = None
    if alg.order is not None:
        order = FinitePoset(elements, alg.order.leq[np.ix_(idx, idx)])
    return Algebra(alg.kind, elements, ops, consts, order, name or alg.name)


FANO_LINES = ("abc", "adf", "aeg", "bdg", "bef", "cde", "cfg")


def build_fano_lambda() -> Algebra:
    """The 16-element λ-lattice on {0,1} ∪ B ∪ B′ built from the Fano plane."""
    points = "abcdefg"
    elements = ["0", *points, *(p + "'" for p in points), "1"]
    n = len(elements)
    ix = {e: i for i, e in enumerate(elements)}
    third = {}
    for line in FANO_LINES:
        for x, y in combinations(line, 2):
            (z,) = set(line) - {x, y}
            third[x, y] = third[y, x] = z

    leq = np.eye(n, dtype=bool)
    leq[ix["0"], :] = True
    leq[:, ix["1"]] = True
    for x in points:
        for y in points:
            if x != y:
                leq[ix[x], ix[y + "'"]] = True
    order = FinitePoset(elements, leq)

    lsup = np.zeros((n, n), dtype=np.int64)
    linf = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if leq[i, j]:
                lsup[i, j], linf[i, j] = j, i
            elif leq[j, i]:
                lsup[i, j], linf[i, j] = i, j
            else:
                lsup[i, j], linf[i, j] = ix["1"], ix["0"]
    for (x, y), z in third.items():
        lsup[ix[x], ix[y]] = ix[z + "'"]
        linf[ix[x + "'"], ix[y + "'"]] = ix[z]
    neg = np.array([ix[_prime(e)] for e in elements])
    alg = lambda_algebra(elements, lsup, linf, neg, "fano")
    assert alg.order == order
    return alg


def _prime(e: str) -> str:
    if e == "0":
        return "1"
    if e == "1":
        return "0"
    return e[:-1] if e.endswith("'") else e + "'"


def boolean_ring_names(k: int) -> list[str]:
    atoms = "abcd"[:k]
    full = (1 << k) - 1
    names = []
    for mask in range(1 << k):
        if mask == 0:
            names.append("0")
        elif mask == full:
            names.append("1")
        else:
            names.append("".join(atoms[i] for i in range(k) if mask >> i & 1))
    return names


def build_boolean_ring(k: int) -> Algebra:
    """Boolean ring of subsets of a k-set as an ordered semiring with x′ = x+1."""
    if not 1 <= k <= 4:
        raise SizeOutOfRange(f"atom count {k} outside 1..4")
    n = 1 << k
    full = n - 1
    masks = np.arange(n)
    plus = masks[:, None] ^ masks[None, :]
    times = masks[:, None] & masks[None, :]
    neg = masks ^ full
    names = boolean_ring_names(k)
    order = FinitePoset(names, times == masks[:, None])
    return semiring_algebra(names, plus, times, neg, "0", order, one="1", name=f"boolean_ring_{k}")
