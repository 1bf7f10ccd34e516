"""Sasaki operation pairs, adjointness, residuals and condition batteries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from sasaki_lab.algebras import (
    FLAG_NAMES,
    LATTICE_LAWS,
    Algebra,
    check,
    check_lambda_axioms,
    check_pseudoring,
    check_semiring,
    is_lattice_lambda,
    lattice_flags,
    table_of,
)
from sasaki_lab.core import FinitePoset, bound_indices, unary_properties
from sasaki_lab.errors import (
    MissingOperation,
    SchemeKindMismatch,
    UnboundedAlgebra,
)
from sasaki_lab.terms import Verdict

# scheme -> (kind, odot polynomial, imp polynomial)
SCHEMES = {
    "S1": ("lattice", "(x v y') ^ y", "x' v (x ^ y)"),
    "S2": ("lambda", "(x v y') ^ y", "x' v (x ^ y)"),
    "S3": ("semiring", "(x + y') * y", "x' + x * y"),
    "S4": ("pseudoring", "(1 + (1 + x) * y) * y", "1 + x * (1 + x * y)"),
}
SCHEME_FOR_KIND = {kind: scheme for scheme, (kind, _, _) in SCHEMES.items()}

A1 = "x o y <= z => x <= y -> z"
A2 = "x <= y -> z => x o y <= z"

BATTERIES = {
    "S1": {
        "B1": "y' v ((x v y') ^ y) = x v y'",
        "B2": "(x' v (x ^ y)) ^ x = x ^ y",
    },
    "S2": {
        "C1": "y' v ((x v y') ^ y) = x v y'",
        "C2": "(x' v (x ^ y)) ^ x = x ^ y",
        "D1": "x v y' <= y' v ((x v y') ^ y)",
        "D2": "(x' v (x ^ y)) ^ x <= x ^ y",
        "E1": "x <= y => z' v (z ^ x) <= z' v (z ^ y)",
        "E2": "x <= y => (x v z') ^ z <= (y v z') ^ z",
        "F1": "x o y <= z => y' v (y ^ (x o y)) <= y' v (y ^ z)",
        "F2": "x <= y -> z => (x v y') ^ y <= ((y -> z) v y') ^ y",
    },
    "S3": {
        "c3": "x <= y' + x * y * y",
        "c4": "x <= y => z' + z * x <= z' + z * y",
        "c5": "x <= y => x * z <= y * z",
        "c6": "x * y <= x",
    },
    "S4": {},
}

CONSEQUENCES = {
    "odot_monotone_first": "x <= y => x o z <= y o z",
    "imp_monotone_second": "x <= y => z -> x <= z -> y",
    "lemma1_f": "x <= y -> (x o y)",
    "lemma1_g": "(y -> x) o y <= x",
}

NECESSITY = {
    "top_law": ("A1", "x v x' = 1"),
    "bottom_law": ("A2", "x ^ x' = 0"),
}


@dataclass(frozen=True, eq=False)
class SasakiPair:
    odot: np.ndarray
    imp: np.ndarray
    scheme: str
    source: Algebra

    @property
    def order(self) -> FinitePoset:
        return self.source.order


@dataclass(frozen=True)
class AdjointnessReport:
    a1: Verdict
    a2: Verdict

    @property
    def adjoint(self) -> bool:
        return self.a1.holds and self.a2.holds


@dataclass(frozen=True, eq=False)
class Residual:
    """A reconstructed table, or the least argument pair where none exists."""

    table: np.ndarray | None
    witness: dict | None = None

    @property
    def ok(self) -> bool:
        return self.table is not None


def scheme_for(alg: Algebra, scheme: str | None) -> str:
    if scheme is None:
        if alg.kind not in SCHEME_FOR_KIND:
            raise SchemeKindMismatch(f"no Sasaki scheme for kind {alg.kind}")
        return SCHEME_FOR_KIND[alg.kind]
    if scheme not in SCHEMES:
        raise SchemeKindMismatch(f"unknown scheme {scheme}")
    if SCHEMES[scheme][0] != alg.kind:
        raise SchemeKindMismatch(f"scheme {scheme} needs a {SCHEMES[scheme][0]}, got a {alg.kind}")
    return scheme


def derive_sasaki(alg: Algebra, scheme: str | None = None) -> SasakiPair:
    """Evaluate the scheme's two polynomials over all pairs."""
    scheme = scheme_for(alg, scheme)
    _, odot_src, imp_src = SCHEMES[scheme]
    odot = table_of(alg, odot_src)
    imp = table_of(alg, imp_src)
    odot.flags.writeable = False
    imp.flags.writeable = False
    return SasakiPair(odot, imp, scheme, alg)


def with_pair(alg: Algebra, pair: SasakiPair) -> Algebra:
    return alg.with_ops(odot=pair.odot, imp=pair.imp)


def pair_algebra(order: FinitePoset, odot, imp) -> Algebra:
    bottom, top = bound_indices(order)
    consts = {k: v for k, v in (("zero", bottom), ("one", top)) if v is not None}
    return Algebra("poset", order.elements, {"odot": odot, "imp": imp}, consts, order)


def check_adjointness(order: FinitePoset, odot, imp) -> AdjointnessReport:
    """Both halves of f(x,y) <= z iff x <= g(y,z), over all triples."""
    alg = pair_algebra(order, odot, imp)
    return AdjointnessReport(check(alg, A1, "A1"), check(alg, A2, "A2"))


def pair_adjointness(pair: SasakiPair) -> AdjointnessReport:
    return check_adjointness(pair.order, pair.odot, pair.imp)


def residual_imp_from_odot(order: FinitePoset, odot) -> Residual:
    """imp(y,z) := greatest x with odot(x,y) <= z."""
    leq = order.leq
    n = len(order)
    odot = np.asarray(odot)
    # s[y, z, x]: odot(x, y) <= z
    s = leq[odot.T[:, None, :], np.arange(n)[None, :, None]]
    greatest = s & (~s[:, :, :, None] | leq[None, None, :, :]).all(axis=2)
    return _extract(greatest, order, ("y", "z"))


def residual_odot_from_imp(order: FinitePoset, imp) -> Residual:
    """odot(x,y) := least z with x <= imp(y,z)."""
    leq = order.leq
    n = len(order)
    imp = np.asarray(imp)
    # t[x, y, z]: x <= imp(y, z)
    t = leq[np.arange(n)[:, None, None], imp[None, :, :]]
    least = t & (~t[:, :, :, None] | leq.T[None, None, :, :]).all(axis=2)
    return _extract(least, order, ("x", "y"))


def _extract(best: np.ndarray, order: FinitePoset, names) -> Residual:
    count = best.sum(axis=-1)
    if (count == 0).any():
        i, j = map(int, np.argwhere(count == 0)[0])
        return Residual(None, {names[0]: order.elements[i], names[1]: order.elements[j]})
    table = best.argmax(axis=-1)
    table.flags.writeable = False
    return Residual(table)


def condition_battery(alg: Algebra, scheme: str | None = None, pair: SasakiPair | None = None) -> dict[str, Verdict]:
    """The side conditions belonging to the scheme, F1/F2 using the derived pair."""
    scheme = scheme_for(alg, scheme)
    laws = BATTERIES[scheme]
    if not laws:
        return {}
    pair = pair or derive_sasaki(alg, scheme)
    target = with_pair(alg, pair)
    return {name: check(target, src, name) for name, src in laws.items()}


def adjointness_consequences(order: FinitePoset, odot, imp) -> dict[str, Verdict]:
    alg = pair_algebra(order, odot, imp)
    return {name: check(alg, src, name) for name, src in CONSEQUENCES.items()}


def bounded_necessity(alg: Algebra, pair: SasakiPair) -> dict[str, Verdict]:
    """(A1 holds => x v x' = 1) and (A2 holds => x ^ x' = 0), as computed implications."""
    if alg.order is None or None in bound_indices(alg.order):
        raise UnboundedAlgebra(alg.name or alg.kind)
    report = pair_adjointness(pair)
    halves = {"A1": report.a1, "A2": report.a2}
    out = {}
    for name, (half, identity) in NECESSITY.items():
        ident = check(alg, identity, identity)
        if halves[half].holds and not ident.holds:
            out[name] = Verdict(False, ident.witness, ident.checked_count, name, f"{half} holds but {identity} fails")
        else:
            out[name] = Verdict(True, None, ident.checked_count, name)
    return out


def projection_check(pair: SasakiPair) -> Verdict:
    """For every a, x -> x ⊙ a is idempotent with image the interval [0, a]."""
    leq = pair.order.leq
    n = len(pair.order)
    for a in range(n):
        f = pair.odot[:, a]
        if not (f[f] == f).all():
            return Verdict(False, {"a": pair.order.elements[a]}, a + 1, "projection", "not idempotent")
        image = np.zeros(n, dtype=bool)
        image[f] = True
        if not (image == leq[:, a]).all():
            return Verdict(False, {"a": pair.order.elements[a]}, a + 1, "projection", "image is not [0,a]")
    return Verdict(True, None, n, "projection")


# --------------------------------------------------------------------------
# named conditions, as used by fixtures, the CLI and reports

UNARY_FLAGS = ("antitone", "involution", "surjective")


def known_conditions(alg: Algebra, scheme: str | None = None) -> list[str]:
    names = ["A1", "A2", "adjoint"]
    try:
        scheme = scheme_for(alg, scheme)
        names += list(BATTERIES[scheme])
    except SchemeKindMismatch:
        pass
    return names


def evaluate_condition(alg: Algebra, name: str, scheme: str | None = None, _cache=None) -> Verdict:
    """Evaluate one named condition (a law from a battery, a flag, or adjointness)."""
    cache = {} if _cache is None else _cache

    def pair():
        if "pair" not in cache:
            cache["pair"] = derive_sasaki(alg, scheme)
        return cache["pair"]

    def adjointness():
        if "adj" not in cache:
            cache["adj"] = pair_adjointness(pair())
        return cache["adj"]

    if name == "A1":
        return adjointness().a1
    if name == "A2":
        return adjointness().a2
    if name == "adjoint":
        rep = adjointness()
        bad = rep.a1 if not rep.a1 else rep.a2
        if rep.adjoint:
            return Verdict(True, None, rep.a1.checked_count + rep.a2.checked_count, "adjoint")
        return Verdict(False, bad.witness, bad.checked_count, "adjoint", f"{bad.name} fails")
    for battery in BATTERIES.values():
        if name in battery:
            sch = scheme_for(alg, scheme)
            if name not in BATTERIES[sch]:
                raise SchemeKindMismatch(f"{name} belongs to another scheme than {sch}")
            return check(with_pair(alg, pair()), battery[name], name)
    if name in CONSEQUENCES:
        p = pair()
        return adjointness_consequences(p.order, p.odot, p.imp)[name]
    if name in NECESSITY:
        return bounded_necessity(alg, pair())[name]
    if name == "projection":
        return projection_check(pair())
    if name in UNARY_FLAGS:
        if alg.order is None:
            raise MissingOperation("unary flags need an order")
        neg = alg.interpretation().table("neg")
        return unary_properties(alg.order, neg)[name]
    if name == "bounded":
        ok = alg.order is not None and None not in bound_indices(alg.order)
        return Verdict(ok, None, 1, "bounded")
    if name == "is_lattice":
        if alg.kind not in ("lattice", "lambda"):
            raise MissingOperation(f"is_lattice applies to lattices and λ-lattices, not {alg.kind}")
        return is_lattice_lambda(alg)
    if name == "lambda_axioms":
        return check_lambda_axioms(alg.elements, alg.op("lsup"), alg.op("linf"))
    if name == "semiring":
        return check_semiring(alg)
    if name == "pseudoring":
        return check_pseudoring(alg)
    if name in LATTICE_LAWS and alg.kind in ("lattice", "lambda"):
        return check(alg, LATTICE_LAWS[name], name)
    if alg.kind == "lattice" and name in FLAG_NAMES:
        return lattice_flags(alg, [name])[name]
    raise KeyError(f"unknown condition {name!r} for a {alg.kind}")


def evaluate_conditions(alg: Algebra, names: Sequence[str], scheme: str | None = None) -> dict[str, Verdict]:
    cache: dict = {}
    return {n: evaluate_condition(alg, n, scheme, cache) for n in names}
