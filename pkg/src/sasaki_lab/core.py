"""Finite posets and unary-operation property checks.

Elements are referenced by position in the declared order everywhere
internally; names only appear at the boundaries (construction, reports).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from sasaki_lab.errors import (
    CycleDetected,
    DuplicateElement,
    InvalidElementName,
    NotAPartialOrder,
    UnknownName,
)
from sasaki_lab.terms import Verdict

_WS = re.compile(r"\s")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.flags.writeable = False
    return a


def transitive_closure(rel: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a square boolean relation."""
    n = rel.shape[0]
    closure = rel.astype(bool) | np.eye(n, dtype=bool)
    for k in range(n):
        closure |= closure[:, k, None] & closure[None, k, :]
    return closure


class FinitePoset:
    """An immutable finite partial order.

    ``leq[i, j]`` is True iff element ``i`` is below or equal to element ``j``.
    The relation is validated on construction.
    """

    __slots__ = ("elements", "leq", "_index")

    def __init__(self, elements: Sequence[str], leq):
        elements = tuple(str(e) for e in elements)
        if not elements:
            raise InvalidElementName("a poset needs at least one element")
        seen = set()
        for e in elements:
            if not e or _WS.search(e):
                raise InvalidElementName(f"bad element name {e!r}")
            if e in seen:
                raise DuplicateElement(e)
            seen.add(e)
        leq = np.asarray(leq, dtype=bool)
        n = len(elements)
        if leq.shape != (n, n):
            raise NotAPartialOrder(f"order table has shape {leq.shape}, expected {(n, n)}")
        if not leq.diagonal().all():
            i = int(np.argmin(leq.diagonal()))
            raise NotAPartialOrder(f"not reflexive at {elements[i]}")
        both = leq & leq.T & ~np.eye(n, dtype=bool)
        if both.any():
            i, j = map(int, np.argwhere(both)[0])
            raise NotAPartialOrder(f"not antisymmetric: {elements[i]} and {elements[j]}")
        if not (transitive_closure(leq) == leq).all():
            raise NotAPartialOrder("not transitive")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "leq", _frozen(leq))
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(elements)})

    def __setattr__(self, name, value):
        raise AttributeError("FinitePoset is immutable")

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and bool((self.leq == other.leq).all())

    def __hash__(self):
        return hash((self.elements, self.leq.tobytes()))

    def __repr__(self):
        covers = " ".join(f"{a}<{b}" for a, b in self.cover_pairs())
        return f"FinitePoset([{' '.join(self.elements)}], {covers})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownName(name) from None

    def le(self, a: str, b: str) -> bool:
        return bool(self.leq[self.index(a), self.index(b)])

    def covers_matrix(self) -> np.ndarray:
        lt = self.leq & ~np.eye(len(self), dtype=bool)
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        return lt & ~between

    def cover_pairs(self) -> list[tuple[str, str]]:
        cov = self.covers_matrix()
        return [(self.elements[i], self.elements[j]) for i, j in zip(*np.nonzero(cov))]

    def relabel(self, elements: Sequence[str]) -> "FinitePoset":
        return FinitePoset(elements, self.leq)


def poset_from_covers(elements: Sequence[str], covers: Iterable[tuple[str, str]]) -> FinitePoset:
    """Build the poset generated by ``covers`` (pairs ``(lower, upper)``).

    Redundant comparabilities are accepted; the closure normalises them.
    """
    elements = [str(e) for e in elements]
    index: dict[str, int] = {}
    for i, e in enumerate(elements):
        if e in index:
            raise DuplicateElement(e)
        index[e] = i
    n = len(elements)
    rel = np.zeros((n, n), dtype=bool)
    for lo, hi in covers:
        for name in (lo, hi):
            if str(name) not in index:
                raise UnknownName(str(name))
        rel[index[str(lo)], index[str(hi)]] = True
    closure = transitive_closure(rel)
    both = closure & closure.T & ~np.eye(n, dtype=bool)
    if both.any():
        i, j = map(int, np.argwhere(both)[0])
        raise CycleDetected(elements[i], elements[j])
    return FinitePoset(elements, closure)


def bounds(p: FinitePoset) -> tuple[str | None, str | None]:
    """Return ``(bottom, top)``; either is None when it does not exist."""
    bottom = top = None
    below_all = p.leq.all(axis=1)
    above_all = p.leq.all(axis=0)
    if below_all.any():
        bottom = p.elements[int(np.argmax(below_all))]
    if above_all.any():
        top = p.elements[int(np.argmax(above_all))]
    return bottom, top


def bound_indices(p: FinitePoset) -> tuple[int | None, int | None]:
    below_all = p.leq.all(axis=1)
    above_all = p.leq.all(axis=0)
    return (
        int(np.argmax(below_all)) if below_all.any() else None,
        int(np.argmax(above_all)) if above_all.any() else None,
    )


@dataclass(frozen=True)
class ConePair:
    upper: frozenset
    lower: frozenset


def cone_indices(leq: np.ndarray, a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
    upper = np.flatnonzero(leq[a] & leq[b])
    lower = np.flatnonzero(leq[:, a] & leq[:, b])
    return upper, lower


def cones(p: FinitePoset, a: str, b: str) -> ConePair:
    """Common upper bounds U(a,b) and common lower bounds L(a,b)."""
    upper, lower = cone_indices(p.leq, p.index(a), p.index(b))
    return ConePair(
        frozenset(p.elements[i] for i in upper),
        frozenset(p.elements[i] for i in lower),
    )


def unary_properties(p: FinitePoset, u) -> dict[str, Verdict]:
    """Check antitone / involution / surjective for a unary table.

    ``u`` maps positions to positions. Failing flags carry the least
    witness in declared element order.
    """
    u = np.asarray(u, dtype=np.int64)
    n = len(p)
    if u.shape != (n,) or (u < 0).any() or (u >= n).any():
        raise ValueError("unary table is not total on the poset")
    names = p.elements

    viol = p.leq & ~p.leq[u[None, :], u[:, None]]
    if viol.any():
        x, y = map(int, np.argwhere(viol)[0])
        antitone = Verdict(False, {"x": names[x], "y": names[y]}, n * n, "antitone")
    else:
        antitone = Verdict(True, None, n * n, "antitone")

    bad = np.flatnonzero(u[u] != np.arange(n))
    if bad.size:
        involution = Verdict(False, {"x": names[int(bad[0])]}, n, "involution")
    else:
        involution = Verdict(True, None, n, "involution")

    missing = np.setdiff1d(np.arange(n), u)
    if missing.size:
        surjective = Verdict(False, {"y": names[int(missing[0])]}, n, "surjective")
    else:
        surjective = Verdict(True, None, n, "surjective")
    return {"antitone": antitone, "involution": involution, "surjective": surjective}
