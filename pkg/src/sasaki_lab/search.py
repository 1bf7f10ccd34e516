"""Exhaustive generators and countermodel sweeps.

Everything here enumerates in a fixed order, so two runs with the same
arguments produce the same sequence.  Sweeps evaluate whole batches of
models at once: the structure (lattice, λ-lattice, semiring tables) is
shared and the unary operation, and for semirings the order, carry a
leading batch axis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from sasaki_lab.algebras import (
    LAMBDA_AXIOMS,
    LAMBDA_IDEMPOTENCE,
    LATTICE_LAWS,
    PSEUDORING_AXIOMS,
    SEMIRING_AXIOMS,
    Algebra,
    build_boolean_ring,
    extremal_tables,
    is_orthomodular,
    lattice_from_poset,
    oml_to_pseudoring,
)
from sasaki_lab.core import FinitePoset, bound_indices, cone_indices
from sasaki_lab.errors import BoundTooLarge, KindMismatch, NoBounds, UnknownConjecture
from sasaki_lab.sasaki import BATTERIES, CONSEQUENCES, SCHEME_FOR_KIND, SCHEMES, A1, A2
from sasaki_lab.terms import Interpretation, assignment_grid, check_law_batch, law_variables, parse_law, parse_term

UNARY_FILTERS = ("complementation", "involution", "antitone", "surjective")
DEFAULT_BOUND = {"lattice": 6, "lambda": 6, "semiring": 4, "pseudoring": 5}
MAX_BOUND = {"lattice": 8, "lambda": 8, "semiring": 5, "pseudoring": 5}
# rough cap on batch * assignments per evaluation step
CELL_BUDGET = 1 << 22


def _names(k: int) -> list[str]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    return [letters[i] if i < 26 else f"e{i}" for i in range(k)]


# --------------------------------------------------------------------------
# posets and lattices up to isomorphism


@lru_cache(maxsize=None)
def _perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def _encode(mats: np.ndarray) -> np.ndarray:
    """Pack boolean (..., n, n) matrices into python-int-free sortable keys."""
    flat = mats.reshape(*mats.shape[:-2], -1)
    return np.packbits(flat, axis=-1)


def canonical_key(leq: np.ndarray, fix: Sequence[int] = ()) -> bytes:
    """Least encoding of ``leq`` over all relabelings (optionally fixing some positions)."""
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    perms = _perms_fixing(n, tuple(fix))
    mats = leq[perms[:, :, None], perms[:, None, :]]
    codes = _encode(mats)
    order = np.lexsort(codes.T[::-1])
    return codes[order[0]].tobytes()


@lru_cache(maxsize=None)
def _perms_fixing(n: int, fix: tuple) -> np.ndarray:
    if not fix:
        return _perms(n)
    free = [i for i in range(n) if i not in fix]
    out = []
    for p in itertools.permutations(free):
        perm = list(range(n))
        for src, dst in zip(free, p):
            perm[src] = dst
        out.append(perm)
    return np.array(out, dtype=np.int64).reshape(-1, n)


def _down_sets(leq: np.ndarray) -> list[np.ndarray]:
    """All down-closed subsets, as boolean masks, in binary-counter order."""
    n = leq.shape[0]
    out = []
    for mask in range(1 << n):
        sel = np.array([(mask >> i) & 1 for i in range(n)], dtype=bool)
        # down-closed: every element below a member is a member
        if (leq[:, sel].any(axis=1) <= sel).all() if sel.any() else True:
            out.append(sel)
    return out


@lru_cache(maxsize=None)
def _posets(n: int) -> tuple:
    """Unlabeled posets of size n, each as a leq matrix whose index order is a linear extension."""
    if n == 0:
        return (np.zeros((0, 0), dtype=bool),)
    out = []
    seen = set()
    for small in _posets(n - 1):
        for below in _down_sets(small):
            leq = np.zeros((n, n), dtype=bool)
            leq[: n - 1, : n - 1] = small
            leq[: n - 1, n - 1] = below
            leq[n - 1, n - 1] = True
            key = canonical_key(leq)
            if key not in seen:
                seen.add(key)
                leq.flags.writeable = False
                out.append(leq)
    return tuple(out)


def enumerate_posets(n: int, max_size: int = 8) -> Iterator[FinitePoset]:
    """Posets with n elements up to isomorphism, named a, b, c, ..."""
    if n > max_size:
        raise BoundTooLarge(f"poset size {n} exceeds the guard {max_size}")
    for leq in _posets(n):
        yield FinitePoset(_names(n), leq)


def _bounded(middle: np.ndarray) -> np.ndarray:
    m = middle.shape[0]
    leq = np.zeros((m + 2, m + 2), dtype=bool)
    leq[0, :] = True
    leq[:, m + 1] = True
    leq[1 : m + 1, 1 : m + 1] = middle
    return leq


def _bounded_names(n: int) -> list[str]:
    if n == 1:
        return ["0"]
    return ["0", *_names(n - 2), "1"]


def enumerate_bounded_posets(n: int, max_size: int = 8) -> Iterator[FinitePoset]:
    """Bounded posets with n elements up to isomorphism; 0 first, 1 last."""
    if n > max_size:
        raise BoundTooLarge(f"size {n} exceeds the guard {max_size}")
    if n < 1:
        return
    if n == 1:
        yield FinitePoset(["0"], np.ones((1, 1), dtype=bool))
        return
    for middle in _posets(n - 2):
        yield FinitePoset(_bounded_names(n), _bounded(middle))


def enumerate_lattices(n: int, max_size: int = 8) -> Iterator[Algebra]:
    """Lattices with n elements up to isomorphism, without unary operation."""
    for p in enumerate_bounded_posets(n, max_size):
        _, _, missing = extremal_tables(p.leq)
        if missing is None:
            yield lattice_from_poset(p, name=f"L{n}")


@lru_cache(maxsize=None)
def labeled_posets(n: int) -> np.ndarray:
    """Every partial order on positions 0..n-1, as a (count, n, n) boolean array."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    bits = assignment_grid(2, len(off)).T.astype(bool)
    rel = np.zeros((bits.shape[0], n, n), dtype=bool)
    rel[:, np.arange(n), np.arange(n)] = True
    for k, (i, j) in enumerate(off):
        rel[:, i, j] = bits[:, k]
    antisym = ~(rel & rel.transpose(0, 2, 1) & ~np.eye(n, dtype=bool)).any(axis=(1, 2))
    rel = rel[antisym]
    comp = np.einsum("bij,bjk->bik", rel.astype(np.int64), rel.astype(np.int64)) > 0
    trans = (comp <= rel).all(axis=(1, 2))
    out = rel[trans]
    out.flags.writeable = False
    return out


# --------------------------------------------------------------------------
# unary operations


def _join_meet(alg: Algebra):
    it = alg.interpretation()
    return it.table("join"), it.table("meet")


def enumerate_unary_ops(alg: Algebra, filters: Iterable[str] = ()) -> Iterator[np.ndarray]:
    """All unary tables passing ``filters``, lexicographic by table row.

    ``filters`` is drawn from complementation, involution, antitone and
    surjective.  Works on lattices and λ-lattices (complementation uses the
    algebra's join/meet or ⊔/⊓).
    """
    filters = set(filters)
    unknown = filters - set(UNARY_FILTERS)
    if unknown:
        raise ValueError(f"unknown unary filters {sorted(unknown)}")
    n = alg.size
    leq = alg.order.leq
    allowed = [list(range(n)) for _ in range(n)]
    if "complementation" in filters:
        bottom, top = bound_indices(alg.order)
        if bottom is None or top is None:
            raise NoBounds("complementation needs a bounded algebra")
        join, meet = _join_meet(alg)
        allowed = [[y for y in range(n) if join[x, y] == top and meet[x, y] == bottom] for x in range(n)]
    involution = "involution" in filters
    antitone = "antitone" in filters
    injective = involution or "surjective" in filters
    u = [-1] * n
    used = [False] * n

    def rec(x):
        if x == n:
            yield np.array(u, dtype=np.int64)
            return
        for y in allowed[x]:
            if injective and used[y]:
                continue
            if involution and y < x and u[y] != x:
                continue
            if antitone:
                ok = True
                for w in range(x):
                    if leq[w, x] and not leq[y, u[w]]:
                        ok = False
                        break
                    if leq[x, w] and not leq[u[w], y]:
                        ok = False
                        break
                if not ok:
                    continue
            u[x] = y
            used[y] = True
            yield from rec(x + 1)
            used[y] = False
            u[x] = -1

    yield from rec(0)


def all_unary_tables(n: int) -> np.ndarray:
    """All n**n unary tables as rows, lexicographic."""
    return assignment_grid(n, n).T.copy()


def _unary_candidates(alg: Algebra, filters: set) -> np.ndarray:
    if not filters:
        return all_unary_tables(alg.size)
    rows = list(enumerate_unary_ops(alg, filters))
    if not rows:
        return np.zeros((0, alg.size), dtype=np.int64)
    return np.stack(rows)


# --------------------------------------------------------------------------
# λ-lattice completions


@dataclass(frozen=True, eq=False)
class CompletionSpec:
    """Candidate ⊔ and ⊓ values for every incomparable pair of a poset."""

    poset: FinitePoset
    pairs: tuple
    joins: tuple
    meets: tuple

    @property
    def count(self) -> int:
        total = 1
        for c in self.joins + self.meets:
            total *= len(c)
        return total

    def base_tables(self):
        leq = self.poset.leq
        n = len(self.poset)
        idx = np.arange(n)
        lsup = np.where(leq, idx[None, :], idx[:, None])
        linf = np.where(leq, idx[:, None], idx[None, :])
        return lsup, linf

    def tables(self, start: int = 0, stop: int | None = None):
        """Raw (unfiltered) tables for choice indices start..stop-1, lexicographic."""
        stop = self.count if stop is None else stop
        lsup0, linf0 = self.base_tables()
        t = np.arange(start, stop, dtype=np.int64)
        b = t.size
        lsup = np.broadcast_to(lsup0, (b, *lsup0.shape)).copy()
        linf = np.broadcast_to(linf0, (b, *linf0.shape)).copy()
        cands = list(self.joins) + list(self.meets)
        digits = []
        rest = t.copy()
        for c in reversed(cands):
            digits.append(rest % len(c))
            rest //= len(c)
        digits.reverse()
        m = len(self.pairs)
        for k, (i, j) in enumerate(self.pairs):
            jv = np.asarray(self.joins[k])[digits[k]]
            mv = np.asarray(self.meets[k])[digits[m + k]]
            lsup[:, i, j] = lsup[:, j, i] = jv
            linf[:, i, j] = linf[:, j, i] = mv
        return lsup, linf


def completion_spec(p: FinitePoset) -> CompletionSpec:
    leq = p.leq
    n = len(p)
    pairs, joins, meets = [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            if leq[i, j] or leq[j, i]:
                continue
            upper, lower = cone_indices(leq, i, j)
            if upper.size == 0 or lower.size == 0:
                raise NoBounds(f"pair ({p.elements[i]}, {p.elements[j]}) has an empty cone")
            pairs.append((i, j))
            joins.append(tuple(int(v) for v in upper))
            meets.append(tuple(int(v) for v in lower))
    return CompletionSpec(p, tuple(pairs), tuple(joins), tuple(meets))


_LAMBDA_LAWS = tuple(parse_law(src, name) for name, src in LAMBDA_AXIOMS + LAMBDA_IDEMPOTENCE)


def lambda_mask(lsup: np.ndarray, linf: np.ndarray, leq: np.ndarray | None = None) -> np.ndarray:
    """Which batched (lsup, linf) pairs satisfy the λ-axioms (and induce ``leq``)."""
    b, n, _ = lsup.shape
    ok = np.ones(b, dtype=bool)
    if leq is not None:
        idx = np.arange(n)
        ok &= ((lsup == idx[None, None, :]) == leq[None]).all(axis=(1, 2))
        ok &= ((linf == idx[None, :, None]) == leq[None]).all(axis=(1, 2))
    for law in _LAMBDA_LAWS:
        sel = np.flatnonzero(ok)
        if sel.size == 0:
            break
        it = Interpretation(n, {"join": lsup[sel], "meet": linf[sel]}, batch=sel.size, batched={"join", "meet"})
        holds, _ = check_law_batch(it, law)
        ok[sel[~holds]] = False
    return ok


def completion_batches(p: FinitePoset, chunk: int | None = None):
    """Yield (lsup, linf) arrays of valid completions, in choice order."""
    spec = completion_spec(p)
    n = len(p)
    chunk = chunk or max(64, CELL_BUDGET // max(1, n**3))
    for start in range(0, spec.count, chunk):
        stop = min(spec.count, start + chunk)
        lsup, linf = spec.tables(start, stop)
        keep = lambda_mask(lsup, linf, p.leq)
        if keep.any():
            yield lsup[keep], linf[keep]


class CompletionStream:
    """Iterable of λ-lattice completions; ``exhausted`` tells whether a cap cut it short."""

    def __init__(self, p: FinitePoset, cap: int | None = None, neg=None, name: str = ""):
        self.poset = p
        self.cap = cap
        self.neg = neg
        self.name = name
        self.yielded = 0
        self.exhausted = False
        self.spec = completion_spec(p)

    def __iter__(self):
        from sasaki_lab.algebras import lambda_algebra

        self.yielded = 0
        self.exhausted = False
        for lsup, linf in completion_batches(self.poset):
            for k in range(lsup.shape[0]):
                if self.cap is not None and self.yielded >= self.cap:
                    return
                self.yielded += 1
                yield lambda_algebra(self.poset.elements, lsup[k], linf[k], self.neg, self.name)
        self.exhausted = True


def enumerate_lambda_completions(p: FinitePoset, cap: int | None = None, neg=None, name: str = "") -> CompletionStream:
    """Every λ-lattice whose induced order is ``p``; raises NoBounds on an empty cone."""
    return CompletionStream(p, cap, neg, name)


def count_lambda_completions(p: FinitePoset) -> int:
    return sum(ls.shape[0] for ls, _ in completion_batches(p))


# --------------------------------------------------------------------------
# semirings and pseudorings


def _partial_assoc_ok(t: np.ndarray) -> bool:
    """Associativity on every triple whose values are already determined (-1 = unknown)."""
    n = t.shape[0]
    xy = t[:, :, None]  # (x, y)
    yz = t[None, :, :]  # (y, z)
    known = (xy >= 0) & (yz >= 0)
    left = np.where(known, t[np.where(xy >= 0, xy, 0), np.arange(n)[None, None, :]], -1)
    right = np.where(known, t[np.arange(n)[:, None, None], np.where(yz >= 0, yz, 0)], -1)
    both = (left >= 0) & (right >= 0)
    return bool((left[both] == right[both]).all())


def _partial_dist_ok(plus: np.ndarray, t: np.ndarray) -> bool:
    """x(y+z) = xy + xz wherever both sides are determined."""
    n = t.shape[0]
    x = np.arange(n)[:, None, None]
    yz = plus[None, :, :]
    left = t[x, yz]
    xy = t[:, :, None]
    xz = t[:, None, :]
    known = (xy >= 0) & (xz >= 0)
    right = np.where(known, plus[np.where(xy >= 0, xy, 0), np.where(xz >= 0, xz, 0)], -1)
    both = (left >= 0) & (right >= 0)
    return bool((left[both] == right[both]).all())


def _commutative_tables(n: int, preset: np.ndarray, check) -> Iterator[np.ndarray]:
    cells = [(i, j) for i in range(n) for j in range(i, n) if preset[i, j] < 0]
    t = preset.copy()

    def rec(k):
        if k == len(cells):
            yield t.copy()
            return
        i, j = cells[k]
        for v in range(n):
            t[i, j] = t[j, i] = v
            if check(t):
                yield from rec(k + 1)
        t[i, j] = t[j, i] = -1

    yield from rec(0)


def _table_key(tables, perm) -> bytes:
    inv = np.argsort(perm)
    out = []
    for t in tables:
        out.append(perm[t[np.ix_(inv, inv)]].tobytes())
    return b"".join(out)


def enumerate_semiring_tables(n: int, max_size: int = 5) -> list[tuple[np.ndarray, np.ndarray]]:
    """Commutative semirings (plus, times) on 0..n-1 with zero 0, up to isomorphism."""
    if n > max_size:
        raise BoundTooLarge(f"semiring size {n} exceeds the guard {max_size}")
    return list(_semiring_tables(n))


@lru_cache(maxsize=None)
def _semiring_tables(n: int) -> tuple:
    base = np.full((n, n), -1, dtype=np.int64)
    base[0, :] = np.arange(n)
    base[:, 0] = np.arange(n)
    perms = _perms_fixing(n, (0,))
    found = []
    seen = set()
    for plus in _commutative_tables(n, base, _partial_assoc_ok):
        tbase = np.full((n, n), -1, dtype=np.int64)
        tbase[0, :] = 0
        tbase[:, 0] = 0

        def ok(t, plus=plus):
            return _partial_assoc_ok(t) and _partial_dist_ok(plus, t)

        for times in _commutative_tables(n, tbase, ok):
            key = min(_table_key((plus, times), p) for p in perms)
            if key in seen:
                continue
            seen.add(key)
            plus.flags.writeable = False
            times.flags.writeable = False
            found.append((plus, times))
    return tuple(found)


def enumerate_pseudorings(n: int, max_size: int = 5) -> Iterator[Algebra]:
    """Orthomodular pseudorings with n elements, from + tables over each lattice's meet."""
    from sasaki_lab.algebras import pseudoring_algebra

    if n > max_size:
        raise BoundTooLarge(f"pseudoring size {n} exceeds the guard {max_size}")
    laws = [parse_law(src, name) for name, src in PSEUDORING_AXIOMS]
    for lat in enumerate_lattices(n):
        times = lat.op("meet")
        zero, one = lat.constants["zero"], lat.constants.get("one", 0)
        free = [(i, j) for i in range(n) for j in range(i + 1, n) if i != zero and j != zero]
        grid = assignment_grid(n, len(free)).T
        plus = np.zeros((grid.shape[0], n, n), dtype=np.int64)
        plus[:, zero, :] = np.arange(n)
        plus[:, :, zero] = np.arange(n)
        plus[:, np.arange(n), np.arange(n)] = zero
        for k, (i, j) in enumerate(free):
            plus[:, i, j] = plus[:, j, i] = grid[:, k]
        ok = np.ones(grid.shape[0], dtype=bool)
        for law in laws:
            sel = np.flatnonzero(ok)
            if sel.size == 0:
                break
            it = Interpretation(
                n, {"plus": plus[sel], "times": times}, {"zero": zero, "one": one}, batch=sel.size, batched={"plus"}
            )
            holds, _ = check_law_batch(it, law)
            ok[sel[~holds]] = False
        for k in np.flatnonzero(ok):
            yield pseudoring_algebra(lat.elements, plus[k], times, lat.elements[zero], lat.elements[one], f"R{n}")


# --------------------------------------------------------------------------
# orthomodular lattices


def _height3_oml(p: int, rel: np.ndarray):
    """Candidate OML: p isolated complement pairs and k atoms with coatoms,
    atom i below coatom j' iff rel[i, j]."""
    k = rel.shape[0]
    names = ["0"]
    pair_names = []
    for t in range(p):
        pair_names += [f"p{t}", f"p{t}'"]
    atoms = _names(k)
    names += atoms + pair_names + [a + "'" for a in atoms] + ["1"]
    n = len(names)
    leq = np.eye(n, dtype=bool)
    leq[0, :] = True
    leq[:, n - 1] = True
    off_co = 1 + k + 2 * p
    for i in range(k):
        for j in range(k):
            if rel[i, j]:
                leq[1 + i, off_co + j] = True
    neg = np.arange(n)
    neg[0], neg[n - 1] = n - 1, 0
    for i in range(k):
        neg[1 + i], neg[off_co + i] = off_co + i, 1 + i
    for t in range(p):
        a, b = 1 + k + 2 * t, 2 + k + 2 * t
        neg[a], neg[b] = b, a
    return names, leq, neg


def _oml_key(leq: np.ndarray, neg: np.ndarray) -> bytes:
    n = leq.shape[0]
    if n > 8:
        return _oml_key_refined(leq, neg)
    perms = _perms(n)
    best = None
    for perm in perms:
        inv = np.argsort(perm)
        code = leq[np.ix_(inv, inv)].tobytes() + perm[neg[inv]].tobytes()
        if best is None or code < best:
            best = code
    return best


def _oml_key_refined(leq: np.ndarray, neg: np.ndarray) -> bytes:
    # keep 0 and 1 in place and permute only within each height level
    n = leq.shape[0]
    height = (leq & ~np.eye(n, dtype=bool)).sum(axis=0)
    levels = [np.flatnonzero(height == h) for h in sorted(set(height.tolist()))]
    best = None
    for choice in itertools.product(*(itertools.permutations(lv) for lv in levels)):
        order = np.concatenate([np.array(c, dtype=np.int64) for c in choice])
        perm = np.empty(n, dtype=np.int64)
        perm[order] = np.arange(n)
        inv = order
        code = leq[np.ix_(inv, inv)].tobytes() + perm[neg[inv]].tobytes()
        if best is None or code < best:
            best = code
    return best


@lru_cache(maxsize=None)
def _orthomodular_lattices(max_size: int) -> tuple:
    out = []
    seen = set()

    def consider(names, leq, neg, label):
        try:
            p = FinitePoset(names, leq)
            lat = lattice_from_poset(p, neg, label)
        except Exception:
            return
        if not is_orthomodular(lat):
            return
        key = (len(names), _oml_key(lat.order.leq, lat.op("neg")))
        if key in seen:
            return
        seen.add(key)
        out.append(lat)

    consider(["0"], np.ones((1, 1), dtype=bool), np.zeros(1, dtype=np.int64), "OML1")
    for size in range(2, max_size + 1, 2):
        # height <= 2: MO_p (p = 1 is the four-element Boolean algebra)
        p = (size - 2) // 2
        if p == 0:
            consider(["0", "1"], np.array([[True, True], [False, True]]), np.array([1, 0]), "OML2")
        else:
            names, leq, neg = _height3_oml(p, np.zeros((0, 0), dtype=bool))
            consider(names, leq, neg, f"MO{p}" if p > 1 else "B4")
        # height 3: k atoms/coatoms plus p isolated pairs
        for k in range(3, (size - 2) // 2 + 1):
            p = (size - 2 - 2 * k) // 2
            upper = [(i, j) for i in range(k) for j in range(i + 1, k)]
            for bits in itertools.product((0, 1), repeat=len(upper)):
                rel = np.zeros((k, k), dtype=bool)
                for (i, j), b in zip(upper, bits):
                    rel[i, j] = rel[j, i] = bool(b)
                if not rel.any(axis=1).all():
                    continue
                names, leq, neg = _height3_oml(p, rel)
                consider(names, leq, neg, f"OML{size}")
    out.sort(key=lambda a: a.size)
    return tuple(out)


def enumerate_orthomodular_lattices(max_size: int = 10) -> list[Algebra]:
    """Orthomodular lattices (with their orthocomplement) of at most ``max_size``
    elements, up to isomorphism.

    Up to 15 elements every orthomodular lattice has height at most 3 (a
    chain of length 4 lies in a Boolean block of 16 elements), so the
    candidates are: the 1- and 2-element lattices, MO_p, and lattices whose
    middle consists of k atoms, their k orthocomplements, and p isolated
    complement pairs, with the atom/coatom incidence given by a symmetric
    orthogonality relation.
    """
    if max_size > 15:
        raise BoundTooLarge("the height argument only covers up to 15 elements")
    return list(_orthomodular_lattices(max_size))


def brute_force_orthomodular_lattices(max_size: int = 8) -> list[Algebra]:
    """Independent enumeration: every lattice times every orthocomplementation."""
    out = []
    seen = set()
    for n in range(1, max_size + 1):
        for lat in enumerate_lattices(n):
            for neg in enumerate_unary_ops(lat, ("complementation", "involution", "antitone")):
                alg = lat.with_ops(neg=neg)
                if not is_orthomodular(alg):
                    continue
                key = (n, _oml_key(alg.order.leq, neg))
                if key not in seen:
                    seen.add(key)
                    out.append(alg)
    return out


def benzene_o6() -> Algebra:
    """The six-element orthocomplemented (not orthomodular) lattice O6."""
    p = FinitePoset(
        ["0", "a", "b", "b'", "a'", "1"],
        np.array(
            [
                [1, 1, 1, 1, 1, 1],
                [0, 1, 1, 0, 0, 1],
                [0, 0, 1, 0, 0, 1],
                [0, 0, 0, 1, 1, 1],
                [0, 0, 0, 0, 1, 1],
                [0, 0, 0, 0, 0, 1],
            ],
            dtype=bool,
        ),
    )
    return lattice_from_poset(p, np.array([5, 4, 3, 2, 1, 0]), "O6")


# --------------------------------------------------------------------------
# batched condition evaluation


@dataclass
class ModelBatch:
    """Models sharing a universe.  Tables in ``bops`` (and ``leq`` when
    ``leq_batched``) carry a leading axis of length ``count``."""

    kind: str
    elements: tuple
    ops: dict
    bops: dict
    constants: dict
    leq: np.ndarray
    leq_batched: bool
    count: int
    _interp: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    def take(self, idx: np.ndarray) -> "ModelBatch":
        return ModelBatch(
            self.kind,
            self.elements,
            self.ops,
            {k: v[idx] for k, v in self.bops.items()},
            self.constants,
            self.leq[idx] if self.leq_batched else self.leq,
            self.leq_batched,
            int(idx.size),
        )

    def _base(self) -> Interpretation:
        if "base" not in self._interp:
            ops = dict(self.ops)
            ops.update(self.bops)
            if self.kind == "lambda":
                ops["join"], ops["meet"] = ops["lsup"], ops["linf"]
            batched = set(self.bops)
            if self.kind == "lambda":
                batched |= {k for k, j in (("join", "lsup"), ("meet", "linf")) if j in self.bops}
            if self.kind == "pseudoring" and "neg" not in ops:
                ops["neg"] = ops["plus"][..., self.constants["one"], :]
                if "plus" in self.bops:
                    batched.add("neg")
            self._interp["base"] = Interpretation(
                self.size, ops, self.constants, self.leq, self.elements, self.count, batched, self.leq_batched
            )
        return self._interp["base"]

    def interpretation(self) -> Interpretation:
        """Interpretation including the batch's Sasaki pair as ``odot``/``imp``."""
        if "pair" not in self._interp:
            base = self._base()
            _, odot_src, imp_src = SCHEMES[SCHEME_FOR_KIND[self.kind]]
            n = self.size
            odot = _grid(base, odot_src).reshape(self.count, n, n)
            imp = _grid(base, imp_src).reshape(self.count, n, n)
            ops = dict(base.ops)
            ops["odot"], ops["imp"] = odot, imp
            self._interp["pair"] = Interpretation(
                n,
                ops,
                base.constants,
                base.leq,
                base.elements,
                self.count,
                base.batched | {"odot", "imp"},
                self.leq_batched,
            )
        return self._interp["pair"]

    def model(self, k: int, name: str = "") -> Algebra:
        """Materialise model ``k`` as a concrete Algebra."""
        ops = dict(self.ops)
        for key, v in self.bops.items():
            ops[key] = v[k]
        leq = self.leq[k] if self.leq_batched else self.leq
        order = FinitePoset(self.elements, leq)
        return Algebra(self.kind, self.elements, ops, self.constants, order, name)


def _grid(it: Interpretation, src: str) -> np.ndarray:
    from sasaki_lab.terms import evaluate_term_grid

    return np.asarray(evaluate_term_grid(it, parse_term(src), ("x", "y")))


LAW_SOURCES: dict[str, str] = {"A1": A1, "A2": A2}
for _battery in BATTERIES.values():
    LAW_SOURCES.update(_battery)
LAW_SOURCES.update(CONSEQUENCES)
LAW_SOURCES.update(LATTICE_LAWS)
LAW_SOURCES.update(
    {
        "lsup_monotone": "x <= y => x v z <= y v z",
        "linf_monotone": "x <= y => x ^ z <= y ^ z",
    }
)
for _name, _src in SEMIRING_AXIOMS:
    LAW_SOURCES.setdefault("semiring_" + _name, _src)

COMPOSITE = {
    "adjoint": ("A1", "A2"),
    "complemented": ("top_complement", "bottom_complement"),
    "orthomodular": ("top_complement", "bottom_complement", "antitone", "involution", "orthomodular_law"),
    "is_lattice": ("lsup_monotone", "linf_monotone"),
}
UNARY_FLAG_NAMES = ("antitone", "involution", "surjective")


def condition_cost(name: str) -> tuple:
    name = name.lstrip("!")
    if name in UNARY_FLAG_NAMES:
        return (0, 0)
    if name in COMPOSITE:
        return max(condition_cost(c) for c in COMPOSITE[name])
    src = LAW_SOURCES.get(name)
    if src is None:
        return (9, 0)
    law = parse_law(src)
    pair = int(any(op in src for op in (" o ", "->")))
    return (len(law.identifiers() - {"0", "1"}), pair)


def _neg_table(batch: ModelBatch) -> np.ndarray:
    it = batch._base()
    neg = it.table("neg")
    if "neg" not in it.batched:
        neg = np.broadcast_to(neg, (batch.count, batch.size))
    return neg


def batch_condition(batch: ModelBatch, name: str) -> np.ndarray:
    """Boolean vector: does each model of the batch satisfy condition ``name``?"""
    if name.startswith("!"):
        return ~batch_condition(batch, name[1:])
    if name in batch._cache:
        return batch._cache[name]
    n, b = batch.size, batch.count
    if name in COMPOSITE:
        out = np.ones(b, dtype=bool)
        for part in COMPOSITE[name]:
            out &= batch_condition(batch, part)
    elif name == "involution":
        neg = _neg_table(batch)
        out = (np.take_along_axis(neg, neg, axis=1) == np.arange(n)).all(axis=1)
    elif name == "surjective":
        neg = _neg_table(batch)
        out = (np.sort(neg, axis=1) == np.arange(n)).all(axis=1)
    elif name == "antitone":
        neg = _neg_table(batch)
        leq = batch.leq if batch.leq_batched else np.broadcast_to(batch.leq, (b, n, n))
        flat = leq.reshape(b, n * n)
        swapped = np.take_along_axis(flat, (neg[:, None, :] * n + neg[:, :, None]).reshape(b, n * n), axis=1)
        out = ~(flat & ~swapped).any(axis=1)
    elif name == "bounded":
        out = np.ones(b, dtype=bool)
    elif name in LAW_SOURCES:
        src = LAW_SOURCES[name]
        needs_pair = " o " in src or "->" in src
        it = batch.interpretation() if needs_pair else batch._base()
        out, _ = check_law_batch(it, parse_law(src, name))
        out = np.asarray(out)
    else:
        raise KeyError(f"condition {name!r} cannot be evaluated in a sweep")
    batch._cache[name] = out
    return out


def staged_filter(batch: ModelBatch, names: Sequence[str]) -> np.ndarray:
    """Indices of models satisfying every condition, cheapest conditions first."""
    idx = np.arange(batch.count)
    current = batch
    for name in sorted(names, key=condition_cost):
        if idx.size == 0:
            break
        keep = batch_condition(current, name)
        if not keep.all():
            idx = idx[keep]
            current = current.take(np.flatnonzero(keep))
    return idx


# --------------------------------------------------------------------------
# falsification registry


@dataclass(frozen=True)
class Conjecture:
    name: str
    kind: str
    hypotheses: tuple
    conclusions: tuple
    statement: str
    census: bool = False


def _c(name, kind, hyp, concl, statement, census=False):
    return Conjecture(name, kind, tuple(hyp), tuple(concl), statement, census)


REGISTRY: dict[str, Conjecture] = {
    c.name: c
    for c in (
        _c("th4_b1_a1", "lattice", ["B1"], ["A1"], "(B1) implies (A1) for the S1 pair"),
        _c("th4_b2_a2", "lattice", ["B2"], ["A2"], "(B2) implies (A2) for the S1 pair"),
        _c("prop7_i", "lattice", ["modular", "top_complement"], ["B1"], "modular with x v x' = 1 satisfies (B1)"),
        _c("prop7_ii", "lattice", ["modular", "bottom_complement"], ["B2"], "modular with x ^ x' = 0 satisfies (B2)"),
        _c("prop7_iii", "lattice", ["modular", "complemented"], ["A1", "A2"], "modular complemented lattices are adjoint"),
        _c("prop8_i", "lattice", ["weakly_orthomodular", "involution"], ["B1", "A1"], "weakly orthomodular with involution satisfies (B1)"),
        _c("prop8_ii", "lattice", ["dually_weakly_orthomodular"], ["B2", "A2"], "dually weakly orthomodular satisfies (B2), hence (A2)"),
        _c("prop8_iii", "lattice", ["orthomodular"], ["A1", "A2"], "orthomodular lattices are adjoint"),
        _c("lemma_necessity_top", "lattice", ["A1"], ["top_complement"], "(A1) forces x v x' = 1"),
        _c("lemma_necessity_bottom", "lattice", ["A2"], ["bottom_complement"], "(A2) forces x ^ x' = 0"),
        _c("selftest_inverted", "lattice", ["orthomodular"], ["!A1"], "deliberately false: orthomodular lattices violate (A1)"),
        _c("prop1_i", "lambda", ["D1", "F1"], ["A1"], "(D1) and (F1) imply (A1) for the S2 pair"),
        _c("prop1_ii", "lambda", ["D2", "F2"], ["A2"], "(D2) and (F2) imply (A2) for the S2 pair"),
        _c("th3_adj_e", "lambda", ["D1", "D2", "A1", "A2"], ["E1", "E2"], "under (D1),(D2): adjoint implies (E1),(E2)"),
        _c("th3_e_f", "lambda", ["D1", "D2", "E1", "E2"], ["F1", "F2"], "under (D1),(D2): (E1),(E2) imply (F1),(F2)"),
        _c("th3_f_adj", "lambda", ["D1", "D2", "F1", "F2"], ["A1", "A2"], "under (D1),(D2): (F1),(F2) imply adjointness"),
        _c("lemma2_top", "lambda", ["A1"], ["top_complement"], "(A1) forces x ⊔ x' = 1"),
        _c("lemma2_bottom", "lambda", ["A2"], ["bottom_complement"], "(A2) forces x ⊓ x' = 0"),
        _c("th5", "lambda", ["surjective", "C1", "C2", "A1", "A2"], ["is_lattice"], "surjective ', (C1), (C2) and adjointness force a lattice"),
        _c("open_c1c2", "lambda", ["C1", "C2", "A1", "A2"], ["is_lattice"], "census: non-lattice λ-lattices with (C1), (C2) and an adjoint pair", census=True),
        _c("th1_i", "semiring", ["c3", "c4"], ["A1"], "conditions (3) and (4) imply (A1) for the S3 pair"),
        _c("th1_ii", "semiring", ["c5", "c6"], ["A2"], "conditions (5) and (6) imply (A2) for the S3 pair"),
        _c("pseudoring_s4", "pseudoring", [], ["A1", "A2"], "the S4 pair of every orthomodular pseudoring is adjoint"),
    )
}


@dataclass
class Hit:
    description: str
    verdicts: dict

    def __iter__(self):
        return iter((self.description, self.verdicts))


@dataclass
class SearchResult:
    conjecture: str
    kind: str
    bound: int
    models_examined: int
    hits: list
    exhausted: bool
    hypothesis_count: int = 0

    def summary(self) -> str:
        state = "exhausted" if self.exhausted else "incomplete"
        return (
            f"{self.conjecture} ({self.kind}, bound {self.bound}): {self.models_examined} models, "
            f"{self.hypothesis_count} satisfy the hypotheses, {len(self.hits)} hits, {state}"
        )


def _unary_filter_set(names: Sequence[str]) -> set:
    filters = set()
    for name in names:
        if name == "surjective":
            filters.add("surjective")
        elif name in ("involution", "antitone"):
            filters.add(name)
        elif name == "complemented":
            filters.add("complementation")
        elif name == "orthomodular":
            filters |= {"complementation", "involution", "antitone"}
    return filters


def _chunks(rows: np.ndarray, n: int, nvars: int = 3):
    step = max(1, CELL_BUDGET // max(1, n**nvars))
    for s in range(0, rows.shape[0], step):
        yield rows[s : s + step]


def _lattice_batches(bound: int, filters: set):
    for size in range(1, bound + 1):
        for lat in enumerate_lattices(size):
            negs = _unary_candidates(lat, filters)
            for part in _chunks(negs, size):
                yield ModelBatch(
                    "lattice", lat.elements, dict(lat.ops), {"neg": part}, lat.constants, lat.order.leq, False, part.shape[0]
                )


def _lambda_batches(bound: int, filters: set):
    from sasaki_lab.algebras import lambda_algebra

    for size in range(1, bound + 1):
        for p in enumerate_bounded_posets(size):
            consts = {"zero": 0, "one": size - 1}
            for lsups, linfs in completion_batches(p):
                for k in range(lsups.shape[0]):
                    alg = lambda_algebra(p.elements, lsups[k], linfs[k])
                    negs = _unary_candidates(alg, filters)
                    for part in _chunks(negs, size):
                        yield ModelBatch(
                            "lambda",
                            p.elements,
                            {"lsup": lsups[k], "linf": linfs[k]},
                            {"neg": part},
                            consts,
                            p.leq,
                            False,
                            part.shape[0],
                        )


def _semiring_batches(bound: int):
    for size in range(1, bound + 1):
        names = ["0", *_names(size - 1)]
        posets = labeled_posets(size)
        for plus, times in _semiring_tables(size):
            allowed = [np.flatnonzero(times[x] == 0) for x in range(size)]
            negs = np.array(list(itertools.product(*allowed)), dtype=np.int64).reshape(-1, size)
            ni = np.repeat(np.arange(negs.shape[0]), posets.shape[0])
            pi = np.tile(np.arange(posets.shape[0]), negs.shape[0])
            step = max(1, CELL_BUDGET // max(1, size**3))
            for s in range(0, ni.size, step):
                sel_n, sel_p = ni[s : s + step], pi[s : s + step]
                yield ModelBatch(
                    "semiring",
                    tuple(names),
                    {"plus": plus, "times": times},
                    {"neg": negs[sel_n]},
                    {"zero": 0},
                    posets[sel_p],
                    True,
                    sel_n.size,
                )
    # the Boolean rings with their own negation and order, as an extra family
    for k in (1, 2, 3):
        ring = build_boolean_ring(k)
        yield ModelBatch(
            "semiring",
            ring.elements,
            {"plus": ring.op("plus"), "times": ring.op("times")},
            {"neg": ring.op("neg")[None, :]},
            ring.constants,
            ring.order.leq,
            False,
            1,
        )


def _pseudoring_batches(bound: int):
    def one(r: Algebra):
        return ModelBatch(
            "pseudoring", r.elements, {"times": r.op("times")}, {"plus": r.op("plus")[None]}, r.constants, r.order.leq, False, 1
        )

    for size in range(1, bound + 1):
        for r in enumerate_pseudorings(size):
            yield one(r)
    # pseudorings of the orthomodular lattices up to 10 elements, as an extra family
    for lat in enumerate_orthomodular_lattices(10):
        yield one(oml_to_pseudoring(lat))


def model_batches(kind: str, bound: int, hypotheses: Sequence[str] = ()):
    filters = _unary_filter_set(hypotheses)
    if kind == "lattice":
        return _lattice_batches(bound, filters)
    if kind == "lambda":
        return _lambda_batches(bound, filters)
    if kind == "semiring":
        return _semiring_batches(bound)
    if kind == "pseudoring":
        return _pseudoring_batches(bound)
    raise KindMismatch(f"no sweep for kind {kind}")


def _hit(batch: ModelBatch, k: int, conj: Conjecture, label: str) -> Hit:
    from sasaki_lab.fileformat import dumps
    from sasaki_lab.sasaki import evaluate_conditions

    alg = batch.model(k, label)
    names = [c.lstrip("!") for c in conj.hypotheses + conj.conclusions]
    verdicts = evaluate_conditions(alg, list(dict.fromkeys(names)))
    return Hit(dumps(alg), verdicts)


def falsify(
    conjecture: str,
    size_bound: int | None = None,
    kind: str | None = None,
    max_bound: int | None = None,
    max_hits: int | None = None,
    max_models: int | None = None,
) -> SearchResult:
    """Sweep all models of the conjecture's kind up to ``size_bound`` elements
    and return those satisfying the hypotheses but violating a conclusion."""
    if conjecture not in REGISTRY:
        raise UnknownConjecture(conjecture)
    conj = REGISTRY[conjecture]
    if kind is not None and kind != conj.kind:
        raise KindMismatch(f"{conjecture} is a {conj.kind} conjecture, not {kind}")
    bound = DEFAULT_BOUND[conj.kind] if size_bound is None else size_bound
    guard = MAX_BOUND[conj.kind] if max_bound is None else max_bound
    if bound > guard:
        raise BoundTooLarge(f"bound {bound} exceeds the {conj.kind} guard {guard}")
    examined = 0
    satisfied = 0
    hits: list[Hit] = []
    for batch in model_batches(conj.kind, bound, conj.hypotheses):
        if max_models is not None and examined + batch.count > max_models:
            return SearchResult(conjecture, conj.kind, bound, examined, hits, False, satisfied)
        examined += batch.count
        idx = staged_filter(batch, conj.hypotheses)
        satisfied += idx.size
        if idx.size == 0:
            continue
        sub = batch.take(idx)
        ok = np.ones(idx.size, dtype=bool)
        for name in conj.conclusions:
            ok &= batch_condition(sub, name)
        for k in np.flatnonzero(~ok):
            if max_hits is not None and len(hits) >= max_hits:
                return SearchResult(conjecture, conj.kind, bound, examined, hits, False, satisfied)
            hits.append(_hit(sub, int(k), conj, f"{conjecture}_hit{len(hits) + 1}"))
    return SearchResult(conjecture, conj.kind, bound, examined, hits, True, satisfied)


def completion_sweep(
    p: FinitePoset, neg, hypotheses: Sequence[str] = (), conclusions: Sequence[str] = (), label: str = "completion"
) -> SearchResult:
    """Evaluate conditions on every λ-completion of ``p`` with a fixed ′."""
    neg = np.asarray(neg, dtype=np.int64)
    bottom, top = bound_indices(p)
    consts = {k: v for k, v in (("zero", bottom), ("one", top)) if v is not None}
    conj = Conjecture(label, "lambda", tuple(hypotheses), tuple(conclusions), "completion sweep")
    examined = satisfied = 0
    hits = []
    for lsup, linf in completion_batches(p):
        batch = ModelBatch("lambda", p.elements, {"neg": neg}, {"lsup": lsup, "linf": linf}, consts, p.leq, False, lsup.shape[0])
        examined += batch.count
        idx = staged_filter(batch, hypotheses)
        satisfied += idx.size
        if idx.size == 0:
            continue
        sub = batch.take(idx)
        ok = np.ones(idx.size, dtype=bool)
        for name in conclusions:
            ok &= batch_condition(sub, name)
        for k in np.flatnonzero(~ok):
            hits.append(_hit(sub, int(k), conj, f"{label}_hit{len(hits) + 1}"))
    return SearchResult(label, "lambda", len(p), examined, hits, True, satisfied)
