"""Shared helpers and independent oracles for the test suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sasaki_lab.terms import Const, Unary, Var, parse_law

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# --------------------------------------------------------------------------
# oracles written without the package's vectorised engine


def closure_by_dfs(n: int, edges) -> np.ndarray:
    adj = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
    out = np.zeros((n, n), dtype=bool)
    for s in range(n):
        stack, seen = [s], {s}
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        for v in seen:
            out[s, v] = True
    return out


def lub_by_scan(leq, a, b):
    n = len(leq)
    ups = [x for x in range(n) if leq[a][x] and leq[b][x]]
    least = [u for u in ups if all(leq[u][v] for v in ups)]
    return least[0] if least else None


def glb_by_scan(leq, a, b):
    n = len(leq)
    downs = [x for x in range(n) if leq[x][a] and leq[x][b]]
    great = [d for d in downs if all(leq[v][d] for v in downs)]
    return great[0] if great else None


def naive_eval(t, tables: dict, consts: dict, env: dict, names: dict):
    """Plain recursive evaluation against python-level tables."""
    if isinstance(t, Var):
        return env[t.name] if t.name in env else names[t.name]
    if isinstance(t, Const):
        return consts["zero" if t.value == 0 else "one"]
    if isinstance(t, Unary):
        return int(tables["neg"][naive_eval(t.child, tables, consts, env, names)])
    left = naive_eval(t.left, tables, consts, env, names)
    right = naive_eval(t.right, tables, consts, env, names)
    return int(tables[t.op][left][right])


def naive_check(alg, src: str):
    """Return (holds, least witness as names) by looping over itertools.product."""
    law = parse_law(src)
    it = alg.interpretation()
    tables = {k: np.asarray(v).tolist() for k, v in it.ops.items()}
    names = {e: i for i, e in enumerate(alg.elements)}
    variables = sorted(v for v in law.identifiers() if v not in names)
    leq = None if alg.order is None else alg.order.leq.tolist()

    def holds(rel, env):
        a = naive_eval(rel.left, tables, alg.constants, env, names)
        b = naive_eval(rel.right, tables, alg.constants, env, names)
        return a == b if rel.kind == "identity" else leq[a][b]

    for values in itertools.product(range(alg.size), repeat=len(variables)):
        env = dict(zip(variables, values))
        if all(holds(p, env) for p in law.premises) and not holds(law.conclusion, env):
            return False, {v: alg.elements[x] for v, x in env.items()}
    return True, None


def fails_at(alg, src: str, witness: dict) -> bool:
    """Point evaluation: premises hold and the conclusion fails at ``witness``."""
    law = parse_law(src)
    it = alg.interpretation()
    tables = {k: np.asarray(v).tolist() for k, v in it.ops.items()}
    names = {e: i for i, e in enumerate(alg.elements)}
    env = {v: names[e] for v, e in witness.items()}
    leq = None if alg.order is None else alg.order.leq.tolist()

    def holds(rel):
        a = naive_eval(rel.left, tables, alg.constants, env, names)
        b = naive_eval(rel.right, tables, alg.constants, env, names)
        return a == b if rel.kind == "identity" else leq[a][b]

    return all(holds(p) for p in law.premises) and not holds(law.conclusion)


def permute_algebra(alg, perm):
    """Relabel positions: old position i moves to perm[i]; names travel along."""
    from sasaki_lab.algebras import Algebra
    from sasaki_lab.core import FinitePoset

    perm = np.asarray(perm)
    inv = np.argsort(perm)
    elements = [alg.elements[i] for i in inv]
    ops = {}
    for k, t in alg.ops.items():
        ops[k] = perm[t[inv]] if t.ndim == 1 else perm[t[np.ix_(inv, inv)]]
    consts = {k: int(perm[v]) for k, v in alg.constants.items()}
    order = None if alg.order is None else FinitePoset(elements, alg.order.leq[np.ix_(inv, inv)])
    return Algebra(alg.kind, elements, ops, consts, order, alg.name)


@pytest.fixture(scope="session")
def fig(request):
    from sasaki_lab.fixtures import fixture

    cache = {}

    def get(fid):
        if fid not in cache:
            cache[fid] = fixture(fid)
        return cache[fid]

    return get

