import itertools

import numpy as np
import pytest

from sasaki_lab.algebras import (
    build_boolean_ring,
    check_pseudoring,
    is_lattice_lambda,
    lattice_from_poset,
    lattice_flags,
)
from sasaki_lab.core import FinitePoset, poset_from_covers
from sasaki_lab.errors import BoundTooLarge, KindMismatch, NoBounds, UnknownConjecture
from sasaki_lab.sasaki import evaluate_conditions
from sasaki_lab.search import (
    REGISTRY,
    ModelBatch,
    batch_condition,
    brute_force_orthomodular_lattices,
    canonical_key,
    completion_spec,
    count_lambda_completions,
    enumerate_bounded_posets,
    enumerate_lambda_completions,
    enumerate_lattices,
    enumerate_orthomodular_lattices,
    enumerate_posets,
    enumerate_pseudorings,
    enumerate_semiring_tables,
    enumerate_unary_ops,
    falsify,
    labeled_posets,
    model_batches,
    staged_filter,
)

N5 = poset_from_covers(["0", "a", "b", "c", "1"], [("0", "a"), ("0", "b"), ("a", "c"), ("b", "1"), ("c", "1")])


# -- structure enumeration -------------------------------------------------------


def test_poset_counts():
    # unlabeled posets, OEIS A000112
    assert [sum(1 for _ in enumerate_posets(n)) for n in range(1, 7)] == [1, 2, 5, 16, 63, 318]


def test_lattice_counts():
    # unlabeled lattices, OEIS A006966
    assert [sum(1 for _ in enumerate_lattices(n)) for n in range(1, 8)] == [1, 1, 1, 2, 5, 15, 53]


def test_labeled_poset_counts():
    # labeled posets, OEIS A001035
    assert [labeled_posets(n).shape[0] for n in range(1, 5)] == [1, 3, 19, 219]


def test_canonical_key_is_isomorphism_invariant():
    for p in enumerate_posets(5):
        for perm in itertools.permutations(range(5)):
            perm = np.array(perm)
            assert canonical_key(p.leq[np.ix_(perm, perm)]) == canonical_key(p.leq)
            break


def test_bounded_posets_are_bounded():
    for p in enumerate_bounded_posets(5):
        assert p.leq[0].all() and p.leq[:, -1].all()


# -- unary operations -----------------------------------------------------------------


def brute_unary(alg, filters):
    leq = alg.order.leq
    n = alg.size
    join, meet = alg.interpretation().table("join"), alg.interpretation().table("meet")
    out = []
    for u in itertools.product(range(n), repeat=n):
        if "complementation" in filters and not all(join[x][u[x]] == n - 1 and meet[x][u[x]] == 0 for x in range(n)):
            continue
        if "involution" in filters and any(u[u[x]] != x for x in range(n)):
            continue
        if "antitone" in filters and any(leq[x][y] and not leq[u[y]][u[x]] for x in range(n) for y in range(n)):
            continue
        if "surjective" in filters and len(set(u)) != n:
            continue
        out.append(list(u))
    return out


def test_two_chain_complementation():
    lat = lattice_from_poset(poset_from_covers(["0", "1"], [("0", "1")]))
    assert [u.tolist() for u in enumerate_unary_ops(lat, ["complementation"])] == [[1, 0]]


def test_n5_complementations():
    tables = [u.tolist() for u in enumerate_unary_ops(lattice_from_poset(N5), ["complementation"])]
    # a' = c' = b, b' in {a, c}
    assert tables == [[4, 2, 1, 2, 0], [4, 2, 3, 2, 0]]


FILTER_SETS = [(), ("complementation",), ("involution",), ("antitone",), ("surjective",),
               ("complementation", "involution"), ("antitone", "involution"),
               ("complementation", "antitone", "involution")]


@pytest.mark.parametrize("filters", FILTER_SETS)
def test_unary_ops_match_brute_force(filters):
    lat = lattice_from_poset(N5)
    got = [u.tolist() for u in enumerate_unary_ops(lat, filters)]
    assert got == brute_unary(lat, set(filters))


@pytest.mark.parametrize("filters", FILTER_SETS[1:])
def test_unary_ops_match_brute_force_mo2(fig, filters):
    lat = fig("mo2")
    got = [u.tolist() for u in enumerate_unary_ops(lat, filters)]
    assert got == brute_unary(lat, set(filters))


def test_fig1_complementations(fig):
    alg = fig("fig1")
    leq, n = alg.order.leq, alg.size
    join, meet = alg.op("join"), alg.op("meet")
    allowed = [[y for y in range(n) if join[x, y] == n - 1 and meet[x, y] == 0] for x in range(n)]
    comps = list(enumerate_unary_ops(alg, ["complementation"]))
    assert len(comps) == int(np.prod([len(a) for a in allowed]))
    assert any((u == alg.op("neg")).all() for u in comps)
    invs = [u for u in comps if (u[u] == np.arange(n)).all()]
    assert [u.tolist() for u in enumerate_unary_ops(alg, ["complementation", "involution"])] == [u.tolist() for u in invs]
    assert not any((u == alg.op("neg")).all() for u in invs)
    assert len(invs) == 9


def test_unknown_filter():
    with pytest.raises(ValueError):
        list(enumerate_unary_ops(lattice_from_poset(N5), ["pretty"]))


# -- λ-completions --------------------------------------------------------------------------


def naive_lambda_ok(n, sup, inf):
    r = range(n)
    for x, y in itertools.product(r, r):
        if sup[x][y] != sup[y][x] or inf[x][y] != inf[y][x]:
            return False
        if sup[x][inf[x][y]] != x or inf[x][sup[x][y]] != x:
            return False
        for z in r:
            if sup[x][sup[sup[x][y]][z]] != sup[sup[x][y]][z]:
                return False
            if inf[x][inf[inf[x][y]][z]] != inf[inf[x][y]][z]:
                return False
    return True


def brute_completions(p):
    n = len(p)
    leq = p.leq
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if not leq[i, j] and not leq[j, i]]
    ups = [[x for x in range(n) if leq[i, x] and leq[j, x]] for i, j in pairs]
    downs = [[x for x in range(n) if leq[x, i] and leq[x, j]] for i, j in pairs]
    out = []
    for choice in itertools.product(*ups, *downs):
        sup = [[j if leq[i, j] else i if leq[j, i] else None for j in range(n)] for i in range(n)]
        inf = [[i if leq[i, j] else j if leq[j, i] else None for j in range(n)] for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            sup[i][j] = sup[j][i] = choice[k]
            inf[i][j] = inf[j][i] = choice[len(pairs) + k]
        induced = all((sup[i][j] == j) == bool(leq[i, j]) for i in range(n) for j in range(n))
        if induced and naive_lambda_ok(n, sup, inf):
            out.append((sup, inf))
    return out


@pytest.mark.parametrize("fid", ["fig3", "fig7_ex2"])
def test_completions_match_brute_force(fig, fid):
    p = fig(fid).order
    got = [(a.op("lsup").tolist(), a.op("linf").tolist()) for a in enumerate_lambda_completions(p)]
    assert got == brute_completions(p)


def test_completions_of_small_bounded_posets_match_brute_force():
    for n in range(1, 6):
        for p in enumerate_bounded_posets(n):
            assert count_lambda_completions(p) == len(brute_completions(p))


def test_lattice_poset_has_one_lattice_completion():
    # joins of incomparable pairs range over the whole upper cone, so a lattice
    # order may carry further, non-monotone λ-structures; exactly one completion
    # is a lattice, and it is the lattice itself
    extra = 0
    for n in range(1, 7):
        for lat in enumerate_lattices(n):
            comps = list(enumerate_lambda_completions(lat.order))
            lattices = [c for c in comps if is_lattice_lambda(c).holds]
            assert len(lattices) == 1
            assert (lattices[0].op("lsup") == lat.op("join")).all()
            assert (lattices[0].op("linf") == lat.op("meet")).all()
            extra += len(comps) - 1
    assert extra > 0


def test_two_completions_of_a_lattice_order():
    p = poset_from_covers(["0", "a", "b", "c", "1"], [("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("c", "1")])
    comps = list(enumerate_lambda_completions(p))
    sups = [c.elements[c.op("lsup")[1, 2]] for c in comps]
    assert sups == ["c", "1"]
    assert [is_lattice_lambda(c).holds for c in comps] == [True, False]
    assert all(c.order == p for c in comps)


def test_fig3_printed_completion_is_found(fig):
    alg = fig("fig3")
    comps = list(enumerate_lambda_completions(alg.order))
    assert any((c.op("lsup") == alg.op("lsup")).all() and (c.op("linf") == alg.op("linf")).all() for c in comps)
    ix = alg.index
    assert any(c.op("lsup")[ix("a"), ix("b")] == ix("d") and c.op("linf")[ix("c"), ix("d")] == ix("b") for c in comps)


def test_completions_are_sound_and_deterministic(fig):
    p = fig("fig4").order
    first = [c.op("lsup").tobytes() + c.op("linf").tobytes() for c in enumerate_lambda_completions(p, cap=200)]
    second = [c.op("lsup").tobytes() + c.op("linf").tobytes() for c in enumerate_lambda_completions(p, cap=200)]
    assert first == second and len(first) == 200
    for c in enumerate_lambda_completions(p, cap=20):
        assert c.order == p


def test_cap_reports_not_exhausted(fig):
    stream = enumerate_lambda_completions(fig("fig3").order, cap=2)
    assert len(list(stream)) == 2 and not stream.exhausted
    stream = enumerate_lambda_completions(fig("fig3").order)
    assert len(list(stream)) == 9 and stream.exhausted


def test_fig4_completion_count(fig):
    p = fig("fig4").order
    assert completion_spec(p).count == 20736
    assert count_lambda_completions(p) == 20736


def test_empty_cone():
    with pytest.raises(NoBounds):
        completion_spec(poset_from_covers(["x", "y"], []))


# -- semirings and pseudorings ------------------------------------------------------------------


def brute_semiring_count(n):
    """Commutative semirings on 0..n-1 with 0 as additive zero, up to isomorphism fixing 0."""
    cells = [(i, j) for i in range(1, n) for j in range(i, n)]
    found = set()

    def tables(values, zero_row):
        t = [[0] * n for _ in range(n)]
        for i in range(n):
            t[0][i] = t[i][0] = zero_row(i)
        for (i, j), v in zip(cells, values):
            t[i][j] = t[j][i] = v
        return t

    r = range(n)
    for pv in itertools.product(r, repeat=len(cells)):
        plus = tables(pv, lambda i: i)
        if any(plus[plus[x][y]][z] != plus[x][plus[y][z]] for x in r for y in r for z in r):
            continue
        for tv in itertools.product(r, repeat=len(cells)):
            times = tables(tv, lambda i: 0)
            if any(times[times[x][y]][z] != times[x][times[y][z]] for x in r for y in r for z in r):
                continue
            if any(times[x][plus[y][z]] != plus[times[x][y]][times[x][z]] for x in r for y in r for z in r):
                continue
            best = None
            for q in itertools.permutations(range(1, n)):
                perm = [0, *q]
                inv = [perm.index(i) for i in r]
                enc = tuple(perm[plus[inv[a]][inv[b]]] for a in r for b in r) + tuple(
                    perm[times[inv[a]][inv[b]]] for a in r for b in r
                )
                best = enc if best is None or enc < best else best
            found.add(best)
    return len(found)


def test_semiring_counts_match_brute_force():
    for n in (1, 2, 3):
        assert len(enumerate_semiring_tables(n)) == brute_semiring_count(n)
    assert len(enumerate_semiring_tables(4)) == 169


def test_semiring_tables_satisfy_axioms():
    for n in range(1, 5):
        for plus, times in enumerate_semiring_tables(n):
            assert (plus == plus.T).all() and (times == times.T).all()
            assert (plus[0] == np.arange(n)).all() and (times[0] == 0).all()
            x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
            assert (plus[plus[x, y], z] == plus[x, plus[y, z]]).all()
            assert (times[times[x, y], z] == times[x, times[y, z]]).all()
            assert (times[x, plus[y, z]] == plus[times[x, y], times[x, z]]).all()


def test_pseudorings_correspond_to_omls():
    by_size = {}
    for lat in enumerate_orthomodular_lattices(10):
        by_size[lat.size] = by_size.get(lat.size, 0) + 1
    for n in range(1, 6):
        rings = list(enumerate_pseudorings(n))
        assert len(rings) == by_size.get(n, 0)
        for r in rings:
            assert check_pseudoring(r).holds


def test_oml_enumeration_matches_brute_force():
    fast = sorted((lat.size, lat.name) for lat in enumerate_orthomodular_lattices(8))
    slow = brute_force_orthomodular_lattices(8)
    assert len(fast) == len(slow)
    assert sorted(lat.size for lat in slow) == [s for s, _ in fast]


def test_oml_enumeration_contents():
    lats = enumerate_orthomodular_lattices(10)
    assert sorted(lat.size for lat in lats) == [1, 2, 4, 6, 8, 8, 10, 10]
    for lat in lats:
        assert lattice_flags(lat, ["orthomodular"])["orthomodular"].holds


# -- batch evaluation agrees with the single-model path ---------------------------------------------

BATCH_NAMES = ["A1", "A2", "B1", "B2", "modular", "complemented", "orthomodular", "involution", "antitone",
               "surjective", "weakly_orthomodular"]


def test_lattice_batches_agree_with_single_models():
    seen = 0
    for batch in model_batches("lattice", 5):
        for name in BATCH_NAMES:
            vec = batch_condition(batch, name)
            for k in range(0, batch.count, max(1, batch.count // 40)):
                alg = batch.model(k)
                assert vec[k] == evaluate_conditions(alg, [name])[name].holds, (name, k)
                seen += 1
    assert seen > 1000


def test_lambda_batches_agree_with_single_models():
    names = ["A1", "A2", "C1", "C2", "D1", "D2", "E1", "E2", "F1", "F2", "is_lattice", "surjective"]
    checked = 0
    for batch in model_batches("lambda", 5):
        for name in names:
            vec = batch_condition(batch, name)
            for k in range(0, batch.count, max(1, batch.count // 10)):
                assert vec[k] == evaluate_conditions(batch.model(k), [name])[name].holds, name
                checked += 1
    assert checked > 500


def test_semiring_batches_agree_with_single_models():
    names = ["A1", "A2", "c3", "c4", "c5", "c6"]
    for batch in itertools.islice(model_batches("semiring", 3), 40):
        for name in names:
            vec = batch_condition(batch, name)
            for k in range(0, batch.count, max(1, batch.count // 5)):
                assert vec[k] == evaluate_conditions(batch.model(k), [name])[name].holds, name


def test_staged_filter_matches_conjunction():
    for batch in itertools.islice(model_batches("lattice", 5), 10):
        names = ["modular", "complemented", "B1"]
        idx = staged_filter(batch, names)
        expected = np.flatnonzero(np.logical_and.reduce([batch_condition(batch, n) for n in names]))
        assert idx.tolist() == expected.tolist()


# -- falsification ---------------------------------------------------------------------------------


def test_registry_contents():
    for name in ["th4_b1_a1", "th4_b2_a2", "prop7_i", "prop7_ii", "prop7_iii", "prop8_i", "prop8_ii", "prop8_iii",
                 "prop1_i", "prop1_ii", "th3_adj_e", "th3_e_f", "th3_f_adj", "th1_i", "th1_ii",
                 "lemma_necessity_top", "lemma_necessity_bottom", "lemma2_top", "lemma2_bottom", "th5",
                 "open_c1c2", "pseudoring_s4"]:
        assert name in REGISTRY


def test_th5_small_bound():
    res = falsify("th5", 5)
    assert res.hits == [] and res.exhausted
    assert res.models_examined > 0 and res.hypothesis_count > 0


def test_th4_small_bound():
    res = falsify("th4_b1_a1", 5)
    assert res.hits == [] and res.exhausted


def test_selftest_finds_models():
    res = falsify("selftest_inverted", 5)
    assert res.hits
    desc, verdicts = res.hits[0]
    assert verdicts["orthomodular"].holds and verdicts["A1"].holds
    assert "kind lattice" in desc


def test_hits_replay_from_description():
    from sasaki_lab.fileformat import loads

    res = falsify("selftest_inverted", 4)
    for hit in res.hits:
        alg = loads(hit.description).algebra
        again = evaluate_conditions(alg, ["orthomodular", "A1"])
        assert again["orthomodular"].holds and again["A1"].holds


def test_monotone_coverage():
    small = falsify("selftest_inverted", 4)
    large = falsify("selftest_inverted", 6)
    assert len(large.hits) >= len(small.hits)
    assert [h.description for h in large.hits[: len(small.hits)]] == [h.description for h in small.hits]


def test_max_hits_marks_incomplete():
    res = falsify("selftest_inverted", 6, max_hits=2)
    assert len(res.hits) == 2 and not res.exhausted


def test_max_models_marks_incomplete():
    res = falsify("th4_b1_a1", 6, max_models=10)
    assert not res.exhausted and res.models_examined <= 10


def test_falsify_errors():
    with pytest.raises(UnknownConjecture):
        falsify("no_such_theorem")
    with pytest.raises(BoundTooLarge):
        falsify("th5", 9)
    with pytest.raises(BoundTooLarge):
        falsify("th1_i", 6)
    with pytest.raises(BoundTooLarge):
        falsify("th4_b1_a1", 7, max_bound=6)
    with pytest.raises(KindMismatch):
        falsify("th5", 3, kind="lattice")


def test_th1_on_boolean_rings_and_small_semirings():
    for name in ("th1_i", "th1_ii"):
        res = falsify(name, 3)
        assert res.hits == [] and res.exhausted


def test_pseudoring_sweep():
    res = falsify("pseudoring_s4")
    assert res.hits == [] and res.exhausted
    assert res.models_examined >= 8


def test_summary_line():
    res = falsify("th5", 4)
    assert res.summary().startswith("th5 (lambda, bound 4): ")
    assert res.summary().endswith("0 hits, exhausted")


def test_boolean_rings_are_in_the_sweep():
    ring = build_boolean_ring(3)
    batches = list(model_batches("semiring", 1))
    assert any(b.size == 8 and (b.ops["plus"] == ring.op("plus")).all() for b in batches)
