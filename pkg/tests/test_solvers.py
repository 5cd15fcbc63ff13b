import math

import numpy as np
import pytest

from conftest import (
    oracle_best_subsets,
    oracle_independent_sets,
    random_rational_points,
)
from spdiversity.exceptions import BudgetExceededError, SingularMatrixError
from spdiversity.geometry import PointSet, scale, unit_disk_graph
from spdiversity.solvers import (
    max_independent_set,
    sp_select_exact,
    sp_select_greedy,
)

TRIANGLE = PointSet([("0", "0"), ("1", "0"), ("0", "3/4")])
IMAGE = scale(TRIANGLE, 3)
SQUARE = PointSet(
    [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], backend="floating"
)


def test_exact_worked_triangle():
    res = sp_select_exact(IMAGE, 2, 1.0)
    assert res.best.indices == (1, 2)
    assert res.best.value == pytest.approx(1.954045, abs=1e-6)
    assert res.all_optima == (res.best,)
    assert res.evaluated == 3


def test_exact_matches_enumeration_oracle():
    rng = np.random.default_rng(67)
    for _ in range(25):
        n = int(rng.integers(4, 9))
        k = int(rng.integers(2, min(n, 5)))
        pts = rng.uniform(0.0, 4.0, size=(n, 2))
        ps = PointSet([tuple(p) for p in pts], backend="floating")
        res = sp_select_exact(ps, k, 1.0)
        best, optima, values = oracle_best_subsets(ps, k, 1.0, res.tie_tol)
        assert res.best.value == pytest.approx(best, rel=1e-10)
        assert [s.indices for s in res.all_optima] == optima
        assert res.evaluated == len(values)
        for sel in res.all_optima:
            assert sel.value == pytest.approx(values[sel.indices], rel=1e-10)


def test_exact_full_set_is_single_candidate():
    res = sp_select_exact(IMAGE, 3, 1.0)
    assert res.best.indices == (0, 1, 2)
    assert res.evaluated == 1


def test_exact_square_diagonals_tie():
    res = sp_select_exact(SQUARE, 2, 1.0)
    assert res.best.indices == (0, 2)
    assert [s.indices for s in res.all_optima] == [(0, 2), (1, 3)]
    assert res.all_optima[0].value == pytest.approx(res.all_optima[1].value, rel=1e-15)


def test_exact_distant_square_ties_collapse():
    # side 40: every pairwise value differs by < 1e-17, far inside tie_tol
    big = PointSet([(0.0, 0.0), (40.0, 0.0), (40.0, 40.0), (0.0, 40.0)],
                   backend="floating")
    res = sp_select_exact(big, 2, 1.0)
    assert len(res.all_optima) == 6
    assert res.best.indices == (0, 1)


def test_exact_tie_tol_zero():
    res = sp_select_exact(SQUARE, 2, 1.0, tie_tol=0.0)
    assert [s.indices for s in res.all_optima] == [(0, 2), (1, 3)]
    with pytest.raises(ValueError, match="tie_tol"):
        sp_select_exact(SQUARE, 2, 1.0, tie_tol=-1e-9)


def test_exact_budget_guard():
    pts = PointSet([(float(i), 0.5 * i * i) for i in range(6)], backend="floating")
    with pytest.raises(BudgetExceededError) as info:
        sp_select_exact(pts, 3, 1.0, budget=10)
    assert info.value.required == math.comb(6, 3)
    assert info.value.budget == 10
    # the guard fires before any evaluation, so a big budget works fine
    res = sp_select_exact(pts, 3, 1.0, budget=20)
    assert res.evaluated == 20


def test_exact_worker_counts_agree():
    rng = np.random.default_rng(71)
    pts = rng.uniform(0.0, 5.0, size=(9, 2))
    ps = PointSet([tuple(p) for p in pts], backend="floating")
    base = sp_select_exact(ps, 4, 0.7, workers=1)
    for workers in (2, 3, 8, 200):
        res = sp_select_exact(ps, 4, 0.7, workers=workers)
        assert res.best == base.best
        assert res.all_optima == base.all_optima
        assert res.evaluated == base.evaluated


def test_exact_singular_subset_is_named():
    ps = PointSet([(0.0, 0.0), (1e-18, 0.0), (5.0, 5.0)], backend="floating")
    with pytest.raises(SingularMatrixError, match=r"\(0, 1\)"):
        sp_select_exact(ps, 2, 1.0)


def test_exact_validates_k():
    with pytest.raises(ValueError):
        sp_select_exact(IMAGE, 0, 1.0)
    with pytest.raises(ValueError):
        sp_select_exact(IMAGE, 4, 1.0)
    with pytest.raises(ValueError):
        sp_select_exact(IMAGE, True, 1.0)


def test_greedy_worked_triangle():
    sel = sp_select_greedy(IMAGE, 2, 1.0)
    assert sel.indices == (1, 2)
    assert sel.value == pytest.approx(1.954045, abs=1e-6)


def test_greedy_square_first_diagonal_wins():
    # point order puts (0, 3) before the other diagonal in the scan
    square = PointSet([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)],
                      backend="floating")
    sel = sp_select_greedy(square, 2, 1.0)
    assert sel.indices == (0, 3)


def test_greedy_never_beats_exact():
    rng = np.random.default_rng(73)
    for _ in range(20):
        n = int(rng.integers(4, 9))
        k = int(rng.integers(2, min(n, 5)))
        pts = rng.uniform(0.0, 4.0, size=(n, 2))
        ps = PointSet([tuple(p) for p in pts], backend="floating")
        greedy = sp_select_greedy(ps, k, 1.0)
        exact = sp_select_exact(ps, k, 1.0)
        assert greedy.value <= exact.best.value + 1e-12
        assert len(greedy.indices) == k


def test_greedy_needs_pairs():
    with pytest.raises(ValueError):
        sp_select_greedy(IMAGE, 1, 1.0)


def test_mis_worked_triangle():
    graph = unit_disk_graph(TRIANGLE)
    assert graph.edges == ((0, 1), (0, 2))
    res = max_independent_set(graph, 2)
    assert res.exists and res.witness == (1, 2)
    res3 = max_independent_set(graph, 3)
    assert not res3.exists and res3.witness is None


def test_mis_trivial_sizes():
    graph = unit_disk_graph(TRIANGLE)
    res0 = max_independent_set(graph, 0)
    assert res0.exists and res0.witness == ()
    res1 = max_independent_set(graph, 1)
    assert res1.exists and res1.witness == (0,)


def test_mis_edgeless_and_clique():
    spread = PointSet([(0.0, 0.0), (5.0, 0.0), (0.0, 5.0), (5.0, 5.0)],
                      backend="floating")
    g = unit_disk_graph(spread)
    assert g.edges == ()
    assert max_independent_set(g, 4).witness == (0, 1, 2, 3)

    tight = PointSet([(0.0, 0.0), (0.25, 0.0), (0.0, 0.25), (0.25, 0.25)],
                     backend="floating")
    g2 = unit_disk_graph(tight)
    assert len(g2.edges) == 6
    assert max_independent_set(g2, 1).witness == (0,)
    assert not max_independent_set(g2, 2).exists


def test_mis_matches_naive_enumeration():
    rng = np.random.default_rng(79)
    for _ in range(30):
        n = int(rng.integers(3, 10))
        ps = random_rational_points(rng, n, max_tries=20000)
        graph = unit_disk_graph(ps)
        for k in range(0, n + 1):
            expected = oracle_independent_sets(graph.edges, n, k)
            got = max_independent_set(graph, k)
            assert got.exists == bool(expected)
            if expected:
                assert got.witness == expected[0]
            else:
                assert got.witness is None


def test_mis_budget_and_validation():
    graph = unit_disk_graph(TRIANGLE)
    with pytest.raises(BudgetExceededError):
        max_independent_set(graph, 2, budget=2)
    with pytest.raises(ValueError):
        max_independent_set(graph, -1)
    with pytest.raises(ValueError):
        max_independent_set(graph, 4)
    with pytest.raises(ValueError):
        max_independent_set(graph, True)
