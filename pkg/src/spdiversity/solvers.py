"""Subset solvers: exact diversity maximization, independent sets, greedy.

The exact solver enumerates k-subsets in lexicographic order.  Work may be
partitioned across threads; every subset is evaluated by the same
arithmetic regardless of the partition and the merge re-ranks
deterministically, so results are identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, islice
from typing import Optional, Tuple

import numpy as np

from ._validation import check_subset_size, check_theta0
from .diversity import _solve_weighting
from .exceptions import BudgetExceededError, SingularMatrixError
from .geometry import PointSet, UnitDiskGraph, distance_matrix

DEFAULT_BUDGET = 10_000_000
DEFAULT_TIE_TOL = 1e-9


@dataclass(frozen=True)
class Selection:
    """A subset of point indices together with its diversity value."""

    indices: Tuple[int, ...]
    value: float


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of an exhaustive diversity maximization.

    ``all_optima`` holds every evaluated subset whose value is within
    ``tie_tol`` of the maximum, sorted lexicographically; ``best`` is the
    lexicographically smallest of them.  ``evaluated`` counts evaluated
    subsets.
    """

    best: Selection
    all_optima: Tuple[Selection, ...]
    evaluated: int
    tie_tol: float


def _evaluate_subset(dmat: np.ndarray, theta0: float, idx: Tuple[int, ...]) -> float:
    sub = dmat[np.ix_(idx, idx)]
    with np.errstate(under="ignore"):
        values = np.exp(-theta0 * sub)
    try:
        return _solve_weighting(values).sp_value
    except SingularMatrixError as exc:
        raise SingularMatrixError(
            f"subset {idx}: {exc}", condition=exc.condition
        ) from None


def _scan_chunk(dmat, theta0, n, k, tie_tol, offset, stride):
    best_v = -math.inf
    keep = []
    count = 0
    for idx in islice(combinations(range(n), k), offset, None, stride):
        v = _evaluate_subset(dmat, theta0, idx)
        count += 1
        if v > best_v:
            best_v = v
            keep = [(vv, ii) for vv, ii in keep if vv >= best_v - tie_tol]
        if v >= best_v - tie_tol:
            keep.append((v, idx))
    return best_v, keep, count


def sp_select_exact(
    ps: PointSet,
    k: int,
    theta0,
    tie_tol: float = DEFAULT_TIE_TOL,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> SelectionResult:
    """Maximize diversity over all k-subsets by exhaustive enumeration.

    Parameters
    ----------
    ps : PointSet
    k : int
        Subset size, 1 <= k <= len(ps).
    theta0 : float
        Kernel decay rate.
    tie_tol : float
        Absolute window below the maximum that still counts as optimal.
    budget : int
        Refuse to enumerate more than this many subsets.
    workers : int
        Worker threads; any value produces identical output.

    Raises
    ------
    BudgetExceededError
        If C(len(ps), k) exceeds the budget (raised before enumerating).
    SingularMatrixError
        If some subset matrix cannot be solved (the subset is named).
    """
    theta0 = check_theta0(theta0)
    n = len(ps)
    k = check_subset_size(k, n)
    if not (isinstance(tie_tol, (int, float)) and tie_tol >= 0.0):
        raise ValueError(f"tie_tol must be a nonnegative real, got {tie_tol!r}")
    tie_tol = float(tie_tol)
    total = math.comb(n, k)
    if total > budget:
        raise BudgetExceededError(total, budget)
    dmat = distance_matrix(ps)

    workers = max(1, int(workers))
    stride = min(workers, total)
    if stride <= 1:
        parts = [_scan_chunk(dmat, theta0, n, k, tie_tol, 0, 1)]
    else:
        with ThreadPoolExecutor(max_workers=stride) as pool:
            futures = [
                pool.submit(_scan_chunk, dmat, theta0, n, k, tie_tol, off, stride)
                for off in range(stride)
            ]
            parts = [f.result() for f in futures]

    best_v = max(p[0] for p in parts)
    merged = [
        Selection(indices=ii, value=vv)
        for p in parts
        for vv, ii in p[1]
        if vv >= best_v - tie_tol
    ]
    merged.sort(key=lambda s: s.indices)
    evaluated = sum(p[2] for p in parts)
    return SelectionResult(
        best=merged[0],
        all_optima=tuple(merged),
        evaluated=evaluated,
        tie_tol=tie_tol,
    )


def sp_select_greedy(ps: PointSet, k: int, theta0) -> Selection:
    """Greedy diversity maximization.

    Starts from the farthest pair (ties: lexicographically smallest pair)
    and repeatedly adds the point that maximizes the diversity of the
    grown subset (ties: smallest index).  Runs in polynomial time; the
    value never exceeds the exact optimum.
    """
    theta0 = check_theta0(theta0)
    n = len(ps)
    k = check_subset_size(k, n, minimum=2)
    dmat = distance_matrix(ps)

    besti, bestj, bestd = 0, 1, -math.inf
    for i in range(n):
        for j in range(i + 1, n):
            if dmat[i, j] > bestd:
                besti, bestj, bestd = i, j, dmat[i, j]
    chosen = [besti, bestj]

    while len(chosen) < k:
        pick, pick_v = None, -math.inf
        for cand in range(n):
            if cand in chosen:
                continue
            idx = tuple(sorted(chosen + [cand]))
            v = _evaluate_subset(dmat, theta0, idx)
            if v > pick_v:
                pick, pick_v = cand, v
        chosen.append(pick)

    idx = tuple(sorted(chosen))
    return Selection(indices=idx, value=_evaluate_subset(dmat, theta0, idx))


@dataclass(frozen=True)
class IndependentSetResult:
    """Decision for 'is there an independent set of size exactly k'."""

    exists: bool
    witness: Optional[Tuple[int, ...]]


def _decide_independent(adj, avail, need) -> bool:
    # Branch on the highest-degree available vertex: either it is out,
    # or it is in and its neighbourhood is out.
    if need == 0:
        return True
    if len(avail) < need:
        return False
    v = max(avail, key=lambda u: (len(adj[u] & avail), -u))
    rest = avail - {v}
    if _decide_independent(adj, rest - adj[v], need - 1):
        return True
    return _decide_independent(adj, rest, need)


def _lex_witness(adj, n, k):
    chosen = []
    banned = [set()]

    def rec(start):
        if len(chosen) == k:
            return True
        need = k - len(chosen)
        for i in range(start, n):
            if n - i < need:
                return False
            if i in banned[-1]:
                continue
            chosen.append(i)
            banned.append(banned[-1] | adj[i])
            if rec(i + 1):
                return True
            banned.pop()
            chosen.pop()
        return False

    return tuple(chosen) if rec(0) else None


def max_independent_set(
    graph: UnitDiskGraph, k: int, budget: int = DEFAULT_BUDGET
) -> IndependentSetResult:
    """Decide whether the graph has an independent set of size exactly k.

    Returns the lexicographically smallest witness when one exists.
    k = 0 is trivially satisfied by the empty set.

    Raises
    ------
    BudgetExceededError
        If C(n, k) exceeds the budget.
    """
    n = graph.n
    if not isinstance(k, int) or isinstance(k, bool) or k < 0 or k > n:
        raise ValueError(f"k must satisfy 0 <= k <= {n}, got {k!r}")
    if k == 0:
        return IndependentSetResult(exists=True, witness=())
    total = math.comb(n, k)
    if total > budget:
        raise BudgetExceededError(total, budget)
    adj = [frozenset(s) for s in graph.adjacency()]
    if not _decide_independent(adj, frozenset(range(n)), k):
        return IndependentSetResult(exists=False, witness=None)
    witness = _lex_witness(adj, n, k)
    return IndependentSetResult(exists=True, witness=witness)
