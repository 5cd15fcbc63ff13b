"""Shared test oracles and instance generators.

Everything here is deliberately independent of the library's own solve
paths: diversity values come from an explicit matrix inverse, subset
optima from plain enumeration over that oracle, and independent sets from
itertools.  Library results are checked against these.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from spdiversity.geometry import PointSet, squared_distance


def oracle_sp(values) -> float:
    """Diversity via the explicit inverse: sum of all entries of Z^-1."""
    inv = np.linalg.inv(np.asarray(values, dtype=float))
    return float(inv.sum())


def oracle_sp_of_points(ps: PointSet, subset, theta0: float) -> float:
    sub = ps.take(list(subset))
    n = len(sub)
    values = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = float(squared_distance(sub[i], sub[j])) ** 0.5
            values[i, j] = values[j, i] = np.exp(-theta0 * d)
    return oracle_sp(values)


def oracle_fd_gradient(values, a: int, b: int, h: float = 1e-6) -> float:
    """Central finite difference of the diversity in the symmetric entry
    (a, b), via the inverse-based oracle."""
    zp = np.array(values, dtype=float)
    zm = np.array(values, dtype=float)
    zp[a, b] += h
    zp[b, a] += h
    zm[a, b] -= h
    zm[b, a] -= h
    return (oracle_sp(zp) - oracle_sp(zm)) / (2.0 * h)


def oracle_best_subsets(ps: PointSet, k: int, theta0: float, tie_tol: float):
    """Exhaustive argmax over k-subsets using the inverse-based oracle.

    Returns (best_value, subsets within tie_tol of it, values by subset).
    """
    values = {}
    for subset in combinations(range(len(ps)), k):
        values[subset] = oracle_sp_of_points(ps, subset, theta0)
    best = max(values.values())
    optima = sorted(s for s, v in values.items() if v >= best - tie_tol)
    return best, optima, values


def oracle_independent_sets(edges, n: int, k: int):
    """All independent k-subsets, lexicographically sorted."""
    edge_set = {tuple(sorted(e)) for e in edges}

    def independent(subset):
        return not any(
            (subset[i], subset[j]) in edge_set
            for i in range(len(subset))
            for j in range(i + 1, len(subset))
        )

    return [s for s in combinations(range(n), k) if independent(s)]


def random_box_matrix(rng: np.random.Generator, k: int, rho: float) -> np.ndarray:
    """Symmetric unit-diagonal matrix with off-diagonals uniform in [0, rho]."""
    m = rng.uniform(0.0, rho, size=(k, k))
    m = np.triu(m, 1)
    return np.eye(k) + m + m.T


def random_rational_points(
    rng: np.random.Generator,
    n: int,
    box: Fraction = Fraction(7, 2),
    denominators=(4, 8, 16),
    min_delta: Fraction = Fraction(1, 4),
    min_eta_excess: Fraction = Fraction(1, 5),
    max_tries: int = 5000,
) -> PointSet:
    """Random distinct rational points in [0, box]^2 with margin floors.

    Rejects candidates whose closest pair is nearer than min_delta or
    that have a pair with distance in (1, 1 + min_eta_excess); both
    criteria are decided on exact squared distances, which keeps the
    analytic reduction's gap visible in floating point.
    """
    min_d2 = min_delta * min_delta
    band_hi = (1 + min_eta_excess) * (1 + min_eta_excess)
    for _ in range(max_tries):
        den = int(rng.choice(denominators))
        hi = int(box * den)
        coords = rng.integers(0, hi + 1, size=(n, 2))
        pts = [
            (Fraction(int(x), den), Fraction(int(y), den)) for x, y in coords
        ]
        if len(set(pts)) != n:
            continue
        ok = True
        for i in range(n):
            for j in range(i + 1, n):
                s = squared_distance(pts[i], pts[j])
                if s < min_d2 or 1 < s < band_hi:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return PointSet(pts, backend="rational")
    raise RuntimeError("instance generator exhausted its tries")


def random_rational_points_bitlength(
    rng: np.random.Generator, n: int, max_bits: int, max_tries: int = 5000
) -> PointSet:
    """Random distinct rational points whose bit length is at most max_bits."""
    top = (1 << max_bits) - 1
    for _ in range(max_tries):
        nums = rng.integers(-top, top + 1, size=(n, 2))
        dens = rng.integers(1, top + 1, size=(n, 2))
        pts = [
            (Fraction(int(nx), int(dx)), Fraction(int(ny), int(dy)))
            for (nx, ny), (dx, dy) in zip(nums, dens)
        ]
        if len(set(pts)) == n:
            return PointSet(pts, backend="rational")
    raise RuntimeError("instance generator exhausted its tries")
