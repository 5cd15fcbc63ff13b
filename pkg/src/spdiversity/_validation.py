"""Input validation helpers shared by the functional API and the estimator."""

from __future__ import annotations

import math

import numpy as np


def check_theta0(theta0) -> float:
    """Validate the kernel decay rate: a finite, strictly positive float."""
    try:
        value = float(theta0)
    except (TypeError, ValueError):
        raise ValueError(f"theta0 must be a positive real, got {theta0!r}") from None
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"theta0 must be a positive real, got {theta0!r}")
    return value


def check_points_array(X) -> np.ndarray:
    """Coerce to a finite float64 array of shape (n, 2) with n >= 1."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(
            f"expected an array of shape (n, 2), got {getattr(arr, 'shape', None)}"
        )
    if arr.shape[0] < 1:
        raise ValueError("expected at least one point")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    return arr


def check_subset(indices, n: int) -> tuple:
    """Validate a subset of point indices: distinct integers in [0, n)."""
    try:
        idx = tuple(int(i) for i in indices)
    except (TypeError, ValueError):
        raise ValueError(f"subset indices must be integers, got {indices!r}") from None
    if len(idx) == 0:
        raise ValueError("subset must not be empty")
    if len(set(idx)) != len(idx):
        raise ValueError(f"subset indices must be distinct, got {idx}")
    bad = [i for i in idx if i < 0 or i >= n]
    if bad:
        raise ValueError(f"subset indices {bad} out of range for {n} points")
    return idx


def check_subset_size(k, n: int, minimum: int = 1) -> int:
    """Validate a subset size k with minimum <= k <= n."""
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise ValueError(f"k must be an integer, got {k!r}")
    k = int(k)
    if k < minimum or k > n:
        raise ValueError(f"k must satisfy {minimum} <= k <= {n}, got {k}")
    return k
