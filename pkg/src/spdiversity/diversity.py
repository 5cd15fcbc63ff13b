"""Solow-Polasky diversity of a point set under an exponential kernel.

The similarity of two points at distance d is exp(-theta0 * d); the
diversity of a set is 1' Z^{-1} 1 where Z is the pairwise similarity
matrix.  The inverse is never formed: the linear system Z w = 1 is solved
and the diversity is the sum of the weights w.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.linalg import solve as _sym_solve

from ._validation import check_subset, check_theta0
from .exceptions import SingularMatrixError
from .geometry import PointSet, distance_matrix

# Solves are refused past this condition estimate: the weights would carry
# fewer than ~4 trustworthy digits and every downstream decision threshold
# would be noise.
CONDITION_LIMIT = 1e12


@dataclass(eq=False)
class SimilarityMatrix:
    """Exponential-kernel similarity matrix.

    Attributes
    ----------
    values : ndarray of shape (k, k)
        Symmetric, unit diagonal, off-diagonal entries in [0, 1).
    theta0 : float
        Decay rate the matrix was built with.
    underflow : bool
        True when some off-diagonal entry underflowed to exactly 0.0
        even though the underlying distance is finite.
    """

    values: np.ndarray
    theta0: float
    underflow: bool = False

    @classmethod
    def from_values(cls, values, theta0=1.0) -> "SimilarityMatrix":
        """Wrap and validate an explicit matrix (mainly for tests)."""
        arr = np.asarray(values, dtype=float)
        _check_square_symmetric(arr)
        off = arr[~np.eye(arr.shape[0], dtype=bool)]
        if off.size and (off.min() < 0.0 or off.max() >= 1.0):
            raise ValueError("off-diagonal similarities must lie in [0, 1)")
        return cls(values=arr, theta0=check_theta0(theta0),
                   underflow=bool(off.size and (off == 0.0).any()))


def _check_square_symmetric(arr: np.ndarray):
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"similarity matrix must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("similarity matrix must be finite")
    if not np.array_equal(arr, arr.T):
        raise ValueError("similarity matrix must be symmetric")
    if not np.all(arr.diagonal() == 1.0):
        raise ValueError("similarity matrix must have a unit diagonal")


def similarity_matrix(ps: PointSet, theta0) -> SimilarityMatrix:
    """Build exp(-theta0 * D) for the pairwise distance matrix D.

    Entries that underflow to zero are kept at exactly 0.0 and flagged;
    they are legitimate similarities of very distant pairs.
    """
    theta0 = check_theta0(theta0)
    dmat = distance_matrix(ps)
    with np.errstate(under="ignore"):
        values = np.exp(-theta0 * dmat)
    off = values[~np.eye(values.shape[0], dtype=bool)]
    return SimilarityMatrix(
        values=values,
        theta0=theta0,
        underflow=bool(off.size and (off == 0.0).any()),
    )


@dataclass(eq=False)
class Weighting:
    """Solution of Z w = 1 together with its diagnostics."""

    w: np.ndarray
    sp_value: float
    residual: float


def _coerce_values(z) -> np.ndarray:
    if isinstance(z, SimilarityMatrix):
        return z.values
    arr = np.asarray(z, dtype=float)
    _check_square_symmetric(arr)
    return arr


def _solve_weighting(values: np.ndarray) -> Weighting:
    # Condition gate first: refusing is better than returning noise.
    cond = float(np.linalg.cond(values))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularMatrixError(
            f"similarity matrix condition estimate {cond:.3e} exceeds "
            f"{CONDITION_LIMIT:.0e}",
            condition=cond,
        )
    ones = np.ones(values.shape[0])
    try:
        w = cho_solve(cho_factor(values, lower=False), ones)
    except LinAlgError:
        # Not numerically positive definite: pivoted symmetric-indefinite solve.
        try:
            w = _sym_solve(values, ones, assume_a="sym")
        except LinAlgError as exc:
            raise SingularMatrixError(
                f"similarity matrix is singular: {exc}", condition=cond
            ) from None
    residual = float(np.abs(values @ w - ones).max())
    return Weighting(w=w, sp_value=float(w.sum()), residual=residual)


def solow_polasky(z) -> Weighting:
    """Solve Z w = 1 and return the weighting with its diversity value.

    Parameters
    ----------
    z : SimilarityMatrix or array_like
        A raw array must be square, symmetric, finite, with unit diagonal;
        its off-diagonal range is not restricted (perturbed matrices from
        finite-difference checks are welcome).

    Raises
    ------
    SingularMatrixError
        If the matrix is singular or its condition estimate exceeds
        ``CONDITION_LIMIT``.
    """
    return _solve_weighting(_coerce_values(z))


def sp_gradient(z, a: int, b: int) -> float:
    """Partial derivative of the diversity in the off-diagonal entry (a, b).

    Both symmetric entries move together; the derivative is -2 w_a w_b,
    strictly negative whenever the weights are positive.
    """
    values = _coerce_values(z)
    k = values.shape[0]
    if not (0 <= a < k and 0 <= b < k):
        raise ValueError(f"entry ({a}, {b}) out of range for k={k}")
    if a == b:
        raise ValueError("gradient is defined for off-diagonal entries only")
    w = _solve_weighting(values).w
    return float(-2.0 * w[a] * w[b])


def sp_of_subset(ps: PointSet, subset, theta0) -> float:
    """Diversity of the sub point set at the given indices.

    Singletons have diversity exactly 1.
    """
    theta0 = check_theta0(theta0)
    idx = check_subset(subset, len(ps))
    dmat = distance_matrix(ps.take(idx))
    with np.errstate(under="ignore"):
        values = np.exp(-theta0 * dmat)
    try:
        return _solve_weighting(values).sp_value
    except SingularMatrixError as exc:
        raise SingularMatrixError(
            f"subset {idx}: {exc}", condition=exc.condition
        ) from None
