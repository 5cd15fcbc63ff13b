"""scikit-learn style selector over the functional solvers."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_points_array, check_theta0
from .geometry import PointSet
from .solvers import (
    DEFAULT_BUDGET,
    DEFAULT_TIE_TOL,
    sp_select_exact,
    sp_select_greedy,
)


class SolowPolaskySelector(BaseEstimator, TransformerMixin):
    """Select the k most diverse rows of a planar point array.

    Diversity is the Solow-Polasky measure under the exponential kernel
    exp(-theta0 * distance).  ``method="exact"`` enumerates every
    k-subset; ``method="greedy"`` grows the subset from the farthest pair
    in polynomial time (its value never exceeds the exact optimum).

    Parameters
    ----------
    k : int, default=2
        Number of rows to select.
    theta0 : float, default=1.0
        Kernel decay rate; must be strictly positive.
    method : {"exact", "greedy"}, default="exact"
    tie_tol : float, default=1e-9
        Absolute tie window for reporting co-optimal subsets (exact only).
    budget : int, default=10_000_000
        Maximum number of subsets the exact method may enumerate.
    workers : int, default=1
        Worker threads for the exact enumeration; results do not depend
        on this value.

    Attributes
    ----------
    indices_ : tuple of int
        Selected row indices (sorted).
    sp_value_ : float
        Diversity of the selected subset.
    all_optima_ : tuple of tuple of int
        Every subset within ``tie_tol`` of the optimum (exact method;
        for greedy it holds just the selected subset).
    evaluated_ : int or None
        Subsets evaluated by the exact enumeration, None for greedy.
    n_points_ : int
        Number of fitted rows.

    Rows must be distinct; duplicate rows make the similarity matrix
    singular and are rejected at fit time.

    Examples
    --------
    >>> import numpy as np
    >>> X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.75]])
    >>> SolowPolaskySelector(k=2, theta0=1.0).fit(X).indices_
    (1, 2)
    """

    def __init__(
        self,
        k=2,
        theta0=1.0,
        method="exact",
        tie_tol=DEFAULT_TIE_TOL,
        budget=DEFAULT_BUDGET,
        workers=1,
    ):
        self.k = k
        self.theta0 = theta0
        self.method = method
        self.tie_tol = tie_tol
        self.budget = budget
        self.workers = workers

    def fit(self, X, y=None):
        """Compute the most diverse k-subset of the rows of X."""
        X = check_points_array(X)
        theta0 = check_theta0(self.theta0)
        ps = PointSet([tuple(row) for row in X], backend="floating")
        if self.method == "exact":
            res = sp_select_exact(
                ps,
                self.k,
                theta0,
                tie_tol=self.tie_tol,
                budget=self.budget,
                workers=self.workers,
            )
            self.indices_ = res.best.indices
            self.sp_value_ = res.best.value
            self.all_optima_ = tuple(s.indices for s in res.all_optima)
            self.evaluated_ = res.evaluated
        elif self.method == "greedy":
            sel = sp_select_greedy(ps, self.k, theta0)
            self.indices_ = sel.indices
            self.sp_value_ = sel.value
            self.all_optima_ = (sel.indices,)
            self.evaluated_ = None
        else:
            raise ValueError(
                f"method must be 'exact' or 'greedy', got {self.method!r}"
            )
        self.n_points_ = len(ps)
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        """Return the selected rows of X (same row count as at fit)."""
        check_is_fitted(self, "indices_")
        X = check_points_array(X)
        if X.shape[0] != self.n_points_:
            raise ValueError(
                f"X has {X.shape[0]} rows but the selector was fitted on "
                f"{self.n_points_}"
            )
        return X[list(self.indices_)]

    def get_support(self, indices=False):
        """Boolean mask (or index array) of the selected rows."""
        check_is_fitted(self, "indices_")
        mask = np.zeros(self.n_points_, dtype=bool)
        mask[list(self.indices_)] = True
        return np.flatnonzero(mask) if indices else mask
