"""Diversity bounds for similarity matrices in the bounded-box regime.

For k points whose off-diagonal similarities all lie in [0, rho] with
rho < 1/(4k), the diversity is monotone decreasing in every off-diagonal
entry, which pins it between two extremal configurations:

* all entries equal to r  ->  k / (1 + (k-1) r)      (lower bound for
  subsets whose similarities are all at most r), and
* a single pair at q, rest zero -> k - 2 q / (1 + q) (upper bound for
  subsets containing some similarity at least q).

Whenever q > k (k-1) r the two bounds separate strictly.  Regimes coming
from scaled reductions carry their similarities as exponents because the
linear values underflow; certification then runs entirely in the log
domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

# Below this, a linear-domain similarity is too close to the subnormal
# range for direct arithmetic; certification switches to exponents.
LINEAR_FLOOR = 1e-300


def _check_k(k) -> int:
    if not isinstance(k, int) or isinstance(k, bool):
        raise ValueError(f"k must be an integer, got {k!r}")
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    return k


def _check_box_value(name: str, value, k: int) -> float:
    v = float(value)
    if not math.isfinite(v) or v < 0.0:
        raise ValueError(f"{name} must be a finite nonnegative real, got {value!r}")
    if v >= 1.0 / (4.0 * k):
        raise ValueError(
            f"{name}={v!r} is outside the box regime: need {name} < 1/(4k) = "
            f"{1.0 / (4.0 * k)!r} (the boundary itself is rejected)"
        )
    return v


def good_lower_bound(k: int, r) -> float:
    """Smallest diversity of k points whose similarities are all in [0, r].

    Equals the diversity of the uniform matrix (1-r) I + r J.
    """
    k = _check_k(k)
    r = _check_box_value("r", r, k)
    return k / (1.0 + (k - 1) * r)


def bad_upper_bound(k: int, q) -> float:
    """Largest diversity of k points with some similarity at least q.

    Equals the diversity of the matrix with a single off-diagonal pair at
    q and every other off-diagonal entry zero: (k - 2) + 2/(1 + q).
    """
    k = _check_k(k)
    q = _check_box_value("q", q, k)
    return k - 2.0 * q / (1.0 + q)


@dataclass(frozen=True)
class BoxRegime:
    """A bounded-box similarity regime 0 <= r <= q <= rho < 1/(4k).

    ``rho`` bounds every off-diagonal similarity, ``r`` bounds the
    similarities of the favourable subsets, and ``q`` lower-bounds the
    largest similarity of the unfavourable ones.  Exponent-built regimes
    (``from_exponents=True``) keep only logs as exact carriers; their
    linear fields may have underflowed to 0.0.
    """

    k: int
    rho: float
    r: float
    q: float
    log_rho: float
    log_r: float
    log_q: float
    from_exponents: bool

    def __post_init__(self):
        _check_k(self.k)
        for name in ("log_rho", "log_r", "log_q"):
            v = getattr(self, name)
            if math.isnan(v) or v > 0.0:
                raise ValueError(f"{name} must be a nonpositive real, got {v!r}")
        if not (self.log_r <= self.log_q <= self.log_rho):
            raise ValueError(
                "regime ordering violated: need log_r <= log_q <= log_rho, got "
                f"{self.log_r!r} <= {self.log_q!r} <= {self.log_rho!r}"
            )
        if not (self.log_rho < -math.log(4.0 * self.k)):
            raise ValueError(
                f"rho must satisfy rho < 1/(4k): log_rho={self.log_rho!r} is not "
                f"below {-math.log(4.0 * self.k)!r} (the boundary itself is rejected)"
            )

    @classmethod
    def from_similarities(cls, k: int, rho, r, q) -> "BoxRegime":
        """Build from linear-domain similarity values."""
        k = _check_k(k)
        rho = _check_box_value("rho", rho, k)
        r = _check_box_value("r", r, k)
        q = _check_box_value("q", q, k)
        if not (r <= q <= rho):
            raise ValueError(f"need r <= q <= rho, got {r!r} <= {q!r} <= {rho!r}")
        def lg(v):
            return math.log(v) if v > 0.0 else -math.inf
        return cls(k=k, rho=rho, r=r, q=q, log_rho=lg(rho), log_r=lg(r),
                   log_q=lg(q), from_exponents=False)

    @classmethod
    def from_exponents(cls, k: int, log_rho, log_r, log_q) -> "BoxRegime":
        """Build from exponents, i.e. similarity = exp(exponent).

        This is the carrier for scaled reductions where the exponents are
        -theta0 * L * (distance); the linear values routinely underflow.
        """
        k = _check_k(k)
        with_warn = [float(log_rho), float(log_r), float(log_q)]
        def ex(v):
            try:
                return math.exp(v)
            except OverflowError:  # pragma: no cover - logs are nonpositive
                return math.inf
        return cls(k=k, rho=ex(with_warn[0]), r=ex(with_warn[1]),
                   q=ex(with_warn[2]), log_rho=with_warn[0],
                   log_r=with_warn[1], log_q=with_warn[2], from_exponents=True)


@dataclass(frozen=True)
class GapCertificate:
    """Machine-checkable record that good_lower exceeds bad_upper.

    ``separated`` is the direct bound comparison, evaluated through the
    cancellation-free numerator criterion; ``sufficient`` records the
    simpler advisory condition q > k (k-1) r.  ``log_domain`` is True for
    exponent-built regimes, whose bounds degenerate to the limit value k
    in floating point; ``log_gap`` then carries ln(good_lower - bad_upper)
    symbolically.
    """

    regime: BoxRegime
    good_lower: float
    bad_upper: float
    separated: bool
    sufficient: bool
    log_domain: bool
    log_gap: Optional[float]


def certify_gap(regime: BoxRegime) -> GapCertificate:
    """Evaluate both extremal bounds and decide strict separation.

    The separation test is the sign of the gap numerator
    ``2 q - (k-1) r (k + (k-2) q)``, expressed as ``x < 1`` with
    ``x = (k-1) (k + (k-2) q) r / (2 q)``.  In the linear domain x is
    formed directly; for exponent regimes it is formed as
    ``exp(ln((k-1)(k+(k-2)q)/2) + log_r - log_q)`` which never underflows.
    """
    k = regime.k
    r, q = regime.r, regime.q
    use_logs = regime.from_exponents or q <= LINEAR_FLOOR or (0.0 < r <= LINEAR_FLOOR)

    if regime.log_q == -math.inf:
        # r = q = 0: both extremal configurations are the identity matrix.
        x = 1.0
    elif regime.log_r == -math.inf:
        x = 0.0
    elif use_logs:
        exponent = (
            math.log(0.5 * (k - 1) * (k + (k - 2) * math.exp(regime.log_q)))
            + regime.log_r
            - regime.log_q
        )
        x = math.exp(exponent) if exponent < 700.0 else math.inf
    else:
        x = (k - 1) * (k + (k - 2) * q) * r / (2.0 * q)
    separated = x < 1.0

    good_lower = k / (1.0 + (k - 1) * r)
    bad_upper = k - 2.0 * q / (1.0 + q)

    if regime.log_q == -math.inf:
        sufficient = False
    elif regime.log_r == -math.inf:
        sufficient = True
    elif use_logs:
        sufficient = regime.log_q - regime.log_r > math.log(k * (k - 1))
    else:
        sufficient = q > k * (k - 1) * r

    log_gap = None
    if separated and regime.log_q > -math.inf:
        log_gap = (
            math.log(2.0)
            + regime.log_q
            + math.log1p(-x)
            - math.log1p((k - 1) * r)
            - math.log1p(q)
        )
    return GapCertificate(
        regime=regime,
        good_lower=good_lower,
        bad_upper=bad_upper,
        separated=separated,
        sufficient=sufficient,
        log_domain=regime.from_exponents,
        log_gap=log_gap,
    )
