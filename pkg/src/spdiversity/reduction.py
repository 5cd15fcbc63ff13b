"""Reduction from unit-disk independent set to diversity maximization.

Scaling a point set by a factor L turns the combinatorial distinction
"pair within distance 1" / "pair strictly beyond 1" into a quantitative
similarity split: after scaling, adjacent pairs have similarity at least
q = exp(-theta0 L) while fully non-adjacent k-subsets stay below
r = exp(-theta0 L (1 + eta)).  Once q exceeds k (k-1) r, the extremal
bounds separate and diversity maximization answers the independent-set
question.  Two planners pick L:

* analytic: from the measured margins delta (closest pair) and eta
  (smallest excess over 1), L just above
  max(ln(4k) / (theta0 delta), ln(k(k-1)) / (theta0 eta));
* bit_complexity: from the coordinate bit length alone, via the exact
  margin floor epsilon = 2**(-12 B), as the integer
  L = ceil(ln 2 / theta0) * 2**(12 B) * ceil(log2 M) with
  M = max(4k, k(k-1)+1).  This L is polynomial in the input size but
  astronomically large, so the scaled instance is kept symbolic and its
  certificate lives in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Tuple

from ._validation import check_theta0
from .bounds import BoxRegime, GapCertificate, certify_gap
from .diversity import sp_of_subset
from .exceptions import SeparationError
from .geometry import (
    MarginReport,
    PointSet,
    margins,
    scale as scale_points,
    unit_disk_graph,
)
from .solvers import (
    DEFAULT_BUDGET,
    IndependentSetResult,
    max_independent_set,
    sp_select_exact,
)

DEFAULT_SLACK = 0.1

# Below this certified gap the two diversity classes are not resolvable in
# float64 and the decision procedure refuses to guess.
MIN_VISIBLE_GAP = 1e-9

# Exponents past this magnitude do not fit in float64.
_MAX_EXPONENT = 1e300


def _check_k(k, n: int) -> int:
    if not isinstance(k, int) or isinstance(k, bool):
        raise ValueError(f"k must be an integer, got {k!r}")
    if k < 2 or k > n:
        raise ValueError(f"k must satisfy 2 <= k <= {n}, got {k}")
    return k


@dataclass(frozen=True)
class ScalePlan:
    """A chosen scale factor with the quantities that justify it.

    ``box_check`` records theta0 * L * min(delta, 1) >= ln(4k) (every
    scaled similarity is inside the box regime); ``ratio_check`` records
    the separation inequality theta0 * L * eta > ln(k(k-1)) for the
    analytic mode, respectively theta0 * L * epsilon >= ln M for the
    bit-complexity mode.
    """

    mode: str
    k: int
    theta0: float
    scale: object
    delta: float
    eta: float
    eta_sentinel: bool
    log_rho: float
    log_r: float
    log_q: float
    box_check: bool
    ratio_check: bool
    threshold: Optional[float] = None
    slack: Optional[float] = None
    bit_length: Optional[int] = None
    epsilon: Optional[Fraction] = None
    m_bound: Optional[int] = None
    c_theta0: Optional[int] = None


def plan_analytic(
    ps: PointSet, k: int, theta0, slack: float = DEFAULT_SLACK, scale=None
) -> ScalePlan:
    """Pick a scale factor from the measured margins.

    The admissible threshold is
    max(ln(4k) / (theta0 delta_eff), ln(k(k-1)) / (theta0 eta)) with
    delta_eff = min(delta, 1); any L strictly above it works and the
    default is (1 + slack) times it.  ``scale`` forces an explicit L,
    which must still clear the threshold strictly.

    delta_eff caps delta at 1: when even the closest pair is beyond unit
    distance the graph is edgeless and the box bound only needs to cover
    exp(-theta0 L), which the capped threshold guarantees.
    """
    theta0 = check_theta0(theta0)
    k = _check_k(k, len(ps))
    rep = margins(ps)
    delta_eff = min(rep.delta, 1.0)
    threshold = max(
        math.log(4.0 * k) / (theta0 * delta_eff),
        math.log(k * (k - 1)) / (theta0 * rep.eta),
    )
    if scale is None:
        slack = float(slack)
        if not (math.isfinite(slack) and slack > 0.0):
            raise ValueError(
                f"slack must be strictly positive, got {slack!r} "
                "(the threshold itself is not admissible)"
            )
        chosen = (1.0 + slack) * threshold
        recorded_slack: Optional[float] = slack
    else:
        if not (float(scale) > threshold):
            raise ValueError(
                f"forced scale {scale!r} does not strictly exceed the "
                f"admissible threshold {threshold!r}"
            )
        chosen = scale
        recorded_slack = None
    lf = float(chosen)
    log_rho = -theta0 * lf * delta_eff
    log_r = -theta0 * lf * (1.0 + rep.eta)
    log_q = -theta0 * lf
    box_check = theta0 * lf * delta_eff >= math.log(4.0 * k)
    ratio_check = theta0 * lf * rep.eta > math.log(k * (k - 1))
    if not (box_check and ratio_check):
        raise SeparationError(
            f"scale {chosen!r} fails the planning inequalities "
            f"(box={box_check}, ratio={ratio_check})"
        )
    return ScalePlan(
        mode="analytic",
        k=k,
        theta0=theta0,
        scale=chosen,
        delta=rep.delta,
        eta=rep.eta,
        eta_sentinel=rep.eta_sentinel,
        log_rho=log_rho,
        log_r=log_r,
        log_q=log_q,
        box_check=box_check,
        ratio_check=ratio_check,
        threshold=threshold,
        slack=recorded_slack,
        bit_length=rep.bit_length,
        epsilon=rep.epsilon,
    )


def plan_bit_complexity(ps: PointSet, k: int, theta0) -> ScalePlan:
    """Pick the integer scale factor from the coordinate bit length alone.

    With B the largest numerator/denominator bit length, every margin is
    at least epsilon = 2**(-12 B), so
    L = ceil(ln 2 / theta0) * 2**(12 B) * ceil(log2 M) satisfies
    theta0 * L * epsilon >= ln M >= ln(4k), ln(k(k-1)+1).  L's bit length
    is linear in B: the reduction is polynomial in the input size.
    """
    theta0 = check_theta0(theta0)
    k = _check_k(k, len(ps))
    if not ps.is_rational:
        raise ValueError(
            "bit-complexity planning needs the rational backend "
            "(exact coordinates determine the bit length)"
        )
    rep = margins(ps)
    b = rep.bit_length
    eps = rep.epsilon
    m_bound = max(4 * k, k * (k - 1) + 1)
    c = math.ceil(math.log(2.0) / theta0)
    j = (m_bound - 1).bit_length()  # ceil(log2 m_bound) for m_bound >= 2
    big_l = c * (1 << (12 * b)) * j
    # L * eps == c * j exactly, so the log-domain verification is exact up
    # to the float representation of ln M; the tolerance absorbs the
    # boundary where theta0 is itself a float multiple of ln 2.
    ratio_check = theta0 * (c * j) >= math.log(m_bound) - 1e-12
    margin_check = rep.delta >= float(eps) and rep.eta >= float(eps)
    if not (ratio_check and margin_check):
        raise SeparationError(
            f"bit-complexity planning failed (ratio={ratio_check}, "
            f"margins={margin_check})"
        )
    if float(big_l) * theta0 >= _MAX_EXPONENT:
        raise ValueError(
            f"bit length {b} yields a scale too large for float exponents"
        )
    log_q = -theta0 * float(big_l)
    log_rho = -theta0 * float(c * j)  # = -theta0 * L * eps, exactly
    log_r = log_q + log_rho  # -theta0 * L * (1 + eps)
    return ScalePlan(
        mode="bit_complexity",
        k=k,
        theta0=theta0,
        scale=big_l,
        delta=rep.delta,
        eta=rep.eta,
        eta_sentinel=rep.eta_sentinel,
        log_rho=log_rho,
        log_r=log_r,
        log_q=log_q,
        box_check=True,  # theta0 L eps >= ln M >= ln(4k)
        ratio_check=ratio_check,
        bit_length=b,
        epsilon=eps,
        m_bound=m_bound,
        c_theta0=c,
    )


@dataclass(frozen=True)
class ReductionInstance:
    """A planned reduction: source set, plan, certificate, scaled image.

    ``image`` is the materialized scaled point set in analytic mode and
    None in bit-complexity mode, where the scale factor is too large to
    evaluate similarities in floating point and the instance stays
    symbolic (source, scale).
    """

    source: PointSet
    k: int
    theta0: float
    plan: ScalePlan
    certificate: GapCertificate
    image: Optional[PointSet]


def reduce(
    ps: PointSet,
    k: int,
    theta0,
    mode: str = "analytic",
    slack: float = DEFAULT_SLACK,
    scale=None,
) -> ReductionInstance:
    """Build a reduction instance with its separation certificate.

    ``scale`` (analytic mode only) forces an explicit factor; an exact
    int/Fraction factor keeps a rational source exact in the image.
    """
    if mode == "analytic":
        plan = plan_analytic(ps, k, theta0, slack=slack, scale=scale)
        image = scale_points(ps, plan.scale)
    elif mode in ("bits", "bit_complexity"):
        if scale is not None:
            raise ValueError("bit-complexity mode computes its own scale")
        plan = plan_bit_complexity(ps, k, theta0)
        image = None
    else:
        raise ValueError(f"unknown mode {mode!r}; use 'analytic' or 'bits'")
    regime = BoxRegime.from_exponents(
        plan.k, plan.log_rho, plan.log_r, plan.log_q
    )
    certificate = certify_gap(regime)
    if not certificate.separated:
        raise SeparationError(
            "planned regime is not separated "
            f"(log_r={plan.log_r!r}, log_q={plan.log_q!r})"
        )
    return ReductionInstance(
        source=ps,
        k=plan.k,
        theta0=plan.theta0,
        plan=plan,
        certificate=certificate,
        image=image,
    )


def _visible_gap(certificate: GapCertificate) -> float:
    gap = certificate.good_lower - certificate.bad_upper
    if not (gap >= MIN_VISIBLE_GAP):
        raise SeparationError(
            f"certified gap {gap!r} is below floating resolution "
            f"({MIN_VISIBLE_GAP}); the instance cannot be decided "
            "numerically (bit-complexity certificates remain valid in the "
            "log domain)"
        )
    return gap


@dataclass(frozen=True)
class DecisionReport:
    """Outcome of deciding independent-set existence through diversity."""

    accepted: bool
    witness: Optional[Tuple[int, ...]]
    optimum: float
    good_lower: float
    bad_upper: float
    evaluated: int


def decide_via_sp(
    inst: ReductionInstance,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> DecisionReport:
    """Decide the source independent-set question on the scaled image.

    Accepts iff the maximal diversity reaches good_lower, up to a quarter
    of the certified gap to absorb rounding when a favourable subset
    attains the bound exactly; every unfavourable subset sits a full gap
    below, so the decision is unchanged.
    """
    if inst.image is None:
        raise ValueError(
            "decide_via_sp needs a materialized image (analytic mode)"
        )
    gap = _visible_gap(inst.certificate)
    sel = sp_select_exact(
        inst.image, inst.k, inst.theta0, budget=budget, workers=workers
    )
    threshold = inst.certificate.good_lower - gap / 4.0
    accepted = sel.best.value >= threshold
    return DecisionReport(
        accepted=accepted,
        witness=sel.best.indices if accepted else None,
        optimum=sel.best.value,
        good_lower=inst.certificate.good_lower,
        bad_upper=inst.certificate.bad_upper,
        evaluated=sel.evaluated,
    )


@dataclass(frozen=True)
class VerificationReport:
    """Exhaustive check that the reduction behaves as certified.

    ``optima`` are the diversity-optimal k-subsets of the image within the
    certificate-derived tie window q/(1+q); ``independents`` are the
    independent k-subsets of the source.  When independents exist the two
    families must coincide; with none, every subset must respect the
    unfavourable upper bound.
    """

    n: int
    k: int
    theta0: float
    scale: object
    good_lower: float
    bad_upper: float
    tie_tol: float
    optima: Tuple[Tuple[int, ...], ...]
    independents: Tuple[Tuple[int, ...], ...]
    sets_match: Optional[bool]
    min_good_sp: Optional[float]
    max_bad_sp: Optional[float]
    good_threshold_ok: Optional[bool]
    bad_threshold_ok: Optional[bool]
    strictly_separated: Optional[bool]
    decision_accepted: bool
    independent_exists: bool
    decision_agrees: bool
    evaluated: int
    certificate: GapCertificate
    passed: bool


# Float fuzz allowed when comparing measured diversities against the
# certified thresholds; the certified gap is orders of magnitude larger.
_THRESHOLD_FUZZ = 1e-9


def verify_reduction(
    ps: PointSet,
    k: int,
    theta0,
    slack: float = DEFAULT_SLACK,
    scale=None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> VerificationReport:
    """Run the reduction end to end and verify it exhaustively.

    Builds the analytic instance, enumerates every k-subset twice (once
    through the exact solver, once through an independent re-evaluation),
    enumerates the independent k-subsets of the source, and checks: the
    optima window equals the independent family (when one exists), both
    diversity classes respect their certified thresholds, the classes are
    strictly separated pairwise, and the accept/reject decision agrees
    with the direct independent-set search.
    """
    inst = reduce(ps, k, theta0, mode="analytic", slack=slack, scale=scale)
    gap = _visible_gap(inst.certificate)
    q = math.exp(inst.plan.log_q)
    tie_tol = q / (1.0 + q)

    sel = sp_select_exact(
        inst.image, inst.k, inst.theta0,
        tie_tol=tie_tol, budget=budget, workers=workers,
    )
    optima = tuple(s.indices for s in sel.all_optima)

    graph = unit_disk_graph(ps)
    n = len(ps)
    independents = tuple(
        subset
        for subset in combinations(range(n), inst.k)
        if graph.is_independent(subset)
    )
    independent_set = set(independents)

    min_good = max_bad = None
    for subset in combinations(range(n), inst.k):
        value = sp_of_subset(inst.image, subset, inst.theta0)
        if subset in independent_set:
            min_good = value if min_good is None else min(min_good, value)
        else:
            max_bad = value if max_bad is None else max(max_bad, value)

    good_lower = inst.certificate.good_lower
    bad_upper = inst.certificate.bad_upper
    sets_match = (optima == independents) if independents else None
    good_ok = None if min_good is None else min_good >= good_lower - _THRESHOLD_FUZZ
    bad_ok = None if max_bad is None else max_bad <= bad_upper + _THRESHOLD_FUZZ
    strict = (
        None
        if (min_good is None or max_bad is None)
        else min_good > max_bad
    )

    decision = decide_via_sp(inst, budget=budget, workers=workers)
    is_result: IndependentSetResult = max_independent_set(graph, inst.k, budget=budget)
    agrees = decision.accepted == is_result.exists

    checks = [agrees]
    if independents:
        checks.append(sets_match)
        checks.append(good_ok)
    if max_bad is not None:
        checks.append(bad_ok)
    if strict is not None:
        checks.append(strict)
    passed = all(checks)

    return VerificationReport(
        n=n,
        k=inst.k,
        theta0=inst.theta0,
        scale=inst.plan.scale,
        good_lower=good_lower,
        bad_upper=bad_upper,
        tie_tol=tie_tol,
        optima=optima,
        independents=independents,
        sets_match=sets_match,
        min_good_sp=min_good,
        max_bad_sp=max_bad,
        good_threshold_ok=good_ok,
        bad_threshold_ok=bad_ok,
        strictly_separated=strict,
        decision_accepted=decision.accepted,
        independent_exists=is_result.exists,
        decision_agrees=agrees,
        evaluated=sel.evaluated,
        certificate=inst.certificate,
        passed=passed,
    )
