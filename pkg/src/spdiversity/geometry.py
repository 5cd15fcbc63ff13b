"""Planar point sets with an exact rational backend and a floating backend.

The rational backend stores coordinates as ``fractions.Fraction`` so that
every threshold decision (pair distance vs 1, duplicate detection, margin
attainment) is made on exact squared distances.  The floating backend stores
plain ``float`` coordinates and makes the same decisions on floating-point
distances.  Distances themselves are always reported as floats; exact code
paths work with squared distances and never take square roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .exceptions import PointFormatError

RATIONAL = "rational"
FLOATING = "floating"

Coord = Tuple[object, object]


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise PointFormatError(f"bad rational coordinate {value!r}: {exc}") from None
    if isinstance(value, float):
        if not math.isfinite(value):
            raise PointFormatError(f"non-finite coordinate {value!r}")
        return Fraction(value)
    raise PointFormatError(f"unsupported coordinate type {type(value).__name__}")


def _as_float(value):
    try:
        out = float(value)
    except (TypeError, ValueError) as exc:
        raise PointFormatError(f"bad coordinate {value!r}: {exc}") from None
    if not math.isfinite(out):
        raise PointFormatError(f"non-finite coordinate {value!r}")
    return out


class PointSet:
    """An ordered set of distinct points in the plane.

    Parameters
    ----------
    points : iterable of (x, y)
        Coordinates.  Accepted entry types: int, float, Fraction, and
        strings such as ``"0.75"`` or ``"3/4"``.
    backend : {"rational", "floating"}, optional
        Forces the coordinate representation.  When omitted, the rational
        backend is selected iff some coordinate is a Fraction or a string;
        otherwise coordinates are stored as floats.

    Raises
    ------
    ValueError
        If fewer than one point is given or two points coincide exactly.
    PointFormatError
        If a coordinate cannot be converted.
    """

    __slots__ = ("points", "backend")

    def __init__(self, points: Iterable[Coord], backend: Optional[str] = None):
        raw = [tuple(p) for p in points]
        if any(len(p) != 2 for p in raw):
            raise PointFormatError("each point needs exactly two coordinates")
        if not raw:
            raise ValueError("a point set needs at least one point")
        if backend is None:
            exactish = any(
                isinstance(c, (Fraction, str)) for p in raw for c in p
            )
            backend = RATIONAL if exactish else FLOATING
        if backend == RATIONAL:
            pts = tuple((_as_fraction(x), _as_fraction(y)) for x, y in raw)
        elif backend == FLOATING:
            pts = tuple((_as_float(x), _as_float(y)) for x, y in raw)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        seen = {}
        for i, p in enumerate(pts):
            if p in seen:
                raise ValueError(
                    f"points {seen[p]} and {i} coincide; points must be distinct"
                )
            seen[p] = i
        self.points = pts
        self.backend = backend

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.backend == other.backend and self.points == other.points

    def __hash__(self):
        return hash((self.backend, self.points))

    def __repr__(self):
        return f"PointSet({list(self.points)!r}, backend={self.backend!r})"

    @property
    def is_rational(self) -> bool:
        return self.backend == RATIONAL

    def take(self, indices: Sequence[int]) -> "PointSet":
        """Sub point set at the given indices, backend preserved."""
        return PointSet([self.points[i] for i in indices], backend=self.backend)

    def as_array(self) -> np.ndarray:
        """Coordinates as a float64 array of shape (n, 2)."""
        return np.array([[float(x), float(y)] for x, y in self.points], dtype=float)


def squared_distance(a: Coord, b: Coord):
    """Squared Euclidean distance between two points.

    Exact (a Fraction) when both points have exact coordinates, float
    otherwise.
    """
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return dx * dx + dy * dy


def distance(a: Coord, b: Coord) -> float:
    """Euclidean distance as a float.

    On exact coordinates the square root is applied to the exact squared
    distance after one correctly rounded conversion, so the result is within
    one ulp of the true distance.
    """
    sq = squared_distance(a, b)
    if isinstance(sq, Fraction):
        return math.sqrt(float(sq))
    return float(np.hypot(np.float64(a[0] - b[0]), np.float64(a[1] - b[1])))


def distance_matrix(ps: PointSet) -> np.ndarray:
    """Dense symmetric matrix of pairwise distances with zero diagonal."""
    n = len(ps)
    if ps.is_rational:
        out = np.zeros((n, n), dtype=float)
        for i in range(n):
            for j in range(i + 1, n):
                d = math.sqrt(float(squared_distance(ps[i], ps[j])))
                out[i, j] = out[j, i] = d
        return out
    xy = ps.as_array()
    dx = xy[:, 0][:, None] - xy[:, 0][None, :]
    dy = xy[:, 1][:, None] - xy[:, 1][None, :]
    return np.hypot(dx, dy)


def _bit_length(value: int) -> int:
    # Bit length of |value|, floored at 1 so that zero still costs one bit.
    return max(1, abs(value).bit_length())


def coordinate_bit_length(ps: PointSet) -> int:
    """Largest bit length over all numerators and denominators.

    Coordinates are in lowest terms (Fraction normalizes on construction).
    Rational backend only.
    """
    if not ps.is_rational:
        raise ValueError("bit length is defined for the rational backend only")
    return max(
        max(_bit_length(c.numerator), _bit_length(c.denominator))
        for p in ps.points
        for c in p
    )


def _nudged_down(x: float, steps: int = 2) -> float:
    for _ in range(steps):
        x = math.nextafter(x, 0.0)
    return x


@dataclass(frozen=True)
class MarginReport:
    """Distance margins of a point set.

    Attributes
    ----------
    delta : float
        Smallest pairwise distance.
    eta : float
        Smallest excess over 1 among pairs at distance strictly greater
        than 1, or the sentinel 1.0 when no pair exceeds 1.  Pairs at
        distance exactly 1 do not contribute.
    eta_sentinel : bool
        True when eta is the sentinel.
    backend : str
        Backend the margins were measured on.
    bit_length : int or None
        Max coordinate bit length (rational backend only).
    epsilon : Fraction or None
        Exact margin floor 2**(-12 * bit_length) (rational backend only).
    """

    delta: float
    eta: float
    eta_sentinel: bool
    backend: str
    bit_length: Optional[int] = None
    epsilon: Optional[Fraction] = None


def margins(ps: PointSet) -> MarginReport:
    """Measure the distance margins delta and eta of a point set.

    On the rational backend all comparisons against 1 are exact (squared
    distances), delta is the correctly rounded root of the smallest exact
    squared distance, and eta is computed per pair as
    ``(sigma - 1) / (d + 1)`` which avoids the cancellation of ``d - 1``;
    the reported eta is nudged down two ulps so that
    ``sigma >= (1 + eta)**2`` holds exactly for every pair with sigma > 1.
    """
    n = len(ps)
    if n < 2:
        raise ValueError("margins need at least two points")
    if ps.is_rational:
        sigma_min = None
        eta_min = None
        for i in range(n):
            for j in range(i + 1, n):
                sq = squared_distance(ps[i], ps[j])
                if sigma_min is None or sq < sigma_min:
                    sigma_min = sq
                if sq > 1:
                    root = math.sqrt(float(sq))
                    excess = float(sq - 1) / (root + 1.0)
                    if eta_min is None or excess < eta_min:
                        eta_min = excess
        delta = math.sqrt(float(sigma_min))
        if eta_min is None:
            eta, sentinel = 1.0, True
        else:
            eta, sentinel = _nudged_down(eta_min), False
        b = coordinate_bit_length(ps)
        return MarginReport(
            delta=delta,
            eta=eta,
            eta_sentinel=sentinel,
            backend=ps.backend,
            bit_length=b,
            epsilon=Fraction(1, 2 ** (12 * b)),
        )
    dmat = distance_matrix(ps)
    iu = np.triu_indices(n, k=1)
    dists = dmat[iu]
    delta = float(dists.min())
    over = dists[dists > 1.0]
    if over.size:
        eta, sentinel = float(over.min() - 1.0), False
    else:
        eta, sentinel = 1.0, True
    return MarginReport(delta=delta, eta=eta, eta_sentinel=sentinel, backend=ps.backend)


@dataclass(frozen=True)
class UnitDiskGraph:
    """Graph with an edge between every pair at distance <= threshold.

    Vertices are point indices 0..n-1; edges are stored as sorted (i, j)
    pairs with i < j.  Pairs at exactly the threshold are adjacent.
    """

    n: int
    edges: Tuple[Tuple[int, int], ...]

    def adjacency(self):
        nbrs = [set() for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return nbrs

    def degree(self, i: int) -> int:
        return sum(1 for e in self.edges if i in e)

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        a, b = (i, j) if i < j else (j, i)
        return (a, b) in set(self.edges)

    def is_independent(self, indices: Sequence[int]) -> bool:
        chosen = set(indices)
        return not any(i in chosen and j in chosen for i, j in self.edges)


def unit_disk_graph(ps: PointSet, threshold=1) -> UnitDiskGraph:
    """Build the unit-disk graph of a point set.

    On the rational backend the adjacency test compares exact squared
    distances against threshold**2 (threshold is converted to an exact
    rational); the floating backend compares floating distances.
    """
    n = len(ps)
    edges = []
    if ps.is_rational:
        thr_sq = _as_fraction(threshold) ** 2
        if thr_sq <= 0:
            raise ValueError("threshold must be positive")
        for i in range(n):
            for j in range(i + 1, n):
                if squared_distance(ps[i], ps[j]) <= thr_sq:
                    edges.append((i, j))
    else:
        thr = float(threshold)
        if not (thr > 0):
            raise ValueError("threshold must be positive")
        dmat = distance_matrix(ps)
        for i in range(n):
            for j in range(i + 1, n):
                if dmat[i, j] <= thr:
                    edges.append((i, j))
    return UnitDiskGraph(n=n, edges=tuple(edges))


def scale(ps: PointSet, factor) -> PointSet:
    """Multiply every coordinate by a positive factor.

    An exact factor (int, Fraction, or fraction string) keeps the rational
    backend exact; a float factor yields a floating point set.
    """
    if isinstance(factor, (int, Fraction, str)) and not isinstance(factor, bool):
        f = _as_fraction(factor)
        if f <= 0:
            raise ValueError("scale factor must be positive")
        if ps.is_rational:
            return PointSet(
                [(x * f, y * f) for x, y in ps.points], backend=RATIONAL
            )
        ff = float(f)
        return PointSet(
            [(x * ff, y * ff) for x, y in ps.points], backend=FLOATING
        )
    f = _as_float(factor)
    if not (f > 0):
        raise ValueError("scale factor must be positive")
    return PointSet(
        [(float(x) * f, float(y) * f) for x, y in ps.points], backend=FLOATING
    )


def parse_points(text: str, exact: bool = False) -> PointSet:
    """Parse the point-file format.

    One point per line: two whitespace-separated coordinates, each either a
    decimal literal or an exact fraction ``p/q``.  ``#`` starts a comment,
    blank lines are skipped.  The rational backend is selected when any
    fraction occurs or ``exact`` is set; otherwise coordinates are floats.
    """
    rows = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        tokens = body.split()
        if len(tokens) != 2:
            raise PointFormatError(
                f"expected two coordinates, got {len(tokens)}", line_no=line_no
            )
        rows.append((line_no, tokens))
    if not rows:
        raise PointFormatError("no points found")
    rational = exact or any("/" in t for _, ts in rows for t in ts)
    coords = []
    for line_no, (tx, ty) in rows:
        try:
            if rational:
                coords.append((Fraction(tx), Fraction(ty)))
            else:
                x, y = float(tx), float(ty)
                if not (math.isfinite(x) and math.isfinite(y)):
                    raise ValueError("non-finite coordinate")
                coords.append((x, y))
        except (ValueError, ZeroDivisionError) as exc:
            raise PointFormatError(f"bad coordinate pair {tx!r} {ty!r}: {exc}",
                                   line_no=line_no) from None
    try:
        return PointSet(coords, backend=RATIONAL if rational else FLOATING)
    except ValueError as exc:
        raise PointFormatError(str(exc)) from None


def format_points(ps: PointSet) -> str:
    """Render a point set in the point-file format.

    Rational coordinates are always written as ``p/q`` (including a unit
    denominator) so a rational file re-parses to the rational backend
    without flags; float coordinates use the shortest exact repr.  The
    output ends with a newline.
    """
    lines = []
    for x, y in ps.points:
        if ps.is_rational:
            lines.append(
                f"{x.numerator}/{x.denominator} {y.numerator}/{y.denominator}"
            )
        else:
            lines.append(f"{x!r} {y!r}")
    return "\n".join(lines) + "\n"
