"""Geometric primitives shared by the whole workbench.

Everything is measured in units of the unit-disk radius.  The central
objects are the hexagonal lattice ``H_d`` generated by ``(d, 0)`` and
``(d/2, sqrt(3) d/2)``, the close packing ``H = H_2`` whose disks tile
the plane as densely as possible, and the *interstitium*: the region a
close packing leaves uncovered.  Covering is by closed disks, so a point
at distance exactly 1 from a disk center counts as covered and the
interstitium is an open set.

All functions here are pure; none mutate their arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SQRT3 = math.sqrt(3.0)

# Module-wide comparison tolerance.  All derived constants are algebraic
# in sqrt(3) and O(1) sized, so 1e-9 sits far above double rounding error.
EPS = 1e-9

# Radius of the snug disk in the gap between three mutually tangent unit
# disks ("hole"): 2/sqrt(3) - 1.
HOLE_RADIUS = 2.0 / SQRT3 - 1.0

# Area of the fundamental cell of the close packing and of the part of it
# the disks leave uncovered.
FUNDAMENTAL_AREA = 2.0 * SQRT3
INTERSTITIUM_AREA = 2.0 * SQRT3 - math.pi


def _finite(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Point2:
    """A point of the plane; constructors reject NaN and infinity."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", _finite(self.x, "x"))
        object.__setattr__(self, "y", _finite(self.y, "y"))

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> "Point2":
        return Point2(k * self.x, k * self.y)

    def dot(self, other: "Point2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def rotated(self, angle: float) -> "Point2":
        c, s = math.cos(angle), math.sin(angle)
        return Point2(c * self.x - s * self.y, s * self.x + c * self.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


ORIGIN = Point2(0.0, 0.0)


@dataclass(frozen=True)
class Disk:
    center: Point2
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "radius", _finite(self.radius, "radius"))
        if self.radius <= 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")

    def contains(self, p: Point2, tol: float = 0.0) -> bool:
        return self.center.dist(p) <= self.radius + tol


@dataclass(frozen=True)
class Pose:
    """Rigid motion: rotate by ``angle`` about the origin, then translate."""

    angle: float = 0.0
    shift: Point2 = field(default_factory=lambda: ORIGIN)

    def __post_init__(self):
        a = _finite(self.angle, "angle") % (2.0 * math.pi)
        if a < 0.0:
            a += 2.0 * math.pi
        object.__setattr__(self, "angle", a)

    def apply(self, p: Point2) -> Point2:
        return p.rotated(self.angle) + self.shift

    def unapply(self, p: Point2) -> Point2:
        return (p - self.shift).rotated(-self.angle)


IDENTITY_POSE = Pose()


@dataclass(frozen=True)
class HexLattice:
    """Hexagonal lattice of minimum distance ``min_dist`` under a pose.

    Before the pose is applied the basis vectors are ``(d, 0)`` and
    ``(d/2, sqrt(3) d/2)``.  The close packing lattice is ``HexLattice(2)``.
    """

    min_dist: float
    pose: Pose = field(default_factory=lambda: IDENTITY_POSE)

    def __post_init__(self):
        object.__setattr__(self, "min_dist", _finite(self.min_dist, "min_dist"))
        if self.min_dist <= 0.0:
            raise ValueError(f"min_dist must be positive, got {self.min_dist}")

    def basis(self) -> tuple[Point2, Point2]:
        d = self.min_dist
        return Point2(d, 0.0), Point2(0.5 * d, 0.5 * SQRT3 * d)

    def point(self, i: int, j: int) -> Point2:
        d = self.min_dist
        return self.pose.apply(Point2(d * (i + 0.5 * j), d * 0.5 * SQRT3 * j))

    @property
    def covering_radius(self) -> float:
        return self.min_dist / SQRT3

    def deep_hole(self) -> Point2:
        """A point realizing the covering radius (triangle barycenter)."""
        b1, b2 = self.basis()
        return self.pose.apply((b1 + b2).scaled(1.0 / 3.0))


CLOSE_PACKING = HexLattice(2.0)


# ---------------------------------------------------------------------------
# Lattice nearest-point machinery.
#
# In fractional coordinates (a, b) with p = a*b1 + b*b2 the Voronoi cell of
# the origin has fractional extent at most 2/3, so the nearest lattice point
# always lies in the 3x3 block of indices around (round(a), round(b)).
# ---------------------------------------------------------------------------

_NEIGHBOR_OFFSETS = [(di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1)]


def _fractional_coords(x: float, y: float, d: float) -> tuple[float, float]:
    b = 2.0 * y / (d * SQRT3)
    a = x / d - 0.5 * b
    return a, b


def _nearest_candidates(x: float, y: float, d: float):
    """Yield (i, j, residue_x, residue_y, dist) for the 3x3 candidate block."""
    a, b = _fractional_coords(x, y, d)
    i0, j0 = round(a), round(b)
    for di, dj in _NEIGHBOR_OFFSETS:
        i, j = i0 + di, j0 + dj
        vx = d * (i + 0.5 * j)
        vy = d * 0.5 * SQRT3 * j
        rx, ry = x - vx, y - vy
        yield i, j, rx, ry, math.hypot(rx, ry)


def nearest_lattice_point(p: Point2, lattice: HexLattice = CLOSE_PACKING) -> tuple[Point2, float]:
    """Closest lattice point to ``p`` and its distance.

    The distance never exceeds the covering radius ``d/sqrt(3)``, attained
    at the barycenters of lattice triangles.
    """
    w = lattice.pose.unapply(p)
    best = None
    for i, j, _rx, _ry, dist in _nearest_candidates(w.x, w.y, lattice.min_dist):
        if best is None or dist < best[2]:
            best = (i, j, dist)
    i, j, dist = best
    return lattice.point(i, j), dist


def reduce_to_fundamental(p: Point2, lattice: HexLattice = CLOSE_PACKING) -> Point2:
    """Representative of ``p`` modulo the lattice translation group.

    The canonical cell is the Voronoi cell of the origin: the returned
    point is the minimum-norm residue of ``p``, with ties on the cell
    boundary broken toward the lexicographically smallest representative.
    """
    # Lattice vectors are unaffected by the pose's translation, so only the
    # rotation enters the reduction.
    q = p.rotated(-lattice.pose.angle)
    candidates = []
    for _i, _j, rx, ry, dist in _nearest_candidates(q.x, q.y, lattice.min_dist):
        candidates.append((dist, rx, ry))
    best_dist = min(c[0] for c in candidates)
    ties = [c for c in candidates if c[0] <= best_dist + 1e-12]
    reps = [Point2(rx, ry).rotated(lattice.pose.angle) for _d, rx, ry in ties]
    reps.sort(key=lambda r: (r.x, r.y))
    return reps[0]


def lattice_distances_sq(xy: np.ndarray, min_dist: float = 2.0) -> np.ndarray:
    """Squared distance from each row of ``xy`` to the identity-pose ``H_d``.

    Vectorized hot path used by the certifiers and Monte Carlo estimators.
    """
    xy = np.asarray(xy, dtype=float)
    x, y = xy[..., 0], xy[..., 1]
    d = min_dist
    b = y * (2.0 / (d * SQRT3))
    a = x * (1.0 / d) - 0.5 * b
    i0, j0 = np.rint(a), np.rint(b)
    rx0 = x - d * (i0 + 0.5 * j0)
    ry0 = y - (d * 0.5 * SQRT3) * j0
    best = rx0 * rx0 + ry0 * ry0
    for di, dj in _NEIGHBOR_OFFSETS:
        if di == 0 and dj == 0:
            continue
        cx = d * (di + 0.5 * dj)
        cy = d * 0.5 * SQRT3 * dj
        rx = rx0 - cx
        ry = ry0 - cy
        np.minimum(best, rx * rx + ry * ry, out=best)
    return best


def lattice_distances(xy: np.ndarray, min_dist: float = 2.0) -> np.ndarray:
    """Distance from each row of ``xy`` to the identity-pose lattice ``H_d``."""
    return np.sqrt(lattice_distances_sq(xy, min_dist))


def point_in_interstitium(p: Point2, t: Point2 = ORIGIN) -> bool:
    """True iff ``p`` is uncovered by closed unit disks centered on ``H + t``.

    Distance exactly 1 from the nearest center counts as covered.
    """
    w = p - t
    _, dist = nearest_lattice_point(w, CLOSE_PACKING)
    return dist > 1.0


# ---------------------------------------------------------------------------
# Minimum enclosing circle (Welzl's recursion).
# ---------------------------------------------------------------------------


def _circle_two(a: Point2, b: Point2) -> tuple[Point2, float]:
    center = Point2(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
    return center, max(center.dist(a), center.dist(b))


def _circle_three(a: Point2, b: Point2, c: Point2) -> tuple[Point2, float]:
    ax, ay = b.x - a.x, b.y - a.y
    bx, by = c.x - a.x, c.y - a.y
    den = 2.0 * (ax * by - ay * bx)
    if abs(den) < 1e-14 * max(1.0, abs(ax * by), abs(ay * bx)):
        # Collinear or duplicated support: fall back to the widest pair.
        pairs = [_circle_two(a, b), _circle_two(a, c), _circle_two(b, c)]
        return max(pairs, key=lambda cr: cr[1])
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    ux = (by * a2 - ay * b2) / den
    uy = (ax * b2 - bx * a2) / den
    center = Point2(a.x + ux, a.y + uy)
    return center, max(center.dist(a), center.dist(b), center.dist(c))


def _in_circle(p: Point2, circle: tuple[Point2, float]) -> bool:
    center, radius = circle
    return center.dist(p) <= radius * (1.0 + 1e-12) + 1e-14


def min_enclosing_circle(points) -> tuple[Point2, float]:
    """Smallest circle containing every input point.

    Exact for support sets of up to three points; degenerate inputs
    (duplicates, collinear triples) are handled by the support recursion.
    """
    pts = list(points)
    if not pts:
        raise ValueError("min_enclosing_circle needs at least one point")
    # Deterministic shuffle keeps the incremental passes near-linear on
    # adversarial orderings without changing the (unique) result.
    order = np.random.default_rng(0x5EED).permutation(len(pts))
    pts = [pts[k] for k in order]

    circle = (pts[0], 0.0)
    for k in range(1, len(pts)):
        if not _in_circle(pts[k], circle):
            circle = _mec_with_one(pts[:k], pts[k])
    return circle


def _mec_with_one(pts: list[Point2], q: Point2) -> tuple[Point2, float]:
    circle = (q, 0.0)
    for k in range(len(pts)):
        if not _in_circle(pts[k], circle):
            circle = _mec_with_two(pts[:k], pts[k], q)
    return circle


def _mec_with_two(pts: list[Point2], q1: Point2, q2: Point2) -> tuple[Point2, float]:
    circle = _circle_two(q1, q2)
    for p in pts:
        if not _in_circle(p, circle):
            circle = _circle_three(q1, q2, p)
    return circle


# ---------------------------------------------------------------------------
# Monte Carlo estimate of the interstitium area per fundamental cell.
# ---------------------------------------------------------------------------


def interstitium_area_mc(
    samples: int, rng_seed: int = 0, min_dist: float = 2.0
) -> tuple[float, float]:
    """Monte Carlo estimate of the uncovered area per fundamental cell.

    Deterministic for a given seed.  Returns ``(estimate, std_error)``;
    the exact value is ``2*sqrt(3) - pi``.  Only the close packing
    (``min_dist == 2``) is supported.
    """
    if samples < 10_000:
        raise ValueError(f"need at least 1e4 samples, got {samples}")
    if min_dist != 2.0:
        raise ValueError("only the close packing lattice (min_dist=2) is supported")
    rng = np.random.default_rng(rng_seed)
    uv = rng.random((samples, 2))
    # p = u*b1 + v*b2 with b1=(2,0), b2=(1, sqrt(3)).
    xy = np.empty((samples, 2))
    xy[:, 0] = 2.0 * uv[:, 0] + uv[:, 1]
    xy[:, 1] = SQRT3 * uv[:, 1]
    uncovered = lattice_distances(xy, 2.0) > 1.0
    phat = float(np.mean(uncovered))
    estimate = phat * FUNDAMENTAL_AREA
    std_error = FUNDAMENTAL_AREA * math.sqrt(max(phat * (1.0 - phat), 0.0) / samples)
    return estimate, std_error
