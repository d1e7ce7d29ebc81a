"""Numerical verification of the three packing lemmas.

Lemma 1 (tangency): around any disk of a packing, every closed arc of
central angle pi/3 admits a tangent hole disjoint from the whole packing.
Checked against random saturated packings built by sequential adsorption.

Lemma 2 (rectangle): a unit disk centered anywhere in the quadrant square
of the construction frame admits a contiguous arc of hole tangencies of
angle at least pi/3 with all holes inside the rectangle.  Checked by an
exact circular-interval sweep over a grid of centers.

Lemma 3 (lattice sampling): a hex lattice with spacing below sqrt(3)*r
puts a point in every hole, and the threshold is sharp.  Checked by
sampling hole centers over a fundamental cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import HOLE_RADIUS, SQRT3, HexLattice, Point2, lattice_distances
from .parallel import ordered_map

TANGENCY_RADIUS = 1.0 + HOLE_RADIUS  # distance of a tangent hole's center
MAX_EXCLUSION_DIST = 2.0 * TANGENCY_RADIUS  # beyond this a disk excludes nothing
TWO_PI = 2.0 * math.pi
THIRD_PI = math.pi / 3.0


def excluded_halfangle(s: float) -> float:
    """Half-angle of the tangency arc a neighbor at center distance ``s``
    excludes on the base disk.

    A hole tangent at angle psi from the neighbor direction sits at
    distance sqrt((1+r)^2 + s^2 - 2(1+r)s cos(psi)) from the neighbor; it
    overlaps iff that is below 1+r, i.e. iff cos(psi) > s / (2(1+r)).
    """
    if s < 2.0 - 1e-12:
        raise ValueError(f"packing requires center distance >= 2, got {s}")
    x = s / MAX_EXCLUSION_DIST
    if x >= 1.0:
        return 0.0
    return math.acos(x)


@dataclass
class TangencyArcSet:
    """Maximal open angular intervals excluded for hole tangency.

    Intervals are (start, length) with start in [0, 2pi); they are sorted
    and, for a valid packing, pairwise disjoint with length <= pi/3.
    """

    base_center: Point2
    intervals: list[tuple[float, float]]

    def contains(self, angle: float) -> bool:
        a = angle % TWO_PI
        return any((a - s) % TWO_PI < ln for s, ln in self.intervals)

    def total_length(self) -> float:
        return sum(ln for _, ln in self.intervals)


def tangency_arcs(base_center: Point2, neighbors) -> TangencyArcSet:
    """Excluded arcs induced by each neighbor disk within reach."""
    intervals = []
    for c in neighbors:
        s = base_center.dist(c)
        alpha = excluded_halfangle(s)
        if alpha <= 0.0:
            continue
        theta = math.atan2(c.y - base_center.y, c.x - base_center.x)
        start = (theta - alpha) % TWO_PI
        intervals.append((start, 2.0 * alpha))
    intervals.sort()
    return TangencyArcSet(base_center=base_center, intervals=intervals)


# ---------------------------------------------------------------------------
# Lemma 1: random saturated packings
# ---------------------------------------------------------------------------


def _rsa_ring(
    rng: np.random.Generator,
    lo: float,
    hi: float,
    existing: list[np.ndarray],
    max_rejections: int,
    batch: int = 2048,
) -> list[np.ndarray]:
    """Sequential adsorption of unit disks with centers in the annulus
    [lo, hi); stops after ``max_rejections`` consecutive failed proposals."""
    accepted = list(existing)
    rejections = 0
    while rejections < max_rejections:
        ss = rng.uniform(lo, hi, batch)
        ph = rng.uniform(0.0, TWO_PI, batch)
        cand = np.column_stack([ss * np.cos(ph), ss * np.sin(ph)])
        if accepted:
            arr = np.array(accepted)
            ok = ((cand[:, None, :] - arr[None, :, :]) ** 2).sum(axis=2).min(axis=1) >= 4.0
        else:
            ok = np.ones(batch, dtype=bool)
        if not ok.any():
            rejections += batch
            continue
        first = int(np.argmax(ok))
        if rejections + first >= max_rejections:
            break
        accepted.append(cand[first])
        rejections = 0
    return accepted[len(existing):]


def saturated_packing(rng: np.random.Generator) -> np.ndarray:
    """Disks around a base unit disk at the origin: a saturated ring of
    near neighbors (the only ones that can constrain tangent holes),
    plus farther scenery disks."""
    near = _rsa_ring(rng, 2.0, MAX_EXCLUSION_DIST, [], max_rejections=10_000)
    far = _rsa_ring(rng, MAX_EXCLUSION_DIST, 5.0, near, max_rejections=1_000)
    disks = near + far
    return np.array(disks) if disks else np.zeros((0, 2))


@dataclass
class Lemma1Report:
    trials: int
    arc_checks: int
    failures: list[dict] = field(default_factory=list)
    max_interval: float = 0.0
    max_interval_sum: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures


def _check_packing(
    centers: np.ndarray, arc_checks: int
) -> tuple[list[str], float, float]:
    """Run the three Lemma 1 assertions against one packing.

    Returns (failure descriptions, max interval length, total length)."""
    base = Point2(0.0, 0.0)
    near = centers[np.linalg.norm(centers, axis=1) < MAX_EXCLUSION_DIST] if len(centers) else centers
    arcs = tangency_arcs(base, [Point2(x, y) for x, y in near])
    failures: list[str] = []
    iv = arcs.intervals
    max_len = max((ln for _, ln in iv), default=0.0)
    total = arcs.total_length()

    for start, ln in iv:
        if ln > THIRD_PI + 1e-9:
            failures.append(f"interval length {ln} exceeds pi/3 at {start}")
    if len(iv) > 1:
        for idx in range(len(iv)):
            s0, l0 = iv[idx]
            s1, _ = iv[(idx + 1) % len(iv)]
            gap = (s1 - s0) % TWO_PI
            if gap < l0 - 1e-12:
                failures.append(f"interval at {s0} overlaps its successor at {s1}")
    if total > TWO_PI + 1e-9:
        failures.append(f"total excluded length {total} exceeds 2pi")

    # Every closed pi/3 arc must contain an allowed tangency whose hole
    # clears the whole packing.
    thetas = np.arange(arc_checks) * (TWO_PI / arc_checks)
    candidate = thetas.copy()
    if iv:
        starts = np.array([s for s, _ in iv])
        lens = np.array([ln for _, ln in iv])
        rel = (thetas[:, None] - starts[None, :]) % TWO_PI
        # Excluded intervals are open; an angle exactly at an endpoint is
        # an allowed tangency.
        inside = (rel > 1e-12) & (rel < lens[None, :] - 1e-12)
        which = inside.argmax(axis=1)
        hit = inside.any(axis=1)
        ends = (starts + lens) % TWO_PI
        candidate[hit] = ends[which[hit]]
        delta = (candidate - thetas) % TWO_PI
        bad = delta > THIRD_PI + 1e-9
        if bad.any():
            failures.append(
                f"{int(bad.sum())} arcs of pi/3 contain no allowed tangency"
            )
    hole_x = TANGENCY_RADIUS * np.cos(candidate)
    hole_y = TANGENCY_RADIUS * np.sin(candidate)
    if len(centers):
        d2 = (hole_x[:, None] - centers[None, :, 0]) ** 2 + (
            hole_y[:, None] - centers[None, :, 1]
        ) ** 2
        min_d = np.sqrt(d2.min(axis=1))
        overlap = min_d < TANGENCY_RADIUS - 1e-9
        if overlap.any():
            failures.append(
                f"{int(overlap.sum())} candidate holes overlap a packed disk"
            )
    return failures, max_len, total


def verify_lemma1(
    trials: int, rng_seed: int = 0, arc_checks: int = 10_000, threads: int | None = None
) -> Lemma1Report:
    """Random saturated packings; each must satisfy all Lemma 1 assertions."""
    if trials < 1:
        raise ValueError("need at least one trial")

    def run(trial: int):
        rng = np.random.default_rng([rng_seed, trial])
        centers = saturated_packing(rng)
        fails, max_len, total = _check_packing(centers, arc_checks)
        return trial, fails, max_len, total, centers

    report = Lemma1Report(trials=trials, arc_checks=arc_checks)
    for trial, fails, max_len, total, centers in ordered_map(
        run, range(trials), threads=threads
    ):
        report.max_interval = max(report.max_interval, max_len)
        report.max_interval_sum = max(report.max_interval_sum, total)
        if fails:
            report.failures.append(
                {
                    "trial": trial,
                    "failures": fails,
                    "packing": [[float(x), float(y)] for x, y in centers],
                }
            )
    return report


# ---------------------------------------------------------------------------
# Lemma 2: construction frame and sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RectangleFrame:
    """Closed-form construction frame: hole centers E..J at their tangency
    positions inside the rectangle, M/N/K/L spanning the quadrant square."""

    e: Point2
    f: Point2
    g: Point2
    h: Point2
    i: Point2
    j: Point2
    k: Point2
    l: Point2
    m: Point2
    n: Point2

    @property
    def half_width(self) -> float:
        return 1.0 + 2.0 * HOLE_RADIUS

    @property
    def half_height(self) -> float:
        return (1.0 + 3.0 * HOLE_RADIUS) / 2.0


def build_rectangle_frame() -> RectangleFrame:
    r = HOLE_RADIUS
    return RectangleFrame(
        e=Point2(0.0, 0.0),
        f=Point2(1.0 + r, 0.0),
        g=Point2(1.0, (1.0 + r) / 2.0),
        h=Point2(1.0, -(1.0 + r) / 2.0),
        i=Point2(-(1.0 + r), 0.0),
        j=Point2(-r, (1.0 + r) / 2.0),
        k=Point2(-(1.0 + r), (1.0 + r) / 2.0),
        l=Point2(0.0, (1.0 + r) / 2.0),
        m=Point2(-(1.0 + r), 1.0 + r),
        n=Point2(0.0, 1.0 + r),
    )


@dataclass
class IdentityCheck:
    name: str
    value: float
    expected: float

    @property
    def ok(self) -> bool:
        return abs(self.value - self.expected) <= 1e-12


@dataclass
class FrameReport:
    checks: list[IdentityCheck]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed_names(self) -> list[str]:
        return [c.name for c in self.checks if not c.ok]


def verify_frame_identities(frame: RectangleFrame | None = None) -> FrameReport:
    """The tangency identities that pin down the rectangle dimensions."""
    fr = frame or build_rectangle_frame()
    r = HOLE_RADIUS
    one_r = 1.0 + r
    checks = [
        IdentityCheck("d(I,E)", fr.i.dist(fr.e), one_r),
        IdentityCheck("d(E,F)", fr.e.dist(fr.f), one_r),
        IdentityCheck("d(E,G)", fr.e.dist(fr.g), one_r),
        IdentityCheck("d(E,H)", fr.e.dist(fr.h), one_r),
        IdentityCheck("d(G,H)+2r", fr.g.dist(fr.h) + 2 * r, 1.0 + 3.0 * r),
        IdentityCheck("d(I,J)", fr.i.dist(fr.j), one_r),
        IdentityCheck("d(J,M)", fr.j.dist(fr.m), one_r),
        IdentityCheck("d(I,M)", fr.i.dist(fr.m), one_r),
        IdentityCheck("d(E,L)", fr.e.dist(fr.l), one_r / 2.0),
        IdentityCheck(
            "angle(G,E,H)",
            abs(
                math.atan2(fr.g.y, fr.g.x) - math.atan2(fr.h.y, fr.h.x)
            ),
            THIRD_PI,
        ),
        IdentityCheck("F to right side", fr.half_width - fr.f.x, r),
        IdentityCheck("G to top side", fr.half_height - fr.g.y, r),
        IdentityCheck("H to bottom side", fr.h.y + fr.half_height, r),
        IdentityCheck("I to left side", fr.i.x + fr.half_width, r),
        IdentityCheck("J to top side", fr.half_height - fr.j.y, r),
        IdentityCheck("square side IE", fr.i.dist(fr.e), one_r),
        IdentityCheck("square side EN", fr.e.dist(fr.n), one_r),
        IdentityCheck("square side NM", fr.n.dist(fr.m), one_r),
        IdentityCheck("square side MI", fr.m.dist(fr.i), one_r),
        IdentityCheck("square diagonal", fr.i.dist(fr.n), one_r * math.sqrt(2.0)),
        IdentityCheck("K on square edge", fr.k.dist(fr.m), one_r / 2.0),
        IdentityCheck("L midpoint EN", fr.l.dist(fr.n), one_r / 2.0),
    ]
    return FrameReport(checks=checks)


# -- circular interval sets (closed arcs on [0, 2pi)) -----------------------


def _arcs_cos_between(lo: float, hi: float) -> list[tuple[float, float]] | None:
    """Closed phi-arcs with cos(phi) in [lo, hi]; None means the full circle."""
    if lo <= -1.0 and hi >= 1.0:
        return None
    if lo > 1.0 or hi < -1.0 or lo > hi:
        return []
    arcs = []
    upper = math.acos(max(min(hi, 1.0), -1.0))  # cos phi <= hi: phi in [upper, 2pi-upper]
    lower = math.acos(max(min(lo, 1.0), -1.0))  # cos phi >= lo: |phi| <= lower
    # Intersection of [upper, 2pi-upper] with [0, lower] u [2pi-lower, 2pi).
    a, b = upper, lower
    out = []
    if b >= a:
        out.append((a, b))
        out.append((TWO_PI - b, TWO_PI - a))
    return _normalize_arcs(out)


def _arcs_sin_between(lo: float, hi: float) -> list[tuple[float, float]] | None:
    """Closed phi-arcs with sin(phi) in [lo, hi]; None means the full circle."""
    if lo <= -1.0 and hi >= 1.0:
        return None
    if lo > 1.0 or hi < -1.0 or lo > hi:
        return []
    a_hi = math.asin(max(min(hi, 1.0), -1.0))
    a_lo = math.asin(max(min(lo, 1.0), -1.0))
    upper_set = [(math.pi - a_hi, TWO_PI + a_hi)]  # sin <= hi
    lower_set = [(a_lo, math.pi - a_lo)]  # sin >= lo
    out = []
    for s0, e0 in upper_set:
        for s1, e1 in lower_set:
            # Compare on the universal cover: shift candidates by 2pi.
            for shift in (-TWO_PI, 0.0, TWO_PI):
                s, e = max(s0, s1 + shift), min(e0, e1 + shift)
                if e > s - 1e-15:
                    out.append((s, e))
    return _normalize_arcs(out)


def _normalize_arcs(arcs: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Map arcs into [0, 2pi), splitting any that cross zero."""
    out = []
    for s, e in arcs:
        if e - s >= TWO_PI:
            return [(0.0, TWO_PI)]
        s %= TWO_PI
        e = s + (e - s)
        if e <= TWO_PI:
            out.append((s, e))
        else:
            out.append((s, TWO_PI))
            out.append((0.0, e - TWO_PI))
    out.sort()
    return out


def _intersect_arc_sets(
    a: list[tuple[float, float]] | None, b: list[tuple[float, float]] | None
) -> list[tuple[float, float]] | None:
    if a is None:
        return b
    if b is None:
        return a
    out = []
    for s0, e0 in a:
        for s1, e1 in b:
            s, e = max(s0, s1), min(e0, e1)
            if e >= s:
                out.append((s, e))
    out.sort()
    return out


def _longest_closed_arc(arcs: list[tuple[float, float]] | None) -> float:
    """Longest contiguous closed arc, merging touching pieces and wrapping."""
    if arcs is None:
        return TWO_PI
    if not arcs:
        return 0.0
    merged = []
    for s, e in arcs:
        if merged and s <= merged[-1][1] + 1e-12:
            merged[-1] = (merged[-1][0], max(merged[-1][1], e))
        else:
            merged.append((s, e))
    # Wrap: join a piece ending at 2pi with one starting at 0.
    if len(merged) > 1 and merged[0][0] <= 1e-12 and merged[-1][1] >= TWO_PI - 1e-12:
        s, e = merged.pop()
        first = merged.pop(0)
        merged.append((s, e + (first[1] - first[0])))
    if not merged:
        return 0.0
    return min(max(e - s for s, e in merged), TWO_PI)


def longest_admissible_arc(center: Point2) -> float:
    """Longest contiguous closed arc of tangency angles phi such that the
    hole at center + (1+r)(cos, sin)(phi) stays at distance >= r from all
    four rectangle sides."""
    fr_half_w = 1.0 + 2.0 * HOLE_RADIUS
    fr_half_h = (1.0 + 3.0 * HOLE_RADIUS) / 2.0
    cx_lo = (-(fr_half_w - HOLE_RADIUS) - center.x) / TANGENCY_RADIUS
    cx_hi = ((fr_half_w - HOLE_RADIUS) - center.x) / TANGENCY_RADIUS
    cy_lo = (-(fr_half_h - HOLE_RADIUS) - center.y) / TANGENCY_RADIUS
    cy_hi = ((fr_half_h - HOLE_RADIUS) - center.y) / TANGENCY_RADIUS
    arcs = _intersect_arc_sets(
        _arcs_cos_between(cx_lo, cx_hi), _arcs_sin_between(cy_lo, cy_hi)
    )
    return _longest_closed_arc(arcs)


@dataclass
class Lemma2Sweep:
    grid: int
    min_arc: float
    argmin: Point2
    minima: list[Point2]

    @property
    def passed(self) -> bool:
        return self.min_arc >= THIRD_PI - 1e-9


def sweep_lemma2(grid: int = 200, threads: int | None = None) -> Lemma2Sweep:
    """Minimum longest-arc over a grid of disk centers in the quadrant
    square S = [-(1+r), 0] x [0, 1+r]."""
    if grid < 100:
        raise ValueError("grid must be at least 100x100")
    one_r = 1.0 + HOLE_RADIUS
    xs = np.linspace(-one_r, 0.0, grid)
    ys = np.linspace(0.0, one_r, grid)

    def run_column(ix: int):
        col = []
        for iy in range(grid):
            col.append(longest_admissible_arc(Point2(xs[ix], ys[iy])))
        return col

    values = np.array(ordered_map(run_column, range(grid), threads=threads))
    min_arc = float(values.min())
    minima = [
        Point2(xs[ix], ys[iy])
        for ix, iy in zip(*np.nonzero(values <= min_arc + 1e-9))
    ]
    k = int(np.argmin(values))
    argmin = Point2(xs[k // grid], ys[k % grid])
    return Lemma2Sweep(grid=grid, min_arc=min_arc, argmin=argmin, minima=minima)


# ---------------------------------------------------------------------------
# Lemma 3: hole sampling by lattices
# ---------------------------------------------------------------------------


@dataclass
class Lemma3Report:
    d: float
    trials: int
    failures: list[tuple[float, float]]
    witness_center: tuple[float, float]
    witness_distance: float
    spacing_ratio: float  # d / (sqrt(3) r); > 1 means sampling must fail

    @property
    def passed(self) -> bool:
        if self.spacing_ratio < 1.0 - 1e-12:
            return not self.failures
        if self.spacing_ratio > 1.0 + 1e-12:
            return self.witness_distance > HOLE_RADIUS
        return abs(self.witness_distance - HOLE_RADIUS) <= 1e-12


def verify_lemma3(trials: int, d: float, rng_seed: int = 0) -> Lemma3Report:
    """Sample hole centers over one fundamental cell of H_d; record any
    hole missing every lattice point, plus the deep-hole witness."""
    if d <= 0:
        raise ValueError("lattice spacing must be positive")
    rng = np.random.default_rng(rng_seed)
    uv = rng.random((trials, 2))
    xy = np.empty((trials, 2))
    xy[:, 0] = d * (uv[:, 0] + 0.5 * uv[:, 1])
    xy[:, 1] = d * 0.5 * SQRT3 * uv[:, 1]
    dists = lattice_distances(xy, d)
    missing = dists > HOLE_RADIUS
    failures = [(float(x), float(y)) for x, y in xy[missing][:32]]
    hole = HexLattice(d).deep_hole()
    witness_distance = float(lattice_distances(np.array([[hole.x, hole.y]]), d)[0])
    return Lemma3Report(
        d=d,
        trials=trials,
        failures=failures,
        witness_center=(hole.x, hole.y),
        witness_distance=witness_distance,
        spacing_ratio=d / (SQRT3 * HOLE_RADIUS),
    )
