"""Build the hard point configuration: a hex lattice clipped to a rectangle.

The rectangle of width 2+4r and height 1+3r traps a hole in any packing of
unit disks, and a hex lattice with spacing below sqrt(3)*r puts a lattice
point inside every hole.  Intersecting the two therefore yields a point
set no packing can fully cover; the relative pose is optimized to make
that set as small as possible.  At the critical spacing the best pose
found keeps 55 lattice points strictly inside with positive boundary
clearance, so the lattice can be compressed below the critical spacing
without the set changing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import EPS, HOLE_RADIUS, SQRT3, Point2, Pose
from .parallel import ordered_map

RECT_WIDTH = 2.0 + 4.0 * HOLE_RADIUS
RECT_HEIGHT = 1.0 + 3.0 * HOLE_RADIUS

# Critical lattice spacing sqrt(3)*r = 2 - sqrt(3): below it every hole
# contains a lattice point.
CRITICAL_SPACING = SQRT3 * HOLE_RADIUS

# Vertical separation of the lattice rows immediately outside the rectangle
# when built at the critical spacing with the optimal pose; exceeds the
# rectangle height, which is what makes compression possible.
OUTER_ROW_SEPARATION = 11.0 * SQRT3 * HOLE_RADIUS / 2.0


@dataclass(frozen=True)
class HardRectangle:
    """The hole-trapping rectangle.

    The dimensions are fixed by the tangency construction; only the pose
    is free.  Overriding them produces a rectangle without the trapping
    property and is meant for degenerate test cases only.
    """

    pose: Pose = field(default_factory=Pose)
    width: float = RECT_WIDTH
    height: float = RECT_HEIGHT


@dataclass
class HardConfiguration:
    """Lattice points strictly inside the rectangle.

    ``boundary_clearance`` is the smallest distance from any included point
    to the rectangle boundary or from any nearby excluded lattice point to
    the rectangle; positive clearance certifies that a small compression
    of the lattice changes nothing.
    """

    points: list[Point2]
    lattice_min_dist: float
    pose: Pose
    boundary_clearance: float
    rectangle: HardRectangle = field(default_factory=HardRectangle)

    def __len__(self) -> int:
        return len(self.points)


def reference_pose(d: float) -> Pose:
    """The closed-form pose realizing the 55-point optimum.

    One lattice axis runs parallel to the short rectangle side (rotation
    pi/6), and the quarter-spacing vertical shift centers ten point rows
    inside the rectangle, five per column parity.
    """
    return Pose(math.pi / 6.0, Point2(0.0, d / 4.0))


def _lattice_points_near_rect(
    d: float, pose: Pose, rect: HardRectangle, margin: float
) -> np.ndarray:
    """All posed lattice points within ``margin`` of the rectangle, in the
    rectangle frame.  Enumeration is exhaustive over an index range wide
    enough to contain the scan box."""
    half_w = 0.5 * rect.width
    half_h = 0.5 * rect.height
    # Rectangle center in the lattice's unposed frame.
    center_world = rect.pose.shift
    cw = Point2(center_world.x, center_world.y)
    c_unposed = (cw - pose.shift).rotated(-pose.angle)
    radius = math.hypot(half_w, half_h) + margin + d
    reach = int(math.ceil(radius * 2.0 / (d * SQRT3))) + 1
    cb = round(2.0 * c_unposed.y / (d * SQRT3))
    ca = round(c_unposed.x / d - 0.5 * cb)
    i = np.arange(ca - reach, ca + reach + 1)
    j = np.arange(cb - reach, cb + reach + 1)
    ii, jj = np.meshgrid(i, j, indexing="ij")
    px = d * (ii + 0.5 * jj).ravel()
    py = (d * 0.5 * SQRT3) * jj.ravel()
    # Pose the lattice, then move into the rectangle frame.
    ca_, sa = math.cos(pose.angle), math.sin(pose.angle)
    wx = ca_ * px - sa * py + pose.shift.x
    wy = sa * px + ca_ * py + pose.shift.y
    rb, rs = math.cos(rect.pose.angle), math.sin(rect.pose.angle)
    qx = rb * (wx - rect.pose.shift.x) + rs * (wy - rect.pose.shift.y)
    qy = -rs * (wx - rect.pose.shift.x) + rb * (wy - rect.pose.shift.y)
    keep = (np.abs(qx) <= half_w + margin) & (np.abs(qy) <= half_h + margin)
    return np.column_stack([qx[keep], qy[keep]])


def generate_configuration(
    d: float,
    pose: Pose,
    rect: HardRectangle | None = None,
    scan_margin: float | None = None,
) -> HardConfiguration:
    """All lattice points of the posed ``H_d`` strictly inside the rectangle,
    with the boundary clearance of included and nearby excluded points."""
    if d <= 0:
        raise ValueError("lattice spacing must be positive")
    rect = rect or HardRectangle()
    margin = 2.0 * d if scan_margin is None else scan_margin
    half_w = 0.5 * rect.width
    half_h = 0.5 * rect.height
    q = _lattice_points_near_rect(d, pose, rect, margin)
    inside = (np.abs(q[:, 0]) < half_w) & (np.abs(q[:, 1]) < half_h)
    qi = q[inside]
    qo = q[~inside]
    clearance = math.inf
    if len(qi):
        clearance = float(
            np.minimum(half_w - np.abs(qi[:, 0]), half_h - np.abs(qi[:, 1])).min()
        )
    if len(qo):
        ox = np.maximum(np.abs(qo[:, 0]) - half_w, 0.0)
        oy = np.maximum(np.abs(qo[:, 1]) - half_h, 0.0)
        clearance = min(clearance, float(np.sqrt(ox * ox + oy * oy).min()))
    if not math.isfinite(clearance):
        clearance = 0.0
    # Back to world coordinates.
    rb, rs = math.cos(rect.pose.angle), math.sin(rect.pose.angle)
    points = [
        Point2(
            rb * x - rs * y + rect.pose.shift.x,
            rs * x + rb * y + rect.pose.shift.y,
        )
        for x, y in qi
    ]
    points.sort(key=lambda p: (p.x, p.y))
    return HardConfiguration(
        points=points,
        lattice_min_dist=d,
        pose=pose,
        boundary_clearance=clearance,
        rectangle=rect,
    )


def verify_compressibility(cfg: HardConfiguration, eps: float = EPS) -> bool:
    """True iff no lattice point sits on the rectangle boundary, so the
    lattice can be compressed about the rectangle center without the
    contained point set changing."""
    return cfg.boundary_clearance > eps


def compressed(cfg: HardConfiguration, factor: float) -> HardConfiguration:
    """Rebuild with the lattice scaled about the rectangle center."""
    if not 0 < factor:
        raise ValueError("compression factor must be positive")
    center = cfg.rectangle.pose.shift
    new_shift = center + (cfg.pose.shift - center).scaled(factor)
    return generate_configuration(
        cfg.lattice_min_dist * factor,
        Pose(cfg.pose.angle, new_shift),
        rect=cfg.rectangle,
    )


def footnote_row_separation(cfg: HardConfiguration) -> float:
    """Vertical separation, in the rectangle frame, between the nearest
    excluded lattice rows above and below the rectangle (points within the
    horizontal extent only)."""
    rect = cfg.rectangle
    half_w = 0.5 * rect.width
    half_h = 0.5 * rect.height
    q = _lattice_points_near_rect(
        cfg.lattice_min_dist, cfg.pose, rect, 2.0 * cfg.lattice_min_dist
    )
    in_span = np.abs(q[:, 0]) < half_w
    above = q[in_span & (q[:, 1] > half_h)]
    below = q[in_span & (q[:, 1] < -half_h)]
    if not len(above) or not len(below):
        raise ValueError("no excluded rows found in the scan box")
    return float(above[:, 1].min() - below[:, 1].max())


# ---------------------------------------------------------------------------
# Pose optimization
# ---------------------------------------------------------------------------


def _pose_stats(d: float, angle: float, shift: Point2, rect: HardRectangle) -> tuple[int, float]:
    cfg = generate_configuration(d, Pose(angle, shift), rect=rect)
    return len(cfg.points), cfg.boundary_clearance


def _counts_for_angle(
    d: float, angle: float, steps: int, half_w: float, half_h: float
) -> np.ndarray:
    """Contained-point counts over the shift grid at one rotation angle."""
    c, s = math.cos(angle), math.sin(angle)
    u1 = np.array([d * c, d * s])
    u2 = np.array([d * (0.5 * c - 0.5 * SQRT3 * s), d * (0.5 * s + 0.5 * SQRT3 * c)])
    shift_reach = np.linalg.norm(u1) + np.linalg.norm(u2)
    radius = math.hypot(half_w, half_h) + shift_reach + d
    reach = int(math.ceil(radius * 2.0 / (d * SQRT3))) + 1
    rng_idx = np.arange(-reach, reach + 1)
    ii, jj = np.meshgrid(rng_idx, rng_idx, indexing="ij")
    px = d * (ii + 0.5 * jj).ravel()
    py = (d * 0.5 * SQRT3) * jj.ravel()
    wx = c * px - s * py
    wy = s * px + c * py
    near = (np.abs(wx) <= half_w + shift_reach) & (np.abs(wy) <= half_h + shift_reach)
    wx, wy = wx[near], wy[near]
    frac = np.arange(steps) / steps
    sx = np.add.outer(frac * u1[0], frac * u2[0]).ravel()
    sy = np.add.outer(frac * u1[1], frac * u2[1]).ravel()
    inside = (np.abs(wx[:, None] + sx[None, :]) < half_w) & (
        np.abs(wy[:, None] + sy[None, :]) < half_h
    )
    return inside.sum(axis=0), sx, sy


def optimize_pose(
    d: float,
    angle_steps: int = 720,
    shift_steps: int = 64,
    refine_rounds: int = 8,
    rect: HardRectangle | None = None,
    threads: int | None = None,
) -> tuple[Pose, int]:
    """Search rotation over [0, pi/3) and translation over one lattice cell
    for the pose minimizing the contained-point count.

    Hexagonal symmetry makes larger rotations redundant, lattice
    periodicity larger shifts.  Angles are evaluated in parallel and merged
    by (count, pose) with lexicographic ties, so threaded and serial runs
    agree.  The best grid pose is refined by coordinate descent; among
    equal counts the refinement prefers larger boundary clearance (a
    robustly compressible configuration).
    """
    if d > CRITICAL_SPACING * (1.0 + 1e-12):
        raise ValueError("spacing above sqrt(3)*r cannot pin every hole")
    rect = rect or HardRectangle()
    half_w, half_h = 0.5 * rect.width, 0.5 * rect.height

    def best_for_angle(angle: float) -> tuple[int, float, float, float]:
        counts, sx, sy = _counts_for_angle(d, angle, shift_steps, half_w, half_h)
        k = int(np.argmin(counts))
        return (int(counts[k]), angle, float(sx[k]), float(sy[k]))

    angles = [k * (math.pi / 3.0 / angle_steps) for k in range(angle_steps)]
    best = min(ordered_map(best_for_angle, angles, threads=threads))
    count0, angle0, sx0, sy0 = best

    # Coordinate-descent refinement on (count asc, clearance desc), ties
    # broken lexicographically on the pose.
    cur = (angle0, sx0, sy0)
    cur_count, cur_clear = _pose_stats(d, cur[0], Point2(cur[1], cur[2]), rect)
    d_angle = math.pi / 3.0 / angle_steps
    d_shift = d / shift_steps
    for _ in range(refine_rounds):
        improved = False
        for ia in (-2, -1, 0, 1, 2):
            for ix in (-2, -1, 0, 1, 2):
                for iy in (-2, -1, 0, 1, 2):
                    if ia == ix == iy == 0:
                        continue
                    cand = (
                        cur[0] + ia * d_angle,
                        cur[1] + ix * d_shift,
                        cur[2] + iy * d_shift,
                    )
                    count, clear = _pose_stats(d, cand[0], Point2(cand[1], cand[2]), rect)
                    key = (count, -clear, cand)
                    if key < (cur_count, -cur_clear, cur):
                        cur, cur_count, cur_clear = cand, count, clear
                        improved = True
        d_angle /= 3.0
        d_shift /= 3.0
        if not improved and d_shift < 1e-12:
            break
    pose = Pose(cur[0], Point2(cur[1], cur[2]))
    return pose, cur_count


# ---------------------------------------------------------------------------
# Serialization (decimal interchange round-trips exactly: repr floats)
# ---------------------------------------------------------------------------


def configuration_to_json(cfg: HardConfiguration) -> str:
    return json.dumps(
        {
            "d": cfg.lattice_min_dist,
            "pose": {
                "angle": cfg.pose.angle,
                "shift": [cfg.pose.shift.x, cfg.pose.shift.y],
            },
            "boundary_clearance": cfg.boundary_clearance,
            "points": [[p.x, p.y] for p in cfg.points],
        },
        indent=2,
    )


def configuration_from_json(text: str) -> HardConfiguration:
    data = json.loads(text)
    pose = Pose(data["pose"]["angle"], Point2(*data["pose"]["shift"]))
    return HardConfiguration(
        points=[Point2(x, y) for x, y in data["points"]],
        lattice_min_dist=data["d"],
        pose=pose,
        boundary_clearance=data.get("boundary_clearance", 0.0),
    )


def verify_configuration(cfg: HardConfiguration) -> bool:
    """Regenerate from (d, pose) and require the same point set and a
    positive clearance."""
    rebuilt = generate_configuration(cfg.lattice_min_dist, cfg.pose, rect=cfg.rectangle)
    if len(rebuilt.points) != len(cfg.points):
        return False
    got = sorted((p.x, p.y) for p in rebuilt.points)
    want = sorted((p.x, p.y) for p in cfg.points)
    if any(abs(a - x) > 1e-9 or abs(b - y) > 1e-9 for (a, b), (x, y) in zip(got, want)):
        return False
    return verify_compressibility(rebuilt)


def hard_55_configuration(d_fraction: float = 1.0 - 1e-6) -> HardConfiguration:
    """The canonical 55-point configuration at ``d_fraction`` of the
    critical spacing, built from the closed-form pose."""
    d = CRITICAL_SPACING * d_fraction
    return generate_configuration(d, reference_pose(d))
