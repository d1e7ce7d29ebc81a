"""Hard-configuration builder: rectangle, lattice clipping, pose search."""

import math

import numpy as np
import pytest

from pc2.config_builder import (
    CRITICAL_SPACING,
    OUTER_ROW_SEPARATION,
    RECT_HEIGHT,
    RECT_WIDTH,
    HardRectangle,
    compressed,
    configuration_from_json,
    configuration_to_json,
    footnote_row_separation,
    generate_configuration,
    hard_55_configuration,
    optimize_pose,
    reference_pose,
    verify_compressibility,
    verify_configuration,
)
from pc2.geometry import HOLE_RADIUS, SQRT3, Point2, Pose


# ---------------------------------------------------------------------------
# Oracle: exhaustive bounding-box scan, independent of the fast path.
# ---------------------------------------------------------------------------


def brute_force_count(d: float, pose: Pose, margin: float = None) -> int:
    """Count lattice points strictly inside the axis-aligned rectangle by a
    plain double loop over a bounding box 2d larger than the rectangle."""
    margin = 2 * d if margin is None else margin
    half_w, half_h = RECT_WIDTH / 2, RECT_HEIGHT / 2
    reach = int((math.hypot(half_w, half_h) + margin) / d * 2) + 3
    c, s = math.cos(pose.angle), math.sin(pose.angle)
    count = 0
    for i in range(-reach, reach + 1):
        for j in range(-reach, reach + 1):
            px = d * (i + 0.5 * j)
            py = d * 0.5 * SQRT3 * j
            wx = c * px - s * py + pose.shift.x
            wy = s * px + c * py + pose.shift.y
            if abs(wx) < half_w and abs(wy) < half_h:
                count += 1
    return count


def test_rectangle_dimensions_match_closed_forms():
    assert RECT_WIDTH == pytest.approx(2.61880215351701, abs=1e-12)
    assert RECT_HEIGHT == pytest.approx(1.46410161513775, abs=1e-12)
    assert RECT_WIDTH == pytest.approx(2 + 4 * HOLE_RADIUS, abs=1e-15)
    assert RECT_HEIGHT == pytest.approx(1 + 3 * HOLE_RADIUS, abs=1e-15)
    assert CRITICAL_SPACING == pytest.approx(2 - SQRT3, abs=1e-15)


def test_reference_pose_yields_55_at_critical_spacing():
    d = CRITICAL_SPACING
    cfg = generate_configuration(d, reference_pose(d))
    assert len(cfg) == 55
    assert cfg.boundary_clearance > 0


def test_generate_matches_brute_force_scan():
    d = CRITICAL_SPACING
    poses = [
        reference_pose(d),
        Pose(0.0, Point2(0.0, 0.0)),
        Pose(0.0, Point2(0.07, 0.013)),
        Pose(0.31, Point2(-0.05, 0.11)),
    ]
    for pose in poses:
        cfg = generate_configuration(d, pose)
        assert len(cfg) == brute_force_count(d, pose)


def test_generated_points_are_strictly_inside_with_clearance():
    cfg = hard_55_configuration()
    half_w, half_h = RECT_WIDTH / 2, RECT_HEIGHT / 2
    for p in cfg.points:
        margin = min(half_w - abs(p.x), half_h - abs(p.y))
        assert margin >= cfg.boundary_clearance - 1e-12


def test_degenerate_rectangle_is_empty():
    rect = HardRectangle(width=0.0, height=RECT_HEIGHT)
    cfg = generate_configuration(CRITICAL_SPACING, reference_pose(CRITICAL_SPACING), rect=rect)
    assert len(cfg) == 0


def test_generate_rejects_nonpositive_spacing():
    with pytest.raises(ValueError):
        generate_configuration(0.0, Pose())


def test_footnote_row_separation():
    d = CRITICAL_SPACING
    cfg = generate_configuration(d, reference_pose(d))
    sep = footnote_row_separation(cfg)
    assert sep == pytest.approx(OUTER_ROW_SEPARATION, abs=1e-9)
    assert sep == pytest.approx(1.4737, abs=1e-4)
    assert sep > RECT_HEIGHT


def test_compressibility_certificate():
    cfg = hard_55_configuration()
    assert verify_compressibility(cfg)


def test_boundary_point_defeats_compressibility():
    # Place a lattice point exactly on the right rectangle edge.
    d = CRITICAL_SPACING
    pose = Pose(0.0, Point2(RECT_WIDTH / 2, 0.0))
    cfg = generate_configuration(d, pose)
    assert cfg.boundary_clearance == 0.0
    assert not verify_compressibility(cfg)


def test_compression_preserves_point_count():
    d = CRITICAL_SPACING
    cfg = generate_configuration(d, reference_pose(d))
    smaller = compressed(cfg, 0.999)
    assert len(smaller) == len(cfg)
    assert smaller.lattice_min_dist == pytest.approx(0.999 * d)


def test_compression_rejects_bad_factor():
    cfg = hard_55_configuration()
    with pytest.raises(ValueError):
        compressed(cfg, 0.0)


def test_optimized_beats_identity_pose():
    d = CRITICAL_SPACING * (1 - 1e-6)
    pose, count = optimize_pose(d, angle_steps=90, shift_steps=24, refine_rounds=4)
    identity_count = len(generate_configuration(d, Pose()))
    assert count <= identity_count
    assert len(generate_configuration(d, pose)) == count


def test_optimize_is_grid_exhaustive():
    # Replaying a sample of the exact grid poses never beats the optimizer.
    d = CRITICAL_SPACING * (1 - 1e-6)
    angle_steps, shift_steps = 60, 16
    pose, count = optimize_pose(
        d, angle_steps=angle_steps, shift_steps=shift_steps, refine_rounds=3
    )
    rng = np.random.default_rng(3)
    for _ in range(50):
        ia = int(rng.integers(angle_steps))
        i, j = (int(v) for v in rng.integers(shift_steps, size=2))
        a = ia * (math.pi / 3 / angle_steps)
        u1 = Point2(d, 0).rotated(a)
        u2 = Point2(d / 2, d * SQRT3 / 2).rotated(a)
        shift = u1.scaled(i / shift_steps) + u2.scaled(j / shift_steps)
        assert len(generate_configuration(d, Pose(a, shift))) >= count


def test_optimize_threads_agree_with_serial():
    d = CRITICAL_SPACING * (1 - 1e-6)
    serial = optimize_pose(d, angle_steps=30, shift_steps=8, refine_rounds=2, threads=1)
    threaded = optimize_pose(d, angle_steps=30, shift_steps=8, refine_rounds=2, threads=4)
    assert serial[1] == threaded[1]
    assert serial[0].angle == threaded[0].angle
    assert serial[0].shift.as_tuple() == threaded[0].shift.as_tuple()


def test_optimize_rejects_supercritical_spacing():
    with pytest.raises(ValueError):
        optimize_pose(CRITICAL_SPACING * 1.01)


def test_json_round_trip():
    cfg = hard_55_configuration()
    text = configuration_to_json(cfg)
    back = configuration_from_json(text)
    assert len(back) == len(cfg)
    assert back.lattice_min_dist == cfg.lattice_min_dist
    assert back.pose.angle == cfg.pose.angle
    assert all(a.dist(b) == 0.0 for a, b in zip(back.points, cfg.points))
    assert verify_configuration(back)


def test_verify_configuration_detects_tampering():
    cfg = hard_55_configuration()
    tampered = configuration_from_json(configuration_to_json(cfg))
    tampered.points[0] = Point2(0.0, 0.0)
    assert not verify_configuration(tampered)
