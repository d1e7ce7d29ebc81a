"""Geometry core: lattice reduction, interstitium membership, MEC, area MC.

Expected values tagged as derived below were computed with the brute-force
oracles defined at the top of this file before the fast paths existed.
"""

import math

import numpy as np
import pytest

from pc2.geometry import (
    CLOSE_PACKING,
    FUNDAMENTAL_AREA,
    HOLE_RADIUS,
    INTERSTITIUM_AREA,
    HexLattice,
    Point2,
    Pose,
    SQRT3,
    interstitium_area_mc,
    lattice_distances,
    min_enclosing_circle,
    nearest_lattice_point,
    point_in_interstitium,
    reduce_to_fundamental,
)


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def brute_force_residue(p: Point2, lattice: HexLattice, radius: float = 6.0) -> Point2:
    """Minimum-norm residue by exhaustive scan of lattice vectors within
    ``radius``; ties broken lexicographically."""
    d = lattice.min_dist
    n = int(radius / d) + 2
    q = p.rotated(-lattice.pose.angle)
    cb = round(2.0 * q.y / (d * SQRT3))
    ca = round(q.x / d - 0.5 * cb)
    best = None
    for i in range(ca - n, ca + n + 1):
        for j in range(cb - n, cb + n + 1):
            vx = d * (i + 0.5 * j)
            vy = d * 0.5 * SQRT3 * j
            r = Point2(q.x - vx, q.y - vy).rotated(lattice.pose.angle)
            key = (round(r.norm(), 12), r.x, r.y)
            if best is None or key < best[0]:
                best = (key, r)
    return best[1]


def brute_force_nearest(p: Point2, lattice: HexLattice) -> tuple[Point2, float]:
    """Closest lattice point by scanning all candidates within 3d of p."""
    d = lattice.min_dist
    w = lattice.pose.unapply(p)
    n = int(3.0) + 3
    ci = round(w.x / d)
    cj = round(2.0 * w.y / (d * SQRT3))
    best = None
    for i in range(ci - n, ci + n + 1):
        for j in range(cj - n, cj + n + 1):
            v = lattice.point(i, j)
            dist = v.dist(p)
            if best is None or dist < best[1]:
                best = (v, dist)
    return best


def brute_force_mec(points: list[Point2]) -> tuple[Point2, float]:
    """Smallest circle over all pair- and triple-determined candidates."""
    from pc2.geometry import _circle_three, _circle_two

    candidates = [(p, 0.0) for p in points]
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            candidates.append(_circle_two(points[i], points[j]))
            for k in range(j + 1, n):
                candidates.append(_circle_three(points[i], points[j], points[k]))
    feasible = [
        (c, r)
        for c, r in candidates
        if all(c.dist(p) <= r * (1 + 1e-12) + 1e-12 for p in points)
    ]
    return min(feasible, key=lambda cr: cr[1])


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------


def test_constants_match_closed_forms():
    assert HOLE_RADIUS == pytest.approx(0.15470053837925168, abs=1e-15)
    assert 1.0 + HOLE_RADIUS == pytest.approx(2.0 / SQRT3, abs=1e-15)
    assert SQRT3 * HOLE_RADIUS == pytest.approx(2.0 - SQRT3, abs=1e-15)
    assert FUNDAMENTAL_AREA == pytest.approx(2.0 * SQRT3, abs=1e-15)
    assert INTERSTITIUM_AREA == pytest.approx(2.0 * SQRT3 - math.pi, abs=1e-15)


def test_point_rejects_non_finite():
    with pytest.raises(ValueError):
        Point2(float("nan"), 0.0)
    with pytest.raises(ValueError):
        Point2(0.0, float("inf"))


def test_pose_normalizes_angle():
    assert Pose(-math.pi).angle == pytest.approx(math.pi)
    assert Pose(7.0 * math.pi).angle == pytest.approx(math.pi)
    assert 0.0 <= Pose(123.456).angle < 2.0 * math.pi


def test_lattice_rejects_bad_min_dist():
    with pytest.raises(ValueError):
        HexLattice(0.0)
    with pytest.raises(ValueError):
        HexLattice(-1.0)


def test_disk_requires_positive_radius():
    from pc2.geometry import Disk

    with pytest.raises(ValueError):
        Disk(Point2(0, 0), 0.0)
    with pytest.raises(ValueError):
        Disk(Point2(0, 0), -2.0)
    hole = Disk(Point2(1, 1), HOLE_RADIUS)
    assert hole.contains(Point2(1, 1 + HOLE_RADIUS))
    assert not hole.contains(Point2(1, 1.5))


# ---------------------------------------------------------------------------
# reduce_to_fundamental
# ---------------------------------------------------------------------------


def test_reduce_lattice_vector_maps_to_origin():
    assert reduce_to_fundamental(Point2(2, 0)).as_tuple() == (0.0, 0.0)


def test_reduce_identity_at_origin():
    assert reduce_to_fundamental(Point2(0, 0)).as_tuple() == (0.0, 0.0)


def test_reduce_matches_brute_force_oracle():
    p = Point2(1.3, 0.7)
    expected = brute_force_residue(p, CLOSE_PACKING)
    got = reduce_to_fundamental(p)
    assert got.dist(expected) < 1e-12


def test_reduce_random_points_match_oracle():
    rng = np.random.default_rng(7)
    for _ in range(200):
        p = Point2(*(rng.uniform(-8, 8, 2)))
        expected = brute_force_residue(p, CLOSE_PACKING)
        assert reduce_to_fundamental(p).dist(expected) < 1e-9


def test_reduce_idempotent_and_periodic():
    rng = np.random.default_rng(11)
    b1, b2 = CLOSE_PACKING.basis()
    for _ in range(500):
        p = Point2(*(rng.uniform(-5, 5, 2)))
        r = reduce_to_fundamental(p)
        assert reduce_to_fundamental(r).dist(r) < 1e-9
        i, j = rng.integers(-4, 5, 2)
        v = b1.scaled(int(i)) + b2.scaled(int(j))
        assert reduce_to_fundamental(p + v).dist(r) < 1e-9


def test_reduce_respects_pose_rotation():
    lat = HexLattice(1.5, Pose(0.4, Point2(10.0, -3.0)))
    rng = np.random.default_rng(3)
    for _ in range(100):
        p = Point2(*(rng.uniform(-6, 6, 2)))
        expected = brute_force_residue(p, lat)
        assert reduce_to_fundamental(p, lat).dist(expected) < 1e-9


# ---------------------------------------------------------------------------
# nearest_lattice_point
# ---------------------------------------------------------------------------


def test_nearest_at_deep_hole_attains_covering_radius():
    for d in (2.0, 1.0, SQRT3 * HOLE_RADIUS):
        lat = HexLattice(d)
        hole = lat.deep_hole()
        _, dist = nearest_lattice_point(hole, lat)
        assert dist == pytest.approx(d / SQRT3, abs=1e-12)


def test_nearest_on_lattice_point_is_zero():
    lat = HexLattice(2.0)
    assert nearest_lattice_point(lat.point(3, -2), lat)[1] < 1e-12
    assert nearest_lattice_point(Point2(0, 0), lat)[1] == 0.0


def test_nearest_random_matches_exhaustive_scan():
    rng = np.random.default_rng(5)
    for d in (2.0, 0.7):
        lat = HexLattice(d, Pose(0.9, Point2(0.3, -1.1)))
        for _ in range(100):
            p = Point2(*(rng.uniform(0, 3 * d, 2)))
            v, dist = nearest_lattice_point(p, lat)
            ev, edist = brute_force_nearest(p, lat)
            assert dist == pytest.approx(edist, abs=1e-10)
            assert v.dist(p) == pytest.approx(dist, abs=1e-12)


def test_nearest_distance_never_exceeds_covering_radius():
    rng = np.random.default_rng(17)
    xy = rng.uniform(-20, 20, (100_000, 2))
    dists = lattice_distances(xy, 2.0)
    assert float(dists.max()) <= 2.0 / SQRT3 + 1e-12
    # The bound is attained at triangle barycenters.
    hole = CLOSE_PACKING.deep_hole()
    near = lattice_distances(np.array([[hole.x, hole.y]]), 2.0)[0]
    assert abs(near - 2.0 / SQRT3) < 1e-12


# ---------------------------------------------------------------------------
# point_in_interstitium
# ---------------------------------------------------------------------------


def test_interstitium_disk_center_is_covered():
    t = Point2(0.37, -0.21)
    assert not point_in_interstitium(t, t)


def test_interstitium_deep_hole_is_uncovered():
    # Covering radius of H is 2/sqrt(3) > 1.
    t = Point2(0.1, 0.2)
    hole = CLOSE_PACKING.deep_hole()
    assert point_in_interstitium(hole + t, t)


def test_interstitium_boundary_counts_as_covered():
    # Distance exactly 1 from the nearest center: closed-disk convention.
    assert not point_in_interstitium(Point2(1.0, 0.0))
    assert not point_in_interstitium(Point2(0.0, 1.0))


def test_interstitium_lattice_periodic():
    rng = np.random.default_rng(23)
    b1, b2 = CLOSE_PACKING.basis()
    t = Point2(0.05, 0.33)
    checked = 0
    for _ in range(500):
        p = Point2(*(rng.uniform(-4, 4, 2)))
        dist = nearest_lattice_point(p - t)[1]
        if abs(dist - 1.0) < 1e-7:
            continue  # too close to the boundary for an exact flip-free check
        i, j = (int(k) for k in rng.integers(-3, 4, 2))
        v = b1.scaled(i) + b2.scaled(j)
        assert point_in_interstitium(p, t) == point_in_interstitium(p + v, t)
        checked += 1
    assert checked > 400


# ---------------------------------------------------------------------------
# min_enclosing_circle
# ---------------------------------------------------------------------------


def test_mec_singleton():
    c, r = min_enclosing_circle([Point2(0, 0)])
    assert c.as_tuple() == (0.0, 0.0)
    assert r == 0.0


def test_mec_diameter_pair():
    c, r = min_enclosing_circle([Point2(0, 0), Point2(2, 0)])
    assert c.dist(Point2(1, 0)) < 1e-12
    assert r == pytest.approx(1.0, abs=1e-12)


def test_mec_equilateral_triple():
    pts = [Point2(0, 0), Point2(2, 0), Point2(1, SQRT3)]
    _, r = min_enclosing_circle(pts)
    assert r == pytest.approx(2.0 / SQRT3, abs=1e-12)


def test_mec_rejects_empty_input():
    with pytest.raises(ValueError):
        min_enclosing_circle([])


def test_mec_handles_duplicates_and_collinear():
    pts = [Point2(0, 0), Point2(0, 0), Point2(1, 0), Point2(2, 0), Point2(2, 0)]
    c, r = min_enclosing_circle(pts)
    assert r == pytest.approx(1.0, abs=1e-12)
    assert c.dist(Point2(1, 0)) < 1e-12


def test_mec_random_matches_brute_force():
    rng = np.random.default_rng(31)
    for _ in range(150):
        n = int(rng.integers(1, 9))
        pts = [Point2(*rng.uniform(-3, 3, 2)) for _ in range(n)]
        c, r = min_enclosing_circle(pts)
        ec, er = brute_force_mec(pts)
        assert r == pytest.approx(er, abs=1e-9)
        assert all(c.dist(p) <= r + 1e-12 for p in pts)


def test_mec_non_support_points_do_not_matter():
    rng = np.random.default_rng(37)
    for _ in range(50):
        pts = [Point2(*rng.uniform(-3, 3, 2)) for _ in range(8)]
        c, r = min_enclosing_circle(pts)
        interior = [p for p in pts if c.dist(p) < r - 1e-9]
        support = [p for p in pts if c.dist(p) >= r - 1e-9]
        if interior and len(support) >= 2:
            c2, r2 = min_enclosing_circle(support)
            assert r2 == pytest.approx(r, abs=1e-9)
            assert c2.dist(c) < 1e-6


# ---------------------------------------------------------------------------
# interstitium_area_mc
# ---------------------------------------------------------------------------


def test_area_mc_converges_at_1e6():
    est, se = interstitium_area_mc(1_000_000, rng_seed=0)
    assert abs(est - INTERSTITIUM_AREA) < 3.0 * se


def test_area_mc_converges_at_1e4():
    est, se = interstitium_area_mc(10_000, rng_seed=42)
    assert abs(est - INTERSTITIUM_AREA) < 3.0 * se


def test_area_mc_deterministic_given_seed():
    assert interstitium_area_mc(10_000, rng_seed=9) == interstitium_area_mc(10_000, rng_seed=9)


def test_area_mc_rejects_degenerate_lattice():
    with pytest.raises(ValueError):
        interstitium_area_mc(10_000, rng_seed=0, min_dist=1.0)


def test_area_mc_rejects_too_few_samples():
    with pytest.raises(ValueError):
        interstitium_area_mc(100, rng_seed=0)


def test_area_mc_seed_sweep_within_three_sigma():
    hits = 0
    for seed in range(30):
        est, se = interstitium_area_mc(50_000, rng_seed=seed)
        if abs(est - INTERSTITIUM_AREA) < 3.0 * se:
            hits += 1
    assert hits >= 29  # >= 99% expected; 30/30 or 29/30 at this sample count
