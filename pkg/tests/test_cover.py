"""Cover solver: clusters, feasibility, partition search, removability."""

import numpy as np
import pytest

from pc2.cover import (
    Cluster,
    SolveBudget,
    continuous_feasibility,
    cover_from_translate,
    enumerate_clusters,
    removability_probe,
    solve_cover,
    verify_cover,
)
from pc2.geometry import SQRT3, Point2
from pc2.interstitium import handicap_oracle


def pts(*coords) -> list[Point2]:
    return [Point2(x, y) for x, y in coords]


# ---------------------------------------------------------------------------
# Clusters
# ---------------------------------------------------------------------------


def test_clusters_two_far_points_are_singletons():
    cl = enumerate_clusters(pts((0, 0), (2.5, 0)))
    assert sorted(c.indices for c in cl) == [(0,), (1,)]


def test_clusters_diameter_pair_shares_disk():
    cl = enumerate_clusters(pts((0, 0), (2.0, 0)))
    assert [c.indices for c in cl] == [(0, 1)]
    assert cl[0].radius == pytest.approx(1.0, abs=1e-12)


def test_clusters_equilateral_triple_of_side_two():
    # Circumradius 2/sqrt(3) > 1: the triple never fits one disk, each pair
    # does.
    cl = enumerate_clusters(pts((0, 0), (2, 0), (1, SQRT3)))
    assert sorted(c.indices for c in cl) == [(0, 1), (0, 2), (1, 2)]


def test_clusters_maximality():
    # Four points in a tight square all fit one disk: exactly one cluster.
    cl = enumerate_clusters(pts((0, 0), (0.5, 0), (0, 0.5), (0.5, 0.5)))
    assert [c.indices for c in cl] == [(0, 1, 2, 3)]


def test_clusters_size_cap():
    with pytest.raises(ValueError):
        enumerate_clusters([Point2(i * 0.1, 0) for i in range(65)])


def test_clusters_empty():
    assert enumerate_clusters([]) == []


# ---------------------------------------------------------------------------
# verify_cover
# ---------------------------------------------------------------------------


def test_verify_cover_basic():
    assert verify_cover(pts((0, 0)), pts((0, 0)))
    assert not verify_cover(pts((0, 0)), pts((0, 0), (1.9, 0)))  # overlap
    assert not verify_cover(pts((5, 5)), pts((0, 0)))  # point uncovered
    assert verify_cover(pts((0, 0), (2, 0)), pts((1, 0)))
    assert verify_cover([], [])


def test_verify_cover_boundary_tolerances():
    # Touching disks are a legal packing; distance exactly 1 covers.
    assert verify_cover(pts((0, 0), (3, 0)), pts((1, 0), (3, 0)))


# ---------------------------------------------------------------------------
# Continuous feasibility
# ---------------------------------------------------------------------------


def test_feasibility_far_singletons_trivial():
    centers = continuous_feasibility([[0], [1]], pts((0, 0), (5, 0)))
    assert centers is not None
    assert verify_cover(pts((0, 0), (5, 0)), centers)


def test_feasibility_close_singletons_push_apart():
    # Points at distance 1 in separate disks: centers must reach distance 2
    # while staying within 1 of their points (collinear placement works).
    points = pts((0, 0), (1, 0))
    centers = continuous_feasibility([[0], [1]], points)
    assert centers is not None
    assert centers[0].dist(centers[1]) >= 2 - 1e-9
    assert centers[0].dist(points[0]) <= 1 + 1e-9
    assert centers[1].dist(points[1]) <= 1 + 1e-9


def test_feasibility_two_singletons_always_feasible():
    # Closed-form oracle: for single-point parts the centers can always
    # retreat outward along the joining line, so every gap is feasible.
    rng = np.random.default_rng(5)
    for _ in range(25):
        gap = float(rng.uniform(0.05, 3.0))
        points = pts((0, 0), (gap, 0))
        centers = continuous_feasibility([[0], [1]], points, rng_seed=int(rng.integers(1 << 30)))
        assert centers is not None
        assert verify_cover(points, centers)


def test_feasibility_empty_partition():
    assert continuous_feasibility([], []) == []


# ---------------------------------------------------------------------------
# solve_cover
# ---------------------------------------------------------------------------


def test_solve_single_point():
    sol = solve_cover(pts((0, 0)))
    assert sol.covered
    assert len(sol.centers) == 1
    assert sol.centers[0].dist(Point2(0, 0)) <= 1 + 1e-9


def test_solve_empty():
    assert solve_cover([]).covered


def test_solve_various_pairs():
    for gap in (0.3, 1.0, 1.7, 2.0, 2.2, 4.0):
        sol = solve_cover(pts((0, 0), (gap, 0)))
        assert sol.covered, gap
        assert verify_cover(pts((0, 0), (gap, 0)), sol.centers)


def test_solve_deterministic():
    rng = np.random.default_rng(9)
    points = [Point2(*p) for p in rng.uniform(0, 5, (8, 2))]
    a = solve_cover(points, rng_seed=4)
    b = solve_cover(points, rng_seed=4)
    assert a.status == b.status
    assert [(c.x, c.y) for c in a.centers] == [(c.x, c.y) for c in b.centers]


def test_solve_soundness_fuzz():
    rng = np.random.default_rng(12)
    small = SolveBudget(partitions=20, restarts=6, iterations=150)
    for trial in range(300):
        n = int(rng.integers(1, 8))
        scale = float(rng.uniform(1.0, 6.0))
        points = [Point2(*p) for p in rng.uniform(0, scale, (n, 2))]
        sol = solve_cover(points, budget=small, rng_seed=trial)
        if sol.covered:
            assert verify_cover(points, sol.centers)
        else:
            assert sol.best_uncovered_count is not None


def test_solve_quality_ten_random_points():
    covered = 0
    for seed in range(60):
        rng = np.random.default_rng(seed)
        points = [Point2(*p) for p in rng.uniform(0, 6, (10, 2))]
        sol = solve_cover(points, rng_seed=seed)
        if sol.covered:
            covered += 1
            assert verify_cover(points, sol.centers)
    assert covered >= 57  # 95% target


def test_solve_initial_centers_short_circuit():
    points = pts((0, 0), (0.5, 0.5))
    sol = solve_cover(points, initial_centers=[Point2(0.25, 0.25)])
    assert sol.covered
    assert sol.attempts == 0


def test_translate_agreement_with_handicap():
    rng = np.random.default_rng(21)
    for _ in range(8):
        points = [Point2(*p) for p in rng.uniform(-1.5, 1.5, (4, 2))]
        res = handicap_oracle(points)
        if not res.coverable:
            continue
        centers = cover_from_translate(points, res.translate)
        assert verify_cover(points, centers)
        sol = solve_cover(points, initial_centers=centers)
        assert sol.covered


def test_solve_respects_should_stop():
    from pc2.config_builder import hard_55_configuration

    cfg = hard_55_configuration()
    calls = {"n": 0}

    def stop():
        calls["n"] += 1
        return calls["n"] > 3

    sol = solve_cover(cfg.points, budget=SolveBudget(partitions=500), should_stop=stop)
    assert sol.status == "unknown"
    assert sol.attempts <= 4


# ---------------------------------------------------------------------------
# Removability probe
# ---------------------------------------------------------------------------


def test_removability_trivial_pairs():
    # Removing either of two far points leaves a single coverable point.
    report = removability_probe(pts((0, 0), (10, 10)))
    assert report == {0: "covered", 1: "covered"}


def test_removability_respects_indices():
    points = pts((0, 0), (1, 0), (2, 0))
    report = removability_probe(points, indices=[1])
    assert set(report) == {1}
    assert report[1] == "covered"


def test_removability_55_smoke():
    from pc2.config_builder import hard_55_configuration

    cfg = hard_55_configuration()
    tiny = SolveBudget(partitions=5, restarts=4, iterations=100)
    report = removability_probe(cfg.points, budget=tiny, indices=[0, 27])
    assert set(report) == {0, 27}
    assert all(v in ("covered", "unknown") for v in report.values())
