"""Cover-solving engine: play the disk-placing side of the game.

Given a finite point set, search for non-overlapping unit disks covering
every point.  Any two points sharing a disk lie within distance 2, and a
subset fits in one disk iff its minimum enclosing circle has radius at
most 1, so the search branches over partitions of the points into such
clusters and then solves the continuous placement problem: one center per
cluster, each center within distance 1 of its points, centers pairwise at
least 2 apart.  The solver is sound (a "covered" answer always verifies)
but deliberately one-sided: "unknown" never certifies impossibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Point2, min_enclosing_circle, nearest_lattice_point

VERIFY_TOL = 1e-9
MAX_POINTS = 64


@dataclass(frozen=True)
class Cluster:
    """A set of point indices whose MEC fits in a unit disk."""

    indices: tuple[int, ...]
    center: Point2
    radius: float

    @property
    def mask(self) -> int:
        m = 0
        for i in self.indices:
            m |= 1 << i
        return m


@dataclass
class SolveBudget:
    partitions: int = 1000
    restarts: int = 32
    iterations: int = 500

    def scaled(self, factor: float) -> "SolveBudget":
        return SolveBudget(
            partitions=max(1, int(self.partitions * factor)),
            restarts=self.restarts,
            iterations=self.iterations,
        )


@dataclass
class CoverSolution:
    status: str  # "covered" | "unknown"
    centers: list[Point2] = field(default_factory=list)
    assignment: list[int] = field(default_factory=list)
    uncovered: list[int] = field(default_factory=list)
    best_uncovered_count: int | None = None
    attempts: int = 0

    @property
    def covered(self) -> bool:
        return self.status == "covered"


def verify_cover(points, centers, tol: float = VERIFY_TOL) -> bool:
    """Every point within 1+tol of some center; centers pairwise >= 2-tol."""
    pts = list(points)
    cts = list(centers)
    for i in range(len(cts)):
        for j in range(i + 1, len(cts)):
            if cts[i].dist(cts[j]) < 2.0 - tol:
                return False
    for p in pts:
        if all(c.dist(p) > 1.0 + tol for c in cts):
            return False
    return True


def cover_from_translate(points, t: Point2) -> list[Point2]:
    """Disk centers of the translated close packing that cover the points
    (disks covering no point are dropped)."""
    centers: dict[tuple[float, float], Point2] = {}
    for p in points:
        v, _ = nearest_lattice_point(p - t)
        c = v + t
        centers.setdefault((round(c.x, 9), round(c.y, 9)), c)
    return list(centers.values())


# ---------------------------------------------------------------------------
# Cluster enumeration
# ---------------------------------------------------------------------------


def enumerate_clusters(points) -> list[Cluster]:
    """All maximal-by-inclusion subsets with MEC radius <= 1.

    Every maximal such subset equals the set of points in the unit disk
    around its own MEC center, and that center is a point, a pair
    midpoint, or a triple circumcenter; scanning those candidate centers
    is therefore exhaustive.
    """
    pts = list(points)
    n = len(pts)
    if n > MAX_POINTS:
        raise ValueError(f"at most {MAX_POINTS} points supported, got {n}")
    if n == 0:
        return []
    xy = np.array([[p.x, p.y] for p in pts])
    tol = VERIFY_TOL

    centers: list[tuple[float, float]] = [(p.x, p.y) for p in pts]
    d2 = ((xy[:, None, :] - xy[None, :, :]) ** 2).sum(axis=2)
    close = d2 <= (2.0 + 2 * tol) ** 2
    for i in range(n):
        for j in range(i + 1, n):
            if close[i, j]:
                centers.append(((xy[i, 0] + xy[j, 0]) / 2, (xy[i, 1] + xy[j, 1]) / 2))
    for i in range(n):
        for j in range(i + 1, n):
            if not close[i, j]:
                continue
            for k in range(j + 1, n):
                if not (close[i, k] and close[j, k]):
                    continue
                ax, ay = xy[j] - xy[i]
                bx, by = xy[k] - xy[i]
                den = 2.0 * (ax * by - ay * bx)
                if abs(den) < 1e-12:
                    continue
                a2 = ax * ax + ay * ay
                b2 = bx * bx + by * by
                ux = (by * a2 - ay * b2) / den
                uy = (ax * b2 - bx * a2) / den
                if ux * ux + uy * uy <= (1.0 + tol) ** 2:  # circumradius bound
                    centers.append((xy[i, 0] + ux, xy[i, 1] + uy))

    masks: set[int] = set()
    carr = np.array(centers)
    member = ((xy[None, :, :] - carr[:, None, :]) ** 2).sum(axis=2) <= (1.0 + tol) ** 2
    for row in member:
        m = 0
        for i in np.nonzero(row)[0]:
            m |= 1 << int(i)
        if m:
            masks.add(m)

    # Keep inclusion-maximal masks only.
    ordered = sorted(masks, key=lambda m: (-bin(m).count("1"), m))
    maximal: list[int] = []
    for m in ordered:
        if not any(m != other and (m & other) == m for other in maximal):
            maximal.append(m)

    clusters = []
    for m in sorted(maximal):
        idx = tuple(i for i in range(n) if m >> i & 1)
        center, radius = min_enclosing_circle([pts[i] for i in idx])
        clusters.append(Cluster(indices=idx, center=center, radius=radius))
    clusters.sort(key=lambda c: (c.indices[0], -len(c.indices), c.indices))
    return clusters


# ---------------------------------------------------------------------------
# Continuous feasibility: repel overlapping centers, re-project onto the
# intersection of unit disks around each cluster's points.
# ---------------------------------------------------------------------------


def continuous_feasibility(
    parts: list[list[int]],
    points,
    restarts: int = 32,
    iterations: int = 500,
    rng_seed: int = 0,
) -> list[Point2] | None:
    """Centers for the given partition, or None when no restart converges.

    All restarts iterate together; the first (lowest-index) restart to
    satisfy both constraint families wins, so results are reproducible.
    """
    centers, _best_centers, _best_res = _feasibility(
        parts, points, restarts, iterations, rng_seed
    )
    return centers


def _feasibility(
    parts: list[list[int]],
    points,
    restarts: int,
    iterations: int,
    rng_seed: int,
) -> tuple[list[Point2] | None, list[Point2], float]:
    pts = list(points)
    xy = np.array([[p.x, p.y] for p in pts])
    m = len(parts)
    if m == 0:
        return [], [], 0.0
    rng = np.random.default_rng(rng_seed)

    mec = np.empty((m, 2))
    for i, part in enumerate(parts):
        c, _ = min_enclosing_circle([pts[j] for j in part])
        mec[i] = (c.x, c.y)

    R = max(1, restarts)
    C = np.repeat(mec[None, :, :], R, axis=0)
    jitter = rng.normal(0.0, 0.25, size=(R, m, 2))
    jitter[0] = 0.0  # first restart starts exactly at the MEC centers
    C += jitter

    # Pad parts to a rectangular index table (repeats are harmless) so the
    # projection step is a single tensor pass instead of a per-part loop.
    width = max(len(p) for p in parts)
    idxmat = np.array([p + [p[0]] * (width - len(p)) for p in parts], dtype=int)
    P = xy[idxmat]  # (m, width, 2)

    sep = 2.0 + 1e-9
    best_residual = np.full(R, np.inf)
    stall = np.zeros(R, dtype=int)
    alive = np.ones(R, dtype=bool)
    overall_best = math.inf
    overall_best_C = C[0].copy()
    rows = np.arange(R)[:, None]
    cols = np.arange(m)[None, :]

    for _ in range(iterations):
        # Project each center toward its most-violated point constraint.
        diff = C[:, :, None, :] - P[None]  # (R, m, width, 2)
        dist = np.linalg.norm(diff, axis=3)
        worst = dist.argmax(axis=2)  # (R, m)
        wd = np.take_along_axis(dist, worst[..., None], axis=2)[..., 0]
        target = P[cols, worst]  # (R, m, 2)
        over = wd > 1.0
        scale = np.where(over, 1.0 / np.where(wd > 0, wd, 1.0), 1.0)
        C = target + (C - target) * scale[..., None]
        # Symmetric repulsion of overlapping center pairs.
        if m > 1:
            dd = C[:, :, None, :] - C[:, None, :, :]
            pdist = np.linalg.norm(dd, axis=3)
            np.einsum("rii->ri", pdist)[:] = np.inf
            coincident = pdist < 1e-12
            if coincident.any():
                # Deterministic split direction for exactly stacked centers.
                ang = np.arange(m) * 2.399963229728653
                nudge = 1e-6 * np.stack([np.cos(ang), np.sin(ang)], axis=1)
                rr, ci, cj = np.nonzero(coincident)
                dd[rr, ci, cj] = nudge[ci] - nudge[cj]
                pdist[rr, ci, cj] = np.linalg.norm(dd[rr, ci, cj], axis=-1)
            deficit = np.clip(sep - pdist, 0.0, None)
            if deficit.any():
                push = deficit / (2.0 * pdist)
                C = C + (dd * push[..., None]).sum(axis=2)
        # Residuals and convergence.
        dist = np.linalg.norm(C[:, :, None, :] - P[None], axis=3)
        point_viol = (dist.max(axis=2) - 1.0).max(axis=1)
        if m > 1:
            dd = C[:, :, None, :] - C[:, None, :, :]
            pdist = np.linalg.norm(dd, axis=3)
            np.einsum("rii->ri", pdist)[:] = np.inf
            pack_viol = (2.0 - pdist.min(axis=(1, 2))).clip(min=0.0)
        else:
            pack_viol = np.zeros(R)
        residual = np.maximum(point_viol, pack_viol)
        r_best = int(np.argmin(residual))
        if residual[r_best] < overall_best:
            overall_best = float(residual[r_best])
            overall_best_C = C[r_best].copy()
        done = alive & (residual <= 1e-10)
        if done.any():
            r = int(np.argmax(done))
            centers = [Point2(x, y) for x, y in C[r]]
            return centers, centers, 0.0
        # Stall on relative progress: infeasible partitions plateau while
        # feasible ones keep contracting at a roughly constant rate.
        improved = residual < best_residual * 0.999 - 1e-12
        stall[~improved] += 1
        stall[improved] = 0
        np.minimum(best_residual, residual, out=best_residual)
        alive &= stall < 35
        if not alive.any():
            break
    best_centers = [Point2(x, y) for x, y in overall_best_C]
    return None, best_centers, overall_best


# ---------------------------------------------------------------------------
# Partition search
# ---------------------------------------------------------------------------


def solve_cover(
    points,
    budget: SolveBudget | None = None,
    rng_seed: int = 0,
    initial_centers: list[Point2] | None = None,
    should_stop=None,
) -> CoverSolution:
    """Search for a verified packing of unit disks covering all points.

    Branches over partitions of the points into clusters, fewest parts
    first, and runs the continuous placement phase on each.  Sound but
    incomplete: a non-result is reported as "unknown", never as a proof.
    """
    pts = list(points)
    n = len(pts)
    budget = budget or SolveBudget()
    if n == 0:
        return CoverSolution(status="covered", centers=[], assignment=[])

    if initial_centers is not None and verify_cover(pts, initial_centers):
        assignment = _assign(pts, initial_centers)
        used = sorted(set(assignment))
        remap = {c: k for k, c in enumerate(used)}
        return CoverSolution(
            status="covered",
            centers=[initial_centers[c] for c in used],
            assignment=[remap[c] for c in assignment],
            attempts=0,
        )

    clusters = enumerate_clusters(pts)
    cluster_masks = [c.mask for c in clusters]
    by_point: list[list[int]] = [[] for _ in range(n)]
    for ci, c in enumerate(clusters):
        for i in c.indices:
            by_point[i].append(ci)

    full = (1 << n) - 1
    max_size = max(len(c.indices) for c in clusters)
    attempts = 0
    examined = 0
    examined_cap = 25 * budget.partitions
    best_uncovered = n
    best_centers: list[Point2] = []
    seen: set[frozenset[int]] = set()
    mec_cache: dict[int, tuple[float, float, float]] = {}

    def part_reach(mask: int) -> tuple[float, float, float]:
        """MEC center and the radius of the region its disk center can
        occupy: any c with the part inside disk(c, 1) satisfies
        |c - mec| <= sqrt(1 - r^2)."""
        cached = mec_cache.get(mask)
        if cached is None:
            members = [pts[i] for i in range(n) if mask >> i & 1]
            c, r = min_enclosing_circle(members)
            cached = (c.x, c.y, math.sqrt(max(1.0 - r * r, 0.0)))
            mec_cache[mask] = cached
        return cached

    def plainly_infeasible(parts_masks: list[int]) -> bool:
        reach = [part_reach(mk) for mk in parts_masks]
        for i in range(len(reach)):
            xi, yi, si = reach[i]
            for j in range(i + 1, len(reach)):
                xj, yj, sj = reach[j]
                if math.hypot(xi - xj, yi - yj) + si + sj < 2.0 - VERIFY_TOL:
                    return True
        return False

    def feasible(parts_masks: list[int]) -> list[Point2] | None:
        nonlocal attempts, best_uncovered, best_centers
        # Partition validity: parts are disjoint and cover every point.
        combined = 0
        for mk in parts_masks:
            assert combined & mk == 0
            combined |= mk
        assert combined == full
        if plainly_infeasible(parts_masks):
            return None
        parts = [[i for i in range(n) if mk >> i & 1] for mk in parts_masks]
        centers, salvage, _res = _feasibility(
            parts,
            pts,
            restarts=budget.restarts,
            iterations=budget.iterations,
            rng_seed=_mix(rng_seed, attempts),
        )
        attempts += 1
        if centers is not None and verify_cover(pts, centers):
            return centers
        kept = _valid_subset(salvage)
        miss = _count_uncovered(pts, kept)
        if miss < best_uncovered:
            best_uncovered = miss
            best_centers = kept
        return None

    for target_parts in range(math.ceil(n / max_size), n + 1):
        if attempts >= budget.partitions:
            break

        def dfs(covered: int, chosen: list[int]) -> list[Point2] | None:
            nonlocal attempts, examined
            if should_stop is not None and should_stop():
                return None
            if attempts >= budget.partitions or examined >= examined_cap:
                return None
            if covered == full:
                key = frozenset(chosen)
                if key in seen:
                    return None
                seen.add(key)
                examined += 1
                return feasible(list(chosen))
            if len(chosen) >= target_parts:
                return None
            lowest = _lowest_unset(covered)
            remaining = n - bin(covered).count("1")
            if len(chosen) + math.ceil(remaining / max_size) > target_parts:
                return None
            for ci in by_point[lowest]:
                part = cluster_masks[ci] & ~covered
                if not part:
                    continue
                result = dfs(covered | part, chosen + [part])
                if result is not None:
                    return result
            return None

        centers = dfs(0, [])
        if centers is not None:
            assignment = _assign(pts, centers)
            return CoverSolution(
                status="covered",
                centers=centers,
                assignment=assignment,
                attempts=attempts,
            )
        if should_stop is not None and should_stop():
            break

    assignment = []
    uncovered = []
    for i, p in enumerate(pts):
        near = [k for k, c in enumerate(best_centers) if c.dist(p) <= 1.0 + VERIFY_TOL]
        if near:
            assignment.append(near[0])
        else:
            assignment.append(-1)
            uncovered.append(i)
    return CoverSolution(
        status="unknown",
        centers=best_centers,
        assignment=assignment,
        uncovered=uncovered,
        best_uncovered_count=best_uncovered,
        attempts=attempts,
    )


def _valid_subset(centers: list[Point2]) -> list[Point2]:
    """Greedily keep centers that satisfy the pairwise packing constraint."""
    kept: list[Point2] = []
    for c in centers:
        if all(c.dist(k) >= 2.0 - VERIFY_TOL for k in kept):
            kept.append(c)
    return kept


def _count_uncovered(pts, centers) -> int:
    return sum(1 for p in pts if all(c.dist(p) > 1.0 + VERIFY_TOL for c in centers))


def _lowest_unset(mask: int) -> int:
    i = 0
    while mask >> i & 1:
        i += 1
    return i


def _mix(seed: int, k: int) -> int:
    return (seed * 1_000_003 + k * 7919 + 17) % (2**63)


def _assign(pts, centers) -> list[int]:
    out = []
    for p in pts:
        dists = [c.dist(p) for c in centers]
        out.append(int(np.argmin(dists)))
    return out


# ---------------------------------------------------------------------------
# Removability probe
# ---------------------------------------------------------------------------


def removability_probe(
    points,
    budget: SolveBudget | None = None,
    rng_seed: int = 0,
    indices: list[int] | None = None,
    should_stop=None,
) -> dict[int, str]:
    """For each index, solve the instance with that point removed.

    Heuristic evidence only: "unknown" is not a proof that the reduced set
    stays uncoverable.
    """
    pts = list(points)
    probe = indices if indices is not None else list(range(len(pts)))
    report: dict[int, str] = {}
    for idx in probe:
        if should_stop is not None and should_stop():
            break
        reduced = [p for k, p in enumerate(pts) if k != idx]
        sol = solve_cover(reduced, budget=budget, rng_seed=rng_seed, should_stop=should_stop)
        report[idx] = sol.status
    return report
