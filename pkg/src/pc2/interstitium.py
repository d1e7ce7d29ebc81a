"""Lower-bound machinery built on coverings of the torus by interstitia.

If a point set defeats every *translate* of the close packing, each
candidate translate t must leave some point uncovered, i.e. t lies in the
interstitium translate I(p) of some point p.  The point set wins that
handicap game exactly when the regions I(p) cover the fundamental domain
U, which bounds the winning set size from below by |U| / |I| and is
decided here by adaptive box subdivision.  The same subdivision engine
certifies coverings of U by interstitium translates directly, and an
exact certifier in Q(sqrt(3)) decides the sufficient triangle condition:
the union of the triangles inscribed in the interstitium covering U
implies the interstitia do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .exact import Qs3, qs3, vec
from .geometry import (
    FUNDAMENTAL_AREA,
    HOLE_RADIUS,
    INTERSTITIUM_AREA,
    SQRT3,
    Point2,
    lattice_distances,
    lattice_distances_sq,
    nearest_lattice_point,
    reduce_to_fundamental,
)

# Basis of the close packing lattice H (min distance 2, identity pose).
_B1 = np.array([2.0, 0.0])
_B2 = np.array([1.0, SQRT3])

# Side of the equilateral triangle inscribed in the interstitium gap:
# inradius equals the hole radius, so side = 2*sqrt(3)*r = 4 - 2*sqrt(3).
TRIANGLE_SIDE = 4.0 - 2.0 * SQRT3


# ---------------------------------------------------------------------------
# Area lower bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LowerBound:
    ratio: float
    bound: int


def compute_lower_bound(interstitium_area: float | None = None) -> LowerBound:
    """Minimum number of interstitium translates whose area can cover U.

    With the true interstitium area the ratio is 2*sqrt(3)/(2*sqrt(3)-pi)
    ~ 10.74, so the bound is 11.  ``interstitium_area`` can be overridden
    for testing degenerate ratios.
    """
    area = INTERSTITIUM_AREA if interstitium_area is None else float(interstitium_area)
    if area <= 0:
        raise ValueError("interstitium area must be positive")
    ratio = FUNDAMENTAL_AREA / area
    return LowerBound(ratio=ratio, bound=math.ceil(ratio - 1e-12))


# ---------------------------------------------------------------------------
# Translate sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TranslateSet:
    """Translates in the fundamental domain, deduplicated.

    ``exact`` carries Q(sqrt(3)) coordinates when the set was built from
    lattice cosets; exact members may differ from the reduced floats by
    lattice vectors, which is invisible on the torus.
    """

    translates: tuple[Point2, ...]
    exact: tuple[tuple[Qs3, Qs3], ...] | None = None

    def __len__(self) -> int:
        return len(self.translates)

    def as_array(self) -> np.ndarray:
        return np.array([[t.x, t.y] for t in self.translates])

    @staticmethod
    def from_points(points, exact=None) -> "TranslateSet":
        reduced = [reduce_to_fundamental(p) for p in points]
        seen: dict[tuple[float, float], Point2] = {}
        kept_exact = []
        for idx, p in enumerate(reduced):
            key = (round(p.x, 12), round(p.y, 12))
            if key not in seen:
                seen[key] = p
                if exact is not None:
                    kept_exact.append(exact[idx])
        return TranslateSet(
            translates=tuple(seen.values()),
            exact=tuple(kept_exact) if exact is not None else None,
        )


def certified_small_cover() -> TranslateSet:
    """A 23-translate covering of U found by ``search_translate_cover`` and
    certified by box subdivision at margin 1e-7 (cross-checked by a 4e6
    point sampling oracle).  The thinnest covering shipped with the
    package; the lattice H/5 set needs 25."""
    import importlib.resources
    import json

    text = (
        importlib.resources.files("pc2").joinpath("data/translates23.json").read_text()
    )
    data = json.loads(text)
    return TranslateSet.from_points([Point2(x, y) for x, y in data["translates"]])


def lattice_translate_set(n: int) -> TranslateSet:
    """The n^2 coset representatives of H/n in the fundamental domain."""
    if n < 1:
        raise ValueError("divisor must be at least 1")
    points = []
    exact_pts = []
    for i in range(n):
        for j in range(n):
            x = Fraction(2 * i + j, n)
            y = Fraction(j, n)  # times sqrt(3)
            exact_pts.append((qs3(x), qs3(0, y)))
            points.append(Point2(float(x), float(y) * SQRT3))
    return TranslateSet.from_points(points, exact=exact_pts)


# ---------------------------------------------------------------------------
# Triangles inscribed in the interstitium
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InscribedTriangle:
    """Equilateral triangle centered on a deep hole, edges tangent to the
    three unit disks bounding the gap (edge-to-lattice-point distance 1)."""

    vertices: tuple[Point2, Point2, Point2]
    center: Point2

    @property
    def side(self) -> float:
        return self.vertices[0].dist(self.vertices[1])


_TWO_R = 2.0 * HOLE_RADIUS

# Vertex offsets: the triangle inscribed in an upward gap points down and
# vice versa (vertices aim at the cusps between tangent disks).
_DOWN_OFFSETS = [
    (_TWO_R * math.cos(a), _TWO_R * math.sin(a))
    for a in (math.pi / 6, 5 * math.pi / 6, 3 * math.pi / 2)
]
_UP_OFFSETS = [
    (_TWO_R * math.cos(a), _TWO_R * math.sin(a))
    for a in (math.pi / 2, 7 * math.pi / 6, 11 * math.pi / 6)
]


def inscribed_triangles(t: Point2) -> tuple[InscribedTriangle, InscribedTriangle]:
    """The two triangles of the packing translated by ``t``, one per deep
    hole of the fundamental cell."""
    up_gap = t + Point2(1.0, 1.0 / SQRT3)
    down_gap = t + Point2(2.0, 2.0 / SQRT3)
    tri_a = InscribedTriangle(
        vertices=tuple(up_gap + Point2(ox, oy) for ox, oy in _DOWN_OFFSETS),
        center=up_gap,
    )
    tri_b = InscribedTriangle(
        vertices=tuple(down_gap + Point2(ox, oy) for ox, oy in _UP_OFFSETS),
        center=down_gap,
    )
    return tri_a, tri_b


# Exact counterparts.  2r = -2 + (4/3) sqrt(3); the offsets below are the
# exact values of the float offsets above.
_TWO_R_Q = qs3(-2, Fraction(4, 3))
_EXACT_DOWN_OFFSETS = [
    (qs3(2, -1), qs3(-1, Fraction(2, 3))),
    (qs3(-2, 1), qs3(-1, Fraction(2, 3))),
    (qs3(0), qs3(2, Fraction(-4, 3))),
]
_EXACT_UP_OFFSETS = [
    (qs3(0), qs3(-2, Fraction(4, 3))),
    (qs3(-2, 1), qs3(1, Fraction(-2, 3))),
    (qs3(2, -1), qs3(1, Fraction(-2, 3))),
]
_EXACT_UP_GAP = (qs3(1), qs3(0, Fraction(1, 3)))
_EXACT_DOWN_GAP = (qs3(2), qs3(0, Fraction(2, 3)))
_EXACT_B1 = (qs3(2), qs3(0))
_EXACT_B2 = (qs3(1), qs3(0, 1))


def _exact_triangles_for_translate(t: tuple[Qs3, Qs3]) -> list[exact.Triangle]:
    out = []
    for gap, offsets in (
        (_EXACT_UP_GAP, _EXACT_DOWN_OFFSETS),
        (_EXACT_DOWN_GAP, _EXACT_UP_OFFSETS),
    ):
        center = exact.vadd(t, gap)
        out.append(tuple(exact.vadd(center, o) for o in offsets))
    return out


@dataclass
class TilingCertificate:
    covered: bool
    witness: tuple[float, float] | None
    triangles: int
    vertices_checked: int


def triangle_tiling_certificate(ts: TranslateSet) -> TilingCertificate:
    """Exact decision: do the inscribed triangles over ``ts`` cover U?

    Runs in Q(sqrt(3)); edge-to-edge tangencies are decided exactly.  When
    the set lacks exact coordinates, the float values are taken at face
    value (exact dyadic rationals).
    """
    if ts.exact is not None:
        exact_translates = list(ts.exact)
    else:
        exact_translates = [
            (qs3(Fraction(t.x)), qs3(Fraction(t.y))) for t in ts.translates
        ]
    triangles: list[exact.Triangle] = []
    for t in exact_translates:
        triangles.extend(_exact_triangles_for_translate(t))
    result = exact.certify_torus_triangle_cover(triangles, _EXACT_B1, _EXACT_B2)
    return TilingCertificate(
        covered=result.covered,
        witness=result.witness_xy,
        triangles=len(triangles),
        vertices_checked=result.vertices_checked,
    )


def certify_triangle_tiling(ts: TranslateSet) -> bool:
    return triangle_tiling_certificate(ts).covered


# ---------------------------------------------------------------------------
# Adaptive box subdivision over the fundamental domain
# ---------------------------------------------------------------------------


@dataclass
class CoverCertificate:
    """Outcome of the subdivision certifier.

    covered:    every leaf box lay inside a single region with clearance
                >= margin.
    not_covered: ``witness`` is a verified point inside no region; when the
                whole box around it is outside all regions it is reported
                in ``witness_box`` as (u, v, half) in lattice coordinates.
    undecided:  depth or box budget exhausted; ``frontier`` samples the
                unresolved boxes.
    """

    status: str
    depth: int
    margin: float
    witness: Point2 | None = None
    witness_box: tuple[float, float, float] | None = None
    frontier: list[tuple[float, float, float]] = field(default_factory=list)
    leaves: int = 0
    max_depth_reached: int = 0

    @property
    def covered(self) -> bool:
        return self.status == "covered"


def _param_to_xy(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    xy = np.empty(u.shape + (2,))
    xy[..., 0] = 2.0 * u + v
    xy[..., 1] = SQRT3 * v
    return xy


_BOX_RADIUS_FACTOR = 2.0 * SQRT3  # |b1 + b2| ; worst-case corner distance


def _certify_interstitium_cover(
    targets: np.ndarray,
    margin: float,
    depth: int,
    point_witness: bool,
    box_budget: int = 4_000_000,
) -> CoverCertificate:
    """Does the union of interstitium translates I(t), t in ``targets``,
    cover the fundamental domain?

    A box is accepted when wholly inside one I(t) with clearance >= margin
    (conservative Lipschitz bound), rejected when wholly outside all.  With
    ``point_witness`` box centers are also tested directly, yielding a point
    witness even when no whole box qualifies.
    """
    if margin <= 0:
        raise ValueError("margin must be positive")
    targets = np.asarray(targets, dtype=float)
    cu = np.array([0.5])
    cv = np.array([0.5])
    half = 0.5
    leaves = 0
    frontier_cap = 64
    for level in range(depth + 1):
        rad = _BOX_RADIUS_FACTOR * half
        xy = _param_to_xy(cu, cv)
        accepted = np.zeros(len(cu), dtype=bool)
        max_dist = np.zeros(len(cu))
        for t in targets:
            d = lattice_distances(xy - t)
            accepted |= d - rad >= 1.0 + margin
            np.maximum(max_dist, d, out=max_dist)
        if point_witness:
            covered_center = max_dist <= 1.0
            if covered_center.any():
                k = int(np.argmax(covered_center))
                w = Point2(xy[k, 0], xy[k, 1])
                return CoverCertificate(
                    status="not_covered",
                    depth=depth,
                    margin=margin,
                    witness=w,
                    leaves=leaves,
                    max_depth_reached=level,
                )
        rejected = max_dist <= 1.0 - rad
        if rejected.any():
            k = int(np.argmax(rejected))
            w = Point2(xy[k, 0], xy[k, 1])
            return CoverCertificate(
                status="not_covered",
                depth=depth,
                margin=margin,
                witness=w,
                witness_box=(float(cu[k]), float(cv[k]), half),
                leaves=leaves,
                max_depth_reached=level,
            )
        leaves += int(accepted.sum())
        keep = ~accepted
        if not keep.any():
            return CoverCertificate(
                status="covered",
                depth=depth,
                margin=margin,
                leaves=leaves,
                max_depth_reached=level,
            )
        cu, cv = cu[keep], cv[keep]
        if level == depth or 4 * len(cu) > box_budget:
            frontier = [
                (float(cu[k]), float(cv[k]), half)
                for k in range(min(len(cu), frontier_cap))
            ]
            return CoverCertificate(
                status="undecided",
                depth=depth,
                margin=margin,
                frontier=frontier,
                leaves=leaves,
                max_depth_reached=level,
            )
        q = half / 2.0
        cu = np.concatenate([cu - q, cu + q, cu - q, cu + q])
        cv = np.concatenate([cv - q, cv - q, cv + q, cv + q])
        half = q
    raise AssertionError("unreachable")


def certify_translate_cover(
    ts: TranslateSet, margin: float = 1e-6, depth: int = 24
) -> CoverCertificate:
    """Certify that the interstitium translates of ``ts`` cover U."""
    return _certify_interstitium_cover(
        ts.as_array(), margin=margin, depth=depth, point_witness=False
    )


# ---------------------------------------------------------------------------
# Handicap oracle
# ---------------------------------------------------------------------------


@dataclass
class HandicapResult:
    """Either a winning translate for the cover side, or a certificate that
    none exists (the point set wins the handicap game)."""

    coverable: bool
    translate: Point2 | None
    certificate: CoverCertificate | None

    @property
    def decided(self) -> bool:
        return self.coverable or (
            self.certificate is not None and self.certificate.status == "covered"
        )


def translate_covers(points, t: Point2, tol: float = 0.0) -> bool:
    """True iff disks centered on H + t cover every point (closed disks)."""
    return all(nearest_lattice_point(p - t)[1] <= 1.0 + tol for p in points)


def handicap_oracle(points, depth: int = 24, margin: float = 1e-6) -> HandicapResult:
    """Decide whether some translate of the close packing covers all points.

    A point p rules out exactly the translates in I(p); the point set wins
    iff those exclusion regions cover U, which is what the subdivision
    engine certifies.  A box center outside every exclusion region is a
    winning translate and is re-verified before being returned.
    """
    pts = list(points)
    if not pts:
        raise ValueError("handicap oracle needs at least one point")
    arr = np.array([[p.x, p.y] for p in pts])
    # Spread-first ordering sharpens both the acceptance test and the
    # witness search.
    centroid = arr.mean(axis=0)
    order = np.argsort(-np.linalg.norm(arr - centroid, axis=1), kind="stable")
    cert = _certify_interstitium_cover(
        arr[order], margin=margin, depth=depth, point_witness=True
    )
    if cert.status == "not_covered":
        t = cert.witness
        if not translate_covers(pts, t):
            raise AssertionError("handicap witness failed verification")
        return HandicapResult(coverable=True, translate=t, certificate=None)
    return HandicapResult(coverable=False, translate=None, certificate=cert)


def handicap_grid_scan(
    points, resolution: int = 10_000, block_rows: int = 32
) -> Point2 | None:
    """Dense-grid oracle: scan resolution^2 translates over U and return one
    that covers all points, or None.  Independent cross-check for the
    subdivision certifier."""
    pts = list(points)
    arr = np.array([[p.x, p.y] for p in pts])
    centroid = arr.mean(axis=0)
    order = np.argsort(-np.linalg.norm(arr - centroid, axis=1), kind="stable")
    arr = arr[order]
    grid = (np.arange(resolution) + 0.5) / resolution
    for row0 in range(0, resolution, block_rows):
        v = grid[row0 : row0 + block_rows]
        uu, vv = np.meshgrid(grid, v, indexing="ij")
        xy = _param_to_xy(uu.ravel(), vv.ravel())
        for p in arr:
            d2 = lattice_distances_sq(xy - p)
            xy = xy[d2 <= 1.0]
            if len(xy) == 0:
                break
        if len(xy):
            t = Point2(xy[0, 0], xy[0, 1])
            if translate_covers(pts, t):
                return t
    return None


# ---------------------------------------------------------------------------
# Search for small covering translate sets
# ---------------------------------------------------------------------------


@dataclass
class TranslateSearchResult:
    translates: TranslateSet
    uncovered_area: float
    uncovered_fraction: float
    uncovered_samples: int
    samples: int
    moves: int
    certificate: CoverCertificate | None = None


def stratified_samples(grid: int = 512, rng_seed: int = 0) -> np.ndarray:
    """One uniform point per cell of a grid x grid stratification of U."""
    rng = np.random.default_rng(rng_seed)
    base = (np.indices((grid, grid)).reshape(2, -1).T + rng.random((grid * grid, 2))) / grid
    return _param_to_xy(base[:, 0], base[:, 1])


class _SampleCache:
    """Per-sample fractional lattice coordinates, precomputed once.

    Fractional coordinates are linear, so shifting all samples by a
    translate only shifts (a, b) by the translate's own fractions; the
    rounding and candidate scan then run per move.  Samples whose rounded
    candidate already covers them (the common case) skip the full scan.
    """

    def __init__(self, sample_xy: np.ndarray):
        self.xy = np.ascontiguousarray(sample_xy, dtype=float)
        self.b = self.xy[:, 1] * (1.0 / SQRT3)
        self.a = self.xy[:, 0] * 0.5 - 0.5 * self.b

    def uncovered_by(self, t_xy: np.ndarray) -> np.ndarray:
        """Mask of samples inside the interstitium translate at t."""
        tx, ty = float(t_xy[0]), float(t_xy[1])
        tb = ty * (1.0 / SQRT3)
        ta = tx * 0.5 - 0.5 * tb
        j0 = np.rint(self.b - tb)
        i0 = np.rint(self.a - ta)
        rx0 = (self.xy[:, 0] - tx) - (2.0 * i0 + j0)
        ry0 = (self.xy[:, 1] - ty) - SQRT3 * j0
        d0 = rx0 * rx0 + ry0 * ry0
        out = d0 > 1.0
        idx = np.nonzero(out)[0]
        if len(idx):
            rx = rx0[idx]
            ry = ry0[idx]
            best = d0[idx]
            for di, dj in ((0, -1), (0, 1), (-1, -1), (-1, 0), (-1, 1), (1, -1), (1, 0), (1, 1)):
                cx = 2.0 * di + dj
                cy = SQRT3 * dj
                ax = rx - cx
                ay = ry - cy
                np.minimum(best, ax * ax + ay * ay, out=best)
            out[idx] = best > 1.0
        return out


def _covers(sample_xy: np.ndarray, t_xy: np.ndarray) -> np.ndarray:
    """Which samples the interstitium translate at t contains."""
    return lattice_distances_sq(sample_xy - t_xy) > 1.0


def search_translate_cover(
    k: int,
    budget: int = 4000,
    rng_seed: int = 0,
    grid: int = 512,
    init: TranslateSet | None = None,
    certify_zero: bool = True,
    certify_depth: int = 20,
    certify_margin: float = 1e-6,
) -> TranslateSearchResult:
    """Anneal k interstitium translates to minimize estimated uncovered area.

    Moves are single-translate Gaussian jitters with an annealed step, plus
    occasional teleports into the densest uncovered cluster.  Budget counts
    proposed moves; exhaustion returns the best set found.  A best set with
    zero estimated uncovered area is handed to the subdivision certifier;
    when the certifier refutes it (a gap below sampling resolution), the
    witness neighborhood is added to the sample set and the search resumes
    on the remaining budget.
    """
    if k < 1:
        raise ValueError("need at least one translate")
    rng = np.random.default_rng(rng_seed)
    samples = stratified_samples(grid=grid, rng_seed=rng_seed)
    strat_ns = len(samples)
    cache = _SampleCache(samples)

    if init is not None:
        t_xy = init.as_array().copy()
        if len(t_xy) != k:
            raise ValueError(f"init has {len(t_xy)} translates, expected {k}")
    else:
        uv = rng.random((k, 2))
        t_xy = _param_to_xy(uv[:, 0], uv[:, 1])

    cover_count = np.zeros(len(samples), dtype=np.int32)
    for i in range(k):
        cover_count += cache.uncovered_by(t_xy[i])

    state = {"samples": samples, "cache": cache, "count": cover_count}
    moves = 0
    certificate: CoverCertificate | None = None

    def anneal(t_xy: np.ndarray, start: int) -> tuple[np.ndarray, int, int]:
        nonlocal moves
        samples = state["samples"]
        cache = state["cache"]
        cover_count = state["count"]
        uncovered = int((cover_count == 0).sum())
        best_xy = t_xy.copy()
        best_uncovered = uncovered
        sigma_hi, sigma_lo = 0.2, 0.001
        temp_hi, temp_lo = max(4.0, len(samples) * 4e-5), 0.05
        for step in range(start, budget):
            if uncovered == 0:
                break
            frac = step / max(budget - 1, 1)
            sigma = sigma_hi * (sigma_lo / sigma_hi) ** frac
            temp = temp_hi * (temp_lo / temp_hi) ** frac
            idx = int(rng.integers(k))
            old_cover = cache.uncovered_by(t_xy[idx])
            if rng.random() < 0.1:
                # Teleport to the densest uncovered cluster.
                holes = samples[cover_count == 0]
                probe = holes[int(rng.integers(len(holes)))]
                local = np.linalg.norm(holes - probe, axis=1) < 0.3
                target = holes[local].mean(axis=0)
                proposal = target + rng.normal(0.0, 0.02, 2)
            else:
                proposal = t_xy[idx] + rng.normal(0.0, sigma, 2)
            p_red = reduce_to_fundamental(Point2(*proposal))
            proposal = np.array([p_red.x, p_red.y])
            new_cover = cache.uncovered_by(proposal)
            new_count = cover_count - old_cover + new_cover
            new_uncovered = int((new_count == 0).sum())
            delta = new_uncovered - uncovered
            moves += 1
            if delta <= 0 or rng.random() < math.exp(-delta / temp):
                t_xy[idx] = proposal
                cover_count = new_count
                uncovered = new_uncovered
                if uncovered < best_uncovered:
                    best_uncovered = uncovered
                    best_xy = t_xy.copy()
                    if best_uncovered == 0:
                        break
            state["count"] = cover_count
        return best_xy, best_uncovered, min(budget, moves)

    best_xy, best_uncovered, used = anneal(t_xy, 0)
    rounds = 0
    while certify_zero and best_uncovered == 0:
        result_set = TranslateSet.from_points([Point2(x, y) for x, y in best_xy])
        certificate = certify_translate_cover(
            result_set, margin=certify_margin, depth=certify_depth
        )
        rounds += 1
        if certificate.status != "not_covered" or used >= budget or rounds > 32:
            break
        # Sampling missed a gap; concentrate samples there and keep going.
        w = certificate.witness
        extra = np.array([[w.x, w.y]]) + rng.normal(0.0, 0.01, (64, 2))
        samples = np.vstack([state["samples"], extra])
        cache = _SampleCache(samples)
        cover_count = np.zeros(len(samples), dtype=np.int32)
        for i in range(k):
            cover_count += cache.uncovered_by(best_xy[i])
        state.update(samples=samples, cache=cache, count=cover_count)
        best_xy, best_uncovered, used = anneal(best_xy.copy(), used)
        if best_uncovered > 0:
            # The candidate moved without reaching zero again; the old
            # certificate no longer describes the reported set.
            certificate = None
            break

    # Report the uncovered estimate on the stratified grid alone.
    report_cache = _SampleCache(stratified_samples(grid=grid, rng_seed=rng_seed))
    report_count = np.zeros(strat_ns, dtype=np.int32)
    for i in range(k):
        report_count += report_cache.uncovered_by(best_xy[i])
    report_uncovered = int((report_count == 0).sum())

    result_set = TranslateSet.from_points([Point2(x, y) for x, y in best_xy])
    fraction = report_uncovered / strat_ns
    if certificate is None and report_uncovered == 0 and certify_zero:
        certificate = certify_translate_cover(
            result_set, margin=certify_margin, depth=certify_depth
        )
    return TranslateSearchResult(
        translates=result_set,
        uncovered_area=fraction * FUNDAMENTAL_AREA,
        uncovered_fraction=fraction,
        uncovered_samples=report_uncovered,
        samples=strat_ns,
        moves=moves,
        certificate=certificate,
    )
