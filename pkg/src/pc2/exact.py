"""Exact arithmetic over the field Q(sqrt(3)) and an exact covering certifier.

Every length that appears in the triangle covering construction (hole
radius, inscribed triangle side, lattice coordinates, their rational
multiples) lives in Q(sqrt(3)) = {a + b*sqrt(3) : a, b rational}, which is
closed under the four arithmetic operations.  Working in this field lets
the certifier decide edge-to-edge tangencies exactly instead of guessing
through a floating-point tolerance.

The covering certifier answers: does a finite union of closed triangles,
taken modulo a lattice, cover the whole torus?  The decision reduces to a
finite check: the uncovered set is open, and the boundary of any uncovered
region must contain an *arrangement vertex* (a triangle corner or an
edge-edge crossing).  The union covers the torus iff every arrangement
vertex is covered and the triangles touching it cover a full angular
neighborhood around it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_SQRT3_FLOAT = math.sqrt(3.0)


@dataclass(frozen=True)
class Qs3:
    """The number a + b*sqrt(3) with rational a, b."""

    a: Fraction
    b: Fraction

    def __add__(self, other):
        other = _coerce(other)
        return Qs3(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Qs3(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Qs3(-self.a, -self.b)

    def __mul__(self, other):
        other = _coerce(other)
        return Qs3(
            self.a * other.a + 3 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        den = other.a * other.a - 3 * other.b * other.b
        if den == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(3))")
        inv = Qs3(other.a / den, -other.b / den)
        return self * inv

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        lhs, rhs = a * a, 3 * b * b
        if a > 0:  # b < 0: positive iff a^2 > 3 b^2
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)

    def __eq__(self, other):
        if not isinstance(other, (Qs3, int, Fraction)):
            return NotImplemented
        other = _coerce(other)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - _coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - _coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - _coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - _coerce(other)).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * _SQRT3_FLOAT

    def floor(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        m = math.floor(float(self))
        # Exact fixup of the float guess.
        while (self - m).sign() < 0:
            m -= 1
        while (self - (m + 1)).sign() >= 0:
            m += 1
        return m

    def __repr__(self):
        return f"Qs3({self.a}+{self.b}*sqrt3)"


def _coerce(value) -> Qs3:
    if isinstance(value, Qs3):
        return value
    if isinstance(value, (int, Fraction)):
        return Qs3(Fraction(value), Fraction(0))
    raise TypeError(f"cannot coerce {type(value).__name__} to Qs3")


def qs3(a=0, b=0) -> Qs3:
    """Construct a + b*sqrt(3) from ints, Fractions, or exact floats."""
    return Qs3(Fraction(a), Fraction(b))


ZERO = qs3(0)
ONE = qs3(1)
SQRT3_Q = qs3(0, 1)

# Hole radius 2/sqrt(3) - 1 and derived lengths, exactly.
HOLE_R_Q = qs3(-1, Fraction(2, 3))  # 2/sqrt(3) = (2/3) sqrt(3)
TRIANGLE_SIDE_Q = qs3(4, -2)  # 4 - 2 sqrt(3) = 2 sqrt(3) * hole radius


Vec = tuple[Qs3, Qs3]
Triangle = tuple[Vec, Vec, Vec]


def vec(x, y) -> Vec:
    return (_coerce(x), _coerce(y))


def vadd(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def vsub(u: Vec, v: Vec) -> Vec:
    return (u[0] - v[0], u[1] - v[1])


def vscale(u: Vec, k) -> Vec:
    k = _coerce(k)
    return (u[0] * k, u[1] * k)


def cross(u: Vec, v: Vec) -> Qs3:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Vec, v: Vec) -> Qs3:
    return u[0] * v[0] + u[1] * v[1]


def vfloat(u: Vec) -> tuple[float, float]:
    return (float(u[0]), float(u[1]))


def triangle_ccw(tri: Triangle) -> Triangle:
    area2 = cross(vsub(tri[1], tri[0]), vsub(tri[2], tri[0]))
    s = area2.sign()
    if s == 0:
        raise ValueError("degenerate triangle")
    if s < 0:
        return (tri[0], tri[2], tri[1])
    return tri


def classify_point(tri: Triangle, p: Vec) -> tuple[str, int]:
    """Locate ``p`` relative to a CCW triangle.

    Returns ``("out", -1)``, ``("in", -1)``, ``("edge", i)`` for the open
    edge from vertex i to vertex i+1, or ``("vertex", i)``.
    """
    signs = []
    for i in range(3):
        c = cross(vsub(tri[(i + 1) % 3], tri[i]), vsub(p, tri[i]))
        s = c.sign()
        if s < 0:
            return ("out", -1)
        signs.append(s)
    zeros = [i for i, s in enumerate(signs) if s == 0]
    if not zeros:
        return ("in", -1)
    if len(zeros) == 1:
        return ("edge", zeros[0])
    # Two zero crosses: p is the vertex shared by the two edges.
    i, j = zeros
    if (i + 1) % 3 == j:
        return ("vertex", j)
    return ("vertex", i)


def segment_intersection(a: Vec, b: Vec, c: Vec, d: Vec) -> Vec | None:
    """Single intersection point of segments [a,b] and [c,d], if any.

    Parallel and collinear pairs return None: overlaps of collinear edges
    contribute no arrangement vertices beyond the segment endpoints, which
    are collected separately.
    """
    r = vsub(b, a)
    s = vsub(d, c)
    denom = cross(r, s)
    if denom.sign() == 0:
        return None
    ca = vsub(c, a)
    t = cross(ca, s) / denom
    u = cross(ca, r) / denom
    if t < 0 or t > 1 or u < 0 or u > 1:
        return None
    return vadd(a, vscale(r, t))


# ---------------------------------------------------------------------------
# Angular sector coverage around a point.
#
# A sector is a closed CCW wedge (start, end) of directions with span in
# (0, pi].  A triangle containing a boundary point contributes either the
# half-plane of its edge or the wedge of its corner.
# ---------------------------------------------------------------------------


def sector_covers_just_past(sector: tuple[Vec, Vec], d: Vec) -> bool:
    """Does the sector contain directions (d, d + epsilon) CCW?"""
    s, t = sector
    cs = cross(s, d)
    ct = cross(d, t)
    if cs.sign() == 0 and dot(s, d).sign() > 0:
        return True  # d is the start direction; sector extends CCW from it
    return cs.sign() > 0 and ct.sign() > 0


def local_sectors(tri: Triangle, p: Vec) -> tuple[str, tuple[Vec, Vec] | None]:
    """Coverage contribution of one triangle around a point it contains."""
    kind, idx = classify_point(tri, p)
    if kind == "out":
        return ("out", None)
    if kind == "in":
        return ("full", None)
    if kind == "edge":
        e = vsub(tri[(idx + 1) % 3], tri[idx])
        return ("sector", (e, (-e[0], -e[1])))
    # Vertex: wedge between the two incident edges, CCW.
    nxt = vsub(tri[(idx + 1) % 3], tri[idx])
    prv = vsub(tri[(idx + 2) % 3], tri[idx])
    return ("sector", (nxt, prv))


@dataclass
class TorusCoverResult:
    covered: bool
    witness_xy: tuple[float, float] | None
    vertices_checked: int
    instances: int


class _BBoxGrid:
    """Spatial hash over float bounding boxes for exact-object prefiltering."""

    def __init__(self, cell: float = 0.35):
        self.cell = cell
        self.buckets: dict[tuple[int, int], list[int]] = {}
        self.boxes: list[tuple[float, float, float, float]] = []

    def _cells(self, box):
        x0, x1, y0, y1 = box
        c = self.cell
        for gx in range(math.floor(x0 / c), math.floor(x1 / c) + 1):
            for gy in range(math.floor(y0 / c), math.floor(y1 / c) + 1):
                yield (gx, gy)

    def add(self, box) -> int:
        idx = len(self.boxes)
        self.boxes.append(box)
        for key in self._cells(box):
            self.buckets.setdefault(key, []).append(idx)
        return idx

    def query(self, box) -> set[int]:
        out: set[int] = set()
        for key in self._cells(box):
            out.update(self.buckets.get(key, ()))
        return out


def _float_bbox(pts, pad: float = 1e-9):
    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    return (min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad)


def _fractional(p: Vec, b1: Vec, b2: Vec, det: Qs3) -> tuple[Qs3, Qs3]:
    u = (p[0] * b2[1] - p[1] * b2[0]) / det
    v = (p[1] * b1[0] - p[0] * b1[1]) / det
    return u, v


def certify_torus_triangle_cover(
    triangles: list[Triangle], b1: Vec, b2: Vec
) -> TorusCoverResult:
    """Decide exactly whether the triangles cover the torus R^2 / (b1, b2).

    When they do not, ``witness_xy`` holds a point (float rendering of an
    exact witness) that no triangle contains.
    """
    det = cross(b1, b2)
    if det.sign() == 0:
        raise ValueError("lattice basis is degenerate")
    if not triangles:
        return TorusCoverResult(False, (0.0, 0.0), 0, 0)

    triangles = [triangle_ccw(t) for t in triangles]

    # Canonicalize: shift each triangle so its first vertex has fractional
    # coordinates in [0,1)^2.
    canonical: list[Triangle] = []
    for tri in triangles:
        u, v = _fractional(tri[0], b1, b2, det)
        fu, fv = u.floor(), v.floor()
        shift = vadd(vscale(b1, -fu), vscale(b2, -fv))
        canonical.append(tuple(vadd(p, shift) for p in tri))
        # Copies at lattice offsets -2..2 reach every triangle touching the
        # cell as long as no triangle spans two cells in fractional
        # coordinates.
        for p in tri:
            pu, pv = _fractional(vsub(p, tri[0]), b1, b2, det)
            if not (abs(float(pu)) < 1.75 and abs(float(pv)) < 1.75):
                raise ValueError("triangle too large for the copy radius")

    # Instances: enough lattice copies that every point of the closed
    # fundamental cell sees all triangles that can touch it.
    cell_box = _float_bbox(
        [(ZERO, ZERO), b1, b2, vadd(b1, b2)], pad=0.05
    )
    instances: list[Triangle] = []
    for tri in canonical:
        for i in (-2, -1, 0, 1, 2):
            for j in (-2, -1, 0, 1, 2):
                shift = vadd(vscale(b1, i), vscale(b2, j))
                inst = tuple(vadd(p, shift) for p in tri)
                box = _float_bbox(inst, pad=1e-6)
                if (
                    box[0] <= cell_box[1]
                    and box[1] >= cell_box[0]
                    and box[2] <= cell_box[3]
                    and box[3] >= cell_box[2]
                ):
                    instances.append(inst)

    grid = _BBoxGrid()
    for inst in instances:
        grid.add(_float_bbox(inst, pad=1e-6))

    # Arrangement vertices: triangle corners plus edge-edge crossings,
    # reduced to one representative per torus class.
    edge_list: list[tuple[Vec, Vec]] = []
    edge_grid = _BBoxGrid(cell=0.3)
    for inst in instances:
        for i in range(3):
            e = (inst[i], inst[(i + 1) % 3])
            edge_list.append(e)
            edge_grid.add(_float_bbox(e, pad=1e-6))

    raw_vertices: list[Vec] = []
    for inst in instances:
        raw_vertices.extend(inst)
    for ei, (a, b) in enumerate(edge_list):
        for ej in edge_grid.query(edge_grid.boxes[ei]):
            if ej <= ei:
                continue
            c, d = edge_list[ej]
            p = segment_intersection(a, b, c, d)
            if p is not None:
                raw_vertices.append(p)

    seen: dict[tuple[Fraction, Fraction, Fraction, Fraction], Vec] = {}
    for p in raw_vertices:
        u, v = _fractional(p, b1, b2, det)
        u = u - u.floor()
        v = v - v.floor()
        key = (u.a, u.b, v.a, v.b)
        if key not in seen:
            seen[key] = vadd(vscale(b1, u), vscale(b2, v))
    vertices = list(seen.values())

    for vtx in vertices:
        witness = _check_vertex(vtx, instances, grid)
        if witness is not None:
            return TorusCoverResult(
                False, vfloat(witness), len(vertices), len(instances)
            )
    return TorusCoverResult(True, None, len(vertices), len(instances))


def _candidates_at(p: Vec, instances, grid: _BBoxGrid, pad: float = 1e-3):
    x, y = float(p[0]), float(p[1])
    return [instances[k] for k in grid.query((x - pad, x + pad, y - pad, y + pad))]


def _check_vertex(vtx: Vec, instances, grid) -> Vec | None:
    """None if the union covers a neighborhood of ``vtx``; else a verified
    uncovered point arbitrarily close to it."""
    cands = _candidates_at(vtx, instances, grid)
    sectors: list[tuple[Vec, Vec]] = []
    for tri in cands:
        kind, sector = local_sectors(tri, vtx)
        if kind == "full":
            return None
        if kind == "sector":
            sectors.append(sector)
    if not sectors:
        # The vertex itself is uncovered.
        return vtx
    for _, end in sectors:
        if not any(sector_covers_just_past(s, end) for s in sectors):
            return _uncovered_point_near(vtx, end, instances, grid)
    return None


def _uncovered_point_near(vtx: Vec, gap_dir: Vec, instances, grid) -> Vec:
    """Exact uncovered point just CCW past ``gap_dir`` from ``vtx``.

    The gap is a genuine open arc, so sufficiently small rotations and
    steps always verify; the loop bounds are generous.
    """
    perp = (-gap_dir[1], gap_dir[0])
    for m in range(8, 200, 8):
        rot = Fraction(1, 2**m)
        direction = vadd(gap_dir, vscale(perp, rot))
        for q in range(10, 200, 10):
            step = Fraction(1, 2**q)
            p = vadd(vtx, vscale(direction, step))
            cands = _candidates_at(p, instances, grid)
            if all(classify_point(tri, p)[0] == "out" for tri in cands):
                return p
    raise AssertionError("gap witness construction failed to verify")
