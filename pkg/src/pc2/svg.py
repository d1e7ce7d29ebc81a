"""Minimal SVG scene writer for the geometric objects of the workbench."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import SQRT3, Point2


@dataclass
class SvgScene:
    """Collects shapes in world coordinates; y axis flips at render time."""

    min_x: float
    min_y: float
    max_x: float
    max_y: float
    scale: float = 160.0
    elements: list[str] = field(default_factory=list)

    def _pt(self, x: float, y: float) -> tuple[float, float]:
        return (
            (x - self.min_x) * self.scale,
            (self.max_y - y) * self.scale,
        )

    def circle(self, center: Point2, radius: float, fill="none", stroke="#333", width=1.0, opacity=1.0):
        cx, cy = self._pt(center.x, center.y)
        self.elements.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{radius * self.scale:.2f}" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="{width}" opacity="{opacity}"/>'
        )

    def dot(self, p: Point2, r_px: float = 3.0, fill="#000"):
        cx, cy = self._pt(p.x, p.y)
        self.elements.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r_px}" fill="{fill}"/>')

    def polygon(self, pts: list[Point2], fill="#ccc", stroke="none", opacity=1.0):
        coords = " ".join("{:.2f},{:.2f}".format(*self._pt(p.x, p.y)) for p in pts)
        self.elements.append(
            f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}" opacity="{opacity}"/>'
        )

    def rect_outline(self, center: Point2, width: float, height: float, angle: float = 0.0, stroke="#444", fill="none", opacity=1.0):
        c, s = math.cos(angle), math.sin(angle)
        half_w, half_h = width / 2, height / 2
        corners = [
            Point2(center.x + c * dx - s * dy, center.y + s * dx + c * dy)
            for dx, dy in [(-half_w, -half_h), (half_w, -half_h), (half_w, half_h), (-half_w, half_h)]
        ]
        coords = " ".join("{:.2f},{:.2f}".format(*self._pt(p.x, p.y)) for p in corners)
        self.elements.append(
            f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}" stroke-width="1.5" opacity="{opacity}"/>'
        )

    def to_string(self) -> str:
        w = (self.max_x - self.min_x) * self.scale
        h = (self.max_y - self.min_y) * self.scale
        body = "\n".join(self.elements)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
            f'viewBox="0 0 {w:.0f} {h:.0f}">\n<rect width="100%" height="100%" fill="white"/>\n'
            f"{body}\n</svg>\n"
        )


def render_configuration(cfg) -> str:
    """Rectangle, contained lattice points, and the nearby excluded points."""
    from .config_builder import _lattice_points_near_rect

    rect = cfg.rectangle
    half_w, half_h = rect.width / 2, rect.height / 2
    pad = 0.5
    scene = SvgScene(-half_w - pad, -half_h - pad, half_w + pad, half_h + pad)
    scene.rect_outline(rect.pose.shift, rect.width, rect.height, rect.pose.angle, fill="#eee")
    q = _lattice_points_near_rect(cfg.lattice_min_dist, cfg.pose, rect, 2 * cfg.lattice_min_dist)
    inside = {(round(p.x, 9), round(p.y, 9)) for p in cfg.points}
    c, s = math.cos(rect.pose.angle), math.sin(rect.pose.angle)
    for x, y in q:
        wx = c * x - s * y + rect.pose.shift.x
        wy = s * x + c * y + rect.pose.shift.y
        if (round(wx, 9), round(wy, 9)) in inside:
            scene.dot(Point2(wx, wy), 4.0, "#b3122e")
        else:
            scene.dot(Point2(wx, wy), 2.5, "#999")
    return scene.to_string()


def render_cover_solution(points, solution) -> str:
    """Points, placed disks, and uncovered points highlighted."""
    xs = [p.x for p in points] or [0.0]
    ys = [p.y for p in points] or [0.0]
    pad = 1.6
    scene = SvgScene(min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad, scale=90.0)
    for center in solution.centers:
        scene.circle(center, 1.0, fill="#cfe3f7", stroke="#3a77b5", opacity=0.8)
        scene.dot(center, 2.0, "#3a77b5")
    uncovered = set(solution.uncovered)
    for i, p in enumerate(points):
        scene.dot(p, 4.0, "#b3122e" if i in uncovered else "#1c7a2d")
    return scene.to_string()


def render_fundamental_domain(ts=None, show_triangles=True, translate: Point2 | None = None) -> str:
    """The fundamental cell with packing disks and, optionally, the
    inscribed triangles of a translate set."""
    from .interstitium import inscribed_triangles

    scene = SvgScene(-1.2, -1.2, 4.2, SQRT3 + 1.2, scale=140.0)
    cell = [Point2(0, 0), Point2(2, 0), Point2(3, SQRT3), Point2(1, SQRT3)]
    scene.polygon(cell, fill="#f6f6f6", stroke="#888")
    t0 = translate or Point2(0.0, 0.0)
    for i in range(-1, 4):
        for j in range(-1, 3):
            center = Point2(t0.x + 2 * i + j, t0.y + SQRT3 * j)
            scene.circle(center, 1.0, fill="#dddddd", stroke="#aaa", opacity=0.65)
    if ts is not None and show_triangles:
        for t in ts.translates:
            for tri in inscribed_triangles(t):
                scene.polygon(list(tri.vertices), fill="#8fa8c8", stroke="#51688a", opacity=0.75)
            scene.dot(t, 3.0, "#b3122e")
    return scene.to_string()
