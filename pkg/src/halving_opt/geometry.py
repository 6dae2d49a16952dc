"""Axis-aligned regions and cut segments used by the localization solvers.

Everything is 2D. Boxes are stored as center plus half-extents so that
halving a side is an exact binary operation on the half-extent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

HORIZONTAL = "horizontal"  # segment parallel to the x1-axis
VERTICAL = "vertical"      # segment parallel to the x2-axis


@dataclass(frozen=True)
class Point2:
    x1: float
    x2: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.x1, self.x2)

    def dist(self, other: "Point2") -> float:
        return math.hypot(self.x1 - other.x1, self.x2 - other.x2)


@dataclass(frozen=True)
class Segment:
    """Axis-parallel segment. `a` is the lower/left endpoint."""

    a: Point2
    b: Point2

    def __post_init__(self):
        if self.a.x1 != self.b.x1 and self.a.x2 != self.b.x2:
            raise ValueError("segment must be axis-parallel")
        if self.b.x1 < self.a.x1 or self.b.x2 < self.a.x2:
            raise ValueError("segment endpoints must be ordered lower/left first")

    @property
    def axis(self) -> str:
        return HORIZONTAL if self.a.x2 == self.b.x2 else VERTICAL

    @property
    def length(self) -> float:
        return self.a.dist(self.b)

    def point_at(self, t: float) -> Point2:
        """Point at normalized position t in [0, 1] from `a` toward `b`."""
        return Point2(self.a.x1 + t * (self.b.x1 - self.a.x1),
                      self.a.x2 + t * (self.b.x2 - self.a.x2))

    @property
    def midpoint(self) -> Point2:
        return self.point_at(0.5)


@dataclass(frozen=True)
class AxisBox:
    """Axis-aligned rectangle: center and positive half-extents."""

    center: Point2
    half_w: float
    half_h: float

    def __post_init__(self):
        if self.half_w <= 0 or self.half_h <= 0:
            raise ValueError("half-extents must be positive")

    @classmethod
    def from_bounds(cls, lo1: float, hi1: float, lo2: float, hi2: float) -> "AxisBox":
        return cls(Point2((lo1 + hi1) / 2, (lo2 + hi2) / 2),
                   (hi1 - lo1) / 2, (hi2 - lo2) / 2)

    @property
    def width(self) -> float:
        return 2 * self.half_w

    @property
    def height(self) -> float:
        return 2 * self.half_h

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        c = self.center
        return (c.x1 - self.half_w, c.x1 + self.half_w,
                c.x2 - self.half_h, c.x2 + self.half_h)

    @property
    def is_square(self) -> bool:
        return math.isclose(self.half_w, self.half_h, rel_tol=1e-9, abs_tol=0.0)

    def contains(self, p: Point2, tol: float = 0.0) -> bool:
        lo1, hi1, lo2, hi2 = self.bounds
        return (lo1 - tol <= p.x1 <= hi1 + tol) and (lo2 - tol <= p.x2 <= hi2 + tol)

    def clamp(self, p: Point2) -> Point2:
        lo1, hi1, lo2, hi2 = self.bounds
        return Point2(min(max(p.x1, lo1), hi1), min(max(p.x2, lo2), hi2))

    @property
    def circumradius(self) -> float:
        return math.hypot(self.half_w, self.half_h)


def horizontal_cut(box: AxisBox) -> Segment:
    """Segment through the box center parallel to the x1-axis."""
    lo1, hi1, _, _ = box.bounds
    y = box.center.x2
    return Segment(Point2(lo1, y), Point2(hi1, y))


def vertical_cut(box: AxisBox) -> Segment:
    lo2, hi2 = box.bounds[2], box.bounds[3]
    x = box.center.x1
    return Segment(Point2(x, lo2), Point2(x, hi2))


def split(box: AxisBox, seg: Segment) -> tuple[AxisBox, AxisBox]:
    """Split a box by one of its center cuts. Lower/left piece first.

    Child half-extents are computed as half/2, so repeated halving keeps
    side lengths bitwise equal to R / 2^k.
    """
    c = box.center
    if seg.axis == HORIZONTAL:
        if seg.a.x2 != c.x2:
            raise ValueError("cut does not pass through the box center")
        hh = box.half_h / 2
        lower = AxisBox(Point2(c.x1, c.x2 - hh), box.half_w, hh)
        upper = AxisBox(Point2(c.x1, c.x2 + hh), box.half_w, hh)
        return lower, upper
    if seg.a.x1 != c.x1:
        raise ValueError("cut does not pass through the box center")
    hw = box.half_w / 2
    left = AxisBox(Point2(c.x1 - hw, c.x2), hw, box.half_h)
    right = AxisBox(Point2(c.x1 + hw, c.x2), hw, box.half_h)
    return left, right


@dataclass(frozen=True)
class RightTriangle:
    """Right triangle with axis-parallel legs of equal length.

    `vertex` is the right-angle corner; `orient` holds the signs of the
    two leg directions, e.g. (+1, +1) for legs pointing toward +x1, +x2.
    """

    vertex: Point2
    leg: float
    orient: tuple[int, int] = (1, 1)

    def __post_init__(self):
        if self.leg <= 0:
            raise ValueError("leg must be positive")
        if self.orient[0] not in (-1, 1) or self.orient[1] not in (-1, 1):
            raise ValueError("orientation signs must be +/-1")

    @property
    def vertices(self) -> tuple[Point2, Point2, Point2]:
        v = self.vertex
        sx, sy = self.orient
        return (v, Point2(v.x1 + sx * self.leg, v.x2), Point2(v.x1, v.x2 + sy * self.leg))

    @property
    def centroid(self) -> Point2:
        vs = self.vertices
        return Point2(sum(p.x1 for p in vs) / 3, sum(p.x2 for p in vs) / 3)

    def contains(self, p: Point2, tol: float = 1e-12) -> bool:
        v = self.vertex
        sx, sy = self.orient
        u = sx * (p.x1 - v.x1)
        w = sy * (p.x2 - v.x2)
        return u >= -tol and w >= -tol and u + w <= self.leg + tol


@dataclass(frozen=True)
class Trapezoid:
    """Quadrilateral left over after cutting a right triangle by one midline."""

    vertices: tuple[Point2, Point2, Point2, Point2]


def triangle_midline_cuts(tri: RightTriangle) -> tuple[Segment, Segment]:
    """The two midline cuts of a right triangle.

    First cut joins the midpoint of the x1-parallel leg to the hypotenuse
    midpoint (so the cut segment itself is parallel to the x2-axis); the
    second cut is the x1-parallel one from the other leg's midpoint.
    """
    v = tri.vertex
    sx, sy = tri.orient
    half = tri.leg / 2
    hyp_mid = Point2(v.x1 + sx * half, v.x2 + sy * half)
    leg1_mid = Point2(v.x1 + sx * half, v.x2)
    leg2_mid = Point2(v.x1, v.x2 + sy * half)
    first = Segment(*sorted((leg1_mid, hyp_mid), key=lambda p: p.x2))
    second = Segment(*sorted((leg2_mid, hyp_mid), key=lambda p: p.x1))
    return first, second


def triangle_split(tri: RightTriangle, seg: Segment):
    """Split by one of the midline cuts. Lower/left piece first.

    The first (x2-parallel) cut yields a trapezoid and a half-leg triangle
    homothetic to `tri`; the second cut, applied to that trapezoid, yields
    a square and the other half-leg triangle.
    """
    v = tri.vertex
    sx, sy = tri.orient
    half = tri.leg / 2
    first_seg, second_seg = triangle_midline_cuts(tri)
    if seg == first_seg:
        small = RightTriangle(Point2(v.x1 + sx * half, v.x2), half, tri.orient)
        trap = Trapezoid((v,
                          Point2(v.x1 + sx * half, v.x2),
                          Point2(v.x1 + sx * half, v.x2 + sy * half),
                          Point2(v.x1, v.x2 + sy * tri.leg)))
        pieces = (trap, small) if sx > 0 else (small, trap)
        return pieces
    if seg == second_seg:
        small = RightTriangle(Point2(v.x1, v.x2 + sy * half), half, tri.orient)
        square = AxisBox(Point2(v.x1 + sx * half / 2, v.x2 + sy * half / 2), half / 2, half / 2)
        pieces = (square, small) if sy > 0 else (small, square)
        return pieces
    raise ValueError("segment is not a midline cut of this triangle")
