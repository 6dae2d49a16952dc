import math

import pytest

from halving_opt.geometry import (HORIZONTAL, VERTICAL, AxisBox, Point2, RightTriangle,
                                  Segment, Trapezoid, horizontal_cut, split,
                                  triangle_midline_cuts, triangle_split, vertical_cut)


def test_point_basics():
    a = Point2(0, 0)
    b = Point2(3, 4)
    assert a.dist(b) == 5.0
    assert b.as_tuple() == (3, 4)


def test_segment_orientation_enforced():
    s = Segment(Point2(0, 1), Point2(2, 1))
    assert s.axis == HORIZONTAL
    assert s.length == 2.0
    with pytest.raises(ValueError):
        Segment(Point2(2, 1), Point2(0, 1))
    with pytest.raises(ValueError):
        Segment(Point2(0, 0), Point2(1, 1))


def test_segment_point_at():
    s = Segment(Point2(1, -2), Point2(1, 4))
    assert s.axis == VERTICAL
    assert s.point_at(0.0) == Point2(1, -2)
    assert s.point_at(1.0) == Point2(1, 4)
    assert s.midpoint == Point2(1, 1)


def test_box_bounds_round_trip():
    box = AxisBox.from_bounds(-3, 1, 0, 2)
    assert box.bounds == (-3, 1, 0, 2)
    assert box.width == 4.0
    assert box.height == 2.0
    assert not box.is_square
    assert AxisBox.from_bounds(-3, 1, -3, 1).is_square


def test_box_contains_and_clamp():
    box = AxisBox.from_bounds(0, 1, 0, 1)
    assert box.contains(Point2(0.5, 1.0))
    assert not box.contains(Point2(1.1, 0.5))
    assert box.clamp(Point2(2, -1)) == Point2(1, 0)
    assert box.circumradius == math.hypot(0.5, 0.5)


def test_box_rejects_empty_extent():
    with pytest.raises(ValueError):
        AxisBox(Point2(0, 0), 0.0, 1.0)


def test_cut_segments_span_the_box():
    box = AxisBox.from_bounds(-1, 3, 2, 4)
    h = horizontal_cut(box)
    assert h.axis == HORIZONTAL
    assert (h.a, h.b) == (Point2(-1, 3), Point2(3, 3))
    v = vertical_cut(box)
    assert v.axis == VERTICAL
    assert (v.a, v.b) == (Point2(1, 2), Point2(1, 4))


def test_split_is_exact_and_ordered():
    box = AxisBox.from_bounds(0, 1, 0, 1)
    lower, upper = split(box, horizontal_cut(box))
    assert lower.bounds == (0, 1, 0, 0.5)
    assert upper.bounds == (0, 1, 0.5, 1)
    left, right = split(box, vertical_cut(box))
    assert left.bounds == (0, 0.5, 0, 1)
    assert right.bounds == (0.5, 1, 0, 1)
    # halving the half-extent is exact in binary floating point
    assert lower.half_h == box.half_h / 2
    assert lower.half_h * 2 == box.half_h


def test_repeated_halving_is_bitwise():
    box = AxisBox.from_bounds(0, 1, 0, 1)
    for i in range(1, 41):
        box = split(box, horizontal_cut(box))[0]
        box = split(box, vertical_cut(box))[0]
        assert box.width == 2.0 ** -i
        assert box.height == 2.0 ** -i


def test_split_rejects_foreign_segment():
    box = AxisBox.from_bounds(0, 1, 0, 1)
    with pytest.raises(ValueError):
        split(box, Segment(Point2(0, 0.25), Point2(1, 0.25)))


def test_triangle_vertices_and_contains():
    tri = RightTriangle(Point2(0, 0), 1.0, (1, 1))
    assert tri.vertices == (Point2(0, 0), Point2(1, 0), Point2(0, 1))
    assert tri.contains(Point2(0.25, 0.25))
    assert tri.contains(Point2(0.5, 0.5))  # hypotenuse
    assert not tri.contains(Point2(0.6, 0.6))
    c = tri.centroid
    assert math.isclose(c.x1, 1 / 3) and math.isclose(c.x2, 1 / 3)


def test_triangle_validation():
    with pytest.raises(ValueError):
        RightTriangle(Point2(0, 0), -1.0, (1, 1))
    with pytest.raises(ValueError):
        RightTriangle(Point2(0, 0), 1.0, (1, 2))


def test_midline_cuts_against_hand_coordinates():
    # unit triangle (0,0),(1,0),(0,1): first cut x1=1/2 from the bottom leg
    # midpoint up to the hypotenuse midpoint, second cut x2=1/2.
    tri = RightTriangle(Point2(0, 0), 1.0, (1, 1))
    first, second = triangle_midline_cuts(tri)
    assert first.axis == VERTICAL
    assert (first.a, first.b) == (Point2(0.5, 0), Point2(0.5, 0.5))
    assert second.axis == HORIZONTAL
    assert (second.a, second.b) == (Point2(0, 0.5), Point2(0.5, 0.5))


def test_first_split_pieces_match_spec_coordinates():
    A = 2.0
    tri = RightTriangle(Point2(0, 0), A, (1, 1))
    first, second = triangle_midline_cuts(tri)
    trap, small = triangle_split(tri, first)
    assert isinstance(trap, Trapezoid)
    assert isinstance(small, RightTriangle)
    assert small.vertices == (Point2(A / 2, 0), Point2(A, 0), Point2(A / 2, A / 2))
    assert small.leg == A / 2
    assert trap.vertices == (Point2(0, 0), Point2(A / 2, 0),
                             Point2(A / 2, A / 2), Point2(0, A))

    square, other = triangle_split(tri, second)
    assert isinstance(square, AxisBox)
    assert square.bounds == (0, A / 2, 0, A / 2)
    assert square.is_square
    assert other.vertices == (Point2(0, A / 2), Point2(A / 2, A / 2), Point2(0, A))


def test_split_areas_partition_the_triangle():
    A = 4.0
    tri = RightTriangle(Point2(-3, -3), A, (1, 1))
    first, second = triangle_midline_cuts(tri)
    _, small1 = triangle_split(tri, first)
    square, small2 = triangle_split(tri, second)
    parent_area = A * A / 2
    tri_area = (A / 2) ** 2 / 2
    assert tri_area == parent_area / 4
    assert square.width * square.height == parent_area / 2
    assert small1.leg == small2.leg == A / 2
    assert 2 * tri_area + square.width * square.height == parent_area


def test_split_all_orientations_stay_inside_parent():
    for sx in (1, -1):
        for sy in (1, -1):
            tri = RightTriangle(Point2(1, -2), 3.0, (sx, sy))
            first, second = triangle_midline_cuts(tri)
            for seg in (first, second):
                assert seg.length == 1.5
                for piece in triangle_split(tri, seg):
                    pts = (piece.vertices if not isinstance(piece, AxisBox)
                           else [Point2(piece.bounds[i], piece.bounds[j])
                                 for i in (0, 1) for j in (2, 3)])
                    for p in pts:
                        assert tri.contains(p, tol=1e-12)


def test_triangle_split_rejects_foreign_segment():
    tri = RightTriangle(Point2(0, 0), 1.0, (1, 1))
    with pytest.raises(ValueError):
        triangle_split(tri, Segment(Point2(0, 0.25), Point2(0.75, 0.25)))
