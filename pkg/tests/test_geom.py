import pytest

from pierce_lab.geom import (
    COORD_MAX,
    COORD_MIN,
    Point,
    Quadrant,
    Rect,
    classify_quadrant,
    closed_quadrants,
    common_intersection,
    rects_intersect,
)


def test_rect_rejects_inverted_bounds():
    with pytest.raises(ValueError):
        Rect(2, 1, 0, 0)


@pytest.mark.parametrize("bad", [1.5, True, "3", None])
def test_coordinates_must_be_integers(bad):
    with pytest.raises((TypeError, ValueError)):
        Point(bad, 0)


def test_coordinate_range_is_signed_64_bit():
    Point(COORD_MIN, COORD_MAX)
    with pytest.raises(ValueError):
        Point(COORD_MAX + 1, 0)


def test_degenerate_rectangles_allowed():
    r = Rect(3, 3, -1, -1)
    assert r.contains(Point(3, -1))
    assert not r.contains(Point(3, 0))


def test_touching_corners_intersect():
    assert rects_intersect(Rect(0, 1, 0, 1), Rect(1, 2, 1, 2))


def test_disjoint_x_ranges():
    assert not rects_intersect(Rect(0, 1, 0, 1), Rect(2, 3, 0, 1))


def test_triangle_pair_intersects():
    # x-ranges [-4,1] and [-1,4] overlap on [-1,1]; y-ranges coincide
    assert rects_intersect(Rect(-4, 1, -4, 1), Rect(-1, 4, -4, 1))


def test_common_intersection_of_triangle():
    fam = [Rect(-4, 1, -4, 1), Rect(-1, 4, -4, 1), Rect(-4, 4, -1, 4)]
    # max of lower ends, min of upper ends, per axis
    assert common_intersection(fam).rect == Rect(-1, 1, -1, 1)


def test_common_intersection_singleton_and_disjoint():
    assert common_intersection([Rect(0, 2, 0, 2)]).rect == Rect(0, 2, 0, 2)
    res = common_intersection([Rect(0, 1, 0, 1), Rect(2, 3, 2, 3)])
    assert res.rect is None and not res and not res.empty_input


def test_common_intersection_empty_family_is_flagged():
    res = common_intersection([])
    assert res.rect is None and res.empty_input


@pytest.mark.parametrize(
    "p, q",
    [((3, 0), Quadrant.Q1), ((-3, 0), Quadrant.Q2), ((0, -3), Quadrant.Q4), ((0, 0), Quadrant.Q1),
     ((0, 3), Quadrant.Q1), ((-1, -1), Quadrant.Q3), ((2, -5), Quadrant.Q4), ((-2, 5), Quadrant.Q2)],
)
def test_classify_quadrant_tie_rules(p, q):
    assert classify_quadrant(Point(*p), Point(0, 0)) == q


def test_classify_partitions_plane():
    # every point gets exactly one label, and it is one of its closed quadrants
    o = Point(1, -2)
    for x in range(-3, 6):
        for y in range(-6, 3):
            p = Point(x, y)
            assert classify_quadrant(p, o) in closed_quadrants(p, o)


def test_closed_quadrants_axes_and_origin():
    o = Point(0, 0)
    assert closed_quadrants(o, o) == frozenset(Quadrant)
    assert closed_quadrants(Point(3, 0), o) == {Quadrant.Q1, Quadrant.Q4}
    assert closed_quadrants(Point(0, -2), o) == {Quadrant.Q3, Quadrant.Q4}
    assert closed_quadrants(Point(-1, 1), o) == {Quadrant.Q2}
