"""Exact integer planar primitives: points, closed rectangles, quadrants."""

from __future__ import annotations

import operator
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, NamedTuple

COORD_MIN = -(2**63)
COORD_MAX = 2**63 - 1


def _check_coord(value, name: str) -> int:
    # operator.index accepts numpy integers and rejects floats; bool is excluded explicitly
    if isinstance(value, bool):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    try:
        value = operator.index(value)
    except TypeError:
        raise TypeError(f"{name} must be an integer, got {value!r}") from None
    if not COORD_MIN <= value <= COORD_MAX:
        raise ValueError(f"{name}={value} does not fit in 64-bit signed range")
    return value


@dataclass(frozen=True, order=True)
class Point:
    x: int
    y: int

    def __post_init__(self):
        object.__setattr__(self, "x", _check_coord(self.x, "x"))
        object.__setattr__(self, "y", _check_coord(self.y, "y"))

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Rect:
    """Closed axis-parallel rectangle [x_lo, x_hi] x [y_lo, y_hi].

    Zero width or height is allowed (segments and single points).
    """

    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int

    def __post_init__(self):
        for name in ("x_lo", "x_hi", "y_lo", "y_hi"):
            object.__setattr__(self, name, _check_coord(getattr(self, name), name))
        if self.x_lo > self.x_hi or self.y_lo > self.y_hi:
            raise ValueError(f"empty rectangle {self}")

    def contains(self, p: Point) -> bool:
        return self.x_lo <= p.x <= self.x_hi and self.y_lo <= p.y <= self.y_hi

    def corners(self) -> tuple[Point, Point, Point, Point]:
        return (
            Point(self.x_lo, self.y_lo),
            Point(self.x_hi, self.y_lo),
            Point(self.x_hi, self.y_hi),
            Point(self.x_lo, self.y_hi),
        )


class Quadrant(IntEnum):
    """Quadrant labels, counterclockwise starting from the (+,+) quadrant."""

    Q1 = 1
    Q2 = 2
    Q3 = 3
    Q4 = 4


def rects_intersect(a: Rect, b: Rect) -> bool:
    return a.x_lo <= b.x_hi and b.x_lo <= a.x_hi and a.y_lo <= b.y_hi and b.y_lo <= a.y_hi


class CommonIntersection(NamedTuple):
    """Result of :func:`common_intersection`.

    ``rect`` is None when the family has no common point; ``empty_input``
    distinguishes the empty family from a disjoint one.
    """

    rect: Rect | None
    empty_input: bool = False

    def __bool__(self) -> bool:
        return self.rect is not None


def common_intersection(family: Iterable[Rect]) -> CommonIntersection:
    family = list(family)
    if not family:
        return CommonIntersection(None, empty_input=True)
    x_lo = max(r.x_lo for r in family)
    x_hi = min(r.x_hi for r in family)
    y_lo = max(r.y_lo for r in family)
    y_hi = min(r.y_hi for r in family)
    if x_lo > x_hi or y_lo > y_hi:
        return CommonIntersection(None)
    return CommonIntersection(Rect(x_lo, x_hi, y_lo, y_hi))


def classify_quadrant(p: Point, origin: Point) -> Quadrant:
    """Assign ``p`` to exactly one quadrant around ``origin``.

    Points on the axes go to the quadrant that is half-open on that side:
    the positive x-axis and the origin are Q1, the negative x-axis Q2, the
    negative y-axis Q4.
    """
    dx = p.x - origin.x
    dy = p.y - origin.y
    if dy >= 0:
        return Quadrant.Q1 if dx >= 0 else Quadrant.Q2
    return Quadrant.Q3 if dx < 0 else Quadrant.Q4


def closed_quadrants(p: Point, origin: Point) -> frozenset[Quadrant]:
    """All closed quadrants containing ``p`` (axis points belong to two, the origin to four)."""
    dx = p.x - origin.x
    dy = p.y - origin.y
    out = set()
    if dx >= 0 and dy >= 0:
        out.add(Quadrant.Q1)
    if dx <= 0 and dy >= 0:
        out.add(Quadrant.Q2)
    if dx <= 0 and dy <= 0:
        out.add(Quadrant.Q3)
    if dx >= 0 and dy <= 0:
        out.add(Quadrant.Q4)
    return frozenset(out)
