"""closed-form intersection of two equal discs and the chord between them

The chord is kept in parametric form (its two endpoints) so a horizontal
pair of centers, where the slope-intercept form would divide by zero, needs
no special handling.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .error import (
    CoincidentCenters,
    InvalidArgumentError,
    NoIntersection,
    UndefinedBearing,
)
from .model import Point
from .validation import ValidationError, is_unit_interval, validate_value

TANGENCY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Disc:
    center: Point
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise InvalidArgumentError(
                "disc radius must be positive, got %r" % self.radius
            )

    def contains(self, point: Point, tolerance: float = 0.0) -> bool:
        return distance(self.center, point) <= self.radius + tolerance


@dataclass(frozen=True)
class ChordLocus:
    p3: Point
    p4: Point
    slope_defined: bool
    slope: Optional[float] = None

    @property
    def endpoints(self):
        return self.p3, self.p4

    @property
    def is_tangent(self) -> bool:
        return self.p3 == self.p4


def distance(a: Point, b: Point) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def disc_intersection_points(d0: Disc, d1: Disc) -> ChordLocus:
    if d0.radius != d1.radius:
        raise InvalidArgumentError("only discs of equal radius are supported")
    (x0, y0), (x1, y1) = d0.center, d1.center
    radius = d0.radius
    d = distance(d0.center, d1.center)
    if d == 0:
        raise CoincidentCenters("discs share the center (%g, %g)" % (x0, y0))
    if abs(d - 2 * radius) < TANGENCY_TOLERANCE:
        root = 0.0
    elif d > 2 * radius:
        raise NoIntersection(
            "centers are %g apart, discs of radius %g do not intersect" % (d, radius)
        )
    else:
        root = math.sqrt(4 * radius**2 - d**2)

    mid_x, mid_y = (x0 + x1) / 2, (y0 + y1) / 2
    offset_x = (y0 - y1) / (2 * d) * root
    offset_y = (x1 - x0) / (2 * d) * root
    slope_defined = y0 != y1
    return ChordLocus(
        p3=(mid_x - offset_x, mid_y - offset_y),
        p4=(mid_x + offset_x, mid_y + offset_y),
        slope_defined=slope_defined,
        slope=(x1 - x0) / (y0 - y1) if slope_defined else None,
    )


def sample_on_chord(locus: ChordLocus, u: float) -> Point:
    try:
        validate_value(is_unit_interval, u)
    except ValidationError as exc:
        raise InvalidArgumentError("chord parameter %s" % exc) from exc
    (x3, y3), (x4, y4) = locus.p3, locus.p4
    return x3 + u * (x4 - x3), y3 + u * (y4 - y3)


def relative_bearing(origin: Point, target: Point) -> float:
    """angle of the displacement from origin to target, folded into [0, π]"""
    dx, dy = target[0] - origin[0], target[1] - origin[1]
    if dx == 0 and dy == 0:
        raise UndefinedBearing("bearing between identical points is undefined")
    return abs(math.atan2(dy, dx))
