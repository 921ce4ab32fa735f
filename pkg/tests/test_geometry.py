import math
import unittest

import numpy as np

from flocksway.error import (
    CoincidentCenters,
    InvalidArgumentError,
    NoIntersection,
    UndefinedBearing,
)
from flocksway.geometry import (
    Disc,
    disc_intersection_points,
    distance,
    relative_bearing,
    sample_on_chord,
)
from flocksway.placement import intersection_points_placement

from . import corpus_size


class DiscIntersectionTest(unittest.TestCase):
    def test_tangent_discs_meet_once(self):
        locus = disc_intersection_points(Disc((0, 0), 10), Disc((20, 0), 10))
        self.assertTrue(locus.is_tangent)
        self.assertAlmostEqual(locus.p3[0], 10)
        self.assertAlmostEqual(locus.p3[1], 0)

    def test_vertical_pair(self):
        d0, d1 = Disc((0, 0), 10), Disc((0, 10), 10)
        locus = disc_intersection_points(d0, d1)
        points = sorted(locus.endpoints)
        self.assertAlmostEqual(points[0][0], -8.660254, places=6)
        self.assertAlmostEqual(points[1][0], 8.660254, places=6)
        for point in points:
            self.assertAlmostEqual(point[1], 5)
            for disc in (d0, d1):
                self.assertAlmostEqual(distance(disc.center, point), 10, places=9)
        self.assertTrue(locus.slope_defined)

    def test_horizontal_pair_has_no_slope(self):
        locus = disc_intersection_points(Disc((0, 0), 10), Disc((10, 0), 10))
        self.assertFalse(locus.slope_defined)
        self.assertAlmostEqual(locus.p3[0], 5)

    def test_distant_discs(self):
        with self.assertRaises(NoIntersection):
            disc_intersection_points(Disc((0, 0), 10), Disc((30, 0), 10))

    def test_coincident_centers(self):
        with self.assertRaises(CoincidentCenters):
            disc_intersection_points(Disc((1, 1), 10), Disc((1, 1), 10))

    def test_radius_must_be_positive(self):
        with self.assertRaises(InvalidArgumentError):
            Disc((0, 0), 0)


class SampleOnChordTest(unittest.TestCase):
    def setUp(self):
        self.locus = disc_intersection_points(Disc((0, 0), 10), Disc((0, 10), 10))

    def test_endpoints(self):
        self.assertEqual(sample_on_chord(self.locus, 0), self.locus.p3)
        x, y = sample_on_chord(self.locus, 1)
        self.assertAlmostEqual(x, self.locus.p4[0])
        self.assertAlmostEqual(y, self.locus.p4[1])

    def test_midpoint(self):
        x, y = sample_on_chord(self.locus, 0.5)
        self.assertAlmostEqual(x, 0)
        self.assertAlmostEqual(y, 5)

    def test_parameter_outside_unit_interval(self):
        for u in (-0.1, 1.5):
            with self.assertRaises(InvalidArgumentError):
                sample_on_chord(self.locus, u)


class RelativeBearingTest(unittest.TestCase):
    def test_axes(self):
        self.assertEqual(relative_bearing((0, 0), (1, 0)), 0)
        self.assertAlmostEqual(relative_bearing((0, 0), (0, 1)), math.pi / 2)
        self.assertAlmostEqual(relative_bearing((0, 0), (-1, 0)), math.pi)

    def test_lower_half_is_folded(self):
        self.assertAlmostEqual(relative_bearing((0, 0), (0, -1)), math.pi / 2)

    def test_identical_points(self):
        with self.assertRaises(UndefinedBearing):
            relative_bearing((2, 3), (2, 3))


class RandomDiscPairsTest(unittest.TestCase):
    def test_intersections_solve_both_circle_equations(self):
        rng = np.random.default_rng(6)
        for _ in range(corpus_size(10_000, 1000)):
            R = rng.uniform(0.5, 20.0)
            center = tuple(rng.uniform(-100.0, 100.0, size=2))
            gap = rng.uniform(0.001, 1.999) * R
            angle = rng.uniform(0.0, 2 * math.pi)
            other = (
                center[0] + gap * math.cos(angle),
                center[1] + gap * math.sin(angle),
            )
            locus = disc_intersection_points(Disc(center, R), Disc(other, R))
            for point in locus.endpoints:
                for x, y in (center, other):
                    residual = (point[0] - x) ** 2 + (point[1] - y) ** 2 - R**2
                    self.assertLess(abs(residual), 1e-9)

            placed = intersection_points_placement([center, other], R, rng)
            for agent in (center, other):
                self.assertLessEqual(distance(tuple(placed), agent), R + 1e-9)
