#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# tests/test_multiplicative_subordination.py - Tests for disk subordination and free unitary products

import math
import unittest
from fractions import Fraction

import numpy as np

from additive_subordination import noncrossing_partitions
from multiplicative_subordination import (
    circle_density_from_moments, disk_subordination_solve, exact_circle_moments, free_mult_convolve_unitary,
    kreweras_complement, mult_moments_oracle,
)
from spectral_measures import circle_measure, make_standard, moments
from subordination import BadParams, DegenerateTransform, NoConvergence, RecordingDisplay, SolverSettings


def symmetric_pair():
    """(delta_1 + delta_-1)/2 on the circle."""
    return make_standard("circle_atoms", [[0.0, 0.5], [math.pi, 0.5]])


class TestDiskSubordination(unittest.TestCase):
    """Solving K_nu(g) = target in the unit disk."""

    def test_delta_one(self):
        """K_{delta_1}(g) = 1/(1 - g), so K = 2 at g = 1/2."""
        ev = disk_subordination_solve(circle_measure([(0.0, 1.0)]), 2.0)
        self.assertAlmostEqual(ev.g, 0.5, places=10)
        self.assertLessEqual(ev.residual, 1e-10)
        self.assertAlmostEqual(ev.ball_margin, 0.5, places=10)

    def test_symmetric_pair(self):
        ev = disk_subordination_solve(symmetric_pair(), 0.3 / 0.91)
        self.assertAlmostEqual(ev.g, 0.3, places=10)

    def test_clamp_keeps_iterates_in_disk(self):
        """Target 10 needs g = 0.9; the first Newton step lands at 9 and is pulled back."""
        rec = RecordingDisplay()
        ev = disk_subordination_solve(circle_measure([(0.0, 1.0)]), 10.0, display=rec)
        self.assertAlmostEqual(ev.g, 0.9, places=9)
        clamps = rec.of_type("clamp")
        self.assertGreater(len(clamps), 0)
        self.assertTrue(all(e.value < 1.0 for e in clamps))

    def test_haar_is_degenerate(self):
        with self.assertRaises(DegenerateTransform):
            disk_subordination_solve(make_standard("haar_circle", grid_size=128), 0.1)

    def test_unreachable_target(self):
        """K_{delta_1} maps the disk onto Re K > 1/2; 0 is never hit."""
        with self.assertRaises(NoConvergence):
            disk_subordination_solve(circle_measure([(0.0, 1.0)]), 0.0, settings=SolverSettings(max_iter=20))

    def test_tol_floor(self):
        with self.assertRaises(BadParams):
            disk_subordination_solve(symmetric_pair(), 0.1, tol=1e-13)


class TestFreeMultConvolve(unittest.TestCase):
    """Moments of products of free unitaries."""

    def test_haar_absorbs(self):
        out = free_mult_convolve_unitary(make_standard("haar_circle", grid_size=128), symmetric_pair(), 6)
        self.assertAlmostEqual(out.moments[0], 1.0)
        self.assertLess(np.abs(out.moments[1:]).max(), 1e-12)

    def test_rotation(self):
        """delta at e^{i a} times nu rotates nu."""
        rot = make_standard("circle_atoms", [[0.7, 1.0]])
        nu = make_standard("circle_atoms", [[0.4, 0.3], [2.0, 0.7]])
        out = free_mult_convolve_unitary(rot, nu, 6)
        expected = [np.exp(0.7j * k) * moments(nu, k) for k in range(7)]
        np.testing.assert_allclose(out.moments, expected, atol=1e-9)

    def test_matches_partition_oracle(self):
        mu = symmetric_pair()
        nu = make_standard("circle_atoms", [[0.0, 0.75], [math.pi, 0.25]])
        exact = mult_moments_oracle(exact_circle_moments(mu, 6), exact_circle_moments(nu, 6), 6)
        out = free_mult_convolve_unitary(mu, nu, 6)
        np.testing.assert_allclose(out.moments, [float(x) for x in exact], atol=1e-9)
        self.assertLess(out.residual, 1e-10)

    def test_rotation_associates(self):
        """(mu boxtimes nu) boxtimes delta_theta = mu boxtimes (nu boxtimes delta_theta)."""
        theta = 0.7
        rot = make_standard("circle_atoms", [[theta, 1.0]])
        mu = make_standard("circle_atoms", [[0.0, 0.6], [2.5, 0.4]])
        nu = make_standard("circle_atoms", [[0.4, 0.3], [2.0, 0.7]])
        inner = free_mult_convolve_unitary(nu, rot, 8).moments
        np.testing.assert_allclose(inner, [moments(nu.rotated(theta), k) for k in range(9)], atol=1e-9)
        left = np.exp(1j * theta * np.arange(9)) * free_mult_convolve_unitary(mu, nu, 8).moments
        right = free_mult_convolve_unitary(mu, nu.rotated(theta), 8).moments
        np.testing.assert_allclose(left, right, atol=1e-9)

    def test_events(self):
        rec = RecordingDisplay()
        free_mult_convolve_unitary(symmetric_pair(), symmetric_pair(), 4, display=rec)
        self.assertEqual(rec.of_type("grid_done")[0].count, 64)

    def test_order_cap(self):
        with self.assertRaises(BadParams):
            free_mult_convolve_unitary(symmetric_pair(), symmetric_pair(), 17)

    def test_measure_has_unit_mass(self):
        out = free_mult_convolve_unitary(symmetric_pair(), make_standard("haar_circle", grid_size=64), 4)
        nu = out.measure(256)
        self.assertAlmostEqual(float(np.sum(nu.masses)), 1.0, places=12)
        self.assertTrue(nu.is_haar(1e-9))


class TestDensityFromMoments(unittest.TestCase):
    """Fejer reconstruction."""

    def test_first_moment(self):
        nu = circle_density_from_moments([1, 0.25], 128)
        self.assertAlmostEqual(moments(nu, 1), 0.125, places=12)
        self.assertEqual(nu.name, "recovered")


class TestPartitionOracle(unittest.TestCase):
    """Kreweras complement and the exact moment formula."""

    def test_kreweras_extremes(self):
        self.assertEqual(kreweras_complement([[1], [2], [3]], 3), ((1, 2, 3),))
        self.assertEqual(kreweras_complement([[1, 2, 3]], 3), ((1,), (2,), (3,)))

    def test_kreweras_pairs(self):
        self.assertEqual(kreweras_complement([[1, 2], [3, 4]], 4), ((1,), (2, 4), (3,)))

    def test_block_count_identity(self):
        """|pi| + |K(pi)| = n + 1 on NC(n)."""
        for part in noncrossing_partitions(5):
            with self.subTest(part=part):
                self.assertEqual(len(part) + len(kreweras_complement(part, 5)), 6)

    def test_delta_one_is_identity(self):
        m_v = [Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(2, 7)]
        self.assertEqual(mult_moments_oracle([Fraction(1)] * 5, m_v, 4), m_v)

    def test_associates_with_delta_minus_one(self):
        m_u = [Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(2, 7), Fraction(1, 4),
               Fraction(1, 6)]
        m_v = [Fraction(1), Fraction(1, 2), Fraction(0), Fraction(1, 2), Fraction(0), Fraction(1, 2), Fraction(0)]
        flip = [Fraction((-1) ** k) for k in range(7)]
        left = mult_moments_oracle(mult_moments_oracle(m_u, m_v, 6), flip, 6)
        right = mult_moments_oracle(m_u, mult_moments_oracle(m_v, flip, 6), 6)
        self.assertEqual(left, right)
        self.assertEqual(mult_moments_oracle(m_v, flip, 6), [(-1) ** k * m for k, m in enumerate(m_v)])

    def test_exact_circle_moments(self):
        self.assertEqual(exact_circle_moments(symmetric_pair(), 4), [1, 0, 1, 0, 1])

    def test_order_cap(self):
        with self.assertRaises(BadParams):
            mult_moments_oracle([Fraction(1)] * 10, [Fraction(1)] * 10, 9)


if __name__ == "__main__":
    unittest.main()
