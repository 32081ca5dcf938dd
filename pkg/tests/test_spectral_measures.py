#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# tests/test_spectral_measures.py - Tests for measures, transforms and the standard families

import json
import math
import unittest

import numpy as np

from spectral_measures import (
    CircleMeasure, LineMeasure, cauchy_transform, circle_cauchy, circle_measure, eta_over_w, eta_transform,
    f_transform, from_json, h_transform, line_measure, make_standard, moments, psi_transform, sample_angles,
    stieltjes_invert, to_json, transform_moments,
)
from subordination import BadParams, DomainError, NonPositiveDensity, UnknownFamily


def semicircle_cauchy(z):
    """Closed-form G of the standard semicircle, branch with G(z) ~ 1/z."""
    z = np.asarray(z, dtype=complex)
    return (z - np.sqrt(z - 2) * np.sqrt(z + 2)) / 2


class TestConstruction(unittest.TestCase):
    """Building and validating measures."""

    def test_line_measure_normalizes_density(self):
        mu = line_measure([(0.0, 0.25)], -1.0, 1.0, [3.0, 3.0, 3.0])
        self.assertAlmostEqual(mu.total_mass, 1.0, places=14)
        self.assertAlmostEqual(mu.atom_mass, 0.25)

    def test_atoms_must_sum_to_one(self):
        with self.assertRaises(BadParams):
            line_measure([(0.0, 0.5), (1.0, 0.25)])

    def test_direct_construction_checks_mass(self):
        with self.assertRaises(BadParams):
            LineMeasure(((0.0, 0.5),))

    def test_negative_samples_rejected(self):
        with self.assertRaises(BadParams):
            LineMeasure((), -1.0, 1.0, np.array([1.0, -1.0]))

    def test_bad_edges_rejected(self):
        with self.assertRaises(BadParams):
            line_measure((), 0.0, 1.0, [1.0, 1.0], edges=(0.25, 0.0))

    def test_circle_angles_reduced(self):
        nu = circle_measure([(2 * math.pi + 0.5, 1.0)])
        self.assertAlmostEqual(nu.atoms[0][0], 0.5)

    def test_support_covers_atoms_and_grid(self):
        mu = line_measure([(3.0, 0.5)], -1.0, 1.0, [1.0, 1.0])
        self.assertEqual(mu.support(), (-1.0, 3.0))


class TestStandardFamilies(unittest.TestCase):
    """make_standard families and their moments."""

    def test_semicircle_moments(self):
        mu = make_standard("semicircle")
        for k, expected in enumerate([1, 0, 1, 0, 2, 0, 5]):
            with self.subTest(k=k):
                self.assertAlmostEqual(moments(mu, k).real, expected, delta=1e-4)

    def test_semicircle_shifted(self):
        mu = make_standard("semicircle", {"center": 1.0, "variance": 0.25})
        self.assertEqual(mu.support(), (0.0, 2.0))
        self.assertAlmostEqual(moments(mu, 1).real, 1.0, delta=1e-9)
        self.assertAlmostEqual(moments(mu, 2).real, 1.25, delta=1e-5)

    def test_marchenko_pastur_catalan(self):
        mu = make_standard("marchenko_pastur", [1.0])
        for k, expected in enumerate([1, 1, 2, 5, 14]):
            with self.subTest(k=k):
                self.assertAlmostEqual(moments(mu, k).real, expected, delta=1e-4)

    def test_marchenko_pastur_atom(self):
        mu = make_standard("marchenko_pastur", {"ratio": 2.0})
        self.assertAlmostEqual(mu.atom_mass, 0.5)
        self.assertAlmostEqual(moments(mu, 1).real, 1.0, delta=1e-5)

    def test_arcsine_variance(self):
        """Arcsine on [-2, 2] has variance 2."""
        self.assertAlmostEqual(moments(make_standard("arcsine"), 2).real, 2.0, delta=1e-5)

    def test_atomic_and_delta(self):
        mu = make_standard("atomic", [[-1, 0.25], [2, 0.75]])
        self.assertAlmostEqual(moments(mu, 1).real, 1.25)
        self.assertEqual(make_standard("delta", [3.0]).atoms, ((3.0, 1.0),))

    def test_haar_circle(self):
        nu = make_standard("haar_circle", grid_size=64)
        self.assertTrue(nu.is_haar())
        self.assertLess(abs(moments(nu, 1)), 1e-14)

    def test_wrapped_density_requires_callable(self):
        with self.assertRaises(BadParams):
            make_standard("wrapped_density", {"kappa": 1})

    def test_wrapped_density_first_moment(self):
        """Density (1 + cos theta)/(2 pi) has first moment 1/2."""
        nu = make_standard("wrapped_density", lambda th: 1 + np.cos(th), grid_size=128)
        self.assertAlmostEqual(moments(nu, 1).real, 0.5, places=12)

    def test_unknown_family(self):
        with self.assertRaises(UnknownFamily):
            make_standard("cauchy")

    def test_bad_variance(self):
        with self.assertRaises(BadParams):
            make_standard("semicircle", {"variance": 0})

    def test_moment_order_capped(self):
        with self.assertRaises(BadParams):
            moments(make_standard("bernoulli_pm1"), 33)


class TestLineTransforms(unittest.TestCase):
    """Cauchy, F and h transforms on the line."""

    def test_semicircle_at_i(self):
        g = cauchy_transform(make_standard("semicircle"), 1j)
        self.assertAlmostEqual(g, 1j * (1 - math.sqrt(5)) / 2, delta=1e-5)

    def test_semicircle_matches_closed_form(self):
        z = np.array([0.5 + 0.5j, -1.5 + 0.5j, 3 + 2j])
        err = np.abs(cauchy_transform(make_standard("semicircle"), z) - semicircle_cauchy(z)).max()
        self.assertLess(err, 1e-5)

    def test_arcsine_at_i(self):
        self.assertAlmostEqual(cauchy_transform(make_standard("arcsine"), 1j), -1j / math.sqrt(5), delta=1e-5)

    def test_bernoulli(self):
        z = 0.3 + 0.7j
        self.assertAlmostEqual(cauchy_transform(make_standard("bernoulli_pm1"), z), z / (z * z - 1), places=14)

    def test_delta_f_is_shift(self):
        mu = make_standard("delta", [2.0])
        self.assertAlmostEqual(f_transform(mu, 1 + 1j), -1 + 1j, places=14)
        self.assertAlmostEqual(h_transform(mu, 1 + 1j), -2, places=14)

    def test_nevanlinna_properties(self):
        mu = make_standard("marchenko_pastur", [0.5])
        z = np.array([-1 + 0.01j, 0.5 + 0.2j, 4 + 1j, 10j])
        self.assertTrue(np.all(np.asarray(cauchy_transform(mu, z)).imag < 0))
        self.assertTrue(np.all(np.asarray(h_transform(mu, z)).imag >= -1e-12))

    def test_rejects_lower_half_plane(self):
        mu = make_standard("bernoulli_pm1")
        for z in (1.0, -1j, np.array([1j, 0.5])):
            with self.subTest(z=z):
                with self.assertRaises(DomainError):
                    cauchy_transform(mu, z)

    def test_transform_moments_recovers_moments(self):
        m = transform_moments(semicircle_cauchy, 0.0, 3.0, 6)
        np.testing.assert_allclose(m, [1, 0, 1, 0, 2, 0, 5], atol=1e-10)

    def test_transform_moments_about_center(self):
        """Bernoulli(+-1) shifted by 5, moments about 5."""
        mu = make_standard("atomic", [[4, 0.5], [6, 0.5]])
        m = transform_moments(lambda z: cauchy_transform(mu, z), 5.0, 2.0, 4, about=5.0)
        np.testing.assert_allclose(m, [1, 0, 1, 0, 1], atol=1e-10)

    def test_transform_moments_odd_nodes(self):
        with self.assertRaises(BadParams):
            transform_moments(semicircle_cauchy, 0.0, 3.0, 2, nodes=255)


class TestStieltjesInversion(unittest.TestCase):
    """Density recovery from a Cauchy transform."""

    def test_semicircle_density(self):
        rec = stieltjes_invert(semicircle_cauchy, -2.5, 2.5, 1001)
        t = np.linspace(-1.9, 1.9, 381)
        exact = np.sqrt(4 - t * t) / (2 * math.pi)
        self.assertLess(np.abs(rec.density_at(t) - exact).max(), 5e-3)
        self.assertAlmostEqual(rec.total_mass, 1.0, places=12)
        self.assertEqual(rec.name, "recovered")

    def test_point_mass_at_one_height(self):
        """G(z) = 1/z at eta = 1e-3 is a Poisson kernel: most of the mass sits within 0.1 of 0."""
        rec = stieltjes_invert(lambda z: 1 / z, -1.0, 1.0, 2001, (1e-3,))
        near = np.abs(rec.grid) <= 0.1
        self.assertGreaterEqual(float(np.sum(rec.masses[near])), 0.9)

    def test_two_heights_extrapolate_an_atom_positively(self):
        """Two heights a > b turn an atom into ab(a+b) / (pi (d^2+a^2)(d^2+b^2)) at distance d."""
        a, b = 1e-2, 3e-3
        rec = stieltjes_invert(lambda z: 1 / z, -1.0, 1.0, 2001, (a, b))
        d = rec.grid
        kernel = a * b * (a + b) / (math.pi * (d * d + a * a) * (d * d + b * b))
        np.testing.assert_allclose(rec.samples / rec.renormalization, kernel, rtol=1e-9, atol=1e-12)
        self.assertGreater(kernel.min(), 0)

    def test_atoms_and_density_mix(self):
        atoms = make_standard("atomic", [[-0.5, 0.25], [0.0, 0.5], [0.02, 0.25]])
        rec = stieltjes_invert(lambda z: cauchy_transform(atoms, z), -1.0, 1.0, 4001)
        self.assertAlmostEqual(rec.total_mass, 1.0, places=12)
        self.assertGreater(float(rec.density_at(np.array([0.0]))[0]), 10.0)

    def test_three_heights_can_undershoot_at_an_atom(self):
        with self.assertRaises(NonPositiveDensity):
            stieltjes_invert(lambda z: 1 / (z - 0.3), -1.0, 1.0, 2001, (1e-1, 3e-2, 1e-2))

    def test_bad_etas(self):
        for etas in ((), (0.01, 0.1), (1e-5,)):
            with self.subTest(etas=etas):
                with self.assertRaises(BadParams):
                    stieltjes_invert(semicircle_cauchy, -1, 1, 10, etas)

    def test_negative_density_raises(self):
        with self.assertRaises(NonPositiveDensity) as ctx:
            stieltjes_invert(lambda z: -semicircle_cauchy(z), -2.5, 2.5, 101)
        self.assertLess(ctx.exception.minimum, 0)


class TestCircleTransforms(unittest.TestCase):
    """K, psi and eta on the disk."""

    def test_haar_cauchy_vanishes(self):
        nu = make_standard("haar_circle", grid_size=256)
        g = np.array([0.0, 0.3j, -0.5 + 0.2j])
        self.assertLess(np.abs(circle_cauchy(nu, g)).max(), 1e-12)
        self.assertLess(np.abs(psi_transform(nu, g)).max(), 1e-12)

    def test_delta_one(self):
        nu = circle_measure([(0.0, 1.0)])
        self.assertAlmostEqual(circle_cauchy(nu, 0.5), 2.0, places=14)
        self.assertAlmostEqual(eta_transform(nu, 0.3), 0.3, places=14)

    def test_symmetric_pair(self):
        """K_{(delta_1 + delta_-1)/2}(g) = g/(1 - g^2)."""
        nu = make_standard("circle_atoms", [[0.0, 0.5], [math.pi, 0.5]])
        self.assertAlmostEqual(circle_cauchy(nu, 0.3), 0.3 / 0.91, places=13)

    def test_eta_over_w_at_zero_is_first_moment(self):
        nu = make_standard("circle_atoms", [[0.4, 0.3], [2.0, 0.7]])
        self.assertAlmostEqual(complex(eta_over_w(nu, np.array([0.0]))[0]), moments(nu, 1), places=14)

    def test_disk_enforced(self):
        with self.assertRaises(DomainError):
            circle_cauchy(make_standard("haar_circle", grid_size=8), 1.0)

    def test_rotation_multiplies_moments(self):
        nu = make_standard("circle_atoms", [[0.4, 0.3], [2.0, 0.7]])
        rot = nu.rotated(1.1)
        self.assertAlmostEqual(moments(rot, 2), np.exp(2.2j) * moments(nu, 2), places=13)

    def test_stratified_sampling_splits_atoms(self):
        nu = make_standard("circle_atoms", [[0.0, 0.5], [math.pi, 0.5]])
        angles = sample_angles(nu, 10)
        self.assertEqual(int(np.sum(np.isclose(angles, math.pi))), 5)

    def test_random_sampling_reproducible(self):
        nu = make_standard("haar_circle", grid_size=32)
        a = sample_angles(nu, 20, np.random.default_rng(9))
        b = sample_angles(nu, 20, np.random.default_rng(9))
        np.testing.assert_array_equal(a, b)


class TestSerialization(unittest.TestCase):
    """to_json / from_json."""

    def test_line_round_trip_through_json_text(self):
        mu = make_standard("marchenko_pastur", [2.0], grid_size=33)
        back = from_json(json.loads(json.dumps(to_json(mu))))
        self.assertIsInstance(back, LineMeasure)
        np.testing.assert_array_equal(back.samples, mu.samples)
        self.assertEqual(back.atoms, mu.atoms)
        self.assertEqual(back.edges, mu.edges)

    def test_circle_round_trip(self):
        nu = make_standard("circle_atoms", [[0.4, 0.3], [2.0, 0.7]]).rotated(0.5)
        back = from_json(json.loads(json.dumps(to_json(nu))))
        self.assertIsInstance(back, CircleMeasure)
        self.assertEqual(back.atoms, nu.atoms)

    def test_grid_mismatch(self):
        obj = to_json(make_standard("semicircle", grid_size=9))
        obj["grid"]["n"] = 10
        with self.assertRaises(BadParams):
            from_json(obj)

    def test_unknown_type(self):
        with self.assertRaises(UnknownFamily):
            from_json({"type": "torus", "atoms": [[0, 1]]})

    def test_missing_type(self):
        with self.assertRaises(BadParams):
            from_json({"atoms": [[0, 1]]})


if __name__ == "__main__":
    unittest.main()
