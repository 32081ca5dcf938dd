#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# tests/test_domain_calculus.py - Tests for half-plane, ball and Omega margins

import math
import unittest

import numpy as np

from domain_calculus import (
    OperatorPoint, ball_margin, cayley, classify_margin, domain_margin, halfplane_margin, im_part,
    invert_checked, inverse_cayley, lemma34_identity_residual, lemma34_margins, omega_margin, omega_psi,
    operator_norm, real_part,
)
from subordination import DimensionMismatch, DomainError, SingularMatrix


def _random(rng, n, scale=1.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


class TestOperatorPoint(unittest.TestCase):
    """OperatorPoint construction and validation."""

    def test_scalar_becomes_one_by_one(self):
        p = OperatorPoint.of(2 + 1j)
        self.assertEqual(p.dim, 1)

    def test_rejects_non_square(self):
        with self.assertRaises(DimensionMismatch):
            OperatorPoint(np.zeros((2, 3), dtype=complex))

    def test_rejects_nan(self):
        with self.assertRaises(DomainError):
            OperatorPoint(np.array([[np.nan]], dtype=complex))

    def test_dimension_cap(self):
        with self.assertRaises(DimensionMismatch):
            OperatorPoint.of(np.eye(5), n_max=4)


class TestMargins(unittest.TestCase):
    """Half-plane and ball margins."""

    def test_im_and_re_parts_reassemble(self):
        rng = np.random.default_rng(1)
        T = _random(rng, 4)
        self.assertLess(np.abs(real_part(T) + 1j * im_part(T) - T).max(), 1e-14)

    def test_halfplane_margin_scalar(self):
        self.assertAlmostEqual(halfplane_margin(np.array([[3 + 0.25j]])), 0.25)

    def test_halfplane_margin_diag(self):
        T = np.diag([1j, 2 + 0.5j])
        self.assertAlmostEqual(halfplane_margin(T), 0.5)
        self.assertLess(halfplane_margin(-T), 0)

    def test_ball_margin(self):
        self.assertAlmostEqual(ball_margin(np.diag([0.5, -0.25])), 0.5)
        self.assertAlmostEqual(ball_margin(np.diag([0.5, -0.25]), radius=2.0), 1.5)

    def test_domain_margin_record(self):
        dm = domain_margin(np.array([[0.5j]]))
        self.assertAlmostEqual(dm.halfplane_margin, 0.5)
        self.assertAlmostEqual(dm.ball_margin, 0.5)

    def test_classify_margin(self):
        self.assertEqual(classify_margin(1e-3), "inside")
        self.assertEqual(classify_margin(-1e-3), "outside")
        self.assertEqual(classify_margin(1e-12), "boundary")

    def test_operator_norm_unitary(self):
        q, _ = np.linalg.qr(_random(np.random.default_rng(2), 5))
        self.assertAlmostEqual(operator_norm(q), 1.0, places=12)


class TestInversion(unittest.TestCase):
    """Inversion swaps the half-planes."""

    def test_inverse_of_upper_lands_lower(self):
        rng = np.random.default_rng(3)
        for trial in range(20):
            with self.subTest(trial=trial):
                h = _random(rng, 3)
                T = h + h.conj().T + 1j * (0.5 * np.eye(3) + 0.1 * (lambda a: a @ a.conj().T)(_random(rng, 3)))
                inv = invert_checked(T).entries
                self.assertGreater(halfplane_margin(-inv), 0)

    def test_singular_raises(self):
        with self.assertRaises(SingularMatrix):
            invert_checked(np.array([[1.0, 1.0], [1.0, 1.0]]))

    def test_cayley_round_trip(self):
        T = np.array([[0.3 + 1j, 0.2], [0.1, -0.5 + 2j]])
        W = cayley(T).entries
        self.assertGreater(ball_margin(W), 0)
        self.assertLess(np.abs(inverse_cayley(W).entries - T).max(), 1e-12)


class TestLemma34(unittest.TestCase):
    """The two equivalent conditions and the resolvent identity."""

    def test_zero_is_inside(self):
        c_i, c_ii = lemma34_margins(np.zeros((3, 3)))
        self.assertAlmostEqual(c_i, 1.0)
        self.assertAlmostEqual(c_ii, 1.0)

    def test_diag_closed_form(self):
        """x = diag(0.9, -0.9): cond_ii = lambda_min(2/(1-x)) - 1 = 2/1.9 - 1."""
        c_i, c_ii = lemma34_margins(np.diag([0.9, -0.9]))
        self.assertAlmostEqual(c_i, 0.1, places=12)
        self.assertAlmostEqual(c_ii, 2 / 1.9 - 1, places=12)

    def test_scaled_unitary_outside(self):
        q, _ = np.linalg.qr(_random(np.random.default_rng(4), 4))
        c_i, c_ii = lemma34_margins(1.5 * q)
        self.assertLess(c_i, 0)
        self.assertLess(c_ii, 0)

    def test_singular_resolvent_is_minus_inf(self):
        _, c_ii = lemma34_margins(np.eye(2))
        self.assertEqual(c_ii, -math.inf)

    def test_identity_residual_small(self):
        rng = np.random.default_rng(5)
        for n in (1, 2, 4, 6):
            with self.subTest(n=n):
                x = _random(rng, n, 0.4)
                self.assertLess(lemma34_identity_residual(x), 1e-13)

    def test_identity_residual_singular(self):
        with self.assertRaises(SingularMatrix):
            lemma34_identity_residual(np.eye(3))


class TestOmega(unittest.TestCase):
    """Omega membership and the trace-level Psi."""

    def test_omega_margin_unitary_a(self):
        q, _ = np.linalg.qr(_random(np.random.default_rng(6), 3))
        self.assertAlmostEqual(omega_margin(q, 0.3 * np.eye(3)), 0.7, places=12)

    def test_singular_a(self):
        self.assertEqual(omega_margin(np.zeros((2, 2)), np.eye(2)), -math.inf)

    def test_shape_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            omega_margin(np.eye(2), np.eye(3))

    def test_psi_scalar(self):
        """a = 1, c = 0.5: tau((1 - 0.5)^{-1}) = 2, Psi = 1/2."""
        psi, margin = omega_psi(np.eye(1), 0.5 * np.eye(1))
        self.assertAlmostEqual(psi, 0.5)
        self.assertAlmostEqual(margin, 0.5)

    def test_psi_inside_disk_on_omega(self):
        rng = np.random.default_rng(7)
        for trial in range(20):
            with self.subTest(trial=trial):
                a = _random(rng, 3) + 3 * np.eye(3)
                c = _random(rng, 3)
                c *= 0.9 * (1 - 1e-3) / operator_norm(np.linalg.solve(a, c))
                self.assertGreater(omega_margin(a, c), 0)
                self.assertGreater(omega_psi(a, c)[1], 0)

    def test_psi_outside_raises(self):
        with self.assertRaises(DomainError):
            omega_psi(np.eye(2), 2 * np.eye(2))


if __name__ == "__main__":
    unittest.main()
