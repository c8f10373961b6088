import math

import numpy as np
from django.test import SimpleTestCase
from scipy import special

from clusterlink.exceptions import DomainError, NumericFailure
from clusterlink.specfun import (
    Tolerance,
    bessel_i,
    bessel_i_scaled,
    log_bessel_i_scaled_sequence,
)


class BesselValueTests(SimpleTestCase):

    def test_zero_argument(self):
        self.assertEqual(bessel_i(0, 0), 1.0)
        self.assertEqual(bessel_i(3, 0), 0.0)

    def test_order_zero_at_one(self):
        self.assertAlmostEqual(bessel_i(0, 1.0), 1.2660658777520082, places=13)

    def test_matches_scipy_across_crossover(self):
        for order in (0, 1, 2, 5, 12, 40):
            for x in (0.01, 0.5, 3.0, 14.9, 15.1, 22.0, 60.0, 250.0):
                expected = special.ive(order, x)
                got = bessel_i_scaled(order, x)
                self.assertLess(
                    abs(got - expected), 1e-11 * expected + 1e-300,
                    msg=f'order={order} x={x}',
                )

    def test_recurrence_identity(self):
        for x in np.linspace(0.1, 30.0, 61):
            for n in range(1, 8):
                lhs = bessel_i(n - 1, x) - bessel_i(n + 1, x)
                rhs = 2.0 * n / x * bessel_i(n, x)
                self.assertLess(abs(lhs - rhs), 1e-9 * abs(rhs), msg=f'n={n} x={x}')

    def test_monotone_in_argument(self):
        grid = np.linspace(0.0, 40.0, 200)
        for order in (0, 1, 4):
            values = [bessel_i(order, x) for x in grid]
            self.assertTrue(all(b >= a for a, b in zip(values, values[1:])))

    def test_rejects_bad_arguments(self):
        with self.assertRaises(DomainError):
            bessel_i(-1, 1.0)
        with self.assertRaises(DomainError):
            bessel_i(1.5, 1.0)
        with self.assertRaises(DomainError):
            bessel_i(0, -0.1)

    def test_non_convergence_reports_partial_value(self):
        with self.assertRaises(NumericFailure) as ctx:
            bessel_i(0, 10.0, Tolerance(max_terms=2))
        self.assertIsNotNone(ctx.exception.partial_value)
        self.assertEqual(ctx.exception.terms, 2)

    def test_overflow_is_numeric_failure(self):
        with self.assertRaises(NumericFailure):
            bessel_i(0, 800.0)


class LogBesselSequenceTests(SimpleTestCase):

    def test_matches_scipy(self):
        for x in (0.05, 1.0, 7.5, 40.0, 300.0):
            got = log_bessel_i_scaled_sequence(x, 60)
            expected = np.log(special.ive(np.arange(60), x))
            finite = np.isfinite(expected)
            np.testing.assert_allclose(got[finite], expected[finite], rtol=1e-10, atol=1e-10)

    def test_large_argument_against_asymptotic_expansion(self):
        # Low orders at huge arguments, well inside the Hankel expansion's range
        for x in (1e5, 1e7):
            got = np.exp(log_bessel_i_scaled_sequence(x, 5))
            expected = [bessel_i_scaled(k, x) for k in range(5)]
            np.testing.assert_allclose(got, expected, rtol=1e-10)

    def test_both_sides_of_the_switch(self):
        for x in (123.0, 124.0, 124.5, 1000.0):
            got = log_bessel_i_scaled_sequence(x, 60)
            np.testing.assert_allclose(got, np.log(special.ive(np.arange(60), x)), rtol=1e-10, atol=1e-10)

    def test_empty_and_zero_argument(self):
        self.assertEqual(len(log_bessel_i_scaled_sequence(2.0, 0)), 0)
        with self.assertRaises(DomainError):
            log_bessel_i_scaled_sequence(0.0, 5)


class ToleranceTests(SimpleTestCase):

    def test_defaults(self):
        tol = Tolerance()
        self.assertEqual(tol.abs_tol, 1e-14)
        self.assertEqual(tol.rel_tol, 1e-12)
        self.assertEqual(tol.max_terms, 20000)
        self.assertTrue(math.isclose(tol.bound(2.0), 1e-14 + 2e-12))

    def test_validation(self):
        with self.assertRaises(ValueError):
            Tolerance(abs_tol=0)
        with self.assertRaises(ValueError):
            Tolerance(rel_tol=-1)
        with self.assertRaises(ValueError):
            Tolerance(max_terms=0)
