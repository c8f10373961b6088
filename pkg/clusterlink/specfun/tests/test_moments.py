import math

import numpy as np
from django.test import SimpleTestCase
from numpy.polynomial.hermite import hermgauss
from scipy import integrate, stats

from clusterlink.specfun import (
    gauss_cos2_moment,
    gauss_cos_moment,
    gauss_sin2_moment,
    rice_amplitude_mean,
    sinc_complement,
    sinc_norm,
    uniform_cos2_moment,
    uniform_cos_moment,
)

NODES, WEIGHTS = hermgauss(80)


def gaussian_expectation(func, sigma):
    """E[func(eps)] for eps ~ N(0, sigma^2) by Gauss-Hermite quadrature."""
    return float(np.sum(WEIGHTS * func(math.sqrt(2.0) * sigma * NODES)) / math.sqrt(math.pi))


class SincTests(SimpleTestCase):

    def test_values(self):
        self.assertEqual(sinc_norm(0), 1.0)
        self.assertAlmostEqual(sinc_norm(0.5), 2.0 / math.pi, places=15)
        self.assertAlmostEqual(sinc_norm(1.0), 0.0, places=15)

    def test_complement_small_argument(self):
        x = 2.0 ** -29
        y = math.pi * x
        self.assertGreater(sinc_complement(x), 0.0)
        self.assertAlmostEqual(sinc_complement(x) / (y * y / 6.0), 1.0, places=10)

    def test_complement_matches_direct_form(self):
        for x in (0.01, 0.25, 0.5, 0.9):
            self.assertAlmostEqual(sinc_complement(x), 1.0 - sinc_norm(x), places=14)


class GaussianMomentTests(SimpleTestCase):

    def test_no_error(self):
        self.assertEqual(gauss_cos_moment(0), 1.0)
        self.assertEqual(gauss_cos2_moment(0), 1.0)
        self.assertEqual(gauss_sin2_moment(0), 0.0)

    def test_pair_sums_to_one(self):
        for sigma in (0.5, 1e-9, 0.349066, 3.0):
            self.assertEqual(gauss_cos2_moment(sigma) + gauss_sin2_moment(sigma), 1.0)

    def test_against_gauss_hermite(self):
        for sigma in np.linspace(0.01, 0.6, 30):
            self.assertAlmostEqual(gauss_cos_moment(sigma), gaussian_expectation(np.cos, sigma), delta=1e-10)
            self.assertAlmostEqual(
                gauss_cos2_moment(sigma), gaussian_expectation(lambda e: np.cos(e) ** 2, sigma), delta=1e-10,
            )
            self.assertAlmostEqual(
                gauss_sin2_moment(sigma), gaussian_expectation(lambda e: np.sin(e) ** 2, sigma), delta=1e-10,
            )

    def test_twenty_degrees(self):
        sigma = math.radians(20.0)
        self.assertAlmostEqual(gauss_cos_moment(sigma), gaussian_expectation(np.cos, sigma), delta=1e-12)
        self.assertAlmostEqual(gauss_cos_moment(sigma), math.exp(-0.0609238), delta=1e-7)

    def test_negative_sigma_rejected(self):
        with self.assertRaises(ValueError):
            gauss_cos_moment(-0.1)


class UniformMomentTests(SimpleTestCase):

    def test_against_quadrature(self):
        for bits in (1, 2, 3, 8):
            w = math.pi / 2 ** bits
            cos_mean, _ = integrate.quad(math.cos, -w, w)
            cos2_mean, _ = integrate.quad(lambda t: math.cos(t) ** 2, -w, w)
            self.assertAlmostEqual(uniform_cos_moment(w), cos_mean / (2 * w), places=12)
            self.assertAlmostEqual(uniform_cos2_moment(w), cos2_mean / (2 * w), places=12)

    def test_quantization_building_blocks(self):
        # E[cos] over the N-bit cell is sinc(2^-N)
        self.assertAlmostEqual(uniform_cos_moment(math.pi / 4), sinc_norm(0.25), places=15)
        self.assertAlmostEqual(uniform_cos2_moment(math.pi / 4), 0.5 * (1 + sinc_norm(0.5)), places=15)


class RiceAmplitudeMeanTests(SimpleTestCase):

    def test_rayleigh_limit(self):
        self.assertAlmostEqual(rice_amplitude_mean(1, 0), math.sqrt(math.pi / 4), places=14)
        self.assertAlmostEqual(rice_amplitude_mean(4, 0), 2 * math.sqrt(math.pi / 4), places=14)

    def test_against_scipy_rice(self):
        for mean_power, nu in ((1.0, 1.0), (0.03, 10 ** 0.6), (2.0, 50.0)):
            scale = math.sqrt(mean_power / (2.0 * (1.0 + nu)))
            expected = stats.rice.mean(math.sqrt(2.0 * nu), scale=scale)
            self.assertAlmostEqual(rice_amplitude_mean(mean_power, nu), expected, delta=1e-10 * math.sqrt(mean_power))

    def test_static_limit(self):
        self.assertAlmostEqual(rice_amplitude_mean(1.0, 1e6), 1.0, delta=1e-6)

    def test_monotone_in_both_arguments(self):
        powers = np.linspace(0.1, 5.0, 12)
        factors = np.linspace(0.0, 20.0, 12)
        for nu in factors:
            values = [rice_amplitude_mean(p, nu) for p in powers]
            self.assertTrue(all(b > a for a, b in zip(values, values[1:])))
        for p in powers:
            values = [rice_amplitude_mean(p, nu) for nu in factors]
            self.assertTrue(all(b > a for a, b in zip(values, values[1:])))
