import math

from django.test import SimpleTestCase

from clusterlink.exceptions import DomainError
from clusterlink.metrics import ServiceSpec, db_to_linear, deg_to_rad, dor_threshold, linear_to_db, outage_threshold
from clusterlink.metrics.service import DEFAULT_SATURATION_EXPONENT, dor_exponent, spectral_threshold


class ThresholdTests(SimpleTestCase):

    def test_outage_threshold(self):
        self.assertEqual(outage_threshold(0.0, 200e3), 0.0)
        self.assertAlmostEqual(outage_threshold(200e3, 200e3), 1.0, places=15)
        self.assertAlmostEqual(outage_threshold(600e3, 200e3), 7.0, places=13)

    def test_small_exponent_is_accurate(self):
        self.assertAlmostEqual(spectral_threshold(1e-12) / (1e-12 * math.log(2)), 1.0, places=10)

    def test_dor_threshold(self):
        self.assertAlmostEqual(dor_threshold(100.0, 200e3, 2.5e-4), 3.0, places=13)
        self.assertEqual(dor_threshold(0.0, 200e3, 1e-4), 0.0)
        self.assertEqual(dor_threshold(100.0, 200e3, math.inf), 0.0)

    def test_saturation(self):
        delay = 100.0 / (200e3 * (DEFAULT_SATURATION_EXPONENT + 1))
        self.assertEqual(dor_threshold(100.0, 200e3, delay), math.inf)
        self.assertEqual(dor_exponent(100.0, 200e3, 0.0), math.inf)
        self.assertTrue(math.isfinite(dor_threshold(100.0, 200e3, delay, saturation_exponent=1000.0)))

    def test_invalid_bandwidth(self):
        with self.assertRaises(DomainError):
            outage_threshold(1.0, 0.0)
        with self.assertRaises(DomainError):
            dor_threshold(1.0, math.inf, 1.0)
        with self.assertRaises(DomainError):
            outage_threshold(-1.0, 1.0)


class ServiceSpecTests(SimpleTestCase):

    def test_properties(self):
        svc = ServiceSpec(data_bits=100.0, bandwidth=200e3, delay_threshold=2.5e-4)
        self.assertAlmostEqual(svc.dor_exponent, 2.0, places=14)
        self.assertFalse(svc.saturated)
        self.assertAlmostEqual(svc.dor_threshold, 3.0, places=13)

    def test_zero_delay_saturates(self):
        svc = ServiceSpec(100.0, 200e3, 0.0)
        self.assertTrue(svc.saturated)
        self.assertEqual(svc.dor_threshold, math.inf)

    def test_with_delay_keeps_the_rest(self):
        svc = ServiceSpec(100.0, 200e3, 1e-3, min_rate=5e3, saturation_exponent=32.0)
        other = svc.with_delay(2e-3)
        self.assertEqual(other.delay_threshold, 2e-3)
        self.assertEqual((other.data_bits, other.bandwidth, other.min_rate, other.saturation_exponent),
                         (100.0, 200e3, 5e3, 32.0))

    def test_validation(self):
        for kwargs in (
            {'data_bits': -1.0, 'bandwidth': 1.0, 'delay_threshold': 1.0},
            {'data_bits': 1.0, 'bandwidth': 0.0, 'delay_threshold': 1.0},
            {'data_bits': 1.0, 'bandwidth': 1.0, 'delay_threshold': -1.0},
            {'data_bits': 1.0, 'bandwidth': 1.0, 'delay_threshold': 1.0, 'min_rate': -1.0},
            {'data_bits': 1.0, 'bandwidth': 1.0, 'delay_threshold': math.nan},
        ):
            with self.assertRaises(ValueError, msg=str(kwargs)):
                ServiceSpec(**kwargs)


class ConversionTests(SimpleTestCase):

    def test_db(self):
        self.assertAlmostEqual(db_to_linear(-15.0), 10 ** -1.5, places=15)
        self.assertAlmostEqual(linear_to_db(db_to_linear(7.3)), 7.3, places=12)
        with self.assertRaises(DomainError):
            linear_to_db(0.0)

    def test_degrees(self):
        self.assertAlmostEqual(deg_to_rad(180.0), math.pi, places=15)
