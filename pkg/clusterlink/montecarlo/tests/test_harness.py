import math
import tempfile

import numpy as np
from django.test import SimpleTestCase
from scipy import stats

from clusterlink.analytic import baselines
from clusterlink.channel import CkmSampler, CkmSideInfo, ClusterConfig, FeedbackSideInfo, PowerScaling, Scenario
from clusterlink.exceptions import DomainError
from clusterlink.metrics import ServiceSpec
from clusterlink.montecarlo import (
    EmpiricalCdf,
    HistogramCdf,
    RunOptions,
    SampleCache,
    dor_estimate,
    iter_blocks,
    run,
)

MEAN_SNR = 10 ** -1.5
SIDE = CkmSideInfo(math.radians(20.0))


def options(**overrides):
    return RunOptions.from_settings(**{'block_size': 4000, 'max_workers': 1, **overrides})


class RunTests(SimpleTestCase):

    def setUp(self):
        self.cfg = ClusterConfig(MEAN_SNR, 4.0, 20)

    def test_reproducible(self):
        first = run(Scenario.CKM, self.cfg, SIDE, 10000, seed=1, options=options())
        second = run(Scenario.CKM, self.cfg, SIDE, 10000, seed=1, options=options())
        other = run(Scenario.CKM, self.cfg, SIDE, 10000, seed=2, options=options())
        self.assertEqual(first.digest(), second.digest())
        self.assertEqual(first.config_fingerprint, second.config_fingerprint)
        self.assertNotEqual(first.digest(), other.digest())
        self.assertNotEqual(first.config_fingerprint, other.config_fingerprint)

    def test_worker_count_does_not_matter(self):
        serial = run(Scenario.FEEDBACK, self.cfg, FeedbackSideInfo(2, 0.1), 10500, seed=4, options=options())
        parallel = run(
            Scenario.FEEDBACK, self.cfg, FeedbackSideInfo(2, 0.1), 10500, seed=4, options=options(max_workers=4),
        )
        np.testing.assert_array_equal(serial.sorted_samples, parallel.sorted_samples)

    def test_blocks_in_order(self):
        sampler = CkmSampler(self.cfg, SIDE)
        serial = list(iter_blocks(sampler, 9000, 3, options()))
        parallel = list(iter_blocks(sampler, 9000, 3, options(max_workers=3)))
        self.assertEqual([b.size for b in serial], [4000, 4000, 1000])
        for a, b in zip(serial, parallel):
            np.testing.assert_array_equal(a, b)

    def test_fingerprint_tracks_configuration(self):
        a = run(Scenario.CKM, self.cfg, SIDE, 100, seed=1, options=options())
        b = run(Scenario.CKM, self.cfg.with_devices(21), SIDE, 100, seed=1, options=options())
        c = run(Scenario.CKM, self.cfg, CkmSideInfo(0.1), 100, seed=1, options=options())
        self.assertEqual(len({a.config_fingerprint, b.config_fingerprint, c.config_fingerprint}), 3)

    def test_sample_count(self):
        single = run(Scenario.SELECTION, self.cfg, None, 1, seed=0, options=options())
        self.assertEqual(single.count, 1)
        self.assertEqual(single(single.sorted_samples[0]), 1.0)
        with self.assertRaises(DomainError):
            run(Scenario.CKM, self.cfg, SIDE, 0, seed=0, options=options())
        with self.assertRaises(ValueError):
            run('mimo', self.cfg, SIDE, 10, seed=0, options=options())

    def test_rayleigh_sum_is_exponential(self):
        cfg = ClusterConfig(MEAN_SNR, 0.0, 20)
        n = 20000
        ecdf = run(Scenario.CKM, cfg, SIDE, n, seed=7, options=options())
        result = stats.kstest(ecdf.sorted_samples, stats.expon(scale=20 * MEAN_SNR).cdf)
        self.assertLess(result.statistic, 1.63 / math.sqrt(n))

    def test_histogram_mode(self):
        ecdf = run(Scenario.CKM, self.cfg, SIDE, 12000, seed=5, options=options(max_sorted_samples=10000))
        exact = run(Scenario.CKM, self.cfg, SIDE, 12000, seed=5, options=options())
        self.assertIsInstance(ecdf, HistogramCdf)
        self.assertIsInstance(exact, EmpiricalCdf)
        self.assertEqual(ecdf.count, 12000)
        for p in (0.1, 0.5):
            gamma = exact.quantile(p).value
            self.assertAlmostEqual(ecdf(gamma), exact(gamma), delta=2e-3)

    def test_cache_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            cache = SampleCache(tmp)
            first = run(Scenario.CKM, self.cfg, SIDE, 3000, seed=8, options=options(), cache=cache)
            self.assertTrue(cache.path_for(first.config_fingerprint).exists())
            second = run(Scenario.CKM, self.cfg, SIDE, 3000, seed=8, options=options(), cache=cache)
        self.assertEqual(first.digest(), second.digest())

    def test_selection_matches_exact_law(self):
        cfg = ClusterConfig(MEAN_SNR, 2.0, 5, power_scaling=PowerScaling.CONSTANT_TOTAL)
        ecdf = run(Scenario.SELECTION, cfg, None, 200000, seed=9, options=options(block_size=50000))
        svc = ServiceSpec(100.0, 200e3, 1.0)
        gamma = ecdf.quantile(0.01).value
        svc = svc.with_delay(100.0 / (200e3 * math.log2(1 + gamma)))
        point, low, high = dor_estimate(ecdf, svc)
        exact = baselines.selection_cdf(MEAN_SNR, 2.0, 5, svc.dor_threshold)
        self.assertLessEqual(low, exact)
        self.assertLessEqual(exact, high)
