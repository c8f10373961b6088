import math
import tempfile
from unittest import mock

from django.test import SimpleTestCase

from clusterlink.analytic import baselines, ckm, feedback
from clusterlink.channel import CkmSideInfo, ClusterConfig, FeedbackSideInfo, PowerScaling, Scenario
from clusterlink.exceptions import DomainError, InvalidConfiguration, NumericFailure
from clusterlink.experiments.figures import figure_values
from clusterlink.experiments.output import metadata, render_csv
from clusterlink.experiments.pipeline import build_experiment
from clusterlink.experiments.runner import ExperimentRunner, run_experiment
from clusterlink.metrics import ServiceSpec, SnrCdf, db_to_linear, deg_to_rad, outage_threshold
from clusterlink.montecarlo import RunOptions, SampleCache, run

SERIAL = RunOptions.from_settings(max_workers=1, block_size=4096)


def analytic_only(figure_id, **overrides):
    return build_experiment({**figure_values(figure_id), 'analytic_only': True, **overrides}, figure_id)


class AnalyticRoundTripTests(SimpleTestCase):
    """Every analytic value is what the library returns for the row's parameters."""

    def test_ckm_dor(self):
        exp = analytic_only('fig5', start='2e-4', stop='6e-4', step='2e-4')
        result = run_experiment(exp)
        for curve in result.curves:
            for value, analytic, simulated in zip(exp.axis_values, curve.analytic, curve.simulated):
                cfg = ClusterConfig(db_to_linear(-15.0), db_to_linear(curve.curve.params['rice_factor_db']), 20)
                svc = ServiceSpec(100.0, 200e3, value)
                expected = ckm.dor(ckm.build_dist(cfg, CkmSideInfo(deg_to_rad(20.0))), svc)
                self.assertEqual(analytic, expected)
                self.assertIsNone(simulated)

    def test_feedback_dor(self):
        exp = analytic_only('fig9', start='3e-4', stop='5e-4', step='1e-4')
        result = run_experiment(exp)
        cfg = ClusterConfig(db_to_linear(-15.0), 1.0, 20)
        for curve in result.curves:
            side = FeedbackSideInfo(2, curve.curve.params['word_error_prob'])
            for value, analytic in zip(exp.axis_values, curve.analytic):
                expected = feedback.dor_feedback(cfg, side, ServiceSpec(100.0, 200e3, value))
                self.assertEqual(analytic, expected)
            self.assertGreater(sum(curve.branches.values()), 0)

    def test_baselines(self):
        exp = analytic_only('fig3', start='-20', stop='-10', step='5')
        result = run_experiment(exp)
        rayleigh, selection = result.curves[-2:]
        threshold = outage_threshold(200e3, 200e3)
        for i, value in enumerate(exp.axis_values):
            mean_snr = db_to_linear(value)
            # Rayleigh sum of 20 devices at full power: exponential with mean 20 * mean_snr
            self.assertAlmostEqual(rayleigh.analytic[i], -math.expm1(-threshold / (20 * mean_snr)), delta=1e-9)
            self.assertEqual(selection.analytic[i], baselines.selection_cdf(mean_snr, 1.0, 20, threshold))

    def test_outage_orders_by_rice_factor(self):
        exp = analytic_only('fig3', start='-25', stop='-25', step='1')
        values = [curve.analytic[0] for curve in run_experiment(exp).curves[:6]]
        # nu from 0 dB upwards only helps
        self.assertEqual(values[2:], sorted(values[2:], reverse=True))

    def test_required_devices(self):
        exp = analytic_only('fig6', start='1e-3', stop='1e-3', step='1e-4')
        runner = ExperimentRunner(exp)
        result = runner.run()
        svc = ServiceSpec(100.0, 200e3, 1e-3)
        for curve in result.curves:
            nu = db_to_linear(curve.curve.params['rice_factor_db'])
            expected = ckm.required_devices(
                1e-4, svc.dor_threshold, nu, db_to_linear(-15.0), deg_to_rad(20.0), PowerScaling.CONSTANT_TOTAL,
            )
            self.assertEqual(curve.analytic, [expected])
            self.assertEqual(curve.simulated, [None])
            self.assertEqual(curve.half_width, [None])

    def test_saturated_delay_gives_certain_outage(self):
        exp = analytic_only('fig5', start='1e-7', stop='1e-7', step='1e-7')
        for curve in run_experiment(exp).curves:
            self.assertEqual(curve.analytic, [1.0])

    def test_numeric_failure_names_the_point(self):
        exp = analytic_only('fig5', start='2e-4', stop='2e-4', step='1e-4')
        runner = ExperimentRunner(exp)
        failure = NumericFailure('did not converge')

        def fail(*args, **kwargs):
            raise failure

        runner.evaluate = fail
        with self.assertRaises(NumericFailure) as ctx:
            runner.run()
        self.assertEqual(ctx.exception.context['curve'], exp.curves[0].label)
        self.assertEqual(ctx.exception.context['delay_threshold_s'], 2e-4)

    def test_analytic_cdf_checked_once_per_curve(self):
        exp = analytic_only('fig5', start='2e-4', stop='6e-4', step='2e-4')
        with mock.patch.object(SnrCdf, '_spot_check', autospec=True) as spot_check:
            run_experiment(exp)
        self.assertEqual(spot_check.call_count, len(exp.curves))

    def test_broken_analytic_cdf_rejected(self):
        exp = analytic_only('fig5', start='2e-4', stop='2e-4', step='1e-4')
        with mock.patch('clusterlink.analytic.ckm.snr_cdf', return_value=1.5):
            with self.assertRaises(DomainError):
                run_experiment(exp)

    def test_analytic_only_has_nothing_to_compare(self):
        result = run_experiment(analytic_only('fig9', start='3e-4', stop='4e-4', step='1e-4'))
        agreement = metadata(result)['curves'][0]['agreement']
        self.assertEqual(agreement['compared'], 0)
        self.assertEqual(agreement['outside_interval'], [])
        self.assertIsNone(agreement['ratio_min'])
        self.assertIsNone(agreement['max_abs_gap'])

    def test_invalid_values_raise(self):
        with self.assertRaises(InvalidConfiguration) as ctx:
            build_experiment({'step': '-1'})
        self.assertIn('step', ctx.exception.errors)


class SimulatedValueTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.cache = SampleCache(self.tmp.name)
        self.values = {'start': '-26', 'stop': '-22', 'step': '2', 'samples': '4000', 'seed': '3'}

    def test_one_unit_run_serves_the_sweep(self):
        exp = build_experiment(self.values, 'tiny')
        result = run_experiment(exp, cache=self.cache, options=SERIAL)
        self.assertEqual(result.simulations, 1)
        self.assertEqual(result.cache_hits, 0)

        unit = ClusterConfig(1.0, db_to_linear(6.0), 20)
        ecdf = run(Scenario.CKM, unit, CkmSideInfo(deg_to_rad(20.0)), 4000, 3, options=SERIAL)
        curve = result.curves[0]
        for i, value in enumerate(exp.axis_values):
            threshold = outage_threshold(200e3, 200e3) / db_to_linear(value)
            self.assertEqual(curve.simulated[i], ecdf.count_at_most(threshold) / 4000)
            self.assertGreater(curve.half_width[i], 0)

    def test_cache_reuse_is_byte_identical(self):
        exp = build_experiment(self.values, 'tiny')
        first = run_experiment(exp, cache=self.cache, options=SERIAL)
        second = run_experiment(exp, cache=self.cache, options=SERIAL)
        self.assertEqual(second.simulations, 0)
        self.assertEqual(second.cache_hits, 1)
        self.assertEqual(render_csv(first), render_csv(second))

    def test_analytic_only_reads_the_cache(self):
        run_experiment(build_experiment(self.values, 'tiny'), cache=self.cache, options=SERIAL)
        cached = run_experiment(
            build_experiment({**self.values, 'analytic_only': True}, 'tiny'), cache=self.cache, options=SERIAL,
        )
        self.assertEqual(cached.cache_hits, 1)
        self.assertTrue(all(v is not None for v in cached.curves[0].simulated))

        empty = run_experiment(
            build_experiment({**self.values, 'analytic_only': True, 'seed': '4'}, 'tiny'),
            cache=self.cache, options=SERIAL,
        )
        self.assertEqual(empty.simulations, 0)
        self.assertEqual(empty.curves[0].simulated, [None, None, None])

    def test_simulation_tracks_analytic(self):
        values = {**self.values, 'samples': '20000', 'sigma_eps_deg': '10'}
        result = run_experiment(build_experiment(values, 'check'), cache=None, options=SERIAL)
        curve = result.curves[0]
        for analytic, simulated in zip(curve.analytic, curve.simulated):
            self.assertAlmostEqual(analytic, simulated, delta=0.03)

    def test_agreement_is_recorded(self):
        values = {**self.values, 'samples': '20000', 'sigma_eps_deg': '10'}
        result = run_experiment(build_experiment(values, 'check'), cache=None, options=SERIAL)
        curve = result.curves[0]
        agreement = metadata(result)['curves'][0]['agreement']
        self.assertEqual(agreement, curve.agreement())
        self.assertEqual(agreement['compared'], 3)
        self.assertTrue(set(agreement['outside_interval']) <= set(result.experiment.axis_values))
        gaps = [abs(a - s) for a, s in zip(curve.analytic, curve.simulated)]
        self.assertEqual(agreement['max_abs_gap'], max(gaps))
        self.assertLessEqual(agreement['ratio_min'], agreement['ratio_max'])

    def test_device_search_within_bound(self):
        values = {
            **figure_values('fig6'),
            'rice_factor_db': '0',
            'target_dor': '0.01',
            'start': '1e-3', 'stop': '1e-3', 'step': '1e-4',
            'samples': '20000', 'seed': '11',
        }
        result = run_experiment(build_experiment(values, 'devices'), cache=self.cache, options=SERIAL)
        curve = result.curves[0]
        self.assertIsNotNone(curve.analytic[0])
        self.assertIsNotNone(curve.simulated[0])
        self.assertLessEqual(curve.simulated[0], curve.analytic[0])
        self.assertEqual(result.searches, 1)
