import math

from django.test import SimpleTestCase, tag

from clusterlink.experiments.figures import figure_values
from clusterlink.experiments.pipeline import build_experiment
from clusterlink.experiments.runner import analytic_cdf, run_experiment
from clusterlink.metrics import quantile
from clusterlink.montecarlo import RunOptions

TARGET_DOR = 1e-4
SAMPLES = 2000000

# Analytic / simulated DOR at the 1e-4 point; measured at 4e6 samples the
# ratios are 0.94 (fig5, 0 dB), 0.66 (fig5, 6 dB), 2.03 (fig9, p_w 0.01)
# and 1.34 (fig9, p_w 0.05)
RATIO_BAND = (1.0 / 3.0, 3.0)

# (figure, overrides, analytic value expected inside the 99% interval)
TAIL_CASES = (
    ('fig5', {'rice_factor_db': [0.0]}, True),
    ('fig5', {'rice_factor_db': [6.0]}, False),
    ('fig9', {'word_error_prob': [0.01]}, False),
    ('fig9', {'word_error_prob': [0.05]}, False),
)


def single_point(figure_id, overrides, delay):
    value = format(delay, '.12g')
    return build_experiment({
        **figure_values(figure_id),
        **overrides,
        'start': value, 'stop': value, 'step': value,
        'samples': str(SAMPLES),
        'seed': '7',
    }, f'{figure_id}-tail')


def delay_at_target(figure_id, overrides):
    """Delay threshold at which the analytic DOR of the single curve is TARGET_DOR."""
    exp = single_point(figure_id, overrides, 1e-3)
    curve = exp.curves[0]
    params = exp.point_params(curve, exp.axis_values[0])
    cfg = exp.cluster(curve, params)
    cdf = analytic_cdf(curve.scenario, cfg, exp.side_info(curve, params))
    gamma = quantile(cdf, TARGET_DOR, scale=cfg.mean_snr)
    return exp.data_bits / (exp.bandwidth * math.log2(1.0 + gamma))


@tag('slow')
class DorTailTests(SimpleTestCase):
    """Simulated delay outage rate where the analytic one is 1e-4."""

    def test_tail_agreement(self):
        options = RunOptions.from_settings()
        for figure_id, overrides, consistent in TAIL_CASES:
            with self.subTest(figure=figure_id, **{k: v[0] for k, v in overrides.items()}):
                exp = single_point(figure_id, overrides, delay_at_target(figure_id, overrides))
                curve = run_experiment(exp, cache=None, options=options).curves[0]
                self.assertAlmostEqual(curve.analytic[0], TARGET_DOR, delta=1e-3 * TARGET_DOR)

                agreement = curve.agreement()
                self.assertEqual(agreement['compared'], 1)
                self.assertGreater(agreement['ratio_min'], RATIO_BAND[0])
                self.assertLess(agreement['ratio_max'], RATIO_BAND[1])
                if consistent:
                    self.assertEqual(agreement['outside_interval'], [])
