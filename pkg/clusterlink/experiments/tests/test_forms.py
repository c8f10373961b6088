from django.test import SimpleTestCase, override_settings

from clusterlink.experiments.figures import FIGURES, figure_values
from clusterlink.experiments.forms import ExperimentConfigForm
from clusterlink.experiments.runner import CurveKind, LineStyle, axis_points


def form_for(**values):
    form = ExperimentConfigForm(data=values)
    form.is_valid()
    return form


class AxisPointsTests(SimpleTestCase):

    def test_includes_both_ends(self):
        points = axis_points(1e-4, 1e-3, 2.5e-5)
        self.assertEqual(len(points), 37)
        self.assertEqual(points[0], 1e-4)
        self.assertEqual(points[-1], 1e-3)
        self.assertEqual(points[4], 2e-4)

    def test_single_point(self):
        self.assertEqual(axis_points(-15.0, -15.0, 1.0), (-15.0,))


@override_settings(CLUSTERLINK_OUTAGE_SAMPLES=1000, CLUSTERLINK_DOR_SAMPLES=5000, CLUSTERLINK_SEED=99)
class ExperimentConfigFormTests(SimpleTestCase):

    def test_defaults(self):
        form = form_for()
        self.assertTrue(form.is_valid(), form.errors)
        exp = form.to_experiment('minimal')
        self.assertEqual(exp.name, 'minimal')
        self.assertEqual(len(exp.axis_values), 36)
        self.assertEqual(len(exp.curves), 1)
        self.assertEqual(exp.curves[0].label, 'ckm')
        self.assertEqual(exp.min_rate, exp.bandwidth)
        self.assertEqual(exp.samples, 1000)
        self.assertEqual(exp.seed, 99)
        self.assertFalse(exp.analytic_only)

    def test_dor_metric_default_samples(self):
        exp = form_for(metric='dor', axis='delay_threshold_s', start='1e-4', stop='1e-3', step='1e-4').to_experiment()
        self.assertEqual(exp.samples, 5000)

    def test_explicit_run_options(self):
        exp = form_for(samples='123', seed='0', analytic_only=True).to_experiment()
        self.assertEqual(exp.samples, 123)
        self.assertEqual(exp.seed, 0)
        self.assertTrue(exp.analytic_only)

    def test_step_must_be_positive(self):
        form = form_for(step='0')
        self.assertFalse(form.is_valid())
        self.assertIn('step', form.errors)

    def test_empty_range(self):
        form = form_for(start='0', stop='-10')
        self.assertFalse(form.is_valid())
        self.assertIn('stop', form.errors)

    def test_swept_key_cannot_list_values(self):
        form = form_for(axis='rice_factor_db', start='0', stop='6', step='3', rice_factor_db='0, 3')
        self.assertFalse(form.is_valid())
        self.assertIn('rice_factor_db', form.errors)
        self.assertIn('rice_factor_db', form.error_summary())

    def test_axis_must_fit_scenario(self):
        form = form_for(scenario='feedback', axis='sigma_eps_deg', start='0', stop='30', step='10')
        self.assertFalse(form.is_valid())
        self.assertIn('axis', form.errors)

    def test_axis_range_checked(self):
        form = form_for(scenario='feedback', axis='word_error_prob', start='0.5', stop='1.5', step='0.5')
        self.assertFalse(form.is_valid())
        self.assertIn('axis', form.errors)

    def test_malformed_list(self):
        form = form_for(rice_factor_db='0, high')
        self.assertFalse(form.is_valid())
        self.assertIn('rice_factor_db', form.errors)

    def test_out_of_range_values(self):
        for key, value in (('bits', '0'), ('bits', '33'), ('word_error_prob', '1.5'), ('device_count', '0')):
            form = form_for(scenario='feedback', **{key: value})
            self.assertFalse(form.is_valid(), key)
            self.assertIn(key, form.errors)

    def test_unknown_baseline(self):
        form = form_for(baselines='rayleigh, mimo')
        self.assertFalse(form.is_valid())
        self.assertIn('baselines', form.errors)

    def test_devices_metric_constraints(self):
        form = form_for(metric='devices', scenario='feedback')
        self.assertIn('metric', form.errors)
        form = form_for(metric='devices', baselines='selection')
        self.assertIn('baselines', form.errors)
        form = form_for(metric='devices', target_dor='0.6')
        self.assertIn('target_dor', form.errors)

    def test_every_figure_validates(self):
        for figure_id in FIGURES:
            form = form_for(**figure_values(figure_id))
            self.assertTrue(form.is_valid(), f'{figure_id}: {form.errors}')

    def test_curve_product_and_styles(self):
        exp = form_for(**figure_values('fig7')).to_experiment('fig7')
        labels = [c.label for c in exp.curves]
        self.assertEqual(labels, [
            'rice_factor_db=-3 bits=1',
            'rice_factor_db=-3 bits=2',
            'rice_factor_db=9 bits=1',
            'rice_factor_db=9 bits=2',
            'selection',
        ])
        styles = [c.style for c in exp.curves]
        self.assertEqual(styles, [LineStyle.SOLID, LineStyle.DASHED, LineStyle.SOLID, LineStyle.DASHED, LineStyle.DOTTED])
        self.assertEqual(exp.curves[-1].kind, CurveKind.SELECTION)
        self.assertEqual(exp.curves[-1].params['rice_factor_db'], 0.0)
        self.assertEqual(exp.curves[0].params['word_error_prob'], 0.05)

    def test_figure3_curves(self):
        exp = form_for(**figure_values('fig3')).to_experiment('fig3')
        self.assertEqual(len(exp.curves), 8)
        self.assertEqual([c.kind for c in exp.curves[-2:]], [CurveKind.RAYLEIGH, CurveKind.SELECTION])
        self.assertEqual(exp.curves[-2].style, LineStyle.DASHED)
