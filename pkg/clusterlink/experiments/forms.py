"""
Experiment Forms

Figures, sweep files and the command line all describe an experiment with
the same flat set of values, in the units the curves are quoted in (dB,
degrees, seconds, Hz). ExperimentConfigForm validates them and converts
them once, in to_experiment().
"""

import itertools
import math

from django import forms
from django.conf import settings

from clusterlink.channel import PowerScaling, Scenario
from clusterlink.channel.config import MAX_FEEDBACK_BITS

from .runner import (
    CURVE_KEYS,
    CurveKind,
    CurveSpec,
    Experiment,
    LineStyle,
    Metric,
    SweepAxis,
    axis_points,
    default_samples,
)

# Keeps a typo in a step from producing a sweep nobody wants to wait for
MAX_AXIS_POINTS = 10000

# Curve parameters that matter for each scenario
SCENARIO_KEYS = {
    Scenario.CKM: ('mean_snr_db', 'rice_factor_db', 'device_count', 'sigma_eps_deg', 'delay_threshold_s'),
    Scenario.FEEDBACK: ('mean_snr_db', 'rice_factor_db', 'device_count', 'bits', 'word_error_prob',
                        'delay_threshold_s'),
    Scenario.SELECTION: ('mean_snr_db', 'rice_factor_db', 'device_count', 'delay_threshold_s'),
}

STYLE_CYCLE = (LineStyle.SOLID, LineStyle.DASHED, LineStyle.DOTTED)


def _in_range(key: str, value) -> str:
    """Message describing why value is out of range for key, or ''."""
    if key == 'device_count' and not value >= 1:
        return 'must be >= 1'
    if key == 'bits' and not 1 <= value <= MAX_FEEDBACK_BITS:
        return f'must be between 1 and {MAX_FEEDBACK_BITS}'
    if key == 'word_error_prob' and not 0 <= value <= 1:
        return 'must be between 0 and 1'
    if key in ('sigma_eps_deg', 'delay_threshold_s') and not value >= 0:
        return 'must be >= 0'
    if not math.isfinite(value) and key != 'delay_threshold_s':
        return 'must be finite'
    return ''


class ListField(forms.CharField):
    """Comma-separated values; a single value is a one-element list."""

    def __init__(self, item_type=float, **kwargs):
        self.item_type = item_type
        super().__init__(**kwargs)

    def to_python(self, value):
        if isinstance(value, (list, tuple)):
            items = list(value)
        else:
            text = super().to_python(value)
            if not text:
                return []
            items = [part.strip() for part in text.split(',')]
        try:
            return [self.item_type(item) for item in items]
        except (TypeError, ValueError):
            raise forms.ValidationError(
                f'Enter a comma-separated list of {self.item_type.__name__} values, got {value!r}.',
                code='invalid',
            )


class ExperimentConfigForm(forms.Form):
    """Flat experiment description; see DEFAULTS for the values used when a key is absent."""

    DEFAULTS = {
        'scenario': Scenario.CKM,
        'metric': Metric.OUTAGE,
        'axis': SweepAxis.MEAN_SNR_DB,
        'start': -35.0,
        'stop': 0.0,
        'step': 1.0,
        'mean_snr_db': '-15',
        'rice_factor_db': '6',
        'device_count': '20',
        'power_scaling': PowerScaling.CONSTANT_PER_DEVICE,
        'sigma_eps_deg': '20',
        'bits': '2',
        'word_error_prob': '0',
        'delay_threshold_s': '1e-3',
        'data_bits': 100.0,
        'bandwidth_hz': 200e3,
        'target_dor': 1e-4,
        'baseline_rice_factor_db': 0.0,
        'confidence': 0.99,
    }

    name = forms.SlugField(required=False)
    title = forms.CharField(required=False)
    scenario = forms.ChoiceField(choices=Scenario.choices)
    metric = forms.ChoiceField(choices=Metric.choices)

    # Sweep
    axis = forms.ChoiceField(choices=SweepAxis.choices)
    start = forms.FloatField()
    stop = forms.FloatField()
    step = forms.FloatField()

    # Cluster and side information; several values give several curves
    mean_snr_db = ListField(item_type=float)
    rice_factor_db = ListField(item_type=float)
    device_count = ListField(item_type=int)
    power_scaling = forms.ChoiceField(choices=PowerScaling.choices)
    sigma_eps_deg = ListField(item_type=float)
    bits = ListField(item_type=int)
    word_error_prob = ListField(item_type=float)
    style_by = forms.ChoiceField(choices=[('', '')] + [(k, k) for k in CURVE_KEYS], required=False)

    # Service
    data_bits = forms.FloatField(min_value=0)
    bandwidth_hz = forms.FloatField()
    delay_threshold_s = ListField(item_type=float)
    min_rate_bps = forms.FloatField(required=False, min_value=0, help_text='Defaults to the bandwidth')
    target_dor = forms.FloatField()

    # Reference curves
    baselines = ListField(item_type=str, required=False)
    baseline_rice_factor_db = forms.FloatField()

    # Run options
    samples = forms.IntegerField(required=False, min_value=1)
    seed = forms.IntegerField(required=False, min_value=0)
    analytic_only = forms.BooleanField(required=False)
    confidence = forms.FloatField()

    def __init__(self, data=None, *args, **kwargs):
        if data is not None:
            data = {**self.DEFAULTS, **{k: v for k, v in data.items() if v is not None}}
        super().__init__(data, *args, **kwargs)

    def clean_bandwidth_hz(self):
        value = self.cleaned_data['bandwidth_hz']
        if not (math.isfinite(value) and value > 0):
            raise forms.ValidationError('Bandwidth must be > 0.')
        return value

    def clean_target_dor(self):
        value = self.cleaned_data['target_dor']
        if not 0 < value < 1:
            raise forms.ValidationError('Target DOR must be between 0 and 1 (exclusive).')
        return value

    def clean_confidence(self):
        value = self.cleaned_data['confidence']
        if not 0 < value < 1:
            raise forms.ValidationError('Confidence must be between 0 and 1 (exclusive).')
        return value

    def clean_baselines(self):
        values = self.cleaned_data['baselines']
        unknown = [v for v in values if v not in (CurveKind.RAYLEIGH, CurveKind.SELECTION)]
        if unknown:
            raise forms.ValidationError(f'Unknown baseline(s) {", ".join(unknown)}; use rayleigh or selection.')
        return list(dict.fromkeys(values))

    def clean(self):
        cleaned_data = super().clean()
        if self.errors:
            return cleaned_data

        scenario = cleaned_data['scenario']
        metric = cleaned_data['metric']
        axis = cleaned_data['axis']
        start, stop, step = cleaned_data['start'], cleaned_data['stop'], cleaned_data['step']

        if not step > 0:
            self.add_error('step', 'Step must be > 0.')
            return cleaned_data
        if not stop >= start:
            self.add_error('stop', f'Stop ({stop:g}) must not be below start ({start:g}).')
            return cleaned_data
        if (stop - start) / step + 1 > MAX_AXIS_POINTS:
            self.add_error('step', f'Sweep has more than {MAX_AXIS_POINTS} points.')
            return cleaned_data

        points = axis_points(start, stop, step)
        cleaned_data['axis_values'] = points

        if axis not in SCENARIO_KEYS[scenario]:
            self.add_error('axis', f'{axis} does not apply to {scenario} curves.')
        if axis == SweepAxis.DEVICE_COUNT and any(p != int(p) for p in points):
            self.add_error('axis', 'device_count sweeps need integer start and step.')
        for point in points:
            problem = _in_range(axis, point)
            if problem:
                self.add_error('axis', f'{axis} value {point:g} {problem}.')
                break

        for key in CURVE_KEYS:
            values = cleaned_data[key]
            if key == axis:
                if len(values) > 1:
                    self.add_error(key, f'{key} is the sweep axis and cannot also list several values.')
                continue
            if len(values) > 1 and key not in SCENARIO_KEYS[scenario]:
                self.add_error(key, f'{key} does not apply to {scenario} curves.')
            for value in values:
                problem = _in_range(key, value)
                if problem:
                    self.add_error(key, f'{key} value {value:g} {problem}.')
                    break

        style_by = cleaned_data.get('style_by')
        if style_by and style_by not in SCENARIO_KEYS[scenario]:
            self.add_error('style_by', f'{style_by} does not apply to {scenario} curves.')

        if metric == Metric.DEVICES:
            if scenario != Scenario.CKM:
                self.add_error('metric', 'The devices metric needs the ckm scenario.')
            if axis == SweepAxis.DEVICE_COUNT:
                self.add_error('axis', 'The devices metric cannot sweep device_count.')
            if cleaned_data['baselines']:
                self.add_error('baselines', 'Baselines only apply to the outage and dor metrics.')
            if not cleaned_data['target_dor'] < 0.5:
                self.add_error('target_dor', 'The device-count bound needs a target DOR below 0.5.')

        if cleaned_data['min_rate_bps'] is None:
            cleaned_data['min_rate_bps'] = cleaned_data['bandwidth_hz']
        return cleaned_data

    def _curves(self):
        data = self.cleaned_data
        scenario = data['scenario']
        axis = data['axis']
        base = {key: data[key][0] for key in CURVE_KEYS}
        varying = [
            key for key in CURVE_KEYS
            if key != axis and key in SCENARIO_KEYS[scenario] and len(data[key]) > 1
        ]

        curves = []
        for combo in itertools.product(*(data[key] for key in varying)):
            params = {**base, **dict(zip(varying, combo))}
            label = ' '.join(f'{key}={value:g}' for key, value in zip(varying, combo)) or str(scenario)
            style = LineStyle.SOLID
            if data['style_by'] in varying:
                index = data[data['style_by']].index(params[data['style_by']])
                style = STYLE_CYCLE[index % len(STYLE_CYCLE)]
            curves.append(CurveSpec(label=label, kind=scenario, params=params, style=style))

        for baseline in data['baselines']:
            params = {**base, 'rice_factor_db': data['baseline_rice_factor_db']}
            style = LineStyle.DASHED if baseline == CurveKind.RAYLEIGH else LineStyle.DOTTED
            curves.append(CurveSpec(label=baseline, kind=baseline, params=params, style=style))
        return tuple(curves)

    def to_experiment(self, name: str = '') -> Experiment:
        """Experiment described by the cleaned form; call after is_valid()."""
        data = self.cleaned_data
        name = data['name'] or name or 'experiment'
        samples = data['samples'] or default_samples(data['metric'])
        seed = data['seed'] if data['seed'] is not None else getattr(settings, 'CLUSTERLINK_SEED', 2024)
        parameters = {
            key: (list(value) if isinstance(value, (list, tuple)) else value)
            for key, value in data.items()
        }
        return Experiment(
            name=name,
            title=data['title'] or name,
            metric=data['metric'],
            axis=data['axis'],
            axis_values=data['axis_values'],
            curves=self._curves(),
            power_scaling=data['power_scaling'],
            data_bits=data['data_bits'],
            bandwidth=data['bandwidth_hz'],
            min_rate=data['min_rate_bps'],
            target_dor=data['target_dor'],
            samples=int(samples),
            seed=int(seed),
            analytic_only=data['analytic_only'],
            confidence=data['confidence'],
            parameters=parameters,
        )

    def error_summary(self) -> str:
        """One line per problem, each naming its key."""
        lines = []
        for key, errors in self.errors.items():
            for error in errors:
                lines.append(f'{key}: {error}' if key != '__all__' else error)
        return '; '.join(lines)
