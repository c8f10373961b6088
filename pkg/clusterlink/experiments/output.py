"""
CSV, SVG and metadata writers for experiment results.

The CSV is the contract: one row per sweep value, one analytic, simulated
and half-width column per curve, values written with format(v, '.10g') and
blanks for missing values. The same result always produces the same bytes.
"""

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from django.template.loader import render_to_string

from .runner import CurveResult, ExperimentResult, LineStyle, Metric

logger = logging.getLogger('clusterlink.experiments')

PLOT_WIDTH = 760
PLOT_HEIGHT = 500
MARGIN = {'left': 80, 'right': 200, 'top': 50, 'bottom': 60}

PALETTE = ('#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b', '#e377c2', '#17becf')
DASHES = {LineStyle.SOLID: '', LineStyle.DASHED: '8 4', LineStyle.DOTTED: '2 3'}

# Lowest decade shown on log-scale plots
MIN_LOG_DECADE = -8


def format_value(value: Optional[float]) -> str:
    if value is None:
        return ''
    return format(value, '.10g')


def csv_header(result: ExperimentResult) -> List[str]:
    header = [result.experiment.axis]
    for curve in result.curves:
        label = curve.curve.label
        header += [f'{label} analytic', f'{label} simulated', f'{label} ci_half_width']
    return header


def render_csv(result: ExperimentResult) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(csv_header(result))
    for i, value in enumerate(result.experiment.axis_values):
        row = [format_value(value)]
        for curve in result.curves:
            row += [
                format_value(curve.analytic[i]),
                format_value(curve.simulated[i]),
                format_value(curve.half_width[i]),
            ]
        writer.writerow(row)
    return buffer.getvalue()


def write_csv(result: ExperimentResult, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(render_csv(result), encoding='utf-8', newline='')
    return path


def _curve_metadata(metric: str, curve: CurveResult) -> dict:
    entry = {**curve.curve.as_dict(), 'branches': dict(sorted(curve.branches.items()))}
    if metric != Metric.DEVICES:
        entry['agreement'] = curve.agreement()
    return entry


def metadata(result: ExperimentResult) -> dict:
    exp = result.experiment
    return {
        'name': exp.name,
        'title': exp.title,
        'metric': str(exp.metric),
        'axis': str(exp.axis),
        'axis_assumption': exp.axis_assumption,
        'power_scaling': str(exp.power_scaling),
        'samples': exp.samples,
        'seed': exp.seed,
        'analytic_only': exp.analytic_only,
        'confidence': exp.confidence,
        'parameters': exp.parameters,
        'curves': [_curve_metadata(exp.metric, curve) for curve in result.curves],
        'simulations': result.simulations,
        'cache_hits': result.cache_hits,
        'searches': result.searches,
        'notes': result.notes,
    }


def write_metadata(result: ExperimentResult, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(json.dumps(metadata(result), indent=2, sort_keys=True) + '\n', encoding='utf-8')
    return path


class _Scale:
    """Maps data values onto a pixel range, linearly or in log10."""

    def __init__(self, low: float, high: float, start: float, end: float, log: bool = False):
        self.log = log
        if log:
            low, high = math.log10(low), math.log10(high)
        if high == low:
            low, high = low - 0.5, high + 0.5
        self.low, self.high, self.start, self.end = low, high, start, end

    def __call__(self, value: float) -> float:
        if self.log:
            value = math.log10(value)
        return self.start + (value - self.low) / (self.high - self.low) * (self.end - self.start)


def _y_range(result: ExperimentResult) -> Tuple[float, float, bool]:
    values = [
        v for curve in result.curves for series in (curve.analytic, curve.simulated)
        for v in series if v is not None
    ]
    metric = result.experiment.metric
    if metric == Metric.DOR:
        positive = [v for v in values if v > 0]
        low = min(positive) if positive else 1e-5
        decade = max(MIN_LOG_DECADE, math.floor(math.log10(low)))
        return 10.0 ** decade, 1.0, True
    if metric == Metric.DEVICES:
        return 0.0, max(values) if values else 1.0, False
    return 0.0, 1.0, False


def _ticks(scale: _Scale, low: float, high: float, count: int = 6) -> List[Tuple[float, str]]:
    if scale.log:
        return [(scale(10.0 ** d), f'1e{d}') for d in range(round(scale.low), round(scale.high) + 1)]
    if high == low:
        return [(scale(low), format(low, '.4g'))]
    step = (high - low) / (count - 1)
    return [(scale(low + i * step), format(low + i * step, '.4g')) for i in range(count)]


def plot_context(result: ExperimentResult) -> dict:
    exp = result.experiment
    left, top = MARGIN['left'], MARGIN['top']
    right, bottom = PLOT_WIDTH - MARGIN['right'], PLOT_HEIGHT - MARGIN['bottom']

    x_low, x_high = min(exp.axis_values), max(exp.axis_values)
    x_scale = _Scale(x_low, x_high, left, right)
    y_low, y_high, log = _y_range(result)
    y_scale = _Scale(y_low, y_high, bottom, top, log=log)

    def visible(v):
        return v is not None and (not log or v >= y_low)

    def px(v):
        return f'{v:.2f}'

    series = []
    for index, curve in enumerate(result.curves):
        segments, current = [], []
        for x, y in zip(exp.axis_values, curve.analytic):
            if visible(y):
                current.append(f'{px(x_scale(x))},{px(y_scale(min(y, y_high)))}')
            elif current:
                segments.append(' '.join(current))
                current = []
        if current:
            segments.append(' '.join(current))
        markers = [
            {'x': px(x_scale(x)), 'y': px(y_scale(min(y, y_high)))}
            for x, y in zip(exp.axis_values, curve.simulated) if visible(y)
        ]
        series.append({
            'label': curve.curve.label,
            'color': PALETTE[index % len(PALETTE)],
            'dash': DASHES.get(curve.curve.style, ''),
            'segments': segments,
            'markers': markers,
            'legend_y': px(top + 18 * index + 10),
        })

    return {
        'width': PLOT_WIDTH,
        'height': PLOT_HEIGHT,
        'title': exp.title,
        'x_label': exp.axis,
        'y_label': Metric(exp.metric).label,
        'plot': {'left': px(left), 'right': px(right), 'top': px(top), 'bottom': px(bottom),
                 'width': px(right - left), 'height': px(bottom - top)},
        'x_ticks': [{'pos': px(p), 'label': label} for p, label in _ticks(x_scale, x_low, x_high)],
        'y_ticks': [{'pos': px(p), 'label': label} for p, label in _ticks(y_scale, y_low, y_high)],
        'series': series,
        'legend_x': px(right + 20),
    }


def write_svg(result: ExperimentResult, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(render_to_string('experiments/figure.svg', plot_context(result)), encoding='utf-8')
    return path


def write_outputs(result: ExperimentResult, out_dir: Union[str, Path]) -> Dict[str, Path]:
    """Write <name>.csv, <name>.svg and <name>.json into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    name = result.experiment.name
    paths = {
        'csv': write_csv(result, out_dir / f'{name}.csv'),
        'svg': write_svg(result, out_dir / f'{name}.svg'),
        'metadata': write_metadata(result, out_dir / f'{name}.json'),
    }
    logger.info(f'[Output] Wrote {", ".join(str(p) for p in paths.values())}')
    return paths
