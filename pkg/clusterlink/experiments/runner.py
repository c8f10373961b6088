"""
Experiment runner.

An Experiment is a set of curves evaluated along one sweep axis. Every
point gets an analytic value from the closed forms and, unless the run is
analytic-only, a simulated value with a confidence half-width.

Simulated outage and DOR values reuse one Monte Carlo run per distinct
cluster shape: SNR samples scale linearly with the mean SNR, so a run at
unit mean SNR evaluated at threshold / mean_snr serves a whole mean-SNR or
delay sweep.
"""

import logging
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Dict, List, Optional, Tuple

from django.conf import settings
from django.db.models import TextChoices

from clusterlink.analytic import baselines, ckm, feedback
from clusterlink.channel import CkmSideInfo, ClusterConfig, FeedbackSideInfo, Scenario
from clusterlink.exceptions import DomainError, NoFiniteBound, NumericFailure, UnsupportedRegime
from clusterlink.metrics import (
    ServiceSpec,
    SnrCdf,
    db_to_linear,
    deg_to_rad,
    evaluate_dor,
    outage_probability,
    outage_threshold,
)
from clusterlink.montecarlo import RunOptions, SampleCache, lookup, min_devices, run, threshold_estimate

logger = logging.getLogger('clusterlink.experiments')


class Metric(TextChoices):
    OUTAGE = 'outage', 'Outage probability'
    DOR = 'dor', 'Delay outage rate'
    DEVICES = 'devices', 'Required devices'


class SweepAxis(TextChoices):
    MEAN_SNR_DB = 'mean_snr_db', 'Mean SNR [dB]'
    DELAY_THRESHOLD_S = 'delay_threshold_s', 'Delay threshold [s]'
    RICE_FACTOR_DB = 'rice_factor_db', 'Rice factor [dB]'
    SIGMA_EPS_DEG = 'sigma_eps_deg', 'Phase error std [deg]'
    WORD_ERROR_PROB = 'word_error_prob', 'Word error probability'
    DEVICE_COUNT = 'device_count', 'Cooperating devices'


class CurveKind(TextChoices):
    CKM = 'ckm', 'Location-based phasing'
    FEEDBACK = 'feedback', 'Quantized-feedback phasing'
    SELECTION = 'selection', 'Selection diversity'
    RAYLEIGH = 'rayleigh', 'Rayleigh fading'


class LineStyle(TextChoices):
    SOLID = 'solid', 'Solid'
    DASHED = 'dashed', 'Dashed'
    DOTTED = 'dotted', 'Dotted'


# Per-curve parameters, in command-line units
CURVE_KEYS = (
    'mean_snr_db',
    'rice_factor_db',
    'device_count',
    'sigma_eps_deg',
    'bits',
    'word_error_prob',
    'delay_threshold_s',
)


@dataclass(frozen=True)
class CurveSpec:
    """One curve: a kind plus a value for every key in CURVE_KEYS."""

    label: str
    kind: str
    params: Dict[str, float]
    style: str = LineStyle.SOLID

    @property
    def scenario(self) -> str:
        # The Rayleigh reference is location-based phasing without a static part
        if self.kind == CurveKind.RAYLEIGH:
            return Scenario.CKM
        return self.kind

    def as_dict(self) -> dict:
        return {'label': self.label, 'kind': str(self.kind), 'style': str(self.style), 'params': dict(self.params)}


@dataclass(frozen=True)
class Experiment:
    name: str
    title: str
    metric: str
    axis: str
    axis_values: Tuple[float, ...]
    curves: Tuple[CurveSpec, ...]
    power_scaling: str
    data_bits: float
    bandwidth: float
    min_rate: float
    target_dor: float
    samples: int
    seed: int
    analytic_only: bool = False
    confidence: float = 0.99
    parameters: Dict[str, Any] = field(default_factory=dict, compare=False)

    def point_params(self, curve: CurveSpec, value: float) -> Dict[str, float]:
        return {**curve.params, self.axis: value}

    def cluster(self, curve: CurveSpec, params: Dict[str, float]) -> ClusterConfig:
        rice_factor = 0.0 if curve.kind == CurveKind.RAYLEIGH else db_to_linear(params['rice_factor_db'])
        return ClusterConfig(
            mean_snr=db_to_linear(params['mean_snr_db']),
            rice_factor=rice_factor,
            active_devices=int(params['device_count']),
            power_scaling=self.power_scaling,
        )

    def side_info(self, curve: CurveSpec, params: Dict[str, float]):
        if curve.scenario == Scenario.CKM:
            return CkmSideInfo(deg_to_rad(params['sigma_eps_deg']))
        if curve.scenario == Scenario.FEEDBACK:
            return FeedbackSideInfo(int(params['bits']), params['word_error_prob'])
        return None

    def service(self, params: Dict[str, float]) -> ServiceSpec:
        return ServiceSpec(
            data_bits=self.data_bits,
            bandwidth=self.bandwidth,
            delay_threshold=params['delay_threshold_s'],
            min_rate=self.min_rate,
            saturation_exponent=getattr(settings, 'CLUSTERLINK_DOR_SATURATION_EXPONENT', 64),
        )

    @property
    def axis_assumption(self) -> str:
        if self.axis == SweepAxis.MEAN_SNR_DB and self.metric == Metric.OUTAGE:
            efficiency = self.min_rate / self.bandwidth
            return (
                f'x-axis sweeps the per-device mean SNR in dB at a fixed rate threshold '
                f'R_min/W = {efficiency:g} bit/s/Hz (outage threshold {outage_threshold(self.min_rate, self.bandwidth):g})'
            )
        return f'x-axis sweeps {self.axis}'


@dataclass
class CurveResult:
    curve: CurveSpec
    analytic: List[Optional[float]] = field(default_factory=list)
    simulated: List[Optional[float]] = field(default_factory=list)
    half_width: List[Optional[float]] = field(default_factory=list)
    branches: Counter = field(default_factory=Counter)
    checked: bool = False
    # Points with both values, and the sweep values whose analytic value
    # falls outside the simulated confidence interval
    compared: int = 0
    outside_interval: List[float] = field(default_factory=list)

    def agreement(self) -> Dict[str, Any]:
        """
        How far the analytic curve sits from the simulated one.

        The ratio range is analytic / simulated over points where both are
        positive; for delay outage rates this is the model error in the tail.
        """
        pairs = [
            (a, s) for a, s in zip(self.analytic, self.simulated)
            if a is not None and s is not None
        ]
        ratios = [a / s for a, s in pairs if a > 0 and s > 0]
        return {
            'compared': self.compared,
            'outside_interval': list(self.outside_interval),
            'max_abs_gap': max((abs(a - s) for a, s in pairs), default=None),
            'ratio_min': min(ratios, default=None),
            'ratio_max': max(ratios, default=None),
        }


@dataclass
class ExperimentResult:
    experiment: Experiment
    curves: List[CurveResult]
    cache_hits: int = 0
    simulations: int = 0
    searches: int = 0
    notes: List[Dict[str, Any]] = field(default_factory=list)
    duration: float = 0.0


def analytic_cdf(scenario: str, cfg: ClusterConfig, side, check: bool = True) -> SnrCdf:
    """
    Closed-form SNR CDF of a scenario.

    With check=True the CDF is spot-checked for range and monotonicity on
    construction; the runner does this once per curve.
    """
    if scenario == Scenario.CKM:
        func = partial(ckm.snr_cdf, ckm.build_dist(cfg, side))
    elif scenario == Scenario.FEEDBACK:
        func = partial(feedback.snr_cdf_with_errors, cfg, side)
    elif scenario == Scenario.SELECTION:
        func = partial(baselines.selection_cdf, cfg.mean_snr, cfg.rice_factor, cfg.active_devices)
    else:
        raise ValueError(f'Unknown scenario: {scenario}')
    return SnrCdf(func, scale=cfg.mean_snr, metadata={'scenario': str(scenario)}, check=check)


def _unit_cluster(cfg: ClusterConfig) -> ClusterConfig:
    return ClusterConfig(
        mean_snr=1.0,
        rice_factor=cfg.rice_factor,
        active_devices=cfg.active_devices,
        total_devices=cfg.total_devices,
        power_scaling=cfg.power_scaling,
    )


class ExperimentRunner:
    """
    Evaluates an Experiment point by point.

    Args:
        experiment: What to evaluate
        cache: Sample cache shared by every run; None disables caching
        options: Monte Carlo execution knobs
    """

    def __init__(self, experiment: Experiment, cache: Optional[SampleCache] = None,
                 options: Optional[RunOptions] = None):
        self.experiment = experiment
        self.cache = cache
        self.options = options or RunOptions.from_settings()
        self._unit_runs: Dict[tuple, Any] = {}
        self.cache_hits = 0
        self.simulations = 0
        self.searches = 0
        self.notes: List[Dict[str, Any]] = []

    def run(self) -> ExperimentResult:
        exp = self.experiment
        started = time.monotonic()
        logger.info(
            f'[Experiment] {exp.name}: {exp.metric} over {exp.axis} '
            f'({len(exp.axis_values)} points, {len(exp.curves)} curves, '
            f'{"analytic only" if exp.analytic_only else f"n={exp.samples} seed={exp.seed}"})'
        )
        curves = []
        for curve in exp.curves:
            result = CurveResult(curve)
            for value in exp.axis_values:
                try:
                    analytic, simulated, half_width = self.evaluate(curve, value, result)
                except NumericFailure as exc:
                    raise exc.with_context(curve=curve.label, **{exp.axis: value})
                result.analytic.append(analytic)
                result.simulated.append(simulated)
                result.half_width.append(half_width)
            curves.append(result)

        duration = time.monotonic() - started
        logger.info(
            f'[Experiment] {exp.name} done in {duration:.1f}s '
            f'({self.simulations} simulations, {self.cache_hits} cache hits, {self.searches} searches)'
        )
        return ExperimentResult(
            experiment=exp,
            curves=curves,
            cache_hits=self.cache_hits,
            simulations=self.simulations,
            searches=self.searches,
            notes=list(self.notes),
            duration=duration,
        )

    def evaluate(self, curve: CurveSpec, value: float,
                 result: CurveResult) -> Tuple[Optional[float], Optional[float], Optional[float]]:
        """(analytic, simulated, confidence half-width) at one sweep point."""
        exp = self.experiment
        params = exp.point_params(curve, value)
        cfg = exp.cluster(curve, params)
        side = exp.side_info(curve, params)
        svc = exp.service(params)

        if exp.metric == Metric.DEVICES:
            analytic = self._required_devices(curve, value, cfg, side, svc)
            return analytic, self._searched_devices(curve, value, cfg, side, svc), None

        if curve.scenario == Scenario.FEEDBACK:
            result.branches.update(self._branches(cfg, side))

        cdf = analytic_cdf(curve.scenario, cfg, side, check=not result.checked)
        result.checked = True
        if exp.metric == Metric.OUTAGE:
            analytic = outage_probability(cdf, exp.min_rate, exp.bandwidth)
            threshold = outage_threshold(exp.min_rate, exp.bandwidth)
        else:
            dor = evaluate_dor(cdf, svc)
            analytic = dor.probability
            threshold = dor.threshold

        ecdf = self._unit_run(curve, cfg, side)
        if ecdf is None:
            return analytic, None, None
        point, low, high = threshold_estimate(ecdf, threshold / cfg.mean_snr, exp.confidence)
        result.compared += 1
        if not low <= analytic <= high:
            result.outside_interval.append(value)
        return analytic, point, (high - low) / 2.0

    def _branches(self, cfg: ClusterConfig, side: FeedbackSideInfo) -> Counter:
        counts = Counter()
        for _, _, mom in feedback.conditional_components(cfg, side):
            use_series = abs(mom.series_parameter) < feedback.SERIES_RADIUS
            counts[feedback.Branch.SERIES if use_series else feedback.Branch.QUADRATURE] += 1
        return counts

    def _unit_run(self, curve: CurveSpec, cfg: ClusterConfig, side):
        """Memoized unit-mean-SNR run; None when analytic-only and not cached."""
        exp = self.experiment
        unit = _unit_cluster(cfg)
        key = (curve.scenario, unit, side)
        if key in self._unit_runs:
            return self._unit_runs[key]

        ecdf = None
        if self.cache is not None:
            ecdf = lookup(curve.scenario, unit, side, exp.samples, exp.seed, self.cache, self.options)
            if ecdf is not None:
                self.cache_hits += 1
        if ecdf is None and not exp.analytic_only:
            ecdf = run(curve.scenario, unit, side, exp.samples, exp.seed, options=self.options, cache=self.cache)
            self.simulations += 1
        self._unit_runs[key] = ecdf
        return ecdf

    def _note(self, curve: CurveSpec, value: float, kind: str, detail: str = ''):
        note = {'curve': curve.label, self.experiment.axis: value, 'kind': kind}
        if detail:
            note['detail'] = detail
        self.notes.append(note)

    def _required_devices(self, curve: CurveSpec, value: float, cfg: ClusterConfig, side,
                          svc: ServiceSpec) -> Optional[int]:
        """Closed-form device count, or None where the bound does not apply."""
        exp = self.experiment
        if svc.saturated:
            self._note(curve, value, 'bound_saturated')
            return None
        try:
            devices = ckm.required_devices(
                exp.target_dor, svc.dor_threshold, cfg.rice_factor, cfg.mean_snr, side.sigma_eps, cfg.power_scaling,
            )
        except (DomainError, UnsupportedRegime, NoFiniteBound) as e:
            self._note(curve, value, 'no_bound', str(e))
            return None
        if not ckm.bound_validity(svc, cfg.with_devices(devices), side):
            self._note(curve, value, 'bound_invalid')
            return None
        return devices

    def _searched_devices(self, curve: CurveSpec, value: float, cfg: ClusterConfig, side,
                          svc: ServiceSpec) -> Optional[int]:
        exp = self.experiment
        # No device count meets a saturated threshold
        if exp.analytic_only or svc.saturated:
            return None
        found = min_devices(
            curve.scenario, cfg, side, svc, exp.target_dor, exp.samples, exp.seed,
            confidence=exp.confidence, options=self.options, cache=self.cache,
        )
        self.searches += 1
        if not found.feasible:
            self._note(curve, value, 'infeasible')
            return None
        if found.uncertain:
            self._note(curve, value, 'uncertain')
        return found.devices


def run_experiment(experiment: Experiment, cache: Optional[SampleCache] = None,
                   options: Optional[RunOptions] = None) -> ExperimentResult:
    return ExperimentRunner(experiment, cache=cache, options=options).run()


def default_samples(metric: str) -> int:
    if metric == Metric.DOR:
        return int(getattr(settings, 'CLUSTERLINK_DOR_SAMPLES', 10**7))
    return int(getattr(settings, 'CLUSTERLINK_OUTAGE_SAMPLES', 10**6))


def axis_points(start: float, stop: float, step: float) -> Tuple[float, ...]:
    """start, start + step, ... up to stop; rounded to 12 significant digits."""
    count = math.floor((stop - start) / step + 1e-9) + 1
    return tuple(float(f'{start + i * step:.12g}') for i in range(count))
