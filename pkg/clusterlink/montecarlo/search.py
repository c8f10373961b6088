"""
Simulated DOR estimates and the minimal device count that meets a target.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

from django.conf import settings

from clusterlink.channel import ClusterConfig
from clusterlink.exceptions import DomainError
from clusterlink.metrics import ServiceSpec, binomial_interval

from .cache import SampleCache
from .empirical import EmpiricalCdf, HistogramCdf
from .harness import RunOptions, run

logger = logging.getLogger('clusterlink.montecarlo')

DEFAULT_CONFIDENCE = 0.99


def threshold_estimate(
    ecdf: Union[EmpiricalCdf, HistogramCdf],
    threshold: float,
    confidence: float = DEFAULT_CONFIDENCE,
) -> Tuple[float, float, float]:
    """
    Fraction of samples at or below threshold with a Clopper-Pearson interval.

    Returns:
        tuple: (point, low, high); (1, 1, 1) for an infinite threshold
    """
    if math.isinf(threshold):
        return 1.0, 1.0, 1.0
    hits = ecdf.count_at_most(threshold) if threshold > 0 else 0
    low, high = binomial_interval(hits, ecdf.count, confidence)
    return hits / ecdf.count, low, high


def dor_estimate(
    ecdf: Union[EmpiricalCdf, HistogramCdf],
    svc: ServiceSpec,
    confidence: float = DEFAULT_CONFIDENCE,
) -> Tuple[float, float, float]:
    """Simulated delay outage rate; (1, 1, 1) for saturated thresholds."""
    if svc.saturated:
        return 1.0, 1.0, 1.0
    return threshold_estimate(ecdf, svc.dor_threshold, confidence)


@dataclass(frozen=True)
class DeviceSearchResult:
    """
    Outcome of a minimal device-count search.

    devices is None when the target is not met within the cap. uncertain is
    set when the target lies inside the confidence interval of the DOR
    estimate at the reported count or one below it.
    """

    devices: Optional[int]
    feasible: bool
    uncertain: bool = False
    evaluations: int = 0
    estimates: Dict[int, Tuple[float, float, float]] = field(default_factory=dict, compare=False)


def min_devices(
    scenario: str,
    template: ClusterConfig,
    side,
    svc: ServiceSpec,
    target_dor: float,
    n: int,
    seed: int,
    cap: Optional[int] = None,
    confidence: float = DEFAULT_CONFIDENCE,
    options: Optional[RunOptions] = None,
    cache: Optional[SampleCache] = None,
) -> DeviceSearchResult:
    """
    Smallest active set size whose simulated DOR is at most target_dor.

    Exponential bracketing (1, 2, 4, ...) up to the cap, then integer
    bisection with the midpoint rounded up. Every size reuses the same seed,
    so device k sees the same channel draws at every size.

    Args:
        scenario: Scenario value
        template: Cluster configuration; only active_devices is varied
        side: Side information for the scenario
        svc: Service requirement fixing the DOR threshold
        target_dor: Target delay outage rate
        n: Samples per evaluated size
        seed: Master seed
        cap: Largest size tried, CLUSTERLINK_DEVICE_CAP if omitted

    Returns:
        DeviceSearchResult
    """
    if not target_dor > 0:
        raise DomainError(f'target_dor must be > 0, got {target_dor}')
    if target_dor >= 1:
        return DeviceSearchResult(devices=1, feasible=True)
    cap = int(cap or getattr(settings, 'CLUSTERLINK_DEVICE_CAP', 4096))
    if cap < 1:
        raise DomainError(f'cap must be >= 1, got {cap}')

    estimates: Dict[int, Tuple[float, float, float]] = {}

    def estimate(devices: int) -> Tuple[float, float, float]:
        if devices not in estimates:
            ecdf = run(scenario, template.with_devices(devices), side, n, seed, options=options, cache=cache)
            estimates[devices] = dor_estimate(ecdf, svc, confidence)
            logger.debug(f'[Search] devices={devices} dor={estimates[devices][0]:.3g}')
        return estimates[devices]

    def meets(devices: int) -> bool:
        return estimate(devices)[0] <= target_dor

    failing, passing = 0, None
    size = 1
    while True:
        if meets(size):
            passing = size
            break
        failing = size
        if size == cap:
            break
        size = min(2 * size, cap)

    if passing is None:
        logger.info(f'[Search] Target DOR {target_dor:g} not met with {cap} devices')
        return DeviceSearchResult(
            devices=None, feasible=False, evaluations=len(estimates), estimates=dict(estimates),
        )

    while passing - failing > 1:
        middle = math.ceil((failing + passing) / 2)
        if meets(middle):
            passing = middle
        else:
            failing = middle

    def straddles(devices: int) -> bool:
        _, low, high = estimates[devices]
        return low <= target_dor <= high

    uncertain = straddles(passing) or (failing >= 1 and straddles(failing))
    logger.info(
        f'[Search] Target DOR {target_dor:g}: {passing} devices '
        f'({len(estimates)} evaluations{", uncertain" if uncertain else ""})'
    )
    return DeviceSearchResult(
        devices=passing,
        feasible=True,
        uncertain=uncertain,
        evaluations=len(estimates),
        estimates=dict(estimates),
    )
