"""
Scenario-agnostic performance indicators over any SNR CDF.

Works with analytic CDFs and Monte Carlo ones alike: everything goes
through SnrCdf, which only needs a callable gamma -> P(SNR <= gamma).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Tuple

import numpy as np
from scipy import optimize, stats

from clusterlink.exceptions import DomainError
from .service import ServiceSpec, outage_threshold

logger = logging.getLogger('clusterlink.metrics')

# Registration spot-check grid
CHECK_POINTS = 64
CHECK_DECADES = (-4.0, 3.0)
# Allowed decrease between neighbouring check points (series and quadrature noise)
MONOTONE_SLACK = 1e-9

# Bracket expansion for quantile searches, in decades
BRACKET_DECADES = 60

QUANTILE_RTOL = 1e-6


class SnrCdf:
    """
    An evaluatable CDF over linear SNR plus descriptive metadata.

    On construction the CDF is evaluated on CHECK_POINTS log-spaced points
    around `scale`; values outside [0, 1] or a decreasing pair are rejected.
    """

    def __init__(self, func: Callable[[float], float], scale: float = 1.0,
                 metadata: Dict[str, Any] = None, check: bool = True):
        if not scale > 0:
            raise DomainError(f'scale must be > 0, got {scale}')
        self.func = func
        self.scale = scale
        self.metadata = dict(metadata or {})
        if check:
            self._spot_check()

    def __call__(self, gamma: float) -> float:
        if gamma < 0:
            raise DomainError(f'gamma must be >= 0, got {gamma}')
        if math.isinf(gamma):
            return 1.0
        return float(self.func(gamma))

    def _spot_check(self):
        grid = self.scale * np.logspace(*CHECK_DECADES, CHECK_POINTS)
        values = [self(g) for g in grid]
        previous = 0.0
        for gamma, value in zip(grid, values):
            if not 0.0 <= value <= 1.0:
                raise DomainError(f'CDF value {value} at gamma={gamma} is outside [0, 1]')
            if value < previous - MONOTONE_SLACK:
                raise DomainError(f'CDF decreases at gamma={gamma} ({previous} -> {value})')
            previous = value


@dataclass(frozen=True)
class DorResult:
    """Delay outage rate with the threshold it was evaluated at."""

    probability: float
    threshold: float
    saturated: bool = False
    details: Dict[str, Any] = field(default_factory=dict)


def outage_probability(cdf: Callable[[float], float], min_rate: float, bandwidth: float) -> float:
    """P(W log2(1 + SNR) < R_min), i.e. the CDF at 2^(R_min/W) - 1."""
    threshold = outage_threshold(min_rate, bandwidth)
    if threshold == 0:
        return 0.0
    return cdf(threshold)


def evaluate_dor(cdf: Callable[[float], float], svc: ServiceSpec) -> DorResult:
    """
    Delay outage rate P(D/R > T_th) for the given SNR distribution.

    A threshold whose exponent exceeds svc.saturation_exponent is reported
    as certain outage with saturated=True.
    """
    if svc.saturated:
        logger.debug(f'[DOR] Exponent {svc.dor_exponent:.3g} saturates; reporting certain outage')
        return DorResult(probability=1.0, threshold=math.inf, saturated=True)
    threshold = svc.dor_threshold
    probability = 0.0 if threshold == 0 else cdf(threshold)
    return DorResult(probability=probability, threshold=threshold)


def dor(cdf: Callable[[float], float], svc: ServiceSpec) -> float:
    return evaluate_dor(cdf, svc).probability


def quantile(cdf: Callable[[float], float], p: float, scale: float = 1.0) -> float:
    """
    SNR at which the CDF reaches p, by bisection in log SNR.

    Args:
        cdf: Continuous, non-decreasing CDF
        p: Probability in (0, 1)
        scale: Starting point of the bracket search

    Returns:
        float: gamma with relative accuracy QUANTILE_RTOL or better

    Raises:
        DomainError: If p is outside (0, 1) or no bracket is found
    """
    if not 0 < p < 1:
        raise DomainError(f'p must be in (0, 1), got {p}')

    def excess(log_gamma):
        return cdf(math.exp(log_gamma)) - p

    step = math.log(10.0)
    lower = upper = math.log(scale)
    for _ in range(BRACKET_DECADES):
        if excess(lower) < 0:
            break
        lower -= step
    else:
        raise DomainError(f'No SNR found with CDF below {p}')
    for _ in range(BRACKET_DECADES):
        if excess(upper) > 0:
            break
        upper += step
    else:
        raise DomainError(f'No SNR found with CDF above {p}')

    log_gamma = optimize.bisect(excess, lower, upper, xtol=1e-3 * QUANTILE_RTOL, maxiter=200)
    return math.exp(log_gamma)


def binomial_interval(successes: int, trials: int, confidence: float = 0.99) -> Tuple[float, float]:
    """
    Clopper-Pearson interval for a binomial proportion.

    Returns:
        tuple: (low, high)
    """
    if trials < 1 or not 0 <= successes <= trials:
        raise DomainError(f'Need 0 <= successes <= trials and trials >= 1, got {successes}/{trials}')
    if not 0 < confidence < 1:
        raise DomainError(f'confidence must be in (0, 1), got {confidence}')
    alpha = 1.0 - confidence
    low = 0.0 if successes == 0 else stats.beta.ppf(alpha / 2, successes, trials - successes + 1)
    high = 1.0 if successes == trials else stats.beta.ppf(1 - alpha / 2, successes + 1, trials - successes)
    return float(low), float(high)
