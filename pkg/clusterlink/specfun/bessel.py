"""
Modified Bessel functions of the first kind (integer order, real argument).

Small arguments use the ascending power series. Above SERIES_CROSSOVER the
Hankel large-argument expansion is tried first; when its terms start growing
before reaching tolerance (high orders relative to x) the ascending series is
summed in the log domain instead, which is slow but never overflows.
Order sequences for arguments far above the highest order come from
scipy.special.ive.
"""

import logging
import math
from typing import List

import numpy as np
from scipy import special

from clusterlink.exceptions import DomainError, NumericFailure
from .tolerance import DEFAULT_TOLERANCE, Tolerance

logger = logging.getLogger('clusterlink.specfun')

SERIES_CROSSOVER = 15.0

# Extra steps above the requested window for the backward ratio recurrence
RATIO_GUARD_STEPS = 64


def _check_order(order) -> int:
    if int(order) != order or order < 0:
        raise DomainError(f'Bessel order must be a non-negative integer, got {order}')
    return int(order)


def _check_argument(x) -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise DomainError(f'Bessel argument must be finite and >= 0, got {x}')
    return x


def _ascending_scaled(order: int, x: float, tol: Tolerance) -> float:
    """e^{-x} I_order(x) from the power series, terms carried in log space."""
    half = 0.5 * x
    quarter_sq = half * half
    log_term = order * math.log(half) - math.lgamma(order + 1) - x
    # Partial sum is held relative to exp(shift), the largest term so far
    shift = log_term
    total = 1.0
    # Unscaled absolute tolerance expressed on the scaled value, in logs
    log_abs = math.log(tol.abs_tol) - x

    for k in range(tol.max_terms):
        ratio = quarter_sq / ((k + 1) * (k + 1 + order))
        log_term += math.log(ratio)
        if log_term > shift:
            total *= math.exp(shift - log_term)
            shift = log_term
        term = math.exp(log_term - shift)
        total += term
        if ratio < 1.0:
            remainder = term * ratio / (1.0 - ratio)
            if remainder <= 1e-2 * tol.rel_tol * total:
                break
            if remainder > 0 and math.log(remainder) + shift <= math.log(1e-2) + log_abs:
                break
    else:
        raise NumericFailure(
            f'Bessel series I_{order}({x}) did not converge',
            partial_value=total * math.exp(shift),
            terms=tol.max_terms,
        )

    return total * math.exp(shift)


def _hankel_scaled(order: int, x: float, tol: Tolerance):
    """
    e^{-x} I_order(x) from the large-argument expansion.

    Returns None when the asymptotic terms stop decreasing before the
    requested accuracy is reached.
    """
    mu = 4.0 * order * order
    term = 1.0
    total = 1.0
    previous = math.inf
    for k in range(1, tol.max_terms + 1):
        term *= -(mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        magnitude = abs(term)
        if magnitude >= previous:
            return None
        total += term
        if magnitude <= 1e-2 * tol.rel_tol * abs(total):
            return total / math.sqrt(2.0 * math.pi * x)
        previous = magnitude
    return None


def bessel_i_scaled(order: int, x: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """
    Exponentially scaled modified Bessel function e^{-x} I_order(x).

    Args:
        order: Non-negative integer order
        x: Non-negative real argument
        tol: Series truncation control

    Returns:
        float: e^{-x} I_order(x), in [0, 1]

    Raises:
        DomainError: If order or x is out of range
        NumericFailure: If the series does not converge within tol.max_terms
    """
    order = _check_order(order)
    x = _check_argument(x)

    if x == 0.0:
        return 1.0 if order == 0 else 0.0

    if x > SERIES_CROSSOVER:
        value = _hankel_scaled(order, x, tol)
        if value is not None:
            return value
        logger.debug(f'[Bessel] Asymptotic expansion diverges for n={order}, x={x}; using series')

    return _ascending_scaled(order, x, tol)


def bessel_i(order: int, x: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """
    Modified Bessel function of the first kind I_order(x).

    Raises:
        NumericFailure: If the series does not converge or the result overflows
    """
    scaled = bessel_i_scaled(order, x, tol)
    try:
        return scaled * math.exp(x)
    except OverflowError:
        raise NumericFailure(
            f'I_{order}({x}) overflows double precision',
            partial_value=scaled,
        )


def log_bessel_i_scaled_sequence(x: float, count: int, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """
    log(e^{-x} I_k(x)) for k = 0 .. count-1.

    When x is within RATIO_GUARD_STEPS of count or below, the ratios
    I_{k+1}/I_k come from the backward recurrence r_{k-1} = 1 / (2k/x + r_k),
    started above both count and x where it is strongly contracting, and the
    sequence is anchored at k = 0 by bessel_i_scaled. Larger arguments would
    need about x recurrence steps, so those orders come from scipy's ive.

    Args:
        x: Positive argument
        count: Number of orders to return
        tol: Series truncation control for the k = 0 anchor

    Returns:
        np.ndarray: Array of length count; orders whose scaled value
        underflows are -inf
    """
    x = _check_argument(x)
    if x == 0.0:
        raise DomainError('log_bessel_i_scaled_sequence requires x > 0')
    if count < 1:
        return np.empty(0)

    if x > count + RATIO_GUARD_STEPS:
        with np.errstate(divide='ignore'):
            return np.log(special.ive(np.arange(count), x))

    start = max(count, int(math.ceil(x))) + RATIO_GUARD_STEPS
    # Amos-type estimate of I_{start+1}/I_start; its error is damped away
    ratio = x / (start + 1.0 + math.sqrt((start + 1.0) ** 2 + x * x))
    ratios: List[float] = [0.0] * count
    for k in range(start, 0, -1):
        ratio = 1.0 / (2.0 * k / x + ratio)
        if k - 1 < count:
            ratios[k - 1] = ratio

    log_values = np.empty(count)
    log_values[0] = math.log(bessel_i_scaled(0, x, tol))
    if count > 1:
        log_values[1:] = log_values[0] + np.cumsum(np.log(ratios[:count - 1]))
    return log_values
