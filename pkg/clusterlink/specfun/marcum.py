"""
Generalised Marcum Q-function and its complement.

Both sides are summed from the Neumann-type series in exponentially scaled
Bessel functions,

    1 - Q_m(a, b) = e^{-(a-b)^2/2} sum_{k>=m}   (b/a)^k  e^{-ab} I_k(ab)
        Q_m(a, b) = e^{-(a-b)^2/2} sum_{k>=1-m} (a/b)^k  e^{-ab} I_|k|(ab)

All terms are positive, so whichever side is the smaller probability is
summed directly and the other obtained by subtraction; this keeps the left
tail (where delay outage lives) accurate to the absolute tolerance.
"""

import logging
import math

import numpy as np
from scipy import special

from clusterlink.exceptions import DomainError, NumericFailure
from .bessel import log_bessel_i_scaled_sequence
from .tolerance import DEFAULT_TOLERANCE, Tolerance

logger = logging.getLogger('clusterlink.specfun')

# A complement this small has lost too many digits to the subtraction
LOSS_OF_SIGNIFICANCE = 1e-6


def _check(order, a, b):
    if int(order) != order or order < 1:
        raise DomainError(f'Marcum order must be a positive integer, got {order}')
    a = float(a)
    b = float(b)
    for name, value in (('a', a), ('b', b)):
        if not math.isfinite(value) or value < 0:
            raise DomainError(f'Marcum argument {name} must be finite and >= 0, got {value}')
    return int(order), a, b


def _initial_length(first: int, a: float, b: float, peak_sq: float) -> int:
    """Series length that normally covers the peak and the decaying tail."""
    span = math.sqrt(peak_sq)
    return first + int(0.5 * peak_sq + 10.0 * span) + 64


def _series_terms(a: float, b: float, direction: int, length: int, tol: Tolerance) -> np.ndarray:
    """
    Terms (b/a)^{direction*k} e^{-(a-b)^2/2} e^{-ab} I_k(ab) for k = 0 .. length-1.
    """
    log_bessel = log_bessel_i_scaled_sequence(a * b, length, tol)
    k = np.arange(length, dtype=float)
    log_terms = direction * k * math.log(b / a) - 0.5 * (a - b) ** 2 + log_bessel
    return np.exp(log_terms)


def _converged_terms(a: float, b: float, direction: int, first: int, tol: Tolerance) -> np.ndarray:
    """
    Term array long enough that everything beyond its end is negligible.

    Summing terms[first:] gives the complement (direction=+1) or the
    Q-side tail (direction=-1).
    """
    peak_sq = b * b if direction > 0 else a * a
    length = max(min(_initial_length(first, a, b, peak_sq), first + tol.max_terms), first + 2)

    while True:
        terms = _series_terms(a, b, direction, length, tol)
        total = math.fsum(terms[first:])
        last = terms[-1]
        if last <= terms[-2] and last <= 1e-3 * tol.bound(total):
            return terms
        if length - first >= tol.max_terms:
            raise NumericFailure(
                f'Marcum series did not converge within {tol.max_terms} terms (a={a}, b={b})',
                partial_value=total,
                terms=length - first,
            )
        logger.debug(f'[Marcum] Extending series beyond {length} terms (a={a}, b={b})')
        length = min(2 * length, first + tol.max_terms)


def _complement_by_sum(order: int, a: float, b: float, tol: Tolerance) -> float:
    terms = _converged_terms(a, b, +1, order, tol)
    return math.fsum(terms[order:])


def _q_by_sum(order: int, a: float, b: float, tol: Tolerance) -> float:
    # k >= 0 part uses (a/b)^k, the 1-m <= k < 0 part reuses the (b/a)^|k| terms
    upper = _converged_terms(a, b, -1, 0, tol)
    total = math.fsum(upper)
    if order > 1:
        lower = _series_terms(a, b, +1, order, tol)
        total = math.fsum([total, *lower[1:order]])
    return total


def _prefers_complement(order: int, a: float, b: float) -> bool:
    # The mean of the underlying chi-square sits at a^2 + 2m; left of it the
    # complement is the smaller probability
    return b * b < a * a + 2.0 * (order - 1)


def marcum_q(order: int, a: float, b: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """
    Generalised Marcum Q-function Q_order(a, b).

    Args:
        order: Positive integer order m
        a: Non-centrality amplitude, >= 0
        b: Threshold amplitude, >= 0
        tol: Series truncation control

    Returns:
        float: Probability in [0, 1]

    Raises:
        DomainError: On invalid arguments
        NumericFailure: If the series does not converge
    """
    order, a, b = _check(order, a, b)
    if b == 0.0:
        return 1.0
    if a == 0.0:
        return float(special.gammaincc(order, 0.5 * b * b))

    if _prefers_complement(order, a, b):
        value = 1.0 - _complement_by_sum(order, a, b, tol)
    else:
        value = _q_by_sum(order, a, b, tol)
    return min(1.0, max(0.0, value))


def marcum_cdf(order: int, a: float, b: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """
    1 - Q_order(a, b), the CDF of a non-central chi variable at b.

    Computed directly from positive terms when it is the smaller side, so
    values down to the absolute tolerance are meaningful.
    """
    order, a, b = _check(order, a, b)
    if b == 0.0:
        return 0.0
    if a == 0.0:
        return float(special.gammainc(order, 0.5 * b * b))

    if _prefers_complement(order, a, b):
        value = _complement_by_sum(order, a, b, tol)
    else:
        value = 1.0 - _q_by_sum(order, a, b, tol)
    return min(1.0, max(0.0, value))


def marcum_cdf_orders(max_order: int, a: float, b: float, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """
    1 - Q_{n+1}(a, b) for n = 0 .. max_order from a single Bessel sequence.

    When the complement series fits in tol.max_terms the values are tail
    sums of its terms. Otherwise (very large b) they come from the upward
    recurrence Q_{n+1} = Q_n + term_n starting at Q_1, and any order whose
    complement has become too small to survive the subtraction is reported
    as a numeric failure.

    Returns:
        np.ndarray: Array of length max_order + 1, non-increasing
    """
    if int(max_order) != max_order or max_order < 0:
        raise DomainError(f'max_order must be a non-negative integer, got {max_order}')
    max_order = int(max_order)
    _, a, b = _check(1, a, b)
    orders = np.arange(1, max_order + 2)

    if b == 0.0:
        return np.zeros(max_order + 1)
    if a == 0.0:
        return special.gammainc(orders, 0.5 * b * b)

    if _initial_length(1, a, b, b * b) - 1 <= tol.max_terms:
        terms = _converged_terms(a, b, +1, 1, tol)
        if len(terms) < max_order + 2:
            terms = _series_terms(a, b, +1, max_order + 2, tol)
        # tail[j] = sum_{k >= j} terms[k]
        tail = np.cumsum(terms[::-1])[::-1]
        values = tail[1:max_order + 2]
        return np.clip(values, 0.0, 1.0)

    q_first = _q_by_sum(1, a, b, tol)
    steps = _series_terms(a, b, +1, max_order + 1, tol)
    q_values = q_first + np.concatenate(([0.0], np.cumsum(steps[1:])))
    values = 1.0 - q_values
    lost = np.nonzero(values < LOSS_OF_SIGNIFICANCE)[0]
    if lost.size:
        raise NumericFailure(
            f'Upward Marcum recurrence lost significance at order {int(lost[0]) + 1} (a={a}, b={b})',
            partial_value=float(values[lost[0]]),
            terms=max_order + 1,
        )
    return np.clip(values, 0.0, 1.0)


def marcum_q_lower_bound(a: float, b: float) -> float:
    """
    Lower bound 1 - (e^{-(a-b)^2/2} - e^{-(a+b)^2/2}) / 2 on Q_1(a, b), for a > b.
    """
    _, a, b = _check(1, a, b)
    if not a > b:
        raise DomainError(f'marcum_q_lower_bound requires a > b, got a={a}, b={b}')
    return 1.0 - 0.5 * (math.exp(-0.5 * (a - b) ** 2) - math.exp(-0.5 * (a + b) ** 2))
