"""
Reference curves: a single Rician device, selection diversity and Rayleigh.
"""

import math

from clusterlink.exceptions import DomainError
from clusterlink.specfun import DEFAULT_TOLERANCE, Tolerance, marcum_cdf


def _check(mean_snr: float, gamma: float):
    if not mean_snr > 0:
        raise DomainError(f'mean_snr must be > 0, got {mean_snr}')
    if gamma < 0:
        raise DomainError(f'gamma must be >= 0, got {gamma}')


def single_rice_cdf(mean_snr: float, rice_factor: float, gamma: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """1 - Q_1(sqrt(2 nu), sqrt(2 (1 + nu) gamma / gamma_bar))."""
    _check(mean_snr, gamma)
    if math.isinf(gamma):
        return 1.0
    return marcum_cdf(
        1,
        math.sqrt(2.0 * rice_factor),
        math.sqrt(2.0 * (1.0 + rice_factor) * gamma / mean_snr),
        tol,
    )


def selection_cdf(
    mean_snr: float,
    rice_factor: float,
    devices: int,
    gamma: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> float:
    """
    CDF of the best of `devices` independent Rician devices.

    Always at full per-device power; power scaling does not apply.
    """
    if devices < 1:
        raise DomainError(f'devices must be >= 1, got {devices}')
    return single_rice_cdf(mean_snr, rice_factor, gamma, tol) ** devices


def rayleigh_cdf(mean_snr: float, gamma: float) -> float:
    """1 - exp(-gamma / gamma_bar)."""
    _check(mean_snr, gamma)
    return -math.expm1(-gamma / mean_snr)
