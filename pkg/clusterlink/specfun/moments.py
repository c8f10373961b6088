"""
Trigonometric moments of random phase errors and the Rician amplitude mean.

Phase errors are either zero-mean Gaussian (location-based phasing) or
uniform on a quantization cell (feedback phasing). All angles in radians.
"""

import math

import numpy as np

from clusterlink.exceptions import DomainError
from .bessel import bessel_i_scaled

# Below this |pi x| the complement 1 - sinc is taken from its Taylor series
SINC_TAYLOR_LIMIT = 1e-3


def _check_sigma(sigma_eps: float) -> float:
    sigma_eps = float(sigma_eps)
    if not math.isfinite(sigma_eps) or sigma_eps < 0:
        raise DomainError(f'sigma_eps must be finite and >= 0, got {sigma_eps}')
    return sigma_eps


def sinc_norm(x: float) -> float:
    """Normalized sinc, sin(pi x)/(pi x) with sinc(0) = 1."""
    return float(np.sinc(x))


def sinc_complement(x: float) -> float:
    """1 - sinc_norm(x) without cancellation for small x."""
    y = math.pi * float(x)
    if abs(y) < SINC_TAYLOR_LIMIT:
        y2 = y * y
        return y2 / 6.0 - y2 * y2 / 120.0
    return 1.0 - sinc_norm(x)


def gauss_cos_moment(sigma_eps: float) -> float:
    """E[cos eps] for eps ~ N(0, sigma_eps^2)."""
    sigma_eps = _check_sigma(sigma_eps)
    return math.exp(-0.5 * sigma_eps * sigma_eps)


def gauss_sin2_moment(sigma_eps: float) -> float:
    """
    E[sin^2 eps] = (1 - e^{-2 sigma^2}) / 2 for eps ~ N(0, sigma_eps^2).

    Defined as the complement of gauss_cos2_moment so the pair sums to
    exactly one in floating point.
    """
    return 1.0 - gauss_cos2_moment(sigma_eps)


def gauss_cos2_moment(sigma_eps: float) -> float:
    """E[cos^2 eps] = (1 + e^{-2 sigma^2}) / 2 for eps ~ N(0, sigma_eps^2)."""
    sigma_eps = _check_sigma(sigma_eps)
    sin2 = -0.5 * math.expm1(-2.0 * sigma_eps * sigma_eps)
    return 1.0 - sin2


def uniform_cos_moment(half_width: float) -> float:
    """E[cos theta] for theta ~ U(-w, w), i.e. sin(w)/w."""
    if half_width < 0:
        raise DomainError(f'half_width must be >= 0, got {half_width}')
    return sinc_norm(half_width / math.pi)


def uniform_cos2_moment(half_width: float) -> float:
    """E[cos^2 theta] for theta ~ U(-w, w), i.e. (1 + sin(2w)/(2w)) / 2."""
    if half_width < 0:
        raise DomainError(f'half_width must be >= 0, got {half_width}')
    return 0.5 * (1.0 + sinc_norm(2.0 * half_width / math.pi))


def rice_amplitude_mean(mean_power: float, rice_factor: float) -> float:
    """
    Mean amplitude E[sqrt(gamma)] of a Rician channel.

    Args:
        mean_power: Mean power gamma_bar (linear), > 0
        rice_factor: Rice factor nu (linear), >= 0

    Returns:
        float: sqrt(pi gamma_bar / (4 (1 + nu))) * e^{-nu/2}
               * ((1 + nu) I_0(nu/2) + nu I_1(nu/2))
    """
    if not mean_power > 0:
        raise DomainError(f'mean_power must be > 0, got {mean_power}')
    if not rice_factor >= 0:
        raise DomainError(f'rice_factor must be >= 0, got {rice_factor}')

    half = 0.5 * rice_factor
    laguerre = (1.0 + rice_factor) * bessel_i_scaled(0, half) + rice_factor * bessel_i_scaled(1, half)
    return math.sqrt(math.pi * mean_power / (4.0 * (1.0 + rice_factor))) * laguerre
