"""
Special functions and phase-error moments used by the analytic SNR models.
"""

from .bessel import bessel_i, bessel_i_scaled, log_bessel_i_scaled_sequence
from .marcum import marcum_cdf, marcum_cdf_orders, marcum_q, marcum_q_lower_bound
from .moments import (
    gauss_cos2_moment,
    gauss_cos_moment,
    gauss_sin2_moment,
    rice_amplitude_mean,
    sinc_complement,
    sinc_norm,
    uniform_cos2_moment,
    uniform_cos_moment,
)
from .tolerance import DEFAULT_TOLERANCE, Tolerance

__all__ = [
    'DEFAULT_TOLERANCE',
    'Tolerance',
    'bessel_i',
    'bessel_i_scaled',
    'gauss_cos2_moment',
    'gauss_cos_moment',
    'gauss_sin2_moment',
    'log_bessel_i_scaled_sequence',
    'marcum_cdf',
    'marcum_cdf_orders',
    'marcum_q',
    'marcum_q_lower_bound',
    'rice_amplitude_mean',
    'sinc_complement',
    'sinc_norm',
    'uniform_cos2_moment',
    'uniform_cos_moment',
]
