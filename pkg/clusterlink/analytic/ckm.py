"""
Location-based (CKM) phasing: Rice approximation of the cooperative sum.

With Gaussian phase errors the static parts add up only partially
coherently. The sum channel is approximated by a Rice variable whose
static power is

    gamma_d_sum = f gamma_d |delta| (1 + (|delta| - 1) e^{-sigma^2})

and whose scattered part has per-dimension variance
sigma_sum^2 = f |delta| gamma_s / 2. This is a model approximation, not an
exact law; the channel samplers measure its error.
"""

import logging
import math
from dataclasses import dataclass

from clusterlink.channel import CkmSideInfo, ClusterConfig, PowerScaling, derive_powers
from clusterlink.exceptions import DomainError, NoFiniteBound, UnsupportedRegime
from clusterlink.metrics.service import ServiceSpec
from clusterlink.specfun import (
    DEFAULT_TOLERANCE,
    Tolerance,
    gauss_cos2_moment,
    gauss_cos_moment,
    gauss_sin2_moment,
    marcum_cdf,
)

logger = logging.getLogger('clusterlink.analytic')


@dataclass(frozen=True)
class CkmSumDist:
    """Parameters of the approximating Rice distribution of the sum channel."""

    agg_static_power: float
    sigma_sum: float
    effective_rice: float

    def __post_init__(self):
        for name in ('agg_static_power', 'sigma_sum', 'effective_rice'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f'{name} must be finite and >= 0, got {value}')
        if self.sigma_sum > 0:
            implied = self.agg_static_power / (2.0 * self.sigma_sum ** 2)
            if not math.isclose(implied, self.effective_rice, rel_tol=1e-9, abs_tol=1e-300):
                raise ValueError(
                    f'effective_rice ({self.effective_rice}) inconsistent with '
                    f'agg_static_power / (2 sigma_sum^2) = {implied}'
                )


def coherence_gain(active_devices: int, sigma_eps: float) -> float:
    """
    E|sum_k e^{j eps_k}|^2 = |delta| (1 + (|delta| - 1) e^{-sigma^2}).

    Expanded as E[(sum cos)^2] + E[(sum sin)^2]; the diagonal terms use
    E[cos^2] + E[sin^2] and the cross terms (E cos)^2.
    """
    n = active_devices
    diagonal = n * (gauss_cos2_moment(sigma_eps) + gauss_sin2_moment(sigma_eps))
    cross = n * (n - 1) * gauss_cos_moment(sigma_eps) ** 2
    return diagonal + cross


def effective_rice_factor(rice_factor: float, active_devices: int, sigma_eps: float) -> float:
    """Rice factor of the sum channel, nu (1 + (|delta| - 1) e^{-sigma^2})."""
    if rice_factor < 0:
        raise DomainError(f'rice_factor must be >= 0, got {rice_factor}')
    if active_devices < 1:
        raise DomainError(f'active_devices must be >= 1, got {active_devices}')
    if sigma_eps < 0:
        raise DomainError(f'sigma_eps must be >= 0, got {sigma_eps}')
    return rice_factor * (1.0 + (active_devices - 1) * math.exp(-sigma_eps * sigma_eps))


def build_dist(cfg: ClusterConfig, side: CkmSideInfo) -> CkmSumDist:
    """
    Approximating Rice distribution for a cluster under CKM phasing.

    Args:
        cfg: Cluster statistics (power scaling applied here)
        side: Phase-error statistics

    Returns:
        CkmSumDist
    """
    powers = derive_powers(cfg)
    f = powers.per_device_power_factor
    agg = f * powers.gamma_d * coherence_gain(cfg.active_devices, side.sigma_eps)
    sigma_sum = math.sqrt(0.5 * f * cfg.active_devices * powers.gamma_s)
    return CkmSumDist(
        agg_static_power=agg,
        sigma_sum=sigma_sum,
        effective_rice=agg / (2.0 * sigma_sum ** 2),
    )


def mean_snr(d: CkmSumDist) -> float:
    """First moment of the approximating distribution."""
    return d.agg_static_power + 2.0 * d.sigma_sum ** 2


def snr_cdf(d: CkmSumDist, gamma: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """
    P(SNR <= gamma) = 1 - Q_1(sqrt(gamma_d_sum)/sigma_sum, sqrt(gamma)/sigma_sum).

    Raises:
        DomainError: If gamma < 0
        NumericFailure: Propagated from the Marcum series
    """
    if gamma < 0:
        raise DomainError(f'gamma must be >= 0, got {gamma}')
    if gamma == 0:
        return 0.0
    if math.isinf(gamma):
        return 1.0
    return marcum_cdf(1, math.sqrt(d.agg_static_power) / d.sigma_sum, math.sqrt(gamma) / d.sigma_sum, tol)


def dor(d: CkmSumDist, svc: ServiceSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """
    Delay outage rate: the CDF at 2^(D/(W T_th)) - 1.

    Saturated thresholds (exponent above svc.saturation_exponent) give 1.
    """
    if svc.saturated:
        return 1.0
    return snr_cdf(d, svc.dor_threshold, tol)


def dor_upper_bound(d: CkmSumDist, svc: ServiceSpec) -> float:
    """
    Chernoff-type bound (1/2) exp(-(sqrt(gamma_d_sum) - sqrt(gamma_th))^2 / (2 sigma_sum^2)).

    Raises:
        UnsupportedRegime: If the threshold is not below the static power
    """
    if svc.saturated:
        raise UnsupportedRegime('DOR threshold is saturated; no bound applies')
    gap = math.sqrt(d.agg_static_power) - math.sqrt(svc.dor_threshold)
    if not gap > 0:
        raise UnsupportedRegime(
            f'Bound needs gamma_th ({svc.dor_threshold}) < aggregated static power ({d.agg_static_power})'
        )
    return 0.5 * math.exp(-gap * gap / (2.0 * d.sigma_sum ** 2))


def device_bound(
    target_dor: float,
    gamma_req: float,
    rice_factor: float,
    mean_snr: float,
    sigma_eps: float,
    scaling: str = PowerScaling.CONSTANT_PER_DEVICE,
) -> float:
    """
    Real-valued right-hand side of the device-count requirement.

    The aggregated static power is approximated by f gamma_d |delta|^2
    e^{-sigma^2}, which never exceeds the exact value, and the Marcum
    function by its lower bound; any device count above the result
    therefore meets the target whenever bound_validity holds.

    Args:
        target_dor: Target delay outage rate, in (0, 1/2)
        gamma_req: Threshold SNR (linear), >= 0
        rice_factor: Per-device Rice factor, > 0
        mean_snr: Per-device mean SNR at full power, > 0
        sigma_eps: Phase-error standard deviation in radians
        scaling: PowerScaling mode

    Raises:
        DomainError: If target_dor is outside (0, 1/2) or other inputs are invalid
        UnsupportedRegime: If rice_factor is 0
        NoFiniteBound: If the bound has no finite real solution
    """
    if not 0 < target_dor < 0.5:
        raise DomainError(f'target_dor must be in (0, 1/2), got {target_dor}')
    if gamma_req < 0 or not mean_snr > 0 or sigma_eps < 0 or rice_factor < 0:
        raise DomainError(
            f'Invalid inputs: gamma_req={gamma_req}, mean_snr={mean_snr}, '
            f'sigma_eps={sigma_eps}, rice_factor={rice_factor}'
        )
    if rice_factor == 0:
        raise UnsupportedRegime('Device-count bound requires a Rice factor > 0')

    nu = rice_factor
    log_term = -math.log(2.0 * target_dor)
    spread = math.exp(sigma_eps * sigma_eps)

    if scaling == PowerScaling.CONSTANT_TOTAL:
        root = math.sqrt(log_term / nu) + math.sqrt((1.0 + nu) * gamma_req / (nu * mean_snr))
        bound = spread * root * root
    else:
        inner = 1.0 + 4.0 * math.exp(-0.5 * sigma_eps * sigma_eps) * math.sqrt(
            nu * (1.0 + nu) * gamma_req / mean_snr
        ) / log_term
        if inner < 0:
            raise NoFiniteBound(f'Negative discriminant {inner} in the per-device bound')
        bound = log_term * spread / (4.0 * nu) * (1.0 + math.sqrt(inner)) ** 2

    if not math.isfinite(bound):
        raise NoFiniteBound(f'Device-count bound is not finite ({bound})')
    return bound


def required_devices(
    target_dor: float,
    gamma_req: float,
    rice_factor: float,
    mean_snr: float,
    sigma_eps: float,
    scaling: str = PowerScaling.CONSTANT_PER_DEVICE,
) -> int:
    """
    Number of cooperating devices the closed-form DOR bound asks for.

    Returns:
        int: Smallest integer strictly greater than device_bound(...), at least 1
    """
    bound = device_bound(target_dor, gamma_req, rice_factor, mean_snr, sigma_eps, scaling)
    devices = max(1, math.floor(bound) + 1)
    logger.debug(f'[Bound] target={target_dor} gamma_req={gamma_req:.4g} nu={rice_factor:.4g} -> {bound:.3f} ({devices})')
    return devices


def minimum_valid_delay(svc: ServiceSpec, cfg: ClusterConfig, side: CkmSideInfo) -> float:
    """
    Smallest delay threshold for which the device-count bound applies,
    D / (W log2(1 + f gamma_d |delta|^2 e^{-sigma^2})).
    """
    powers = derive_powers(cfg)
    static = (
        powers.per_device_power_factor * powers.gamma_d
        * cfg.active_devices ** 2 * math.exp(-side.sigma_eps ** 2)
    )
    if static == 0:
        return math.inf
    if svc.data_bits == 0:
        return 0.0
    return svc.data_bits / (svc.bandwidth * math.log2(1.0 + static))


def bound_validity(svc: ServiceSpec, cfg: ClusterConfig, side: CkmSideInfo) -> bool:
    """
    Whether the bound's premise (threshold below the approximated static
    power) holds for cfg.active_devices.
    """
    if svc.delay_threshold == 0:
        return False
    return svc.delay_threshold > minimum_valid_delay(svc, cfg, side)
