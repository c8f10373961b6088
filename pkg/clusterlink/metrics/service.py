"""
Service requirements and the SNR thresholds they translate to.

Rates follow the Shannon formula R = W log2(1 + gamma). A delivery of D bits
within T_th seconds therefore needs gamma >= 2^(D/(W T_th)) - 1, and a
minimum rate R_min needs gamma >= 2^(R_min/W) - 1.
"""

import math
from dataclasses import dataclass

from clusterlink.exceptions import DomainError

# Thresholds 2^x - 1 with x above this are treated as unreachable
DEFAULT_SATURATION_EXPONENT = 64.0


@dataclass(frozen=True)
class ServiceSpec:
    """
    What the cluster has to deliver.

    delay_threshold may be 0 (nothing can be delivered in zero time; every
    DOR evaluation saturates) or math.inf (no deadline).
    """

    data_bits: float
    bandwidth: float
    delay_threshold: float
    min_rate: float = 0.0
    saturation_exponent: float = DEFAULT_SATURATION_EXPONENT

    def __post_init__(self):
        if not self.data_bits >= 0:
            raise ValueError(f'data_bits must be >= 0, got {self.data_bits}')
        if not (math.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise ValueError(f'bandwidth must be > 0, got {self.bandwidth}')
        if not self.delay_threshold >= 0:
            raise ValueError(f'delay_threshold must be >= 0, got {self.delay_threshold}')
        if not self.min_rate >= 0:
            raise ValueError(f'min_rate must be >= 0, got {self.min_rate}')
        if not self.saturation_exponent > 0:
            raise ValueError(f'saturation_exponent must be > 0, got {self.saturation_exponent}')

    def with_delay(self, delay_threshold: float) -> 'ServiceSpec':
        return ServiceSpec(
            data_bits=self.data_bits,
            bandwidth=self.bandwidth,
            delay_threshold=delay_threshold,
            min_rate=self.min_rate,
            saturation_exponent=self.saturation_exponent,
        )

    @property
    def dor_exponent(self) -> float:
        return dor_exponent(self.data_bits, self.bandwidth, self.delay_threshold)

    @property
    def saturated(self) -> bool:
        """True when the DOR threshold is beyond any reachable SNR."""
        return self.dor_exponent > self.saturation_exponent

    @property
    def dor_threshold(self) -> float:
        return dor_threshold(self.data_bits, self.bandwidth, self.delay_threshold, self.saturation_exponent)


def _check_bandwidth(bandwidth: float):
    if not (math.isfinite(bandwidth) and bandwidth > 0):
        raise DomainError(f'bandwidth must be > 0, got {bandwidth}')


def spectral_threshold(spectral_efficiency: float) -> float:
    """2^x - 1, accurate for small x."""
    return math.expm1(spectral_efficiency * math.log(2.0))


def outage_threshold(min_rate: float, bandwidth: float) -> float:
    """
    SNR below which the Shannon rate falls short of min_rate.

    Args:
        min_rate: Required rate R_min in bit/s, >= 0
        bandwidth: Bandwidth W in Hz, > 0

    Returns:
        float: 2^(R_min/W) - 1
    """
    _check_bandwidth(bandwidth)
    if min_rate < 0:
        raise DomainError(f'min_rate must be >= 0, got {min_rate}')
    return spectral_threshold(min_rate / bandwidth)


def dor_exponent(data_bits: float, bandwidth: float, delay_threshold: float) -> float:
    """Required spectral efficiency D/(W T_th); infinite for T_th = 0 and D > 0."""
    _check_bandwidth(bandwidth)
    if data_bits == 0:
        return 0.0
    if delay_threshold == 0:
        return math.inf
    return data_bits / (bandwidth * delay_threshold)


def dor_threshold(
    data_bits: float,
    bandwidth: float,
    delay_threshold: float,
    saturation_exponent: float = DEFAULT_SATURATION_EXPONENT,
) -> float:
    """
    SNR below which D bits cannot be delivered within delay_threshold.

    Returns:
        float: 2^(D/(W T_th)) - 1, or math.inf when the exponent exceeds
               saturation_exponent
    """
    exponent = dor_exponent(data_bits, bandwidth, delay_threshold)
    if exponent > saturation_exponent:
        return math.inf
    return spectral_threshold(exponent)


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0:
        raise DomainError(f'Cannot express {value} in dB')
    return 10.0 * math.log10(value)


def deg_to_rad(value_deg: float) -> float:
    return math.radians(value_deg)
