"""
Cluster channel statistics and side-information records.

Noise power is normalized to 1 throughout, so channel power and SNR are the
same quantity. All powers and ratios here are linear; dB conversion happens
at the command-line boundary.
"""

import math
from dataclasses import dataclass

from django.db.models import TextChoices


class PowerScaling(TextChoices):
    CONSTANT_PER_DEVICE = 'per_device', 'Constant power per device'
    CONSTANT_TOTAL = 'total', 'Constant total cluster power'


def _require(condition: bool, message: str):
    if not condition:
        raise ValueError(message)


@dataclass(frozen=True)
class ClusterConfig:
    """
    Statistics of a cooperating cluster.

    mean_snr is the per-device mean received SNR at full per-device power;
    rice_factor is the ratio of static to scattered power.
    """

    mean_snr: float
    rice_factor: float
    active_devices: int
    total_devices: int = 0
    power_scaling: str = PowerScaling.CONSTANT_PER_DEVICE

    def __post_init__(self):
        # total_devices defaults to the active set
        if not self.total_devices:
            object.__setattr__(self, 'total_devices', self.active_devices)
        _require(math.isfinite(self.mean_snr) and self.mean_snr > 0,
                 f'mean_snr must be > 0, got {self.mean_snr}')
        _require(math.isfinite(self.rice_factor) and self.rice_factor >= 0,
                 f'rice_factor must be >= 0, got {self.rice_factor}')
        _require(int(self.active_devices) == self.active_devices and self.active_devices >= 1,
                 f'active_devices must be a positive integer, got {self.active_devices}')
        _require(self.total_devices >= self.active_devices,
                 f'total_devices ({self.total_devices}) must be >= active_devices ({self.active_devices})')
        _require(self.power_scaling in PowerScaling.values,
                 f'power_scaling must be one of {PowerScaling.values}, got {self.power_scaling!r}')
        object.__setattr__(self, 'active_devices', int(self.active_devices))
        object.__setattr__(self, 'total_devices', int(self.total_devices))

    def with_devices(self, devices: int) -> 'ClusterConfig':
        """Same statistics with a different active set size."""
        return ClusterConfig(
            mean_snr=self.mean_snr,
            rice_factor=self.rice_factor,
            active_devices=devices,
            total_devices=max(devices, self.total_devices),
            power_scaling=self.power_scaling,
        )

    def as_dict(self) -> dict:
        return {
            'mean_snr': self.mean_snr,
            'rice_factor': self.rice_factor,
            'active_devices': self.active_devices,
            'total_devices': self.total_devices,
            'power_scaling': str(self.power_scaling),
        }


@dataclass(frozen=True)
class CkmSideInfo:
    """Location-based phasing: Gaussian phase error with std sigma_eps (radians)."""

    sigma_eps: float

    def __post_init__(self):
        _require(math.isfinite(self.sigma_eps) and self.sigma_eps >= 0,
                 f'sigma_eps must be >= 0, got {self.sigma_eps}')

    def as_dict(self) -> dict:
        return {'sigma_eps': self.sigma_eps}


# Longest phasing word accepted
MAX_FEEDBACK_BITS = 32


@dataclass(frozen=True)
class FeedbackSideInfo:
    """Quantized-feedback phasing: N-bit phase words lost with probability p_w."""

    bits: int
    word_error_prob: float = 0.0

    def __post_init__(self):
        _require(int(self.bits) == self.bits and 1 <= self.bits <= MAX_FEEDBACK_BITS,
                 f'bits must be an integer in [1, {MAX_FEEDBACK_BITS}], got {self.bits}')
        _require(0.0 <= self.word_error_prob <= 1.0,
                 f'word_error_prob must be in [0, 1], got {self.word_error_prob}')
        object.__setattr__(self, 'bits', int(self.bits))

    @property
    def cell_half_width(self) -> float:
        """Half width pi/2^N of the residual phase interval."""
        return math.pi / 2 ** self.bits

    def as_dict(self) -> dict:
        return {'bits': self.bits, 'word_error_prob': self.word_error_prob}


@dataclass(frozen=True)
class DerivedPowers:
    """Split of the mean SNR into static and scattered parts."""

    gamma_d: float
    gamma_s: float
    per_device_power_factor: float


def derive_powers(cfg: ClusterConfig) -> DerivedPowers:
    """
    Decompose the per-device mean SNR.

    gamma_d = mean_snr * nu / (1 + nu), gamma_s = mean_snr / (1 + nu). The
    factors are reported at full per-device power; per_device_power_factor
    (1 or 1/|delta|) is applied by the consumers.
    """
    gamma_s = cfg.mean_snr / (1.0 + cfg.rice_factor)
    gamma_d = cfg.mean_snr - gamma_s
    if cfg.power_scaling == PowerScaling.CONSTANT_TOTAL:
        factor = 1.0 / cfg.active_devices
    else:
        factor = 1.0
    return DerivedPowers(gamma_d=gamma_d, gamma_s=gamma_s, per_device_power_factor=factor)


class Scenario(TextChoices):
    CKM = 'ckm', 'Location-based phasing'
    FEEDBACK = 'feedback', 'Quantized-feedback phasing'
    SELECTION = 'selection', 'Selection diversity'
