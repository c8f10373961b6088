"""
Exact stochastic models of the cooperative sum channel.

These samplers are the ground truth the analytic approximations are checked
against. Each device draws from its own substream of the supplied
SampleStream, so results depend only on (seed, block, configuration, n).
"""

import math
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from .config import (
    CkmSideInfo,
    ClusterConfig,
    FeedbackSideInfo,
    Scenario,
    derive_powers,
)
from .streams import SampleStream


def sample_rice_power(mean_power: float, rice_factor: float, rng: np.random.Generator, n: int) -> np.ndarray:
    """
    Single-device Rician channel powers |h|^2 with E|h|^2 = mean_power.

    Args:
        mean_power: Mean power (linear)
        rice_factor: Static-to-scattered power ratio (linear)
        rng: Generator to draw from
        n: Number of samples

    Returns:
        np.ndarray: n non-negative powers
    """
    gamma_s = mean_power / (1.0 + rice_factor)
    gamma_d = mean_power - gamma_s
    scale = math.sqrt(0.5 * gamma_s)
    in_phase = math.sqrt(gamma_d) + scale * rng.standard_normal(n)
    quadrature = scale * rng.standard_normal(n)
    return in_phase * in_phase + quadrature * quadrature


def ckm_sum(cfg: ClusterConfig, side: CkmSideInfo, stream: SampleStream, n: int) -> np.ndarray:
    """
    Complex sum channel under location-based phasing.

    Each device contributes a scattered complex Gaussian of power
    f*gamma_s plus its static part sqrt(f*gamma_d) rotated by the residual
    phase error eps_k ~ N(0, sigma_eps^2).
    """
    powers = derive_powers(cfg)
    f = powers.per_device_power_factor
    scale = math.sqrt(0.5 * f * powers.gamma_s)
    static = math.sqrt(f * powers.gamma_d)

    total = np.zeros(n, dtype=complex)
    for k in range(cfg.active_devices):
        rng = stream.device(k)
        scattered = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        eps = side.sigma_eps * rng.standard_normal(n)
        total += scattered + static * np.exp(1j * eps)
    return total


def sample_snr_ckm(cfg: ClusterConfig, side: CkmSideInfo, stream: SampleStream, n: int) -> np.ndarray:
    """Received SNR of the cluster under location-based phasing."""
    return np.abs(ckm_sum(cfg, side, stream, n)) ** 2


def quantize_phase(phases: np.ndarray, bits: int) -> np.ndarray:
    """Index of the nearest codeword n*2*pi/2^N, n = 0 .. 2^N-1."""
    levels = 2 ** bits
    return np.rint(phases * (levels / (2.0 * math.pi))).astype(np.int64) % levels


def codeword_phase(indices: np.ndarray, bits: int) -> np.ndarray:
    return indices * (2.0 * math.pi / 2 ** bits)


def feedback_sum(
    cfg: ClusterConfig,
    side: FeedbackSideInfo,
    stream: SampleStream,
    n: int,
    error_count: Optional[int] = None,
) -> np.ndarray:
    """
    Complex sum channel under quantized-feedback phasing.

    Each device has a Rician amplitude and a uniform channel phase. The
    phase is quantized to the nearest codeword; a phasing word lost with
    probability p_w is replaced by a uniformly random codeword.

    Args:
        error_count: If given, exactly this many devices (the first ones)
            receive a random word and p_w is ignored; used to check the
            conditional moments.
    """
    if error_count is not None and not 0 <= error_count <= cfg.active_devices:
        raise ValueError(f'error_count must be in [0, {cfg.active_devices}], got {error_count}')

    powers = derive_powers(cfg)
    device_power = cfg.mean_snr * powers.per_device_power_factor
    levels = 2 ** side.bits

    total = np.zeros(n, dtype=complex)
    for k in range(cfg.active_devices):
        rng = stream.device(k)
        amplitude = np.sqrt(sample_rice_power(device_power, cfg.rice_factor, rng, n))
        phase = rng.uniform(0.0, 2.0 * math.pi, n)
        applied = quantize_phase(phase, side.bits)
        if error_count is None:
            lost = rng.random(n) < side.word_error_prob
        else:
            lost = np.full(n, k < error_count)
        random_words = rng.integers(0, levels, n, dtype=np.int64)
        applied = np.where(lost, random_words, applied)
        total += amplitude * np.exp(1j * (phase - codeword_phase(applied, side.bits)))
    return total


def sample_snr_feedback(
    cfg: ClusterConfig,
    side: FeedbackSideInfo,
    stream: SampleStream,
    n: int,
    error_count: Optional[int] = None,
) -> np.ndarray:
    """Received SNR of the cluster under quantized-feedback phasing."""
    return np.abs(feedback_sum(cfg, side, stream, n, error_count)) ** 2


def sample_snr_selection(cfg: ClusterConfig, stream: SampleStream, n: int) -> np.ndarray:
    """
    Best single device out of the active set, always at full per-device power.

    Selection is ideal: the true maximum is picked.
    """
    best = np.zeros(n)
    for k in range(cfg.active_devices):
        rng = stream.device(k)
        np.maximum(best, sample_rice_power(cfg.mean_snr, cfg.rice_factor, rng, n), out=best)
    return best


class BaseSampler(ABC):
    """
    Binds a cluster configuration and side information to a sampling scheme.

    Subclasses are looked up through SAMPLER_REGISTRY by scenario.
    """

    scenario: str = ''

    def __init__(self, cfg: ClusterConfig, side=None):
        self.cfg = cfg
        self.side = side

    @abstractmethod
    def sample(self, stream: SampleStream, n: int) -> np.ndarray:
        """Draw n linear SNR samples from the given block stream."""
        pass

    def describe(self) -> dict:
        """Generating parameters, used for cache fingerprints."""
        return {
            'scenario': str(self.scenario),
            'cluster': self.cfg.as_dict(),
            'side': self.side.as_dict() if self.side is not None else None,
        }


class CkmSampler(BaseSampler):
    scenario = Scenario.CKM

    def __init__(self, cfg: ClusterConfig, side: CkmSideInfo):
        if not isinstance(side, CkmSideInfo):
            raise TypeError(f'CkmSampler needs CkmSideInfo, got {type(side).__name__}')
        super().__init__(cfg, side)

    def sample(self, stream: SampleStream, n: int) -> np.ndarray:
        return sample_snr_ckm(self.cfg, self.side, stream, n)


class FeedbackSampler(BaseSampler):
    scenario = Scenario.FEEDBACK

    def __init__(self, cfg: ClusterConfig, side: FeedbackSideInfo):
        if not isinstance(side, FeedbackSideInfo):
            raise TypeError(f'FeedbackSampler needs FeedbackSideInfo, got {type(side).__name__}')
        super().__init__(cfg, side)

    def sample(self, stream: SampleStream, n: int) -> np.ndarray:
        return sample_snr_feedback(self.cfg, self.side, stream, n)


class SelectionSampler(BaseSampler):
    scenario = Scenario.SELECTION

    def __init__(self, cfg: ClusterConfig, side=None):
        # Selection never uses side information nor power scaling
        super().__init__(cfg, None)

    def sample(self, stream: SampleStream, n: int) -> np.ndarray:
        return sample_snr_selection(self.cfg, stream, n)

    def describe(self) -> dict:
        description = super().describe()
        description['cluster'].pop('power_scaling')
        return description


# Sampler registry mapping scenario to sampler class
SAMPLER_REGISTRY = {
    Scenario.CKM.value: CkmSampler,
    Scenario.FEEDBACK.value: FeedbackSampler,
    Scenario.SELECTION.value: SelectionSampler,
}


def get_sampler(scenario: str) -> type:
    """
    Get the sampler class for a scenario.

    Raises:
        ValueError: If the scenario is not supported
    """
    key = str(scenario)
    if key not in SAMPLER_REGISTRY:
        raise ValueError(f"Unsupported scenario: {scenario}")
    return SAMPLER_REGISTRY[key]
