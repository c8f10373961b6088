"""
Cluster channel model: configuration records, random substreams and the
exact SNR samplers for both phasing schemes and the selection baseline.
"""

from .config import (
    CkmSideInfo,
    ClusterConfig,
    DerivedPowers,
    FeedbackSideInfo,
    PowerScaling,
    Scenario,
    derive_powers,
)
from .samplers import (
    SAMPLER_REGISTRY,
    BaseSampler,
    CkmSampler,
    FeedbackSampler,
    SelectionSampler,
    ckm_sum,
    feedback_sum,
    get_sampler,
    quantize_phase,
    sample_rice_power,
    sample_snr_ckm,
    sample_snr_feedback,
    sample_snr_selection,
)
from .streams import SampleStream

__all__ = [
    'SAMPLER_REGISTRY',
    'BaseSampler',
    'CkmSampler',
    'CkmSideInfo',
    'ClusterConfig',
    'DerivedPowers',
    'FeedbackSampler',
    'FeedbackSideInfo',
    'PowerScaling',
    'SampleStream',
    'Scenario',
    'SelectionSampler',
    'ckm_sum',
    'derive_powers',
    'feedback_sum',
    'get_sampler',
    'quantize_phase',
    'sample_rice_power',
    'sample_snr_ckm',
    'sample_snr_feedback',
    'sample_snr_selection',
]
