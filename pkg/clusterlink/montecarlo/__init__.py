"""
Monte Carlo harness: block-parallel simulation, empirical CDFs, the on-disk
sample cache and the minimal device-count search.
"""

from .cache import SampleCache
from .empirical import EmpiricalCdf, HistogramAccumulator, HistogramCdf, QuantileResult
from .harness import RunOptions, config_fingerprint, iter_blocks, lookup, run
from .search import DeviceSearchResult, dor_estimate, min_devices, threshold_estimate

__all__ = [
    'DeviceSearchResult',
    'EmpiricalCdf',
    'HistogramAccumulator',
    'HistogramCdf',
    'QuantileResult',
    'RunOptions',
    'SampleCache',
    'config_fingerprint',
    'dor_estimate',
    'iter_blocks',
    'lookup',
    'min_devices',
    'run',
    'threshold_estimate',
]
