"""
Block-parallel Monte Carlo runs.

A run of n samples is cut into blocks of CLUSTERLINK_BLOCK_SIZE samples.
Block b draws from SampleStream(seed, b), so its samples do not depend on
which worker produced it; blocks are merged in index order. The number of
workers therefore never changes the result.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Union

import numpy as np
from django.conf import settings

from clusterlink.channel import BaseSampler, ClusterConfig, SampleStream, get_sampler
from clusterlink.exceptions import DomainError
from clusterlink.utils import fingerprint

from .cache import SampleCache
from .empirical import EmpiricalCdf, HistogramAccumulator, HistogramCdf

logger = logging.getLogger('clusterlink.montecarlo')

# Bumped whenever sampling changes in a way that invalidates cached runs
SAMPLING_VERSION = 1


@dataclass(frozen=True)
class RunOptions:
    """Execution knobs; defaults come from the CLUSTERLINK_* settings."""

    block_size: int
    max_workers: int
    max_sorted_samples: int
    histogram_bins: int

    def __post_init__(self):
        for name in ('block_size', 'max_workers', 'max_sorted_samples', 'histogram_bins'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f'{name} must be a positive integer, got {value}')

    @classmethod
    def from_settings(cls, **overrides) -> 'RunOptions':
        values = {
            'block_size': getattr(settings, 'CLUSTERLINK_BLOCK_SIZE', 65536),
            'max_workers': getattr(settings, 'CLUSTERLINK_MAX_WORKERS', 1),
            'max_sorted_samples': getattr(settings, 'CLUSTERLINK_MAX_SORTED_SAMPLES', 10**8),
            'histogram_bins': getattr(settings, 'CLUSTERLINK_HISTOGRAM_BINS', 10**5),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def config_fingerprint(sampler: BaseSampler, n: int, seed: int, block_size: int) -> str:
    """Digest of everything that determines a run's samples."""
    return fingerprint({
        'sampler': sampler.describe(),
        'n': int(n),
        'seed': int(seed),
        'block_size': int(block_size),
        'version': SAMPLING_VERSION,
    })


def block_sizes(n: int, block_size: int) -> Iterator[int]:
    full, rest = divmod(n, block_size)
    for _ in range(full):
        yield block_size
    if rest:
        yield rest


def _draw(sampler: BaseSampler, seed: int, block: int, size: int) -> np.ndarray:
    return sampler.sample(SampleStream(seed=seed, block=block), size)


def iter_blocks(sampler: BaseSampler, n: int, seed: int, options: RunOptions) -> Iterator[np.ndarray]:
    """
    Yield the run's sample blocks in index order.

    At most 2 * max_workers blocks are in flight at a time.
    """
    sizes = list(block_sizes(n, options.block_size))
    if options.max_workers == 1 or len(sizes) == 1:
        for block, size in enumerate(sizes):
            yield _draw(sampler, seed, block, size)
        return

    window = 2 * options.max_workers
    with ThreadPoolExecutor(max_workers=options.max_workers) as executor:
        for start in range(0, len(sizes), window):
            futures = [
                executor.submit(_draw, sampler, seed, block, sizes[block])
                for block in range(start, min(start + window, len(sizes)))
            ]
            for future in futures:
                yield future.result()


def lookup(
    scenario: str,
    cfg: ClusterConfig,
    side,
    n: int,
    seed: int,
    cache: SampleCache,
    options: Optional[RunOptions] = None,
) -> Optional[Union[EmpiricalCdf, HistogramCdf]]:
    """Cached result of the run run() would do, or None; never simulates."""
    options = options or RunOptions.from_settings()
    sampler = get_sampler(scenario)(cfg, side)
    return cache.get(config_fingerprint(sampler, int(n), seed, options.block_size))


def run(
    scenario: str,
    cfg: ClusterConfig,
    side,
    n: int,
    seed: int,
    options: Optional[RunOptions] = None,
    cache: Optional[SampleCache] = None,
) -> Union[EmpiricalCdf, HistogramCdf]:
    """
    Simulate n SNR samples of a scenario and build their empirical CDF.

    Args:
        scenario: Scenario value ('ckm', 'feedback' or 'selection')
        cfg: Cluster configuration
        side: Side information matching the scenario (ignored for selection)
        n: Number of samples, >= 1
        seed: Master seed
        options: Execution knobs, RunOptions.from_settings() if omitted
        cache: Optional on-disk cache consulted before and filled after the run

    Returns:
        EmpiricalCdf, or HistogramCdf when n exceeds options.max_sorted_samples
    """
    if int(n) != n or n < 1:
        raise DomainError(f'n must be a positive integer, got {n}')
    n = int(n)
    options = options or RunOptions.from_settings()
    sampler = get_sampler(scenario)(cfg, side)
    digest = config_fingerprint(sampler, n, seed, options.block_size)

    if cache is not None:
        cached = cache.get(digest)
        if cached is not None:
            return cached

    started = time.monotonic()
    metadata = {'generator': sampler.describe(), 'block_size': options.block_size}
    if n > options.max_sorted_samples:
        accumulator = HistogramAccumulator(options.histogram_bins, n)
        for block in iter_blocks(sampler, n, seed, options):
            accumulator.add(block)
        result = accumulator.finish(seed, digest, metadata)
    else:
        samples = np.concatenate(list(iter_blocks(sampler, n, seed, options)))
        samples.sort(kind='stable')
        result = EmpiricalCdf(samples, seed, digest, metadata)

    logger.info(
        f'[MonteCarlo] {sampler.scenario} n={n} devices={cfg.active_devices} '
        f'blocks={math.ceil(n / options.block_size)} workers={options.max_workers} '
        f'in {time.monotonic() - started:.2f}s'
    )
    if cache is not None:
        cache.put(result)
    return result
