"""
Empirical SNR distributions built from simulated samples.

Two representations share one interface (evaluate, count_at_most, quantile):
EmpiricalCdf keeps every sample sorted, HistogramCdf keeps a logarithmic
histogram plus the exact lower tail for runs too large to hold in memory.
"""

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Union

import numpy as np

from clusterlink.exceptions import DomainError
from clusterlink.utils import canonical_json, compute_checksum, verify_checksum

logger = logging.getLogger('clusterlink.montecarlo')

# Cache file layout: MAGIC_BYTES, sha256 of the rest, newline, JSON header,
# newline, little-endian float64 payload
MAGIC_BYTES = b'CLNKCDF1'
CACHE_EXTENSION = '.clcdf'

# Quantile queries below this many expected samples are flagged
MIN_TAIL_SAMPLES = 10

# Fraction of the lower tail HistogramCdf keeps exactly
EXACT_TAIL_FRACTION = 1e-3

# Order statistics compared by EmpiricalCdf.sup_distance
SUP_POINTS = 500


@dataclass(frozen=True)
class QuantileResult:
    """Empirical quantile; low_confidence when p < MIN_TAIL_SAMPLES / n."""

    value: float
    low_confidence: bool = False


class EmpiricalCdf:
    """
    Step CDF of a sorted sample set.

    F(gamma) = (#samples <= gamma) / count.
    """

    def __init__(self, sorted_samples: np.ndarray, seed: int, config_fingerprint: str,
                 metadata: Optional[Dict[str, Any]] = None):
        samples = np.asarray(sorted_samples, dtype='<f8')
        if samples.ndim != 1 or samples.size == 0:
            raise DomainError('EmpiricalCdf needs a non-empty one-dimensional sample array')
        if np.any(samples[1:] < samples[:-1]):
            raise DomainError('Samples must be sorted ascending')
        self.sorted_samples = samples
        self.seed = int(seed)
        self.config_fingerprint = config_fingerprint
        self.metadata = dict(metadata or {})

    def __repr__(self):
        return f'<EmpiricalCdf n={self.count} fingerprint={self.config_fingerprint[:12]}>'

    def __call__(self, gamma: float) -> float:
        return self.evaluate(gamma)

    @property
    def count(self) -> int:
        return int(self.sorted_samples.size)

    def count_at_most(self, gamma: float) -> int:
        return int(np.searchsorted(self.sorted_samples, gamma, side='right'))

    def evaluate(self, gamma: float) -> float:
        if gamma < 0:
            raise DomainError(f'gamma must be >= 0, got {gamma}')
        return self.count_at_most(gamma) / self.count

    def quantile(self, p: float) -> QuantileResult:
        """Smallest sample x with F(x) >= p."""
        if not 0 < p < 1:
            raise DomainError(f'p must be in (0, 1), got {p}')
        index = max(0, math.ceil(p * self.count) - 1)
        return QuantileResult(
            value=float(self.sorted_samples[index]),
            low_confidence=p < MIN_TAIL_SAMPLES / self.count,
        )

    def sup_distance(self, cdf: Callable[[float], float], points: int = SUP_POINTS) -> float:
        """
        Kolmogorov distance to a model CDF.

        The model is evaluated at `points` evenly spaced order statistics and
        compared with the step CDF on both sides of each jump, so the result
        undershoots the full supremum by at most 1 / points.
        """
        index = np.unique(np.linspace(0, self.count - 1, min(points, self.count)).astype(np.int64))
        model = np.array([cdf(float(self.sorted_samples[i])) for i in index])
        below = np.abs(model - index / self.count)
        at = np.abs(model - (index + 1) / self.count)
        return float(max(below.max(), at.max()))

    def digest(self) -> str:
        """sha256 of the sample payload; equal digests mean bit-identical runs."""
        return compute_checksum(self.sorted_samples.tobytes())

    def header(self) -> Dict[str, Any]:
        return {
            'kind': 'sorted',
            'count': self.count,
            'seed': self.seed,
            'config_fingerprint': self.config_fingerprint,
            'metadata': self.metadata,
        }

    def save(self, path: Union[str, Path]) -> Path:
        """Write the cache file; returns the path written."""
        return _write(Path(path), self.header(), self.sorted_samples)

    @classmethod
    def load(cls, path: Union[str, Path]) -> Union['EmpiricalCdf', 'HistogramCdf']:
        """
        Read a cache file written by save().

        Raises:
            DomainError: If the file is not a cache file or fails its checksum
        """
        header, payload = _read(Path(path))
        if header.get('kind') == 'histogram':
            return HistogramCdf.from_payload(header, payload)
        if payload.size != header['count']:
            raise DomainError(f'{path}: header says {header["count"]} samples, payload has {payload.size}')
        return cls(payload, header['seed'], header['config_fingerprint'], header.get('metadata'))


class HistogramCdf:
    """
    Large-run CDF: logarithmic histogram plus the exact smallest samples.

    Below the largest exactly-kept sample the CDF is exact; above it counts
    are interpolated linearly in log SNR within a bin.
    """

    def __init__(self, edges: np.ndarray, counts: np.ndarray, tail: np.ndarray, count: int,
                 seed: int, config_fingerprint: str, metadata: Optional[Dict[str, Any]] = None):
        self.edges = np.asarray(edges, dtype='<f8')
        self.counts = np.asarray(counts, dtype='<f8')
        self.tail = np.sort(np.asarray(tail, dtype='<f8'))
        if self.counts.size != self.edges.size - 1:
            raise DomainError('Histogram needs one more edge than bins')
        if int(self.counts.sum()) != count:
            raise DomainError(f'Histogram holds {int(self.counts.sum())} samples, expected {count}')
        self._count = int(count)
        self._cumulative = np.concatenate(([0.0], np.cumsum(self.counts)))
        self.seed = int(seed)
        self.config_fingerprint = config_fingerprint
        self.metadata = dict(metadata or {})

    def __repr__(self):
        return f'<HistogramCdf n={self.count} bins={self.counts.size}>'

    def __call__(self, gamma: float) -> float:
        return self.evaluate(gamma)

    @property
    def count(self) -> int:
        return self._count

    def count_at_most(self, gamma: float) -> int:
        if self.tail.size and gamma < self.tail[-1]:
            return int(np.searchsorted(self.tail, gamma, side='right'))
        if gamma < self.edges[0]:
            return 0
        if gamma >= self.edges[-1]:
            return self._count
        k = int(np.searchsorted(self.edges, gamma, side='right')) - 1
        lo, hi = math.log(self.edges[k]), math.log(self.edges[k + 1])
        fraction = (math.log(gamma) - lo) / (hi - lo)
        interpolated = int(round(self._cumulative[k] + fraction * self.counts[k]))
        return max(interpolated, int(np.searchsorted(self.tail, gamma, side='right')))

    def evaluate(self, gamma: float) -> float:
        if gamma < 0:
            raise DomainError(f'gamma must be >= 0, got {gamma}')
        return self.count_at_most(gamma) / self._count

    def quantile(self, p: float) -> QuantileResult:
        if not 0 < p < 1:
            raise DomainError(f'p must be in (0, 1), got {p}')
        target = p * self._count
        low_confidence = p < MIN_TAIL_SAMPLES / self._count
        if target <= self.tail.size:
            return QuantileResult(float(self.tail[max(0, math.ceil(target) - 1)]), low_confidence)
        k = int(np.searchsorted(self._cumulative, target, side='left')) - 1
        k = min(max(k, 0), self.counts.size - 1)
        inside = (target - self._cumulative[k]) / self.counts[k] if self.counts[k] else 0.0
        lo, hi = math.log(self.edges[k]), math.log(self.edges[k + 1])
        return QuantileResult(math.exp(lo + inside * (hi - lo)), low_confidence)

    def digest(self) -> str:
        return compute_checksum(self.edges.tobytes() + self.counts.tobytes() + self.tail.tobytes())

    def header(self) -> Dict[str, Any]:
        return {
            'kind': 'histogram',
            'count': self._count,
            'bins': int(self.counts.size),
            'tail': int(self.tail.size),
            'seed': self.seed,
            'config_fingerprint': self.config_fingerprint,
            'metadata': self.metadata,
        }

    def save(self, path: Union[str, Path]) -> Path:
        payload = np.concatenate((self.edges, self.counts, self.tail))
        return _write(Path(path), self.header(), payload)

    @classmethod
    def from_payload(cls, header: Dict[str, Any], payload: np.ndarray) -> 'HistogramCdf':
        bins, tail = header['bins'], header['tail']
        if payload.size != 2 * bins + 1 + tail:
            raise DomainError('Histogram payload size does not match its header')
        return cls(
            edges=payload[:bins + 1],
            counts=payload[bins + 1:2 * bins + 1],
            tail=payload[2 * bins + 1:],
            count=header['count'],
            seed=header['seed'],
            config_fingerprint=header['config_fingerprint'],
            metadata=header.get('metadata'),
        )


class HistogramAccumulator:
    """
    Streams sample blocks into a HistogramCdf.

    The bin range is fixed from the first block (six decades either side of
    its extremes); samples outside land in the edge bins. The smallest
    ceil(EXACT_TAIL_FRACTION * expected) samples are kept exactly.
    """

    RANGE_DECADES = 6.0

    def __init__(self, bins: int, expected: int):
        if bins < 1:
            raise DomainError(f'bins must be >= 1, got {bins}')
        self.bins = bins
        self.tail_size = max(1, math.ceil(EXACT_TAIL_FRACTION * expected))
        self.edges = None
        self.counts = np.zeros(bins)
        self.tail = np.empty(0)
        self.seen = 0

    def add(self, block: np.ndarray):
        if self.edges is None:
            positive = block[block > 0]
            low = positive.min() if positive.size else 1e-300
            self.edges = np.logspace(
                math.log10(low) - self.RANGE_DECADES,
                math.log10(max(block.max(), low)) + self.RANGE_DECADES,
                self.bins + 1,
            )
        clipped = np.clip(block, self.edges[0], np.nextafter(self.edges[-1], 0))
        counts, _ = np.histogram(clipped, bins=self.edges)
        self.counts += counts
        merged = np.concatenate((self.tail, block))
        if merged.size > self.tail_size:
            merged = np.partition(merged, self.tail_size - 1)[:self.tail_size]
        self.tail = np.sort(merged)
        self.seen += block.size

    def finish(self, seed: int, config_fingerprint: str, metadata: Optional[Dict[str, Any]] = None) -> HistogramCdf:
        return HistogramCdf(self.edges, self.counts, self.tail, self.seen, seed, config_fingerprint, metadata)


def _write(path: Path, header: Dict[str, Any], payload: np.ndarray) -> Path:
    body = (
        canonical_json(header).encode('utf-8')
        + b'\n'
        + np.asarray(payload, dtype='<f8').tobytes()
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + '.tmp')
    tmp.write_bytes(MAGIC_BYTES + compute_checksum(body).encode('ascii') + b'\n' + body)
    tmp.replace(path)
    logger.debug(f'[Cache] Wrote {path} ({header["count"]} samples)')
    return path


def _read(path: Path):
    data = path.read_bytes()
    if not data.startswith(MAGIC_BYTES):
        raise DomainError(f'{path} is not a ClusterLink CDF cache file')
    checksum_end = data.index(b'\n', len(MAGIC_BYTES))
    stored = data[len(MAGIC_BYTES):checksum_end].decode('ascii')
    body = data[checksum_end + 1:]
    if not verify_checksum(body, stored):
        raise DomainError(f'{path} is corrupted (checksum mismatch)')
    header_end = body.index(b'\n')
    header = json.loads(body[:header_end].decode('utf-8'))
    payload = np.frombuffer(body[header_end + 1:], dtype='<f8')
    return header, payload
