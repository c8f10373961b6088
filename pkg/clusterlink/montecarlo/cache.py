"""
On-disk reuse of expensive Monte Carlo runs, keyed by config fingerprint.
"""

import logging
from pathlib import Path
from typing import Optional, Union

from django.conf import settings

from clusterlink.exceptions import DomainError

from .empirical import CACHE_EXTENSION, EmpiricalCdf, HistogramCdf

logger = logging.getLogger('clusterlink.montecarlo')


class SampleCache:
    """Directory of cache files named <fingerprint>.clcdf."""

    def __init__(self, directory: Union[str, Path, None] = None):
        if directory is None:
            directory = getattr(settings, 'CLUSTERLINK_CACHE_DIR', Path('cache'))
        self.directory = Path(directory)

    def __repr__(self):
        return f'<SampleCache {self.directory}>'

    def path_for(self, config_fingerprint: str) -> Path:
        return self.directory / f'{config_fingerprint}{CACHE_EXTENSION}'

    def get(self, config_fingerprint: str) -> Optional[Union[EmpiricalCdf, HistogramCdf]]:
        """Cached result, or None on a miss or an unreadable file."""
        path = self.path_for(config_fingerprint)
        if not path.exists():
            logger.debug(f'[Cache] Miss {config_fingerprint[:12]}')
            return None
        try:
            result = EmpiricalCdf.load(path)
        except (DomainError, ValueError, KeyError, OSError) as e:
            logger.warning(f'[Cache] Ignoring unreadable cache file {path}: {e}')
            return None
        if result.config_fingerprint != config_fingerprint:
            logger.warning(f'[Cache] {path} holds fingerprint {result.config_fingerprint[:12]}, ignoring')
            return None
        logger.info(f'[Cache] Hit {config_fingerprint[:12]} ({result.count} samples)')
        return result

    def put(self, result: Union[EmpiricalCdf, HistogramCdf]) -> Path:
        return result.save(self.path_for(result.config_fingerprint))
