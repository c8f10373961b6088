"""
Outage probability, delay outage rate, thresholds and quantiles.
"""

from .indicators import (
    DorResult,
    SnrCdf,
    binomial_interval,
    dor,
    evaluate_dor,
    outage_probability,
    quantile,
)
from .service import (
    ServiceSpec,
    db_to_linear,
    deg_to_rad,
    dor_threshold,
    linear_to_db,
    outage_threshold,
)

__all__ = [
    'DorResult',
    'ServiceSpec',
    'SnrCdf',
    'binomial_interval',
    'db_to_linear',
    'deg_to_rad',
    'dor',
    'dor_threshold',
    'evaluate_dor',
    'linear_to_db',
    'outage_probability',
    'outage_threshold',
    'quantile',
]
