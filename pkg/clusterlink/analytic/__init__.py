"""
Closed-form SNR distributions for both phasing schemes and the baselines.

Use the modules directly:

    from clusterlink.analytic import ckm, feedback, baselines
"""

from . import baselines, ckm, feedback

__all__ = ['baselines', 'ckm', 'feedback']
