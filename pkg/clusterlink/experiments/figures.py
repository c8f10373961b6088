"""
Figure definitions.

Each figure is the same flat value set a sweep file would hold, so a sweep
file with equal values reproduces a figure's CSV byte for byte. All figures
use |delta| = 20, a per-device mean SNR of -15 dB, W = 200 kHz and D = 100
bits unless they sweep one of those.
"""

import copy
import logging

from clusterlink.exceptions import InvalidConfiguration

from .pipeline import execute

logger = logging.getLogger('clusterlink.experiments')

OUTAGE_SNR_SWEEP = {'axis': 'mean_snr_db', 'start': -35.0, 'stop': 0.0, 'step': 1.0}
DOR_DELAY_SWEEP = {'axis': 'delay_threshold_s', 'start': 1e-4, 'stop': 1e-3, 'step': 2.5e-5}
WORD_ERROR_PROBS = [0.01, 0.05, 0.1, 0.2]

FIGURES = {
    'fig3': {
        'title': 'Outage probability, location-based phasing, sigma_eps = 20 deg',
        'scenario': 'ckm',
        'metric': 'outage',
        **OUTAGE_SNR_SWEEP,
        'rice_factor_db': [-6.0, -3.0, 0.0, 3.0, 6.0, 9.0],
        'sigma_eps_deg': [20.0],
        'baselines': ['rayleigh', 'selection'],
    },
    'fig4': {
        'title': 'Outage probability, location-based phasing, nu = 6 dB',
        'scenario': 'ckm',
        'metric': 'outage',
        **OUTAGE_SNR_SWEEP,
        'rice_factor_db': [6.0],
        'sigma_eps_deg': [1.0, 10.0, 20.0, 30.0],
    },
    'fig5': {
        'title': 'Delay outage rate, location-based phasing, sigma_eps = 20 deg',
        'scenario': 'ckm',
        'metric': 'dor',
        **DOR_DELAY_SWEEP,
        'rice_factor_db': [0.0, 3.0, 6.0, 9.0],
        'sigma_eps_deg': [20.0],
    },
    'fig6': {
        'title': 'Required devices, location-based phasing, P_dor = 1e-4',
        'scenario': 'ckm',
        'metric': 'devices',
        'axis': 'delay_threshold_s',
        'start': 2.5e-4,
        'stop': 1e-3,
        'step': 5e-5,
        'power_scaling': 'total',
        'rice_factor_db': [0.0, 3.0, 6.0],
        'sigma_eps_deg': [20.0],
        'target_dor': 1e-4,
    },
    'fig7': {
        'title': 'Outage probability, feedback phasing, p_w = 0.05',
        'scenario': 'feedback',
        'metric': 'outage',
        **OUTAGE_SNR_SWEEP,
        'rice_factor_db': [-3.0, 9.0],
        'bits': [1, 2],
        'word_error_prob': [0.05],
        'style_by': 'bits',
        'baselines': ['selection'],
    },
    'fig8': {
        'title': 'Outage probability, feedback phasing, nu = 6 dB, N = 2',
        'scenario': 'feedback',
        'metric': 'outage',
        **OUTAGE_SNR_SWEEP,
        'rice_factor_db': [6.0],
        'bits': [2],
        'word_error_prob': WORD_ERROR_PROBS,
    },
    'fig9': {
        'title': 'Delay outage rate, feedback phasing, nu = 0 dB, N = 2',
        'scenario': 'feedback',
        'metric': 'dor',
        **DOR_DELAY_SWEEP,
        'rice_factor_db': [0.0],
        'bits': [2],
        'word_error_prob': WORD_ERROR_PROBS,
    },
}


def figure_values(figure_id: str) -> dict:
    """Flat experiment values of a figure."""
    if figure_id not in FIGURES:
        raise InvalidConfiguration(
            f'Unknown figure {figure_id!r}; choose from {", ".join(FIGURES)}',
            errors={'figure': [f'unknown figure {figure_id!r}']},
        )
    return copy.deepcopy(FIGURES[figure_id])


def run_figure(figure_id: str, **options):
    """
    Reproduce a figure.

    Args:
        figure_id: Key of FIGURES
        **options: samples, seed, analytic_only, cache_dir, out_dir, max_workers

    Returns:
        tuple: (ExperimentResult, output paths)
    """
    logger.info(f'[Figure] Reproducing {figure_id}')
    return execute(figure_values(figure_id), figure_id, **options)
