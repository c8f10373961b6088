"""
Celery tasks for figure reproductions and sweeps.
"""

from typing import Optional

from celery import shared_task
from celery.utils.log import get_task_logger

from .figures import run_figure
from .sweeps import run_sweep

celery_logger = get_task_logger(__name__)


def _summary(result, paths) -> dict:
    return {
        'name': result.experiment.name,
        'paths': {kind: str(path) for kind, path in paths.items()},
        'simulations': result.simulations,
        'cache_hits': result.cache_hits,
        'searches': result.searches,
        'notes': len(result.notes),
        'duration': round(result.duration, 3),
    }


@shared_task
def run_figure_task(figure_id: str, options: Optional[dict] = None) -> dict:
    """
    Reproduce a figure on a worker.

    Args:
        figure_id: fig3 .. fig9
        options: samples, seed, analytic_only, cache_dir, out_dir, max_workers

    Returns:
        Dict with output paths and run statistics
    """
    celery_logger.info(f'[Figure] Task started for {figure_id}')
    result, paths = run_figure(figure_id, **(options or {}))
    summary = _summary(result, paths)
    celery_logger.info(f'[Figure] {figure_id} finished in {summary["duration"]}s')
    return summary


@shared_task
def run_sweep_task(path: str, options: Optional[dict] = None) -> dict:
    """Run a sweep file on a worker; same return shape as run_figure_task."""
    celery_logger.info(f'[Sweep] Task started for {path}')
    result, paths = run_sweep(path, **(options or {}))
    summary = _summary(result, paths)
    celery_logger.info(f'[Sweep] {path} finished in {summary["duration"]}s')
    return summary
