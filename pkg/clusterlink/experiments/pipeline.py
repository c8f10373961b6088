"""
Validate, run and write an experiment; shared by figures, sweeps, the
management commands and the Celery tasks.
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from django.conf import settings

from clusterlink.exceptions import InvalidConfiguration
from clusterlink.montecarlo import RunOptions, SampleCache

from .forms import ExperimentConfigForm
from .output import write_outputs
from .runner import Experiment, ExperimentResult, run_experiment

logger = logging.getLogger('clusterlink.experiments')


def build_experiment(values: dict, name: str = '') -> Experiment:
    """
    Validate flat experiment values.

    Raises:
        InvalidConfiguration: Naming every offending key
    """
    form = ExperimentConfigForm(data=values)
    if not form.is_valid():
        raise InvalidConfiguration(
            f'Invalid experiment {name or "configuration"}: {form.error_summary()}',
            errors={key: [str(e) for e in errors] for key, errors in form.errors.items()},
        )
    return form.to_experiment(name)


def execute(
    values: dict,
    name: str,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    analytic_only: bool = False,
    cache_dir: Union[str, Path, None] = None,
    out_dir: Union[str, Path, None] = None,
    max_workers: Optional[int] = None,
) -> Tuple[ExperimentResult, Dict[str, Path]]:
    """
    Run an experiment and write its CSV, SVG and metadata.

    Command-line options override the values; analytic_only=False leaves a
    configured analytic_only untouched.

    Returns:
        tuple: (ExperimentResult, {'csv': path, 'svg': path, 'metadata': path})
    """
    overrides = {'samples': samples, 'seed': seed, 'analytic_only': True if analytic_only else None}
    experiment = build_experiment({**values, **{k: v for k, v in overrides.items() if v is not None}}, name)
    cache = SampleCache(cache_dir)
    options = RunOptions.from_settings(max_workers=max_workers)

    result = run_experiment(experiment, cache=cache, options=options)
    paths = write_outputs(result, out_dir or getattr(settings, 'CLUSTERLINK_OUTPUT_DIR', Path('output')))
    return result, paths
