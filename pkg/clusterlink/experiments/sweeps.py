"""
Sweep files.

A sweep file is INI text with an [experiment] section holding the flat
experiment values and a [sweep] section holding the axis and its range:

    [experiment]
    scenario = ckm
    metric = dor
    rice_factor_db = 0, 3, 6, 9

    [sweep]
    axis = delay_threshold_s
    start = 1e-4
    stop = 1e-3
    step = 2.5e-5

Angles are in degrees, powers and ratios in dB.
"""

import configparser
import logging
from pathlib import Path
from typing import Union

from clusterlink.exceptions import InvalidConfiguration

from .forms import ExperimentConfigForm
from .pipeline import execute

logger = logging.getLogger('clusterlink.experiments')

EXPERIMENT_SECTION = 'experiment'
SWEEP_SECTION = 'sweep'
SWEEP_KEYS = ('axis', 'start', 'stop', 'step')


def _invalid(key: str, message: str) -> InvalidConfiguration:
    return InvalidConfiguration(f'{key}: {message}', errors={key: [message]})


def load_sweep(path: Union[str, Path]) -> dict:
    """
    Parse a sweep file into flat experiment values.

    Raises:
        InvalidConfiguration: Unreadable file, unknown section or key,
            missing sweep key
    """
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding='utf-8') as f:
            parser.read_file(f)
    except OSError as e:
        raise InvalidConfiguration(f'Cannot read sweep file {path}: {e}')
    except configparser.Error as e:
        raise InvalidConfiguration(f'Malformed sweep file {path}: {e}')

    for section in parser.sections():
        if section not in (EXPERIMENT_SECTION, SWEEP_SECTION):
            raise _invalid(section, f'unknown section [{section}]')
    if not parser.has_section(SWEEP_SECTION):
        raise _invalid(SWEEP_SECTION, f'missing [{SWEEP_SECTION}] section')

    values = {}
    known = set(ExperimentConfigForm.base_fields) - set(SWEEP_KEYS)
    if parser.has_section(EXPERIMENT_SECTION):
        section = parser[EXPERIMENT_SECTION]
        for key in section:
            if key not in known:
                raise _invalid(key, f'unknown key in [{EXPERIMENT_SECTION}]')
            if key == 'analytic_only':
                try:
                    values[key] = section.getboolean(key)
                except ValueError:
                    raise _invalid(key, f'expected a boolean, got {section[key]!r}')
            else:
                values[key] = section[key]

    sweep = parser[SWEEP_SECTION]
    for key in sweep:
        if key not in SWEEP_KEYS:
            raise _invalid(key, f'unknown key in [{SWEEP_SECTION}]; expected {", ".join(SWEEP_KEYS)}')
    for key in SWEEP_KEYS:
        if key not in sweep:
            raise _invalid(key, f'missing from [{SWEEP_SECTION}]')
        values[key] = sweep[key]

    logger.debug(f'[Sweep] Loaded {path}: {values}')
    return values


def run_sweep(path: Union[str, Path], **options):
    """
    Run the experiment a sweep file describes.

    Outputs are named after the file's stem unless it sets a name.
    """
    path = Path(path)
    logger.info(f'[Sweep] Running {path}')
    return execute(load_sweep(path), path.stem, **options)
