"""
Management command to run a parameter sweep file.

Usage:
    python manage.py sweep sweeps/dor_rice.ini
    python manage.py sweep sweeps/dor_rice.ini --analytic-only
"""

from clusterlink.experiments.management.base import ExperimentCommand
from clusterlink.experiments.sweeps import run_sweep


class Command(ExperimentCommand):
    help = 'Run the experiment described by an INI sweep file'

    def add_arguments(self, parser):
        parser.add_argument(
            'config',
            help='Path to the sweep file',
        )
        super().add_arguments(parser)

    def handle(self, *args, **options):
        self.execute_experiment(run_sweep, options['config'], options)
