"""
Management command to reproduce a figure.

Usage:
    python manage.py figure fig5
    python manage.py figure fig3 --samples 100000 --seed 7
    python manage.py figure fig6 --analytic-only --out-dir /tmp/figures
"""

from clusterlink.experiments.figures import FIGURES, run_figure
from clusterlink.experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Reproduce a figure as CSV, SVG and metadata JSON'

    def add_arguments(self, parser):
        parser.add_argument(
            'figure',
            help=f'Figure to reproduce: {", ".join(FIGURES)}',
        )
        super().add_arguments(parser)

    def handle(self, *args, **options):
        self.execute_experiment(run_figure, options['figure'], options)
