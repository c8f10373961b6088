"""
Shared plumbing for the figure and sweep management commands.
"""

from django.core.management.base import BaseCommand, CommandError

from clusterlink.exceptions import InvalidConfiguration, NumericFailure

# Exit codes
VALIDATION_ERROR = 2
NUMERIC_FAILURE = 3


class ExperimentCommand(BaseCommand):
    """Adds the run options every experiment command takes and maps failures to exit codes."""

    def add_arguments(self, parser):
        parser.add_argument(
            '--samples',
            type=int,
            help='Monte Carlo samples per run (default: CLUSTERLINK_OUTAGE_SAMPLES or CLUSTERLINK_DOR_SAMPLES)',
        )
        parser.add_argument(
            '--seed',
            type=int,
            help='Master seed (default: CLUSTERLINK_SEED)',
        )
        parser.add_argument(
            '--analytic-only',
            action='store_true',
            help='Skip simulations; simulated columns are filled from the cache only',
        )
        parser.add_argument(
            '--cache-dir',
            help='Sample cache directory (default: CLUSTERLINK_CACHE_DIR)',
        )
        parser.add_argument(
            '--out-dir',
            help='Output directory (default: CLUSTERLINK_OUTPUT_DIR)',
        )
        parser.add_argument(
            '--workers',
            type=int,
            help='Worker threads for Monte Carlo blocks (default: CLUSTERLINK_MAX_WORKERS)',
        )

    def run_options(self, options) -> dict:
        return {
            'samples': options.get('samples'),
            'seed': options.get('seed'),
            'analytic_only': options.get('analytic_only', False),
            'cache_dir': options.get('cache_dir'),
            'out_dir': options.get('out_dir'),
            'max_workers': options.get('workers'),
        }

    def execute_experiment(self, func, target, options):
        """Call func(target, **run options) and report the outputs."""
        try:
            result, paths = func(target, **self.run_options(options))
        except NumericFailure as e:
            raise CommandError(f'Numeric failure: {e}', returncode=NUMERIC_FAILURE)
        except (InvalidConfiguration, ValueError) as e:
            raise CommandError(str(e), returncode=VALIDATION_ERROR)

        for kind, path in paths.items():
            self.stdout.write(f'  {kind}: {path}')
        for note in result.notes:
            if note['kind'] in ('uncertain', 'infeasible'):
                self.stdout.write(self.style.WARNING(f'  {note}'))
        self.stdout.write(self.style.SUCCESS(
            f'{result.experiment.name}: {len(result.curves)} curves x {len(result.experiment.axis_values)} points '
            f'({result.simulations} simulations, {result.cache_hits} cache hits) in {result.duration:.1f}s'
        ))
        return result
