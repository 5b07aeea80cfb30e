"""
Run solvers over an instance directory and write the bench report

Usage:
    python manage.py bench --dir corpus/ --methods bnc gtsp --out report.csv
    python manage.py bench --dir corpus/ --methods bnc oracle --jobs 4 --summary summary.csv

Report columns: instance, method, cost, bound, gap%, nodes, cuts, seconds,
class, n, alpha, status. gap% is taken against the best proven optimum of
the instance and left empty when no method proved one.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from cli.reports import bench_rows, summarize, write_report
from cli.runners import METHOD_BNC, METHOD_GTSP, METHODS, run_method
from instances.file_io import load_instance

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Benchmarks solvers over a directory of instance files'

    def add_arguments(self, parser):
        parser.add_argument('--dir', required=True, help='Directory of *.txt instance files')
        parser.add_argument('--methods', nargs='+', choices=METHODS, default=[METHOD_BNC, METHOD_GTSP])
        parser.add_argument('--out', required=True, help='Report CSV')
        parser.add_argument('--summary', default=None, help='Optional gap/runtime summary CSV')
        parser.add_argument('--time-limit', type=float, default=None, help='Seconds per solve')
        parser.add_argument('--seed', type=int, default=None, help='LNS seed')
        parser.add_argument('--iterations', type=int, default=None, help='LNS iterations')
        parser.add_argument('--backend', default=None, help='LP backend for bnc')
        parser.add_argument('--jobs', type=int, default=1, help='Instances solved in parallel')

    def handle(self, *args, **options):
        directory = Path(options['dir'])
        if not directory.is_dir():
            raise CommandError(f'{directory} is not a directory', returncode=2)
        if options['jobs'] < 1:
            raise CommandError('--jobs must be at least 1', returncode=2)
        files = sorted(directory.glob('*.txt'))
        if not files:
            raise CommandError(f'no *.txt instances in {directory}', returncode=2)

        self.stdout.write(self.style.HTTP_INFO(f'📋 Benchmarking {len(files)} instance(s) with {options["methods"]}'))

        def bench_one(path):
            inst = load_instance(path)
            runs = [
                run_method(inst, method, time_limit=options['time_limit'], seed=options['seed'],
                           iterations=options['iterations'], backend=options['backend'])
                for method in options['methods']
            ]
            return bench_rows(path.stem, inst, runs)

        try:
            if options['jobs'] == 1:
                results = [bench_one(path) for path in files]
            else:
                with ThreadPoolExecutor(max_workers=options['jobs']) as pool:
                    results = list(pool.map(bench_one, files))
        except ValidationError as exc:
            logger.error(f"[ERROR] Bench aborted: {exc.messages}", exc_info=True)
            raise CommandError('; '.join(exc.messages), returncode=1)
        except OSError as exc:
            logger.error(f"[ERROR] Bench aborted: {exc}", exc_info=True)
            raise CommandError(str(exc), returncode=1)

        rows = [row for instance_rows in results for row in instance_rows]
        for row in rows:
            gap = '' if row['gap_pct'] is None else f'  gap {row["gap_pct"]:.3f}%'
            cost = 'n/a' if row['cost'] is None else f'{row["cost"]:.4f}'
            self.stdout.write(f'  {row["instance"]:<28} {row["method"]:<7} {row["status"]:<11} {cost}{gap}')

        frame = write_report(rows, options['out'])
        if options['summary']:
            summarize(frame).to_csv(options['summary'], index=False)
            self.stdout.write(f'  ✓ Summary written to {options["summary"]}')

        failed = frame[frame['status'] == 'failed']
        if len(failed):
            raise CommandError(f'{len(failed)} run(s) failed verification, see {options["out"]}', returncode=1)
        self.stdout.write(self.style.SUCCESS(f'✅ Report with {len(frame)} rows written to {options["out"]}'))
