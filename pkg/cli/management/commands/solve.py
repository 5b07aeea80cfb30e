"""
Solve one instance

Usage:
    python manage.py solve --method bnc --in inst.txt --time-limit 600 --out sol.txt
    python manage.py solve --method gtsp --in inst.txt --seed 3 --format json

Exit code 1 when no verified solution is found.
"""

import logging

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework.renderers import JSONRenderer

from bnc.serializers import SolveReportSerializer
from cli.runners import METHOD_BNC, METHOD_GTSP, METHODS, run_method
from gtsp.serializers import HeuristicReportSerializer
from instances.file_io import load_instance
from lp.backends import available_backends
from verification.serializers import SolutionSerializer
from verification.solution_io import save_solution

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Solves an instance by branch-and-cut, the GTSP heuristic or enumeration'

    def add_arguments(self, parser):
        parser.add_argument('--method', choices=METHODS, default=METHOD_BNC)
        parser.add_argument('--in', dest='input', required=True, help='Instance file')
        parser.add_argument('--time-limit', type=float, default=None, help='Seconds (bnc tree or LNS)')
        parser.add_argument('--out', default=None, help='Solution file to write')
        parser.add_argument('--seed', type=int, default=None, help='LNS seed')
        parser.add_argument('--iterations', type=int, default=None, help='LNS iterations')
        parser.add_argument('--backend', choices=available_backends(), default=None, help='LP backend for bnc')
        parser.add_argument('--workers', type=int, default=None, help='Tree workers for bnc')
        parser.add_argument('--format', choices=('text', 'json'), default='text')

    def handle(self, *args, **options):
        if options['time_limit'] is not None and options['time_limit'] <= 0:
            raise CommandError('--time-limit must be positive', returncode=2)
        try:
            inst = load_instance(options['input'])
        except ValidationError as exc:
            raise CommandError('; '.join(exc.messages), returncode=2)
        except OSError as exc:
            logger.error(f"[ERROR] Could not read {options['input']}: {exc}", exc_info=True)
            raise CommandError(str(exc), returncode=2)

        method = options['method']
        try:
            run = run_method(inst, method, time_limit=options['time_limit'], seed=options['seed'],
                             iterations=options['iterations'], backend=options['backend'],
                             workers=options['workers'])
        except ValidationError as exc:
            logger.error(f"[ERROR] {method} failed on {inst!r}: {exc.messages}", exc_info=True)
            raise CommandError('; '.join(exc.messages), returncode=1)

        if options['format'] == 'json':
            if method == METHOD_BNC:
                data = SolveReportSerializer(run.detail).data
            elif method == METHOD_GTSP:
                data = HeuristicReportSerializer(run.detail).data
            else:
                data = {'status': run.status, 'cost': run.cost,
                        'solution': SolutionSerializer(run.solution).data}
            data = dict(data)
            data['verified'] = run.solution is not None
            self.stdout.write(JSONRenderer().render(data).decode('utf-8'))
        else:
            self.stdout.write(f'Method: {method}   status: {run.status}   time: {run.seconds:.2f}s')
            if run.bound is not None:
                self.stdout.write(f'Bound: {run.bound:.6f}   nodes: {run.nodes}   cuts: {run.cuts}')
            if run.solution is not None:
                self.stdout.write(self.style.SUCCESS(f'✅ Cost {run.cost:.6f}   GV ring {run.solution.gv_ring}'))

        if run.solution is None:
            raise CommandError(f'{method} found no verified solution (status {run.status})', returncode=1)
        if options['out']:
            try:
                save_solution(run.solution, run.cost, options['out'])
            except OSError as exc:
                logger.error(f"[ERROR] Could not write {options['out']}: {exc}", exc_info=True)
                raise CommandError(str(exc), returncode=1)
            if options['format'] == 'text':
                self.stdout.write(f'  ✓ Solution written to {options["out"]}')
