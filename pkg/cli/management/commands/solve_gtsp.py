"""
Solve a transformed graph written by `gen --export-gtsp`

Usage:
    python manage.py solve_gtsp --in corpus/A_n8_a0.1_s0.gtsp --seed 3
    python manage.py solve_gtsp --in g.gtsp --solver exact --instance inst.txt --out sol.txt

With --instance the tour is mapped back to a CAGVRP solution and verified
against that instance. Exit code 2 for unreadable or mismatched input,
1 when no verified tour is found.
"""

import logging

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework.renderers import JSONRenderer

from gtsp.exact import solve_gtsp_exact_small
from gtsp.lns import solve_gtsp_lns
from gtsp.pipeline import map_and_verify
from gtsp.serializers import GtspResultSerializer
from instances.file_io import load_instance
from transform.gtsp_format import load_gtsp
from verification.serializers import SolutionSerializer
from verification.solution_io import save_solution

logger = logging.getLogger(__name__)

SOLVER_LNS = 'lns'
SOLVER_EXACT = 'exact'


class Command(BaseCommand):
    help = 'Solves a GTSP text file by LNS or exact search'

    def add_arguments(self, parser):
        parser.add_argument('--in', dest='input', required=True, help='GTSP file')
        parser.add_argument('--solver', choices=(SOLVER_LNS, SOLVER_EXACT), default=SOLVER_LNS)
        parser.add_argument('--seed', type=int, default=None, help='LNS seed')
        parser.add_argument('--iterations', type=int, default=None, help='LNS iterations')
        parser.add_argument('--time-limit', type=float, default=None, help='LNS seconds')
        parser.add_argument('--instance', default=None, help='Instance the graph was built from')
        parser.add_argument('--out', default=None, help='Solution file to write, needs --instance')
        parser.add_argument('--format', choices=('text', 'json'), default='text')

    def handle(self, *args, **options):
        if options['out'] and not options['instance']:
            raise CommandError('--out needs --instance to map the tour back', returncode=2)
        graph, inst = self._load(options)

        try:
            if options['solver'] == SOLVER_EXACT:
                result = solve_gtsp_exact_small(graph)
            else:
                result = solve_gtsp_lns(graph, iterations=options['iterations'], seed=options['seed'],
                                        time_limit=options['time_limit'])
            solution = cost = None
            if inst is not None:
                solution, cost = map_and_verify(inst, graph, result.tour, result.cost)
        except ValidationError as exc:
            logger.error(f"[ERROR] GTSP solve of {options['input']} failed: {exc.messages}", exc_info=True)
            raise CommandError('; '.join(exc.messages), returncode=1)

        if options['format'] == 'json':
            data = dict(GtspResultSerializer(result).data)
            if solution is not None:
                data['solution'] = SolutionSerializer(solution).data
                data['verified'] = True
            self.stdout.write(JSONRenderer().render(data).decode('utf-8'))
        else:
            self.stdout.write(f'Solver: {options["solver"]}   sets: {graph.set_count}   '
                              f'vertices: {len(graph.vertices)}   time: {result.wall_time:.2f}s')
            self.stdout.write(' -> '.join(str(v) for v in result.tour))
            self.stdout.write(self.style.SUCCESS(f'✅ Tour cost {result.cost:.6f}'))
            if solution is not None:
                self.stdout.write(f'  ✓ Verified on {options["instance"]}: GV ring {solution.gv_ring}')

        if options['out']:
            try:
                save_solution(solution, cost, options['out'])
            except OSError as exc:
                logger.error(f"[ERROR] Could not write {options['out']}: {exc}", exc_info=True)
                raise CommandError(str(exc), returncode=1)
            if options['format'] == 'text':
                self.stdout.write(f'  ✓ Solution written to {options["out"]}')

    def _load(self, options):
        try:
            graph = load_gtsp(options['input'])
            inst = load_instance(options['instance']) if options['instance'] else None
        except ValidationError as exc:
            raise CommandError('; '.join(exc.messages), returncode=2)
        except OSError as exc:
            logger.error(f"[ERROR] Could not read input: {exc}", exc_info=True)
            raise CommandError(str(exc), returncode=2)
        if inst is not None and graph.set_count != inst.n:
            raise CommandError(f'graph has {graph.set_count} sets but the instance has {inst.n} targets',
                               returncode=2)
        return graph, inst
