"""
Verify a solution file against an instance

Usage:
    python manage.py verify --instance inst.txt --solution sol.txt [--format json]

Exit code 0 when feasible and the recorded cost matches, 1 otherwise.
"""

import logging

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework.renderers import JSONRenderer

from formulation.objective import evaluate_objective
from instances.file_io import load_instance
from verification.feasibility import check_feasibility
from verification.serializers import FeasibilityReportSerializer
from verification.solution_io import load_solution

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Checks a solution for feasibility and recomputes its cost'

    def add_arguments(self, parser):
        parser.add_argument('--instance', required=True, help='Instance file')
        parser.add_argument('--solution', required=True, help='Solution file')
        parser.add_argument('--strict', action='store_true', help='Reject rings with fewer than three stops')
        parser.add_argument('--format', choices=('text', 'json'), default='text')

    def handle(self, *args, **options):
        try:
            inst = load_instance(options['instance'])
            sol, recorded = load_solution(options['solution'])
        except ValidationError as exc:
            raise CommandError('; '.join(exc.messages), returncode=2)
        except OSError as exc:
            logger.error(f"[ERROR] Could not read input: {exc}", exc_info=True)
            raise CommandError(str(exc), returncode=2)

        report = check_feasibility(inst, sol, strict_rings=options['strict'])
        report['recorded_cost'] = recorded
        report['cost'] = None
        if report['ok']:
            report['cost'] = evaluate_objective(inst, sol)
            tol = settings.SOLVER_TOLERANCES['comparison']
            if recorded is not None and abs(recorded - report['cost']) > tol * max(1.0, report['cost']):
                report['ok'] = False
                report['violations'].append(f"recorded cost {recorded!r} differs from computed {report['cost']!r}")

        if options['format'] == 'json':
            payload = JSONRenderer().render(FeasibilityReportSerializer(report).data)
            self.stdout.write(payload.decode('utf-8'))
        elif report['ok']:
            self.stdout.write(self.style.SUCCESS(f'✅ Feasible, cost {report["cost"]:.6f}'))
        else:
            for violation in report['violations']:
                self.stdout.write(self.style.ERROR(f'  ✗ {violation}'))

        if not report['ok']:
            raise CommandError(f'{len(report["violations"])} violation(s)', returncode=1)
