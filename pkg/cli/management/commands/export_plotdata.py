"""
Turn a bench report into plot-ready CSV files

Usage:
    python manage.py export_plotdata --report report.csv --out plots/
"""

import logging

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from cli.reports import export_plotdata, read_report

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Exports runtime box-plot, cost scatter, runtime histogram, cut count and gap summary CSVs'

    def add_arguments(self, parser):
        parser.add_argument('--report', required=True, help='Bench report CSV')
        parser.add_argument('--out', required=True, help='Output directory')

    def handle(self, *args, **options):
        try:
            frame = read_report(options['report'])
        except ValidationError as exc:
            raise CommandError('; '.join(exc.messages), returncode=2)
        except OSError as exc:
            logger.error(f"[ERROR] Could not read {options['report']}: {exc}", exc_info=True)
            raise CommandError(str(exc), returncode=2)

        try:
            paths = export_plotdata(frame, options['out'])
        except OSError as exc:
            logger.error(f"[ERROR] Could not write plot data: {exc}", exc_info=True)
            raise CommandError(str(exc), returncode=1)
        for path in paths:
            self.stdout.write(f'  ✓ {path}')
        self.stdout.write(self.style.SUCCESS(f'✅ Exported {len(paths)} file(s) to {options["out"]}'))
