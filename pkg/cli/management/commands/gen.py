"""
Generate an instance corpus

Usage:
    python manage.py gen --class A --n 20 --alpha 0.1 --count 20 --out corpus/
    python manage.py gen --class A --n 8 --alpha 0.1 --out corpus/ --export-gtsp --export-lp

The exports are written next to each instance: <stem>.gtsp holds the
transformed graph, <stem>.lp the model without generated cuts.
"""

import logging

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from formulation.lp_export import export_lp
from formulation.model_builder import build_model
from instances.file_io import load_instance
from instances.generators import GENERATED_CLASSES, generate_corpus
from transform.configurations import build_transformed_graph
from transform.gtsp_format import save_gtsp

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Writes random CAGVRP instances with consecutive seeds'

    def add_arguments(self, parser):
        parser.add_argument('--class', dest='class_tag', choices=GENERATED_CLASSES, required=True,
                            help='A uniform, B clustered, C uniform large')
        parser.add_argument('--n', type=int, required=True, help='Targets including the base')
        parser.add_argument('--alpha', type=float, required=True, help='UAV cost scale')
        parser.add_argument('--seed', type=int, default=0, help='First seed')
        parser.add_argument('--count', type=int, default=1, help='Number of instances')
        parser.add_argument('--out', required=True, help='Output directory')
        parser.add_argument('--export-gtsp', action='store_true', help='Also write the transformed graph')
        parser.add_argument('--export-lp', action='store_true', help='Also write the model in LP format')

    def handle(self, *args, **options):
        if options['count'] < 1:
            raise CommandError('--count must be at least 1', returncode=2)
        try:
            paths = generate_corpus(options['class_tag'], options['n'], options['alpha'],
                                    options['seed'], options['count'], options['out'])
            exports = self._export(paths, options['export_gtsp'], options['export_lp'])
        except ValidationError as exc:
            raise CommandError('; '.join(exc.messages), returncode=2)
        except OSError as exc:
            logger.error(f"[ERROR] Could not write corpus: {exc}", exc_info=True)
            raise CommandError(str(exc), returncode=1)

        for path in paths + exports:
            self.stdout.write(f'  ✓ {path}')
        self.stdout.write(self.style.SUCCESS(f'✅ Generated {len(paths)} instance(s) in {options["out"]}'))

    def _export(self, paths, gtsp, lp):
        written = []
        if not (gtsp or lp):
            return written
        for path in paths:
            inst = load_instance(path)
            if gtsp:
                target = path.with_suffix('.gtsp')
                save_gtsp(build_transformed_graph(inst), target)
                written.append(target)
            if lp:
                target = path.with_suffix('.lp')
                export_lp(build_model(inst), target)
                written.append(target)
        return written
