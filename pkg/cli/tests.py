import json
import tempfile
from io import StringIO
from pathlib import Path

import pandas as pd
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from instances.file_io import load_instance, save_instance
from instances.fixtures import TINY4_OPTIMUM, five_targets, tiny4
from transform.configurations import build_transformed_graph
from transform.gtsp_format import dumps_gtsp, load_gtsp, save_gtsp
from verification.solution_io import load_solution

from .reports import bench_rows, gap_percent, reference_cost, rows_to_frame, summarize
from .runners import METHOD_BNC, METHOD_GTSP, METHOD_ORACLE, STATUS_HEURISTIC, MethodRun, run_method
from .serializers import BENCH_COLUMNS


def run(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


class CliTestCase(SimpleTestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self.instance_path = self.tmp / 'tiny4.txt'
        save_instance(tiny4(), self.instance_path)

    def tearDown(self):
        self._tmp.cleanup()


class GenCommandTests(CliTestCase):

    def test_writes_corpus(self):
        out_dir = self.tmp / 'corpus'
        run('gen', '--class', 'A', '--n', '6', '--alpha', '0.1', '--seed', '4', '--count', '3', '--out', str(out_dir))
        names = sorted(p.name for p in out_dir.glob('*.txt'))
        self.assertEqual(names, ['A_n6_a0.1_s4.txt', 'A_n6_a0.1_s5.txt', 'A_n6_a0.1_s6.txt'])

    def test_bad_count(self):
        with self.assertRaises(CommandError) as ctx:
            run('gen', '--class', 'A', '--n', '6', '--alpha', '0.1', '--count', '0', '--out', str(self.tmp))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_exports_next_to_instances(self):
        out_dir = self.tmp / 'corpus'
        run('gen', '--class', 'A', '--n', '5', '--alpha', '0.3', '--seed', '2', '--out', str(out_dir),
            '--export-gtsp', '--export-lp')
        self.assertEqual(sorted(p.name for p in out_dir.iterdir()),
                         ['A_n5_a0.3_s2.gtsp', 'A_n5_a0.3_s2.lp', 'A_n5_a0.3_s2.txt'])
        inst = load_instance(out_dir / 'A_n5_a0.3_s2.txt')
        graph = load_gtsp(out_dir / 'A_n5_a0.3_s2.gtsp')
        self.assertEqual(graph.set_count, inst.n)
        self.assertEqual(graph.edges, build_transformed_graph(inst).edges)
        lp_text = (out_dir / 'A_n5_a0.3_s2.lp').read_text(encoding='utf-8')
        self.assertEqual(lp_text.splitlines()[1], 'Minimize')
        self.assertTrue(lp_text.rstrip().endswith('End'))


class SolveAndVerifyCommandTests(CliTestCase):

    def test_bnc_then_verify(self):
        solution_path = self.tmp / 'sol.txt'
        output = run('solve', '--method', 'bnc', '--in', str(self.instance_path), '--out', str(solution_path))
        self.assertIn('optimal', output)
        sol, cost = load_solution(solution_path)
        self.assertAlmostEqual(cost, TINY4_OPTIMUM, delta=1e-6)
        self.assertIn('Feasible', run('verify', '--instance', str(self.instance_path),
                                      '--solution', str(solution_path)))

    def test_gtsp_json(self):
        output = run('solve', '--method', 'gtsp', '--in', str(self.instance_path), '--iterations', '100',
                     '--seed', '1', '--format', 'json')
        payload = json.loads(output)
        self.assertTrue(payload['verified'])
        self.assertAlmostEqual(payload['cost'], TINY4_OPTIMUM, delta=1e-6)
        self.assertEqual(payload['tour'][0], 'C(0,0)')

    def test_oracle_json(self):
        payload = json.loads(run('solve', '--method', 'oracle', '--in', str(self.instance_path), '--format', 'json'))
        self.assertEqual(payload['status'], 'optimal')
        self.assertEqual(payload['solution']['gv_ring'], [0, 1])

    def test_verify_rejects_wrong_cost(self):
        solution_path = self.tmp / 'sol.txt'
        solution_path.write_text('GVRING 0 1 2 3\nASSIGN 0 0\nASSIGN 1 1\nASSIGN 2 2\nASSIGN 3 3\nCOST 1.0\n',
                                 encoding='utf-8')
        with self.assertRaises(CommandError) as ctx:
            run('verify', '--instance', str(self.instance_path), '--solution', str(solution_path))
        self.assertEqual(ctx.exception.returncode, 1)

    def test_verify_reports_violations_as_json(self):
        solution_path = self.tmp / 'sol.txt'
        solution_path.write_text('GVRING 0 1\nASSIGN 0 0\nASSIGN 1 1\n', encoding='utf-8')
        out = StringIO()
        with self.assertRaises(CommandError):
            call_command('verify', '--instance', str(self.instance_path), '--solution', str(solution_path),
                         '--format', 'json', stdout=out)
        payload = json.loads(out.getvalue())
        self.assertFalse(payload['ok'])
        self.assertTrue(payload['violations'])

    def test_missing_input(self):
        with self.assertRaises(CommandError) as ctx:
            run('solve', '--in', str(self.tmp / 'missing.txt'))
        self.assertEqual(ctx.exception.returncode, 2)


class SolveGtspCommandTests(CliTestCase):

    def setUp(self):
        super().setUp()
        self.graph_path = self.tmp / 'tiny4.gtsp'
        save_gtsp(build_transformed_graph(tiny4()), self.graph_path)

    def test_exact_maps_back_to_the_optimum(self):
        solution_path = self.tmp / 'sol.txt'
        output = run('solve_gtsp', '--in', str(self.graph_path), '--solver', 'exact',
                     '--instance', str(self.instance_path), '--out', str(solution_path))
        self.assertIn('Verified', output)
        sol, cost = load_solution(solution_path)
        self.assertAlmostEqual(cost, TINY4_OPTIMUM, delta=1e-6)
        self.assertIn('Feasible', run('verify', '--instance', str(self.instance_path),
                                      '--solution', str(solution_path)))

    def test_lns_json_without_instance(self):
        payload = json.loads(run('solve_gtsp', '--in', str(self.graph_path), '--iterations', '100',
                                 '--seed', '1', '--format', 'json'))
        self.assertEqual(payload['tour'][0], 'C(0,0)')
        self.assertEqual(len(payload['tour']), 4)
        self.assertAlmostEqual(payload['cost'], TINY4_OPTIMUM, delta=1e-6)
        self.assertNotIn('solution', payload)

    def test_out_needs_instance(self):
        with self.assertRaises(CommandError) as ctx:
            run('solve_gtsp', '--in', str(self.graph_path), '--out', str(self.tmp / 'sol.txt'))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_instance_size_mismatch(self):
        other = self.tmp / 'five.txt'
        save_instance(five_targets(), other)
        with self.assertRaises(CommandError) as ctx:
            run('solve_gtsp', '--in', str(self.graph_path), '--instance', str(other))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_malformed_file(self):
        bad = self.tmp / 'bad.gtsp'
        bad.write_text(dumps_gtsp(build_transformed_graph(tiny4())).replace('EDGES', 'EDGE'), encoding='utf-8')
        with self.assertRaises(CommandError) as ctx:
            run('solve_gtsp', '--in', str(bad))
        self.assertEqual(ctx.exception.returncode, 2)


class BenchCommandTests(CliTestCase):

    def test_bnc_and_oracle_agree(self):
        corpus = self.tmp / 'corpus'
        run('gen', '--class', 'A', '--n', '6', '--alpha', '0.2', '--count', '2', '--out', str(corpus))
        save_instance(tiny4(), corpus / 'tiny4.txt')
        report = self.tmp / 'report.csv'
        run('bench', '--dir', str(corpus), '--methods', 'bnc', 'oracle', '--out', str(report),
            '--backend', 'highs', '--jobs', '2')

        frame = pd.read_csv(report)
        self.assertEqual(list(frame.columns), list(BENCH_COLUMNS))
        self.assertEqual(len(frame), 6)
        self.assertTrue((frame['gap%'].abs() < 1e-6).all())
        self.assertEqual(set(frame['status']), {'optimal'})

    def test_export_plotdata(self):
        corpus = self.tmp / 'corpus'
        run('gen', '--class', 'C', '--n', '6', '--alpha', '0.1', '--count', '2', '--out', str(corpus))
        report = self.tmp / 'report.csv'
        summary = self.tmp / 'summary.csv'
        run('bench', '--dir', str(corpus), '--methods', 'bnc', 'gtsp', '--out', str(report),
            '--iterations', '50', '--summary', str(summary))
        self.assertTrue(summary.exists())

        plots = self.tmp / 'plots'
        run('export_plotdata', '--report', str(report), '--out', str(plots))
        names = sorted(p.name for p in plots.iterdir())
        self.assertEqual(names, ['cost_scatter.csv', 'cut_counts.csv', 'gap_summary.csv',
                                 'heuristic_time_hist.csv', 'runtime_boxplot.csv'])
        scatter = pd.read_csv(plots / 'cost_scatter.csv')
        self.assertEqual(len(scatter), 2)
        self.assertTrue((scatter['heuristic_cost'] >= scatter['optimal_cost'] - 1e-6).all())
        hist = pd.read_csv(plots / 'heuristic_time_hist.csv')
        self.assertEqual(hist['count'].sum(), 2)

    def test_empty_directory(self):
        with self.assertRaises(CommandError) as ctx:
            run('bench', '--dir', str(self.tmp / 'nothing'), '--out', str(self.tmp / 'r.csv'))
        self.assertEqual(ctx.exception.returncode, 2)


class ReportTests(SimpleTestCase):

    def test_gap_percent(self):
        self.assertIsNone(gap_percent(None, 10.0))
        self.assertIsNone(gap_percent(10.0, None))
        self.assertEqual(gap_percent(100.0, 100.0), 0.0)
        self.assertAlmostEqual(gap_percent(105.0, 100.0), 5.0)
        self.assertEqual(gap_percent(0.0, 0.0), 0.0)

    def test_reference_ignores_heuristics(self):
        runs = [MethodRun(method=METHOD_GTSP, status=STATUS_HEURISTIC, cost=9.0),
                MethodRun(method=METHOD_BNC, status='time_limit', cost=11.0),
                MethodRun(method=METHOD_ORACLE, status='optimal', cost=10.0)]
        self.assertEqual(reference_cost(runs), 10.0)
        self.assertIsNone(reference_cost(runs[:2]))

    def test_rows_and_summary(self):
        inst = tiny4()
        runs = [run_method(inst, METHOD_ORACLE), run_method(inst, METHOD_GTSP, iterations=50, seed=0)]
        rows = bench_rows('tiny4', inst, runs)
        frame = rows_to_frame(rows)
        self.assertEqual(list(frame.columns), list(BENCH_COLUMNS))
        self.assertEqual(frame.loc[0, 'class'], 'custom')
        summary = summarize(frame)
        self.assertEqual(len(summary), 2)
        self.assertAlmostEqual(summary['gap_max'].max(), 0.0, delta=1e-6)
