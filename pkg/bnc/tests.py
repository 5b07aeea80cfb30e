import json
import math
import unittest
from unittest import mock

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase
from rest_framework.renderers import JSONRenderer

from formulation.model_builder import ColumnLayout, ModelOptions, build_model
from formulation.objective import evaluate_objective, solution_to_point
from instances.fixtures import (TINY4_OPTIMUM, dense_corpus, random_corpus, single_target,
                                tiny4)
from instances.validators import build_instance
from oracle.brute_force import brute_force
from verification.domain import Solution
from verification.feasibility import is_feasible

from .branch_and_cut import (STATUS_OPTIMAL, STATUS_TIME_LIMIT, base_only_solution,
                             optimality_gap, solve_exact)
from .rounding import lp_rounding
from .serializers import SolveReportSerializer
from .tree import Node, NodeQueue, select_branching_column


def y_point(inst, diagonal, assignment=()):
    layout = ColumnLayout(inst.n)
    point = np.zeros(layout.size)
    for i, value in diagonal.items():
        point[layout.y(i, i)] = value
    for (i, j), value in assignment:
        point[layout.y(i, j)] = value
    return point


class TreeTests(SimpleTestCase):

    def test_queue_pops_best_bound(self):
        queue = NodeQueue()
        for bound in (5.0, 1.0, 3.0):
            queue.push(Node(parent_bound=bound))
        self.assertEqual(queue.min_bound(), 1.0)
        self.assertEqual([queue.pop().parent_bound for _ in range(3)], [1.0, 3.0, 5.0])
        self.assertIsNone(queue.pop())
        self.assertEqual(queue.min_bound(), math.inf)

    def test_inconsistent_fixings(self):
        with self.assertRaises(ValidationError):
            Node(fixings={3: (1.0, 0.0)})

    def test_child_keeps_parent_fixings(self):
        child = Node(fixings={1: (0.0, 0.0)}).child(2, 1.0, 1.0, bound=4.0, basis=None)
        self.assertEqual(child.fixings, {1: (0.0, 0.0), 2: (1.0, 1.0)})
        self.assertEqual(child.depth, 1)
        self.assertEqual(child.parent_bound, 4.0)

    def test_stop_columns_branch_first(self):
        model = build_model(tiny4())
        layout = model.layout
        point = np.zeros(layout.size)
        point[layout.x(1, 2)] = 0.5
        point[layout.y(3, 3)] = 0.3
        point[layout.y(1, 1)] = 0.4
        self.assertEqual(select_branching_column(model, point, 1e-6), layout.y(1, 1))
        point[layout.y(1, 1)] = point[layout.y(3, 3)] = 0.0
        self.assertEqual(select_branching_column(model, point, 1e-6), layout.x(1, 2))
        point[layout.x(1, 2)] = 0.0
        point[layout.z(1, 2, 1)] = 0.5
        self.assertIsNone(select_branching_column(model, point, 1e-6))


class RoundingTests(SimpleTestCase):

    def test_tiny4_example(self):
        inst = tiny4()
        sol = lp_rounding(y_point(inst, {0: 1.0, 1: 0.6, 2: 0.2, 3: 0.3}), inst)
        self.assertEqual(sol.gv_ring, [0, 1])
        self.assertEqual(sorted(sol.subtours[1]), [2, 3])
        self.assertEqual(sol.assignment, {0: 0, 1: 1, 2: 1, 3: 1})
        self.assertTrue(is_feasible(inst, sol))
        self.assertAlmostEqual(evaluate_objective(inst, sol), TINY4_OPTIMUM, places=4)

    def test_all_stops(self):
        inst = tiny4()
        sol = lp_rounding(y_point(inst, {i: 1.0 for i in range(4)}), inst)
        self.assertEqual(sorted(sol.gv_ring), [0, 1, 2, 3])
        self.assertEqual(sol.gv_ring[0], 0)
        self.assertEqual(sol.subtours, {})

    def test_promotion_when_nothing_in_range(self):
        inst = build_instance([(0.0, 0.0), (10.0, 0.0), (20.0, 0.0)], R=5.0, alpha=0.5)
        sol = lp_rounding(y_point(inst, {}), inst)
        self.assertEqual(sorted(sol.gv_ring), [0, 1, 2])
        self.assertTrue(is_feasible(inst, sol))

    def test_integral_point_keeps_stops(self):
        inst = tiny4()
        original = Solution.from_routes([0, 1], {1: [2, 3]})
        sol = lp_rounding(solution_to_point(inst, original), inst)
        self.assertEqual(sorted(sol.gv_ring), sorted(original.gv_ring))
        self.assertLessEqual(evaluate_objective(inst, sol), evaluate_objective(inst, original) + 1e-9)

    def test_random_points_round_to_feasible(self):
        rng = np.random.default_rng(5)
        for inst in random_corpus(10, sizes=(6, 9, 12), seed=40):
            layout = ColumnLayout(inst.n)
            point = np.zeros(layout.size)
            point[layout.y_slice] = rng.uniform(size=inst.n * inst.n)
            sol = lp_rounding(point, inst)
            self.assertTrue(is_feasible(inst, sol), f"{inst!r}")


class SolveExactTests(SimpleTestCase):

    def test_single_target(self):
        report = solve_exact(single_target())
        self.assertEqual(report.status, STATUS_OPTIMAL)
        self.assertEqual(report.cost, 0.0)
        self.assertEqual(report.nodes, 1)
        self.assertEqual(report.incumbent.gv_ring, [0])

    def test_tiny4_matches_oracle(self):
        inst = tiny4()
        _, optimum = brute_force(inst)
        report = solve_exact(inst)
        self.assertEqual(report.status, STATUS_OPTIMAL)
        self.assertAlmostEqual(report.cost, optimum, delta=1e-6)
        self.assertAlmostEqual(report.cost, TINY4_OPTIMUM, delta=1e-6)
        self.assertTrue(is_feasible(inst, report.incumbent))
        self.assertLessEqual(report.gap, 1e-6)

    def test_backends_reach_same_optimum(self):
        inst = tiny4()
        self.assertAlmostEqual(solve_exact(inst, backend='highs').cost, solve_exact(inst, backend='simplex').cost,
                               delta=1e-6)

    def test_oracle_sweep(self):
        for inst in random_corpus(8, sizes=(5, 6, 7, 8), seed=100):
            _, optimum = brute_force(inst)
            for backend in ('simplex', 'highs'):
                with self.subTest(instance=repr(inst), backend=backend):
                    report = solve_exact(inst, backend=backend)
                    self.assertEqual(report.status, STATUS_OPTIMAL)
                    self.assertAlmostEqual(report.cost, optimum, delta=1e-6 * max(1.0, optimum))
                    self.assertTrue(is_feasible(inst, report.incumbent))

    def test_dense_instances_use_the_uav(self):
        for inst in dense_corpus(3, n=6, alpha=0.2, seed=20):
            _, optimum = brute_force(inst)
            report = solve_exact(inst)
            self.assertAlmostEqual(report.cost, optimum, delta=1e-6 * max(1.0, optimum), msg=f"{inst!r}")

    def test_valid_inequalities_do_not_change_the_optimum(self):
        for inst in [tiny4()] + list(dense_corpus(2, n=5, seed=8)):
            with_vi = solve_exact(inst, use_valid_ineq=True)
            without_vi = solve_exact(inst, use_valid_ineq=False)
            self.assertAlmostEqual(with_vi.cost, without_vi.cost, delta=1e-6 * max(1.0, with_vi.cost))

    def test_penalty_and_fixing_agree(self):
        for inst in [tiny4()] + list(random_corpus(2, sizes=(5,), seed=60)):
            fixed = solve_exact(inst)
            penalized = solve_exact(inst, options=ModelOptions(use_penalty_f=True))
            self.assertAlmostEqual(fixed.cost, penalized.cost, delta=1e-6 * max(1.0, fixed.cost))

    def test_rounding_is_optional(self):
        inst = tiny4()
        report = solve_exact(inst, use_rounding=False)
        self.assertEqual(report.rounding_successes, 0)
        self.assertAlmostEqual(report.cost, TINY4_OPTIMUM, delta=1e-6)

    def test_strict_rings(self):
        inst = tiny4()
        _, optimum = brute_force(inst, strict_rings=True)
        report = solve_exact(inst, options=ModelOptions(strict_rings=True))
        self.assertAlmostEqual(report.cost, optimum, delta=1e-6)
        self.assertGreaterEqual(len(report.incumbent.gv_ring), 3)

    def test_alpha_monotone(self):
        costs = [solve_exact(tiny4(alpha)).cost for alpha in (0.1, 0.5, 0.9)]
        self.assertEqual(costs, sorted(costs))

    def test_deterministic(self):
        inst = next(dense_corpus(1, n=5, seed=2))
        first, second = solve_exact(inst), solve_exact(inst)
        self.assertEqual(first.cost, second.cost)
        self.assertEqual(first.nodes, second.nodes)
        self.assertEqual(first.cut_counts, second.cut_counts)
        self.assertEqual(first.incumbent, second.incumbent)

    def test_workers_agree(self):
        inst = next(dense_corpus(1, n=5, seed=4))
        single = solve_exact(inst, workers=1)
        threaded = solve_exact(inst, workers=3)
        self.assertAlmostEqual(single.cost, threaded.cost, delta=1e-6 * max(1.0, single.cost))

    def test_node_limit_keeps_a_valid_bound(self):
        inst = next(random_corpus(1, sizes=(7,), seed=3))
        _, optimum = brute_force(inst)
        report = solve_exact(inst, node_limit=1)
        self.assertIn(report.status, (STATUS_OPTIMAL, STATUS_TIME_LIMIT))
        self.assertLessEqual(report.bound, optimum + 1e-6)
        if report.cost is not None:
            self.assertGreaterEqual(report.cost, optimum - 1e-6)
            self.assertGreaterEqual(report.gap, 0.0)

    def test_unseparated_infeasible_point_is_not_proven(self):
        inst = tiny4()
        with mock.patch('bnc.branch_and_cut.separate_all', return_value=[]), \
                mock.patch('bnc.branch_and_cut.is_integral', return_value=True), \
                mock.patch('bnc.branch_and_cut.point_to_solution', return_value=Solution.from_routes([0])):
            report = solve_exact(inst)
        self.assertNotEqual(report.status, STATUS_OPTIMAL)
        self.assertEqual(report.status, STATUS_TIME_LIMIT)
        self.assertIsNone(report.cost)
        self.assertLessEqual(report.bound, TINY4_OPTIMUM + 1e-6)

    def test_report_serializer(self):
        report = solve_exact(tiny4())
        data = SolveReportSerializer(report).data
        self.assertEqual(data['status'], STATUS_OPTIMAL)
        self.assertEqual(data['incumbent']['gv_ring'], [0, 1])
        payload = json.loads(JSONRenderer().render(data))
        self.assertAlmostEqual(payload['cost'], TINY4_OPTIMUM, places=6)


class HelperTests(SimpleTestCase):

    def test_gap(self):
        self.assertIsNone(optimality_gap(None, 1.0))
        self.assertEqual(optimality_gap(10.0, 10.0), 0.0)
        self.assertAlmostEqual(optimality_gap(10.0, 8.0), 0.2)
        self.assertEqual(optimality_gap(0.0, 0.0), 0.0)

    def test_base_only_route(self):
        inst = build_instance([(0.0, 0.0), (5.0, 0.0), (5.0, 5.0)], R=10.0, alpha=0.5)
        sol = base_only_solution(inst)
        self.assertEqual(sol.gv_ring, [0])
        self.assertEqual(sorted(sol.subtours[0]), [1, 2])
        self.assertIsNone(base_only_solution(tiny4()))


@unittest.skipUnless(settings.RUN_SLOW_TESTS, "set RUN_SLOW_TESTS=True for the full oracle sweep")
class SlowSolveExactTests(SimpleTestCase):

    def test_fifty_instance_sweep(self):
        for inst in random_corpus(50, sizes=(5, 6, 7, 8), seed=1000):
            _, optimum = brute_force(inst)
            report = solve_exact(inst, backend='highs')
            self.assertEqual(report.status, STATUS_OPTIMAL)
            self.assertAlmostEqual(report.cost, optimum, delta=1e-6 * max(1.0, optimum))

    def test_twelve_targets_within_limit(self):
        for inst in random_corpus(3, sizes=(12,), seed=2000):
            report = solve_exact(inst, time_limit=600, backend='highs')
            self.assertEqual(report.status, STATUS_OPTIMAL)
