import json
import unittest

from django.conf import settings
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase
from rest_framework.renderers import JSONRenderer

from bnc.branch_and_cut import STATUS_OPTIMAL, solve_exact
from formulation.objective import evaluate_objective
from instances.fixtures import TINY4_OPTIMUM, dense_corpus, random_corpus, single_target, tiny4
from instances.generators import generate_instance
from instances.validators import build_instance
from oracle.brute_force import brute_force
from transform.configurations import Configuration as C
from transform.configurations import assemble_graph, build_transformed_graph
from transform.mapping import map_gtsp_to_cagvrp, validate_tour
from tsp.tours import tour_cost, tsp_exact
from verification.feasibility import is_feasible
from verification.metrics import relative_gap

from .exact import solve_gtsp_exact_small
from .lns import GtspLns, solve_gtsp_lns
from .pipeline import solve_heuristic
from .serializers import HeuristicReportSerializer
from .tours import check_set_cover, closed_cost


def without_vertices(graph, dropped):
    vertices = [v for v in graph.vertices if v not in dropped]
    edges = {(u, v): e for (u, v), e in graph.edges.items() if u not in dropped and v not in dropped}
    return assemble_graph(vertices, vertices, edges)


class ExactGtspTests(SimpleTestCase):

    def test_single_set(self):
        result = solve_gtsp_exact_small(build_transformed_graph(single_target()))
        self.assertEqual(result.tour, [C(0, 0)])
        self.assertEqual(result.cost, 0.0)

    def test_tiny4_matches_oracle(self):
        inst = tiny4()
        graph = build_transformed_graph(inst)
        result = solve_gtsp_exact_small(graph)
        self.assertAlmostEqual(result.cost, TINY4_OPTIMUM, delta=1e-9)
        self.assertAlmostEqual(validate_tour(graph, result.tour), result.cost, delta=1e-9)
        sol = map_gtsp_to_cagvrp(result.tour, inst, graph=graph)
        self.assertTrue(is_feasible(inst, sol))

    def test_hubs_only_collapses_to_tsp(self):
        points = [(0.0, 0.0), (30.0, 5.0), (60.0, 40.0), (10.0, 70.0), (80.0, 90.0)]
        inst = build_instance(points, R=1.0, alpha=0.5)
        graph = build_transformed_graph(inst)
        self.assertEqual(len(graph.vertices), 5)
        expected = tour_cost(inst.c, tsp_exact(inst.c, list(range(5))))
        self.assertAlmostEqual(solve_gtsp_exact_small(graph).cost, expected, delta=1e-9)

    def test_oracle_triangle(self):
        for inst in list(random_corpus(4, sizes=(5, 6), seed=300)) + list(dense_corpus(2, n=5, seed=40)):
            _, optimum = brute_force(inst)
            result = solve_gtsp_exact_small(build_transformed_graph(inst))
            self.assertAlmostEqual(result.cost, optimum, delta=1e-9 * max(1.0, optimum), msg=f"{inst!r}")

    def test_size_caps(self):
        graph = build_transformed_graph(tiny4())
        with self.assertRaises(ValidationError):
            solve_gtsp_exact_small(graph, max_sets=3)
        with self.assertRaises(ValidationError):
            solve_gtsp_exact_small(graph, max_product=10)


class LnsTests(SimpleTestCase):

    def test_single_set(self):
        result = solve_gtsp_lns(build_transformed_graph(single_target()), iterations=10)
        self.assertEqual(result.tour, [C(0, 0)])
        self.assertEqual(result.cost, 0.0)

    def test_tiny4_reaches_exact(self):
        graph = build_transformed_graph(tiny4())
        result = solve_gtsp_lns(graph, iterations=200, seed=1)
        self.assertAlmostEqual(result.cost, solve_gtsp_exact_small(graph).cost, delta=1e-9)

    def test_never_below_exact(self):
        for inst in list(dense_corpus(3, n=6, seed=70)) + list(random_corpus(2, sizes=(7,), seed=80)):
            graph = build_transformed_graph(inst)
            exact = solve_gtsp_exact_small(graph)
            result = solve_gtsp_lns(graph, iterations=300, seed=0)
            self.assertGreaterEqual(result.cost, exact.cost - 1e-9)
            check_set_cover(graph, result.tour)
            self.assertAlmostEqual(closed_cost(graph, result.tour), result.cost, delta=1e-9)

    def test_deterministic_for_seed(self):
        graph = build_transformed_graph(next(dense_corpus(1, n=7, seed=90)))
        first = solve_gtsp_lns(graph, iterations=100, seed=5)
        second = solve_gtsp_lns(graph, iterations=100, seed=5)
        self.assertEqual(first.tour, second.tour)
        self.assertEqual(first.cost, second.cost)

    def test_never_worse_than_initial(self):
        graph = build_transformed_graph(next(dense_corpus(1, n=7, seed=91)))
        search = GtspLns(graph, iterations=0, seed=3)
        initial = closed_cost(graph, search.reselect(search.initial_tour()))
        result = solve_gtsp_lns(graph, iterations=150, seed=3)
        self.assertLessEqual(result.cost, initial + 1e-12)

    def test_initial_tour_is_all_hubs(self):
        graph = build_transformed_graph(tiny4())
        tour = GtspLns(graph, iterations=0).initial_tour()
        self.assertTrue(all(v.is_hub for v in tour))
        self.assertEqual(tour[0], C(0, 0))

    def test_greedy_insertion_without_a_hub(self):
        graph = without_vertices(build_transformed_graph(tiny4()), {C(3, 3)})
        tour = GtspLns(graph, iterations=0).initial_tour()
        check_set_cover(graph, tour)
        self.assertIsNotNone(closed_cost(graph, tour))
        result = solve_gtsp_lns(graph, iterations=50, seed=2)
        self.assertIsNotNone(closed_cost(graph, result.tour))

    def test_invalid_parameters(self):
        graph = build_transformed_graph(tiny4())
        with self.assertRaises(ValidationError):
            GtspLns(graph, removal_fraction=0.0)
        with self.assertRaises(ValidationError):
            GtspLns(graph, iterations=-1)


class PipelineTests(SimpleTestCase):

    def test_tiny4(self):
        inst = tiny4()
        report = solve_heuristic(inst, iterations=200, seed=0)
        self.assertTrue(is_feasible(inst, report.solution))
        self.assertAlmostEqual(report.cost, evaluate_objective(inst, report.solution), delta=1e-9)
        self.assertAlmostEqual(report.cost, TINY4_OPTIMUM, delta=1e-9)
        self.assertEqual(report.vertices, 12)

    def test_mapped_tours_verify(self):
        for inst in random_corpus(3, sizes=(8, 10), seed=500):
            report = solve_heuristic(inst, iterations=100, seed=1)
            self.assertTrue(is_feasible(inst, report.solution))
            self.assertGreaterEqual(report.cost, 0.0)

    def test_serializer(self):
        report = solve_heuristic(tiny4(), iterations=50, seed=0)
        data = HeuristicReportSerializer(report).data
        self.assertEqual(data['tour'][0], 'C(0,0)')
        payload = json.loads(JSONRenderer().render(data))
        self.assertAlmostEqual(payload['cost'], report.cost)
        self.assertEqual(payload['solution']['gv_ring'][0], 0)


@unittest.skipUnless(settings.RUN_SLOW_TESTS, "set RUN_SLOW_TESTS=True for the heuristic quality sweeps")
class SlowPipelineTests(SimpleTestCase):

    def test_class_a_twenty_targets_gap(self):
        gaps = []
        for seed in range(20):
            inst = generate_instance('A', 20, 0.1, seed)
            exact = solve_exact(inst, backend='highs')
            self.assertEqual(exact.status, STATUS_OPTIMAL)
            heuristic = solve_heuristic(inst, seed=seed)
            gaps.append(relative_gap(heuristic.cost, exact.cost))
        self.assertLessEqual(sum(gaps) / len(gaps), 5.0)
        self.assertLessEqual(max(gaps), 10.0)

    def test_class_c_eighty_targets(self):
        for seed in range(3):
            report = solve_heuristic(generate_instance('C', 80, 0.2, seed), seed=seed, time_limit=100.0)
            self.assertLess(report.wall_time, 120.0)
