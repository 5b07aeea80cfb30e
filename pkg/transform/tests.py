from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from formulation.objective import evaluate_objective
from instances.fixtures import TINY4_OPTIMUM, dense_corpus, five_targets, five_targets_cost, random_corpus, single_target, tiny4
from instances.validators import build_instance
from oracle.brute_force import brute_force, enumerate_solutions
from verification.domain import Solution
from verification.feasibility import is_feasible

from .configurations import (RULE_GV, RULE_UAV_HOP, RULE_UAV_RETURN, Configuration,
                             build_transformed_graph)
from .gtsp_format import dumps_gtsp, loads_gtsp
from .mapping import map_cagvrp_to_gtsp, map_gtsp_to_cagvrp, tour_cost, validate_tour

C = Configuration

FIVE_TARGETS_TOUR = [C(0, 0), C(1, 1), C(1, 2), C(1, 3), C(4, 4)]


class BuildTransformedGraphTests(SimpleTestCase):

    def test_configuration(self):
        self.assertTrue(C(2, 2).is_hub)
        self.assertFalse(C(2, 1).is_hub)
        self.assertEqual(str(C(1, 3)), 'C(1,3)')

    def test_single_target(self):
        graph = build_transformed_graph(single_target())
        self.assertEqual(graph.vertices, (C(0, 0),))
        self.assertEqual(graph.edges, {})
        self.assertEqual(graph.partitions, {0: (C(0, 0),)})

    def test_infinite_range(self):
        inst = build_instance([(0.0, 0.0), (10.0, 0.0), (0.0, 10.0), (30.0, 30.0), (60.0, 5.0)], R=1000.0, alpha=0.3)
        graph = build_transformed_graph(inst)
        self.assertEqual(len(graph.configurations), 25)
        # C(i, 0) for i != 0 is not a GTSP vertex
        self.assertEqual(len(graph.vertices), 25 - 4)
        self.assertEqual(graph.partitions[0], (C(0, 0),))

    def test_tiny4_vertices(self):
        graph = build_transformed_graph(tiny4())
        expected = {C(0, 0), C(1, 1), C(2, 2), C(3, 3),
                    C(0, 1), C(0, 3), C(1, 2), C(2, 1), C(1, 3), C(3, 1), C(2, 3), C(3, 2)}
        self.assertEqual(set(graph.vertices), expected)
        self.assertEqual(len(graph.vertices), 12)
        self.assertEqual(sorted(graph.partitions), [0, 1, 2, 3])
        self.assertEqual(set(graph.partitions[2]), {C(2, 2), C(1, 2), C(3, 2)})

    def test_partitions_are_exhaustive_and_disjoint(self):
        for inst in [tiny4(), five_targets()] + list(random_corpus(3, sizes=(6, 8), seed=9)):
            graph = build_transformed_graph(inst)
            members = [v for vs in graph.partitions.values() for v in vs]
            self.assertEqual(sorted(members), sorted(graph.vertices))
            self.assertEqual(len(members), len(set(members)))
            for key, vs in graph.partitions.items():
                self.assertTrue(all(v.a == key for v in vs))

    def test_edges_join_distinct_sets(self):
        for inst in [tiny4()] + list(dense_corpus(2, n=6, seed=1)):
            graph = build_transformed_graph(inst)
            known = set(graph.vertices)
            for u, v in graph.edges:
                self.assertNotEqual(u.a, v.a)
                self.assertIn(u, known)
                self.assertIn(v, known)
                self.assertLessEqual(inst.euclid[u.g, u.a], inst.R)

    def test_edge_rules_and_costs(self):
        inst = tiny4()
        c, d = inst.c, inst.d
        graph = build_transformed_graph(inst)
        self.assertEqual(graph.edges[(C(0, 0), C(1, 1))], (c[0, 1], RULE_GV))
        self.assertEqual(graph.edges[(C(1, 1), C(1, 2))], (d[1, 2], RULE_UAV_HOP))
        self.assertEqual(graph.edges[(C(1, 2), C(1, 3))], (d[2, 3], RULE_UAV_HOP))
        self.assertAlmostEqual(graph.cost(C(1, 2), C(3, 3)), d[2, 1] + c[1, 3])
        self.assertEqual(graph.rule(C(1, 2), C(3, 3)), RULE_UAV_RETURN)
        self.assertEqual(graph.edges[(C(0, 1), C(0, 0))], (d[1, 0], RULE_UAV_RETURN))
        # hop back onto a hub, return into the UAV's own set, return to the same GV position
        self.assertFalse(graph.has_edge(C(1, 2), C(1, 1)))
        self.assertFalse(graph.has_edge(C(1, 2), C(2, 2)))
        self.assertFalse(graph.has_edge(C(2, 1), C(2, 2)))
        self.assertFalse(graph.has_edge(C(0, 0), C(1, 2)))


class MappingTests(SimpleTestCase):

    def test_five_targets_tour_to_solution(self):
        inst = five_targets()
        graph = build_transformed_graph(inst)
        sol = map_gtsp_to_cagvrp(FIVE_TARGETS_TOUR, inst, graph=graph)
        self.assertEqual(sol.gv_ring, [0, 1, 4])
        self.assertEqual(sol.subtours, {1: [2, 3]})
        self.assertTrue(is_feasible(inst, sol))
        self.assertAlmostEqual(tour_cost(graph, FIVE_TARGETS_TOUR), five_targets_cost(inst), delta=1e-9)
        self.assertAlmostEqual(evaluate_objective(inst, sol), five_targets_cost(inst), delta=1e-9)

    def test_five_targets_solution_to_tour(self):
        inst = five_targets()
        sol = Solution.from_routes([0, 1, 4], {1: [2, 3]})
        self.assertEqual(map_cagvrp_to_gtsp(sol, inst), FIVE_TARGETS_TOUR)

    def test_all_hub_tour(self):
        inst = tiny4()
        tour = [C(0, 0), C(1, 1), C(2, 2), C(3, 3)]
        sol = map_gtsp_to_cagvrp(tour, inst)
        self.assertEqual(sol.gv_ring, [0, 1, 2, 3])
        self.assertEqual(sol.subtours, {})
        self.assertEqual(map_cagvrp_to_gtsp(sol, inst), tour)

    def test_base_subtour(self):
        inst = build_instance([(0.0, 0.0), (5.0, 0.0), (5.0, 5.0)], R=10.0, alpha=0.5)
        graph = build_transformed_graph(inst)
        sol = Solution.from_routes([0], {0: [1, 2]})
        tour = map_cagvrp_to_gtsp(sol, inst)
        self.assertEqual(tour, [C(0, 0), C(0, 1), C(0, 2)])
        self.assertAlmostEqual(tour_cost(graph, tour), evaluate_objective(inst, sol), delta=1e-9)
        self.assertEqual(map_gtsp_to_cagvrp(tour, inst, graph=graph).gv_ring, [0])

    def test_tiny4_optimum_round_trip(self):
        inst = tiny4()
        graph = build_transformed_graph(inst)
        sol, optimum = brute_force(inst)
        tour = map_cagvrp_to_gtsp(sol, inst)
        self.assertAlmostEqual(tour_cost(graph, tour), optimum, delta=1e-9)
        self.assertAlmostEqual(optimum, TINY4_OPTIMUM, delta=1e-9)

    def test_non_edge_rejected(self):
        inst = tiny4()
        with self.assertRaises(ValidationError):
            map_gtsp_to_cagvrp([C(0, 0), C(1, 2), C(1, 1), C(3, 3)], inst)

    def test_skipped_and_repeated_sets_rejected(self):
        inst = tiny4()
        graph = build_transformed_graph(inst)
        with self.assertRaises(ValidationError):
            validate_tour(graph, [C(0, 0), C(1, 1), C(3, 3)])
        with self.assertRaises(ValidationError):
            validate_tour(graph, [C(0, 0), C(1, 1), C(1, 2), C(3, 2), C(3, 3)])
        with self.assertRaises(ValidationError):
            validate_tour(graph, [C(1, 1), C(0, 0), C(2, 2), C(3, 3)])

    def test_infeasible_solution_rejected(self):
        with self.assertRaises(ValidationError):
            map_cagvrp_to_gtsp(Solution.from_routes([0, 1], {1: [2]}), tiny4())

    def test_cost_preserved_both_ways(self):
        instances = [tiny4(), five_targets()] + list(dense_corpus(2, n=5, seed=12)) + list(random_corpus(2, sizes=(6,), seed=5))
        checked = 0
        for inst in instances:
            graph = build_transformed_graph(inst)
            for k, (sol, cost) in enumerate(enumerate_solutions(inst)):
                if k % 7:
                    continue
                tour = map_cagvrp_to_gtsp(sol, inst)
                self.assertAlmostEqual(validate_tour(graph, tour), cost, delta=1e-9 * max(1.0, cost))
                back = map_gtsp_to_cagvrp(tour, inst, graph=graph)
                self.assertTrue(is_feasible(inst, back))
                self.assertAlmostEqual(evaluate_objective(inst, back), cost, delta=1e-9 * max(1.0, cost))
                checked += 1
        self.assertGreater(checked, 20)


class GtspFormatTests(SimpleTestCase):

    def test_export_reloads(self):
        graph = build_transformed_graph(tiny4())
        text = dumps_gtsp(graph)
        self.assertTrue(text.startswith('GTSP 1\nVERTICES 12\n'))
        loaded = loads_gtsp(text)
        self.assertEqual(loaded.vertices, graph.vertices)
        self.assertEqual(loaded.partitions, graph.partitions)
        self.assertEqual(loaded.edges, graph.edges)
        self.assertEqual(dumps_gtsp(loaded), text)

    def test_malformed_exports(self):
        text = dumps_gtsp(build_transformed_graph(tiny4()))
        with self.assertRaises(ValidationError):
            loads_gtsp(text.replace('GTSP 1', 'GTSP 2', 1))
        with self.assertRaises(ValidationError):
            loads_gtsp(text.replace('rule1', 'rule9', 1))
        lines = text.splitlines()
        sets_at = lines.index('SETS 4')
        lines[sets_at + 1] = lines[sets_at + 1] + ' 1'
        with self.assertRaises(ValidationError):
            loads_gtsp('\n'.join(lines))
