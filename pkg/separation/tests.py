import itertools

import networkx as nx
import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from formulation.model_builder import ColumnLayout, build_model
from formulation.objective import check_cut_validity, solution_to_point
from formulation.rows import (GV_CONNECTIVITY, TWO_MATCHING, UAV_CONNECTIVITY_IN,
                              UAV_CONNECTIVITY_OUT)
from instances.fixtures import dense_corpus, tiny4
from instances.validators import build_instance
from lp.relaxation import ModelRelaxation
from oracle.brute_force import enumerate_solutions
from verification.domain import Solution

from .connectivity import separate_gv_connectivity, separate_uav_connectivity
from .cut_pool import CutPool, separate_all
from .cut_utils import keep_violated, min_violation
from .flows import min_cut
from .two_matching import separate_two_matching, two_matching_cut


def line_instance(n, spacing=10.0, R=5.0):
    """Targets on a line, spaced further apart than R."""
    return build_instance([(spacing * k, 0.0) for k in range(n)], R=R, alpha=0.5)


def brute_force_cut(graph, s, t):
    others = [v for v in graph.nodes if v not in (s, t)]
    best = np.inf
    for r in range(len(others) + 1):
        for chosen in itertools.combinations(others, r):
            side = {s, *chosen}
            value = sum(d.get('capacity', 0.0) for u, v, d in graph.edges(data=True)
                        if (u in side) != (v in side))
            best = min(best, value)
    return best


class MinCutTests(SimpleTestCase):

    def test_disconnected(self):
        graph = nx.Graph()
        graph.add_nodes_from(['s', 't'])
        value, side = min_cut(graph, 's', 't')
        self.assertEqual(value, 0.0)
        self.assertEqual(side, frozenset({'s'}))

    def test_single_edge(self):
        graph = nx.Graph()
        graph.add_edge('s', 't', capacity=0.7)
        value, side = min_cut(graph, 's', 't')
        self.assertAlmostEqual(value, 0.7)
        self.assertEqual(side, frozenset({'s'}))

    def test_diamond(self):
        graph = nx.Graph()
        graph.add_edge('s', 'a', capacity=0.5)
        graph.add_edge('s', 'b', capacity=0.5)
        graph.add_edge('a', 't', capacity=1.0)
        graph.add_edge('b', 't', capacity=1.0)
        value, side = min_cut(graph, 's', 't')
        self.assertAlmostEqual(value, 1.0)
        self.assertEqual(side, frozenset({'s'}))

    def test_same_endpoints(self):
        graph = nx.Graph()
        graph.add_edge(0, 1, capacity=1.0)
        with self.assertRaises(ValidationError):
            min_cut(graph, 0, 0)

    def test_matches_enumeration(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            size = int(rng.integers(3, 9))
            graph = nx.Graph()
            graph.add_nodes_from(range(size))
            for u, v in itertools.combinations(range(size), 2):
                if rng.uniform() < 0.5:
                    graph.add_edge(u, v, capacity=float(rng.uniform(0.0, 1.0)))
            value, side = min_cut(graph, 0, size - 1)
            self.assertAlmostEqual(value, brute_force_cut(graph, 0, size - 1), places=9)
            self.assertIn(0, side)
            self.assertNotIn(size - 1, side)

    def test_deterministic(self):
        graph = nx.cycle_graph(6)
        nx.set_edge_attributes(graph, 1.0, 'capacity')
        self.assertEqual(min_cut(graph, 0, 3), min_cut(graph, 0, 3))


class GvConnectivityTests(SimpleTestCase):

    def test_feasible_point_has_no_cut(self):
        inst = tiny4()
        point = solution_to_point(inst, Solution.from_routes([0, 1], {1: [2, 3]}))
        self.assertEqual(separate_gv_connectivity(point, inst), [])
        self.assertEqual(separate_uav_connectivity(point, inst), [])
        self.assertEqual(separate_two_matching(point, inst), [])

    def test_detached_ring(self):
        inst = line_instance(6)
        sol = Solution(gv_ring=[0, 1, 2], assignment={i: i for i in range(6)},
                       detached_gv_cycles=[[3, 4, 5]])
        point = solution_to_point(inst, sol)
        cuts = separate_gv_connectivity(point, inst)
        self.assertTrue(cuts)
        self.assertTrue(all(cut.kind == GV_CONNECTIVITY for cut in cuts))
        self.assertIn(frozenset({3, 4, 5}), {cut.S for cut in cuts})
        for cut in cuts:
            self.assertAlmostEqual(cut.violation(point), 2.0)

    def test_fractional_triangle(self):
        inst = line_instance(6)
        layout = ColumnLayout(6)
        point = np.zeros(layout.size)
        for i, j in ((0, 1), (1, 2), (0, 2)):
            point[layout.x(i, j)] = 1.0
        for i, j in ((3, 4), (4, 5), (3, 5)):
            point[layout.x(i, j)] = 0.5
        for i, value in ((0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0), (4, 0.5), (5, 0.5)):
            point[layout.y(i, i)] = value
        cuts = separate_gv_connectivity(point, inst)
        by_root = {cut.root: cut for cut in cuts if cut.S == frozenset({3, 4, 5})}
        self.assertIn(3, by_root)
        self.assertAlmostEqual(by_root[3].violation(point), 2.0)
        self.assertAlmostEqual(by_root[4].violation(point), 1.0)


class UavConnectivityTests(SimpleTestCase):

    def test_detached_uav_cycle(self):
        inst = tiny4()
        sol = Solution(gv_ring=[0, 1], assignment={0: 0, 1: 1, 2: 1, 3: 1},
                       detached_uav_cycles=[[2, 3]])
        point = solution_to_point(inst, sol)
        cuts = separate_uav_connectivity(point, inst)
        self.assertTrue(cuts)
        self.assertEqual({cut.S for cut in cuts}, {frozenset({2, 3})})
        self.assertEqual({cut.kind for cut in cuts}, {UAV_CONNECTIVITY_IN, UAV_CONNECTIVITY_OUT})
        for cut in cuts:
            self.assertAlmostEqual(cut.violation(point), 1.0)
        self.assertEqual(separate_gv_connectivity(point, inst), [])

    def test_fractional_crossing(self):
        inst = build_instance([(0.0, 0.0), (10.0, 0.0), (20.0, 0.0), (10.0, 8.0), (12.0, 5.0)],
                              R=15.0, alpha=0.5)
        layout = ColumnLayout(5)
        point = np.zeros(layout.size)
        point[layout.y(0, 0)] = point[layout.y(1, 1)] = point[layout.y(2, 2)] = 1.0
        point[layout.y(3, 1)] = point[layout.y(4, 1)] = 1.0
        point[layout.w(3, 4)] = 1.0
        point[layout.w(4, 3)] = 0.5
        point[layout.w(4, 1)] = 0.5
        point[layout.w(1, 3)] = 0.5
        cuts = separate_uav_connectivity(point, inst)
        match = [c for c in cuts if c.S == frozenset({3, 4}) and c.root == 3 and c.kind == UAV_CONNECTIVITY_OUT]
        self.assertEqual(len(match), 1)
        self.assertAlmostEqual(match[0].violation(point), 0.5)

    def test_exact_search_finds_what_components_miss(self):
        inst = build_instance([(0.0, 0.0), (10.0, 0.0), (20.0, 0.0), (10.0, 8.0), (12.0, 5.0)],
                              R=15.0, alpha=0.5)
        layout = ColumnLayout(5)
        point = np.zeros(layout.size)
        point[layout.y(0, 0)] = point[layout.y(1, 1)] = point[layout.y(2, 2)] = 1.0
        point[layout.y(3, 1)] = point[layout.y(4, 1)] = 1.0
        point[layout.w(3, 4)] = 1.0
        point[layout.w(4, 3)] = 0.5
        point[layout.w(4, 1)] = 0.5
        point[layout.w(1, 3)] = 0.5
        self.assertEqual(separate_uav_connectivity(point, inst, exact=False), [])


class TwoMatchingTests(SimpleTestCase):

    def comb_point(self, teeth):
        inst = line_instance(7)
        layout = ColumnLayout(7)
        point = np.zeros(layout.size)
        for i, j in ((1, 2), (2, 3), (1, 3)):
            point[layout.x(i, j)] = 0.5
        for i, j in teeth:
            point[layout.x(i, j)] = 1.0
        for i in (1, 2, 3):
            point[layout.y(i, i)] = 1.0
        return inst, point

    def test_comb_violated(self):
        inst, point = self.comb_point([(1, 4), (2, 5), (3, 6)])
        cuts = separate_two_matching(point, inst)
        self.assertEqual(len(cuts), 1)
        cut = cuts[0]
        self.assertEqual(cut.kind, TWO_MATCHING)
        self.assertEqual(cut.handle, frozenset({1, 2, 3}))
        self.assertEqual(len(cut.teeth), 3)
        self.assertAlmostEqual(cut.violation(point), 0.5)

    def test_unit_triangle_with_three_teeth(self):
        inst = line_instance(7)
        layout = ColumnLayout(7)
        point = np.zeros(layout.size)
        teeth = [(1, 4), (2, 5), (3, 6)]
        for i, j in [(1, 2), (2, 3), (1, 3)] + teeth:
            point[layout.x(i, j)] = 1.0
        for i in (1, 2, 3):
            point[layout.y(i, i)] = 1.0
        cut = two_matching_cut(inst, {1, 2, 3}, teeth, layout)
        # 3 handle edges + 3 teeth against 3 stops + (3 - 1) / 2
        self.assertEqual(cut.rhs, 1.0)
        self.assertAlmostEqual(cut.violation(point), 2.0)
        self.assertEqual(keep_violated([cut], point, min_violation()), [cut])

    def test_even_teeth_rejected(self):
        inst, point = self.comb_point([(1, 4), (2, 5)])
        self.assertEqual(separate_two_matching(point, inst), [])

    def test_teeth_share_no_endpoint(self):
        inst, point = self.comb_point([(1, 4), (2, 4), (3, 6)])
        # (2, 4) is dropped, leaving two teeth
        self.assertEqual(separate_two_matching(point, inst), [])


class SoundnessTests(SimpleTestCase):

    def collect_cuts(self, inst, rounds=4):
        relaxation = ModelRelaxation(build_model(inst))
        pool = CutPool()
        emitted = []
        for _ in range(rounds):
            result, point, _ = relaxation.solve()
            if point is None:
                break
            cuts = separate_all(point, inst, pool=pool)
            for cut in cuts:
                self.assertGreater(cut.violation(point), 1e-4, cut.name)
            if not cuts:
                break
            pool.add(cuts)
            relaxation.add_rows(cuts)
            emitted.extend(cuts)
        return emitted

    def test_cuts_valid_for_every_feasible_solution(self):
        for inst in dense_corpus(4, n=5, seed=3):
            cuts = self.collect_cuts(inst)
            solutions = [sol for sol, _ in enumerate_solutions(inst)]
            for cut in cuts:
                for sol in solutions:
                    self.assertTrue(check_cut_validity(inst, cut, sol), f"{cut.name} cuts off {sol}")

    def test_round_cap_and_order(self):
        inst = line_instance(6)
        sol = Solution(gv_ring=[0, 1, 2], assignment={i: i for i in range(6)},
                       detached_gv_cycles=[[3, 4, 5]])
        point = solution_to_point(inst, sol)
        cuts = separate_all(point, inst, max_cuts=2)
        self.assertEqual(len(cuts), 2)
        violations = [cut.violation(point) for cut in cuts]
        self.assertEqual(violations, sorted(violations, reverse=True))

    def test_pool_skips_known_cuts(self):
        inst = line_instance(6)
        sol = Solution(gv_ring=[0, 1, 2], assignment={i: i for i in range(6)},
                       detached_gv_cycles=[[3, 4, 5]])
        point = solution_to_point(inst, sol)
        pool = CutPool()
        first = separate_all(point, inst, pool=pool)
        self.assertEqual(len(pool.add(first)), len(first))
        self.assertEqual(pool.add(first), [])
        self.assertEqual(pool.counts[GV_CONNECTIVITY], len(first))
        self.assertEqual(separate_all(point, inst, pool=pool), [])
