from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from instances.fixtures import TINY4_OPTIMUM, random_corpus, single_target, tiny4
from instances.generators import generate_instance
from instances.validators import build_instance
from verification.feasibility import check_feasibility
from verification.metrics import route_cost

from .brute_force import brute_force, enumerate_solutions


class BruteForceTests(SimpleTestCase):

    def test_single_target(self):
        sol, cost = brute_force(single_target())
        self.assertEqual(cost, 0.0)
        self.assertEqual(sol.gv_ring, [0])

    def test_two_targets_in_range(self):
        inst = build_instance([(0, 0), (6, 8)], R=25, alpha=0.3)
        sol, cost = brute_force(inst)
        self.assertAlmostEqual(cost, min(2 * 10.0, 2 * 0.3 * 10.0))
        self.assertEqual(sol.subtours, {0: [1]})

    def test_two_targets_out_of_range(self):
        inst = build_instance([(0, 0), (60, 80)], R=25, alpha=0.3)
        sol, cost = brute_force(inst)
        self.assertAlmostEqual(cost, 200.0)
        self.assertEqual(sol.gv_ring, [0, 1])

    def test_tiny4(self):
        inst = tiny4()
        sol, cost = brute_force(inst)
        self.assertAlmostEqual(cost, TINY4_OPTIMUM, places=9)
        self.assertEqual(sol.gv_ring, [0, 1])
        self.assertEqual(sol.subtours, {1: [2, 3]})

    def test_solutions_are_feasible_and_costed(self):
        for inst in random_corpus(6, sizes=(4, 5, 6)):
            sol, cost = brute_force(inst)
            self.assertTrue(check_feasibility(inst, sol)['ok'])
            self.assertAlmostEqual(route_cost(inst, sol), cost, places=9)

    def test_every_enumerated_solution_is_feasible(self):
        inst = tiny4()
        for sol, cost in enumerate_solutions(inst):
            self.assertTrue(check_feasibility(inst, sol)['ok'])
            self.assertAlmostEqual(route_cost(inst, sol), cost, places=9)

    def test_strict_mode_needs_three_stops(self):
        sol, cost = brute_force(tiny4(), strict_rings=True)
        self.assertGreaterEqual(len(sol.gv_ring), 3)
        self.assertGreater(cost, TINY4_OPTIMUM)

    def test_alpha_monotone(self):
        for seed in range(4):
            costs = [brute_force(generate_instance('A', 6, alpha, seed))[1] for alpha in (0.1, 0.2, 0.3)]
            self.assertLessEqual(costs[0], costs[1] + 1e-9)
            self.assertLessEqual(costs[1], costs[2] + 1e-9)

    def test_size_cap(self):
        with self.assertRaises(ValidationError):
            brute_force(generate_instance('A', 9, 0.1, 0))
