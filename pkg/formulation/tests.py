import numpy as np
from django.test import SimpleTestCase

from instances.fixtures import (TINY4_OPTIMUM, five_targets, five_targets_cost, random_corpus, single_target,
                                tiny4)
from instances.validators import build_instance
from oracle.brute_force import enumerate_solutions
from verification.domain import Solution

from .lp_export import dumps_lp
from .model_builder import ModelOptions, build_model
from .objective import (check_cut_validity, evaluate_objective, point_to_solution,
                        solution_to_point)
from .rows import GE, LE, Row


def tiny4_optimum_solution():
    return Solution.from_routes([0, 1], {1: [2, 3]})


class BuildModelTests(SimpleTestCase):

    def test_single_target_model(self):
        model = build_model(single_target())
        self.assertEqual(model.n_columns, 3)
        self.assertNotIn('degx', model.row_counts())
        point = solution_to_point(model.inst, Solution.from_routes([0]))
        for row in model.rows:
            self.assertTrue(row.is_satisfied(point), row.name)

    def test_column_and_row_counts(self):
        model = build_model(tiny4())
        layout = model.layout
        self.assertEqual(len(layout.edges), 6)
        self.assertEqual(layout.z_slice.stop - layout.z_slice.start, 64)
        counts = model.row_counts()
        self.assertEqual(counts['assign'], 4)
        self.assertEqual(counts['zlin1'], 64)
        self.assertEqual(counts['zlin2'], 48)
        self.assertEqual(counts['zlin3'], 64)
        self.assertEqual(counts['gv_vi'], 12)

    def test_out_of_range_assignment_fixed(self):
        model = build_model(tiny4())
        layout = model.layout
        # target 2 is 20 away from the base, R = 15
        self.assertEqual(model.ub[layout.y(2, 0)], 0.0)
        self.assertEqual(model.ub[layout.y(0, 2)], 0.0)
        self.assertEqual(model.lb[layout.y(0, 0)], 1.0)
        self.assertEqual(model.ub[layout.x(0, 1)], 2.0)

    def test_penalty_mode_keeps_columns_free(self):
        inst = tiny4()
        model = build_model(inst, ModelOptions(use_penalty_f=True))
        self.assertEqual(model.ub[model.layout.y(2, 1)], 1.0)
        self.assertEqual(model.objective[model.layout.y(2, 1)], 0.0)
        self.assertEqual(model.objective[model.layout.y(2, 0)], inst.big)

    def test_strict_mode_binary_base_edges(self):
        model = build_model(tiny4(), ModelOptions(strict_rings=True))
        self.assertEqual(model.ub[model.layout.x(0, 1)], 1.0)

    def test_valid_inequalities_optional(self):
        model = build_model(tiny4(), ModelOptions(include_valid_inequalities=False))
        self.assertNotIn('gv_vi', model.row_counts())
        self.assertNotIn('assign_vi', model.row_counts())

    def test_linearization_matches_product(self):
        inst = build_instance([(0.0, 0.0), (5.0, 0.0)], R=10.0, alpha=0.5)
        model = build_model(inst)
        layout = model.layout
        rows = [r for r in model.rows if r.name.endswith('[0,1,1]') and r.name.startswith('zlin')]
        self.assertEqual(len(rows), 3)
        for a in (0, 1):
            for b in (0, 1):
                for z in (0, 1):
                    point = np.zeros(layout.size)
                    point[layout.y(0, 1)] = a
                    point[layout.y(1, 1)] = b
                    point[layout.z(0, 1, 1)] = z
                    satisfied = all(r.is_satisfied(point) for r in rows)
                    self.assertEqual(satisfied, z == a * b, (a, b, z))


class ObjectiveTests(SimpleTestCase):

    def test_five_targets_cost(self):
        inst = five_targets()
        sol = Solution.from_routes([0, 1, 4], {1: [2, 3]})
        self.assertAlmostEqual(evaluate_objective(inst, sol), five_targets_cost(inst))

    def test_tiny4_cost(self):
        self.assertAlmostEqual(evaluate_objective(tiny4(), tiny4_optimum_solution()), TINY4_OPTIMUM)

    def test_penalty_is_zero_when_in_range(self):
        inst = tiny4()
        sol = tiny4_optimum_solution()
        self.assertAlmostEqual(evaluate_objective(inst, sol, use_penalty_f=True),
                               evaluate_objective(inst, sol))

    def test_point_satisfies_static_rows(self):
        inst = tiny4()
        model = build_model(inst)
        point = solution_to_point(inst, tiny4_optimum_solution())
        self.assertTrue(np.all(point >= model.lb) and np.all(point <= model.ub))
        for row in model.rows:
            self.assertTrue(row.is_satisfied(point), row.name)
        self.assertAlmostEqual(float(model.objective @ point), TINY4_OPTIMUM)

    def test_enumerated_solutions_fit_the_model(self):
        for inst in random_corpus(3, sizes=(4, 5), seed=7):
            model = build_model(inst)
            for sol, cost in enumerate_solutions(inst):
                if len(sol.gv_ring) < 2 and inst.n > 1:
                    # base-only routes live outside the model
                    continue
                point = solution_to_point(inst, sol)
                self.assertAlmostEqual(float(model.objective @ point), cost, places=6)
                for row in model.rows:
                    self.assertTrue(row.is_satisfied(point), f"{row.name} for {sol}")

    def test_check_cut_validity(self):
        inst = tiny4()
        sol = tiny4_optimum_solution()
        layout = build_model(inst).layout
        valid = Row.from_terms('ring', [(layout.x(0, j), 1.0) for j in (1, 2, 3)], GE, 2.0)
        self.assertTrue(check_cut_validity(inst, valid, sol))
        self.assertFalse(check_cut_validity(inst, Row.from_terms('bogus', [], GE, 1.0), sol))
        tight = Row.from_terms('tight', [(layout.w(1, 2), 1.0)], LE, 0.0)
        self.assertFalse(check_cut_validity(inst, tight, sol))


class PointToSolutionTests(SimpleTestCase):

    def test_round_trip(self):
        inst = tiny4()
        sol = tiny4_optimum_solution()
        decoded = point_to_solution(inst, solution_to_point(inst, sol))
        self.assertEqual(decoded.gv_ring, [0, 1])
        self.assertEqual(decoded.subtours, {1: [2, 3]})
        self.assertEqual(decoded.assignment, sol.assignment)
        self.assertEqual(decoded.detached_uav_cycles, [])

    def test_fractional_point(self):
        inst = tiny4()
        point = solution_to_point(inst, tiny4_optimum_solution())
        point[build_model(inst).layout.x(0, 2)] = 0.5
        self.assertIsNone(point_to_solution(inst, point))

    def test_detached_uav_cycle(self):
        inst = tiny4()
        sol = Solution(gv_ring=[0, 1], subtours={}, assignment={0: 0, 1: 1, 2: 1, 3: 1},
                       detached_uav_cycles=[[2, 3]])
        decoded = point_to_solution(inst, solution_to_point(inst, sol))
        self.assertEqual(decoded.subtours, {})
        self.assertEqual(decoded.detached_uav_cycles, [[2, 3]])

    def test_detached_gv_cycle(self):
        inst = build_instance([(0.0, 0.0), (40.0, 0.0), (60.0, 0.0), (70.0, 20.0), (60.0, 40.0)], R=5.0, alpha=0.5)
        sol = Solution(gv_ring=[0, 1], assignment={i: i for i in range(5)},
                       detached_gv_cycles=[[2, 3, 4]])
        decoded = point_to_solution(inst, solution_to_point(inst, sol))
        self.assertEqual(decoded.gv_ring, [0, 1])
        self.assertEqual(decoded.detached_gv_cycles, [[2, 3, 4]])


class LpExportTests(SimpleTestCase):

    def test_sections(self):
        text = dumps_lp(build_model(tiny4()))
        for section in ('Minimize', 'Subject To', 'Bounds', 'Generals', 'Binaries', 'End'):
            self.assertIn(f"\n{section}\n" if section != 'Minimize' else section, text)
        self.assertIn(' y_0_0 = 1.0', text)
        self.assertIn('0.0 <= x_0_1 <= 2.0', text)

    def test_cut_rows_appended(self):
        model = build_model(single_target())
        cut = Row.from_terms('extra[0]', [(model.layout.y(0, 0), 1.0)], LE, 1.0)
        text = dumps_lp(model, [cut])
        self.assertIn(' extra(0): 1.0 y_0_0 <= 1.0', text)
        self.assertTrue(text.endswith('End\n'))
