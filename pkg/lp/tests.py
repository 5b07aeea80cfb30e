import numpy as np
from django.test import SimpleTestCase

from formulation.model_builder import build_model
from formulation.rows import GE, Row
from instances.fixtures import TINY4_OPTIMUM, random_corpus, tiny4
from oracle.brute_force import brute_force

from .backends import INFEASIBLE, OPTIMAL, LpProblem, solve_lp
from .relaxation import ModelRelaxation


def problem(A, lo, hi, c, lb, ub):
    return LpProblem(np.array(A, dtype=float).reshape(len(lo), len(c)), np.array(lo, dtype=float),
                     np.array(hi, dtype=float), np.array(c, dtype=float),
                     np.array(lb, dtype=float), np.array(ub, dtype=float))


def random_problem(seed, m=8, n=12):
    rng = np.random.default_rng(seed)
    A = rng.uniform(-1, 1, size=(m, n))
    x_feasible = rng.uniform(0, 1, size=n)
    activity = A @ x_feasible
    lo = activity - rng.uniform(0, 1, size=m)
    hi = np.where(rng.uniform(size=m) < 0.5, np.inf, activity + rng.uniform(0, 1, size=m))
    return LpProblem(A, lo, hi, rng.uniform(-1, 1, size=n), np.zeros(n), np.ones(n))


class SolveLpTests(SimpleTestCase):

    def test_min_x(self):
        result = solve_lp(problem(np.zeros((0, 1)), [], [], [1.0], [0.0], [5.0]))
        self.assertEqual(result.status, OPTIMAL)
        self.assertAlmostEqual(result.x[0], 0.0)

    def test_infeasible_pair(self):
        p = problem([[1.0], [1.0]], [-np.inf, 1.0], [0.0, np.inf], [1.0], [-10.0], [10.0])
        self.assertEqual(solve_lp(p).status, INFEASIBLE)

    def test_small_lp(self):
        # max x + y s.t. x + 2y <= 4, 3x + y <= 6
        p = problem([[1, 2], [3, 1]], [-np.inf, -np.inf], [4, 6], [-1, -1], [0, 0], [10, 10])
        result = solve_lp(p)
        self.assertEqual(result.status, OPTIMAL)
        self.assertAlmostEqual(result.objective, -2.8)
        np.testing.assert_allclose(result.x, [1.6, 1.2], atol=1e-9)

    def test_equality_rows(self):
        p = problem([[1, 1, 1]], [3], [3], [1, 2, 3], [0, 0, 0], [2, 2, 2])
        result = solve_lp(p)
        self.assertAlmostEqual(result.objective, 1 * 2 + 2 * 1)

    def test_backends_agree(self):
        for seed in range(15):
            p = random_problem(seed)
            ours = solve_lp(p, backend='simplex')
            theirs = solve_lp(p, backend='highs')
            self.assertEqual(ours.status, theirs.status)
            if ours.is_optimal:
                self.assertAlmostEqual(ours.objective, theirs.objective, places=6)
                activity = p.A @ ours.x
                self.assertTrue(np.all(activity >= p.row_lo - 1e-7))
                self.assertTrue(np.all(activity <= p.row_hi + 1e-7))

    def test_objective_matches_primal(self):
        result = solve_lp(random_problem(3))
        self.assertAlmostEqual(result.objective, float(random_problem(3).c @ result.x), places=7)

    def test_warm_start_after_cut(self):
        for seed in range(10):
            p = random_problem(seed)
            first = solve_lp(p)
            if not first.is_optimal:
                continue
            cut = -np.ones((1, p.n_cols))
            bound = float(cut @ first.x) + 0.5
            q = p.with_rows(cut, np.array([bound]), np.array([np.inf]))
            warm = solve_lp(q, warm_basis=first.basis)
            cold = solve_lp(q)
            self.assertEqual(warm.status, cold.status)
            if cold.is_optimal:
                self.assertAlmostEqual(warm.objective, cold.objective, places=6)
                self.assertGreaterEqual(warm.objective, first.objective - 1e-9)

    def test_warm_start_after_bound_change(self):
        p = random_problem(4)
        first = solve_lp(p)
        lb, ub = p.lb.copy(), p.ub.copy()
        j = int(np.argmax(np.minimum(first.x, 1 - first.x)))
        ub[j] = 0.0
        warm = solve_lp(p.with_bounds(lb, ub), warm_basis=first.basis)
        cold = solve_lp(p.with_bounds(lb, ub))
        self.assertEqual(warm.status, cold.status)
        if cold.is_optimal:
            self.assertAlmostEqual(warm.objective, cold.objective, places=6)

    def test_iteration_cap_reported(self):
        result = solve_lp(random_problem(5, m=20, n=30), max_iterations=1)
        self.assertIn(result.status, ('iteration_limit', OPTIMAL))


class ModelRelaxationTests(SimpleTestCase):

    def test_tiny4_root_bound(self):
        relaxation = ModelRelaxation(build_model(tiny4()))
        result, point, value = relaxation.solve()
        self.assertEqual(result.status, OPTIMAL)
        self.assertLessEqual(value, TINY4_OPTIMUM + 1e-7)
        self.assertEqual(point.shape[0], relaxation.model.n_columns)

    def test_root_bound_below_oracle(self):
        for inst in random_corpus(5, sizes=(4, 5, 6), seed=30):
            _, optimum = brute_force(inst)
            _, _, value = ModelRelaxation(build_model(inst)).solve()
            self.assertLessEqual(value, optimum + 1e-6)

    def test_backends_agree_on_model(self):
        relaxation = ModelRelaxation(build_model(tiny4()))
        _, _, ours = relaxation.solve(backend='simplex')
        _, _, theirs = relaxation.solve(backend='highs')
        self.assertAlmostEqual(ours, theirs, places=6)

    def test_cut_never_lowers_bound(self):
        inst = tiny4()
        model = build_model(inst)
        relaxation = ModelRelaxation(model)
        result, point, before = relaxation.solve()
        # x_01 + x_02 + x_03 >= 2 is valid: the base is always a stop
        layout = model.layout
        row = Row.from_terms('base_degree', [(layout.x(0, j), 1.0) for j in (1, 2, 3)], GE, 2.0)
        relaxation.add_rows([row])
        _, _, after = relaxation.solve(warm_basis=result.basis)
        self.assertGreaterEqual(after, before - 1e-9)

    def test_fixed_columns_are_presolved(self):
        model = build_model(tiny4())
        relaxation = ModelRelaxation(model)
        self.assertLess(relaxation.n_active, model.n_columns)
        self.assertEqual(relaxation.position[model.layout.y(2, 0)], -1)
