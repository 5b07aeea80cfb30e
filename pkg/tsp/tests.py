import itertools

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from .tours import tour_cost, tsp_exact, tsp_exact_small, tsp_heuristic, two_opt_pass


def euclidean(points):
    points = np.asarray(points, dtype=float)
    return np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2))


def brute_force_cost(cost):
    m = cost.shape[0]
    best = np.inf
    for perm in itertools.permutations(range(1, m)):
        best = min(best, tour_cost(cost, [0, *perm]))
    return best


class TspHeuristicTests(SimpleTestCase):

    def test_single_node(self):
        cost = np.zeros((1, 1))
        tour = tsp_heuristic(cost, [0])
        self.assertEqual(tour, [0])
        self.assertEqual(tour_cost(cost, tour), 0.0)

    def test_two_nodes_out_and_back(self):
        cost = euclidean([(0, 0), (3, 4)])
        self.assertEqual(tour_cost(cost, tsp_heuristic(cost, [0, 1])), 10.0)

    def test_triangle(self):
        cost = euclidean([(0, 0), (3, 0), (0, 4)])
        tour = tsp_heuristic(cost, [0, 1, 2])
        self.assertEqual(sorted(tour), [0, 1, 2])
        self.assertAlmostEqual(tour_cost(cost, tour), 12.0)

    def test_anchored_at_first_node(self):
        cost = euclidean(np.random.default_rng(1).uniform(0, 100, size=(9, 2)))
        tour = tsp_heuristic(cost, [4, 0, 1, 2, 3, 5, 6, 7, 8])
        self.assertEqual(tour[0], 4)
        self.assertEqual(sorted(tour), list(range(9)))

    def test_two_opt_local_optimum(self):
        for seed in range(10):
            cost = euclidean(np.random.default_rng(seed).uniform(0, 100, size=(12, 2)))
            tour = tsp_heuristic(cost, list(range(12)))
            _, improved = two_opt_pass(cost, tour)
            self.assertFalse(improved)

    def test_close_to_optimum_on_random_sets(self):
        within = 0
        for seed in range(200):
            cost = euclidean(np.random.default_rng(seed).uniform(0, 100, size=(8, 2)))
            heuristic = tour_cost(cost, tsp_heuristic(cost, list(range(8))))
            optimum = tour_cost(cost, tsp_exact_small(cost))
            self.assertGreaterEqual(heuristic, optimum - 1e-9)
            within += heuristic <= 1.05 * optimum
        self.assertGreaterEqual(within, 190)


class TspExactTests(SimpleTestCase):

    def test_two_nodes(self):
        cost = np.array([[0.0, 3.0], [5.0, 0.0]])
        self.assertEqual(tour_cost(cost, tsp_exact_small(cost)), 8.0)

    def test_unit_square(self):
        cost = euclidean([(0, 0), (1, 1), (1, 0), (0, 1)])
        self.assertAlmostEqual(tour_cost(cost, tsp_exact_small(cost)), 4.0)

    def test_matches_permutation_enumeration(self):
        for m in range(3, 9):
            rng = np.random.default_rng(m)
            cost = rng.uniform(1, 10, size=(m, m))
            np.fill_diagonal(cost, 0.0)
            self.assertAlmostEqual(tour_cost(cost, tsp_exact_small(cost)), brute_force_cost(cost))

    def test_node_subset(self):
        cost = euclidean([(0, 0), (50, 50), (1, 0), (1, 1), (0, 1)])
        tour = tsp_exact(cost, [2, 0, 3, 4])
        self.assertEqual(tour[0], 2)
        self.assertAlmostEqual(tour_cost(cost, tour), 4.0)

    def test_size_cap(self):
        with self.assertRaises(ValidationError):
            tsp_exact_small(np.zeros((14, 14)))
