from django.core.exceptions import ValidationError
from django.test import SimpleTestCase
from rest_framework.renderers import JSONRenderer

from instances.fixtures import TINY4_OPTIMUM, five_targets, five_targets_cost, single_target, tiny4
from instances.validators import build_instance

from .domain import Solution
from .feasibility import check_feasibility
from .metrics import relative_gap, route_cost
from .serializers import SolutionSerializer
from .solution_io import dumps_solution, loads_solution


def tiny4_optimal():
    return Solution.from_routes([0, 1], {1: [2, 3]})


class CheckFeasibilityTests(SimpleTestCase):

    def test_tiny4_optimum(self):
        inst = tiny4()
        report = check_feasibility(inst, tiny4_optimal())
        self.assertTrue(report['ok'], report['violations'])
        self.assertAlmostEqual(route_cost(inst, tiny4_optimal()), TINY4_OPTIMUM)

    def test_base_only(self):
        self.assertTrue(check_feasibility(single_target(), Solution.from_routes([0]))['ok'])

    def test_five_targets_solution(self):
        inst = five_targets()
        sol = Solution.from_routes([0, 1, 4], {1: [2, 3]})
        self.assertTrue(check_feasibility(inst, sol)['ok'])
        self.assertAlmostEqual(route_cost(inst, sol), five_targets_cost(inst))

    def test_out_of_range_assignment(self):
        sol = Solution.from_routes([0, 1, 3], {0: [2]})
        report = check_feasibility(tiny4(), sol)
        self.assertFalse(report['ok'])
        self.assertTrue(any('target 2 served from stop 0' in v for v in report['violations']))

    def test_detached_cycles(self):
        inst = build_instance(
            [(0, 0), (10, 0), (5, 8), (60, 60), (70, 60), (65, 68), (30, 90), (35, 95), (30, 98)],
            R=15, alpha=0.3,
        )
        sol = Solution(
            gv_ring=[0, 1, 2],
            assignment={t: t for t in range(6)} | {6: 6, 7: 6, 8: 6},
            detached_gv_cycles=[[3, 4, 5]],
            detached_uav_cycles=[[6, 7, 8]],
        )
        violations = check_feasibility(inst, sol)['violations']
        self.assertIn('detached GV cycle [3, 4, 5] not connected to base 0', violations)
        self.assertIn('detached UAV cycle [6, 7, 8] not rooted at a GV stop', violations)
        self.assertIn('target 7 is not visited', violations)

    def test_missing_and_duplicate_targets(self):
        sol = Solution.from_routes([0, 1], {1: [2, 2]})
        violations = check_feasibility(tiny4(), sol)['violations']
        self.assertIn('target 3 is not visited', violations)
        self.assertIn('target 2 is visited 2 times', violations)

    def test_ring_must_start_at_base(self):
        sol = Solution.from_routes([1, 0], {1: [2, 3]})
        violations = check_feasibility(tiny4(), sol)['violations']
        self.assertIn('GV ring starts at 1, expected base 0', violations)

    def test_subtour_root_not_a_stop(self):
        sol = Solution(gv_ring=[0, 1], subtours={3: [2]}, assignment={0: 0, 1: 1, 2: 3, 3: 3})
        violations = check_feasibility(tiny4(), sol)['violations']
        self.assertIn('sub-tour root 3 is not a GV stop', violations)

    def test_strict_mode_rejects_degenerate_rings(self):
        self.assertTrue(check_feasibility(tiny4(), tiny4_optimal())['ok'])
        self.assertFalse(check_feasibility(tiny4(), tiny4_optimal(), strict_rings=True)['ok'])

    def test_bad_indices_tolerated(self):
        report = check_feasibility(tiny4(), Solution(gv_ring=[0, 9]))
        self.assertFalse(report['ok'])


class RelativeGapTests(SimpleTestCase):

    def test_values(self):
        self.assertEqual(relative_gap(100, 100), 0.0)
        self.assertAlmostEqual(relative_gap(105, 100), 5.0)

    def test_rejects_non_positive_reference(self):
        with self.assertRaises(ValidationError):
            relative_gap(1.0, 0.0)

    def test_rejects_cost_below_optimum(self):
        with self.assertRaises(ValidationError):
            relative_gap(90.0, 100.0)


class SolutionFileTests(SimpleTestCase):

    def test_round_trip(self):
        sol = Solution.from_routes([0, 1, 4], {1: [3, 2]})
        parsed, cost = loads_solution(dumps_solution(sol, 12.5))
        self.assertEqual(parsed.gv_ring, [0, 1, 4])
        self.assertEqual(parsed.subtours, {1: [3, 2]})
        self.assertEqual(parsed.assignment[2], 1)
        self.assertEqual(cost, 12.5)

    def test_format(self):
        text = dumps_solution(tiny4_optimal(), 1.0)
        self.assertTrue(text.startswith('GVRING 0 1\nSUBTOUR 1: 2 3\nASSIGN 0 0\n'))
        self.assertTrue(text.endswith('COST 1.0\n'))

    def test_malformed(self):
        with self.assertRaisesMessage(ValidationError, 'line 2'):
            loads_solution('GVRING 0 1\nSUBTOUR 1 2 3\n')
        with self.assertRaises(ValidationError):
            loads_solution('ASSIGN 0 0\n')

    def test_serializer(self):
        payload = JSONRenderer().render(SolutionSerializer(tiny4_optimal()).data)
        self.assertIn(b'"gv_ring":[0,1]', payload)
