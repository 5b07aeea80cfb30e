import tempfile
from pathlib import Path

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from .domain import TargetSet
from .file_io import dumps_instance, load_instance, loads_instance, save_instance
from .fixtures import five_targets, tiny4
from .generators import corpus_file_name, generate_corpus, generate_instance
from .instance_utils import cut_sets, neighborhood
from .validators import build_instance


class GenerateInstanceTests(SimpleTestCase):

    def test_class_a_recipe(self):
        inst = generate_instance('A', 20, 0.1, seed=3)
        self.assertEqual(inst.n, 20)
        self.assertEqual(inst.R, 25.0)
        self.assertTrue(np.all((inst.targets >= 0) & (inst.targets <= 100)))
        np.testing.assert_allclose(inst.c, inst.euclid)
        np.testing.assert_allclose(inst.d, 0.1 * inst.c)

    def test_single_target(self):
        inst = generate_instance('A', 1, 0.1, seed=5)
        self.assertEqual(inst.c.shape, (1, 1))
        self.assertEqual(inst.c[0, 0], 0.0)
        self.assertEqual(inst.d[0, 0], 0.0)

    def test_alpha_only_scales_d(self):
        low = generate_instance('A', 30, 0.1, seed=11)
        high = generate_instance('A', 30, 0.2, seed=11)
        np.testing.assert_array_equal(low.targets, high.targets)
        np.testing.assert_allclose(high.d, 2 * low.d)

    def test_deterministic(self):
        for tag in ('A', 'B', 'C'):
            first = generate_instance(tag, 15, 0.2, seed=7)
            second = generate_instance(tag, 15, 0.2, seed=7)
            np.testing.assert_array_equal(first.targets, second.targets)
            np.testing.assert_array_equal(first.d, second.d)

    def test_class_b_stays_on_grid(self):
        inst = generate_instance('B', 40, 0.3, seed=2)
        self.assertEqual(inst.class_tag, 'B')
        self.assertTrue(np.all((inst.targets >= 0) & (inst.targets <= 100)))

    def test_triangle_inequality(self):
        inst = generate_instance('B', 12, 0.3, seed=9)
        for m in (inst.c, inst.d):
            via = m[:, :, None] + m[None, :, :]
            self.assertTrue(np.all(m[:, None, :] <= via + 1e-9))

    def test_rejects_bad_arguments(self):
        with self.assertRaises(ValidationError):
            generate_instance('Z', 5, 0.1, seed=0)
        with self.assertRaises(ValidationError):
            generate_instance('A', 0, 0.1, seed=0)
        with self.assertRaises(ValidationError):
            generate_instance('A', 5, 0.0, seed=0)

    def test_penalty_matrix(self):
        inst = tiny4()
        self.assertEqual(inst.f[0, 1], 0.0)
        expected_big = 10 * (inst.c.sum() + inst.d.sum())
        self.assertAlmostEqual(inst.f[0, 2], expected_big)
        self.assertAlmostEqual(inst.big, expected_big)

    def test_instance_is_read_only(self):
        inst = tiny4()
        with self.assertRaises(ValueError):
            inst.c[0, 1] = 3.0


class NeighborhoodTests(SimpleTestCase):

    def test_tiny4_base(self):
        self.assertEqual(neighborhood(tiny4(), 0), TargetSet.of({0, 1, 3}))

    def test_isolated_target(self):
        inst = build_instance([(0, 0), (90, 90)], R=25, alpha=0.1)
        self.assertEqual(neighborhood(inst, 1), TargetSet.of({1}))

    def test_coincident_targets(self):
        inst = build_instance([(0, 0), (5, 5), (5, 5)], R=1, alpha=0.1)
        self.assertIn(2, neighborhood(inst, 1))
        self.assertIn(1, neighborhood(inst, 2))

    def test_symmetry(self):
        inst = generate_instance('B', 25, 0.2, seed=4)
        for i in range(inst.n):
            for j in neighborhood(inst, i):
                self.assertIn(i, neighborhood(inst, j))

    def test_out_of_range(self):
        with self.assertRaises(ValidationError):
            neighborhood(tiny4(), 4)


class CutSetTests(SimpleTestCase):

    def test_full_set(self):
        inst = tiny4()
        sets = cut_sets(inst, TargetSet.of(range(inst.n)))
        self.assertEqual(sets.delta_edges, [])
        self.assertEqual(sets.gamma_edges, inst.edges())

    def test_singleton(self):
        sets = cut_sets(tiny4(), TargetSet.of({2}))
        self.assertEqual(sets.delta_edges, [(0, 2), (1, 2), (2, 3)])
        self.assertEqual(sets.gamma_edges, [])

    def test_tiny4_pair(self):
        self.assertEqual(len(cut_sets(tiny4(), TargetSet.of({1, 2})).delta_edges), 4)

    def test_arc_orientation(self):
        sets = cut_sets(tiny4(), TargetSet.of({1}))
        self.assertIn((0, 1), sets.delta_in_arcs)
        self.assertIn((1, 0), sets.delta_out_arcs)
        self.assertNotIn((1, 1), sets.delta_in_arcs + sets.delta_out_arcs)

    def test_partition(self):
        inst = generate_instance('A', 7, 0.1, seed=1)
        S = TargetSet.of({0, 3, 5})
        rest = TargetSet.of(set(range(inst.n)) - {0, 3, 5})
        inside, outside = cut_sets(inst, S), cut_sets(inst, rest)
        for e in inst.edges():
            hits = (e in inside.gamma_edges) + (e in inside.delta_edges) + (e in outside.gamma_edges)
            self.assertEqual(hits, 1)

    def test_empty_set(self):
        sets = cut_sets(tiny4(), TargetSet())
        self.assertEqual(sets.delta_edges, [])
        self.assertEqual(sets.delta_in_arcs, [])


class InstanceFileTests(SimpleTestCase):

    def test_round_trip_is_byte_identical(self):
        with tempfile.TemporaryDirectory() as tmp:
            for inst in (generate_instance('B', 9, 0.3, seed=8), five_targets()):
                first = Path(tmp) / 'first.txt'
                second = Path(tmp) / 'second.txt'
                save_instance(inst, first)
                save_instance(load_instance(first), second)
                self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_explicit_matrices_round_trip(self):
        inst = build_instance([(0, 0), (3, 4)], R=10, alpha=1.0,
                              c=[[0, 7], [7, 0]], d=[[0, 2], [3, 0]])
        text = dumps_instance(inst)
        self.assertIn('CMAT', text)
        self.assertEqual(dumps_instance(loads_instance(text)), text)
        self.assertEqual(loads_instance(text).d[1, 0], 3.0)

    def test_non_positive_range(self):
        text = dumps_instance(tiny4()).replace('R 15.0', 'R -1.0')
        with self.assertRaisesMessage(ValidationError, 'field R'):
            loads_instance(text)

    def test_asymmetric_c(self):
        text = dumps_instance(tiny4()) + 'CMAT\n0 1 2 1\n1 0 1 1\n2 1 0 1\n1.5 1 1 0\n'
        with self.assertRaisesMessage(ValidationError, 'c[0][3] != c[3][0]'):
            loads_instance(text)

    def test_malformed_target_line(self):
        text = dumps_instance(tiny4()).replace('2 20.0 0.0', '2 twenty 0.0')
        with self.assertRaisesMessage(ValidationError, 'line 8'):
            loads_instance(text)

    def test_bad_header(self):
        with self.assertRaises(ValidationError):
            loads_instance('TSP 1\nN 1\n')

    def test_corpus_names(self):
        self.assertEqual(corpus_file_name('A', 20, 0.1, 3), 'A_n20_a0.1_s3.txt')
        with tempfile.TemporaryDirectory() as tmp:
            paths = generate_corpus('A', 6, 0.2, 10, 3, tmp)
            self.assertEqual([p.name for p in paths],
                             ['A_n6_a0.2_s10.txt', 'A_n6_a0.2_s11.txt', 'A_n6_a0.2_s12.txt'])
            self.assertEqual(load_instance(paths[1]).seed, 11)
