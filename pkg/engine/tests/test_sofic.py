import os
import unittest
from itertools import product

import autsub
from autsub.lib.utils import read_substitution_file
from autsub.radic import RAdicRational
from autsub.sofic import column_number, kappa_admissible, \
    periodic_points_count, shortest_forbidden, subset_graph, to_dot
from autsub.substitution import parse_substitution, theta_power_word

SAMPLES = os.path.join(os.path.dirname(autsub.__file__), "samples")


def sample(name):
    return read_substitution_file(os.path.join(SAMPLES, name))


def subset(text):
    return frozenset(text)


class SubsetGraphTestCase(unittest.TestCase):

    def setUp(self):
        self.s = sample("coincidence.sub")
        self.automaton = subset_graph(self.s)

    def test_invariants(self):
        self.assertEqual(self.automaton.c, 1)
        self.assertEqual(self.automaton.j, 1)
        self.assertEqual(self.automaton.periodic_count, 4)
        self.assertTrue(self.automaton.augment)
        self.assertFalse(self.automaton.sigma_empty)
        self.assertEqual(self.automaton.denominator_bound, 3)

    def test_edges(self):
        edges = {(source, target, tuple(labels))
                 for source, target, labels in self.automaton.edges()}
        self.assertEqual(edges, {
            (subset("abc"), subset("abc"), (3,)),
            (subset("ac"), subset("abc"), (0,)),
            (subset("ab"), subset("abc"), (2,)),
            (subset("ac"), subset("ac"), (0, 3)),
            (subset("ac"), subset("ab"), (0,)),
            (subset("ab"), subset("ab"), (2,)),
            (subset("bc"), subset("ab"), (3,)),
            (subset("ab"), subset("bc"), (2, 3)),
        })
        self.assertEqual(self.automaton.vertices()[0], subset("abc"))

    def test_paths_are_the_allowed_words(self):
        for length in range(7):
            allowed = {w for w in product(range(self.s.r), repeat=length)
                       if self.automaton.allows(w)}
            self.assertEqual(set(self.automaton.path_words(length)), allowed)

    def test_multiplicity_at_finite_scale(self):
        """forbidden digit words see exactly c letters across the θ^n(a)"""
        for name in ("coincidence.sub", "shift_root.sub"):
            s = sample(name)
            automaton = subset_graph(s)
            counts = []
            for length in range(1, 6):
                blocks = [theta_power_word(s, a, length) for a in s.alphabet]
                for digits in product(range(s.r), repeat=length):
                    position = sum(d * s.r ** i for i, d in enumerate(digits))
                    count = len({block[position] for block in blocks})
                    if automaton.allows(digits):
                        self.assertGreater(count, automaton.c)
                    else:
                        self.assertEqual(count, automaton.c)
                    counts.append(count)
            self.assertEqual(min(counts), automaton.c, name)
            self.assertGreater(max(counts), automaton.c, name)

    def test_bijective_columns_allow_nothing(self):
        s = parse_substitution("a -> ba\nb -> ab")
        automaton = subset_graph(s)
        self.assertEqual(automaton.c, 2)
        self.assertFalse(automaton.allows(()))
        for length in range(4):
            self.assertEqual(list(automaton.path_words(length)), [])

    def test_to_dot(self):
        dot = to_dot(self.automaton)
        self.assertTrue(dot.startswith("digraph subsets {"))
        self.assertIn('[label="{a,b,c}"]', dot)
        self.assertIn('[label="2,3"]', dot)

    def test_to_json(self):
        data = self.automaton.to_json()
        self.assertEqual(data["vertices"][0], "{a,b,c}")
        self.assertEqual(len(data["edges"]), 8)


class InvariantsTestCase(unittest.TestCase):

    def test_shift_root(self):
        s = sample("shift_root.sub")
        self.assertEqual(column_number(s), 1)
        self.assertEqual(shortest_forbidden(s), 2)
        self.assertEqual(periodic_points_count(s), 2)
        self.assertEqual(subset_graph(s).denominator_bound, 8)

    def test_thue_morse(self):
        automaton = subset_graph(sample("thue_morse.sub"))
        self.assertEqual((automaton.c, automaton.j), (2, 1))
        self.assertEqual(automaton.periodic_count, 4)
        self.assertTrue(automaton.sigma_empty)
        self.assertEqual(automaton.denominator_bound, 1)

    def test_period_doubling(self):
        s = sample("period_doubling.sub")
        self.assertEqual(column_number(s), 1)
        self.assertEqual(periodic_points_count(s), 2)


class AdmissibilityTestCase(unittest.TestCase):

    def test_rejects_translation_leaving_tail_set(self):
        s = sample("coincidence.sub")
        verdict = kappa_admissible(s, RAdicRational(-1, 3, 4))
        self.assertFalse(verdict)
        self.assertEqual(verdict.witness, (0,))
        self.assertEqual(verdict.sign, 1)
        self.assertEqual(verdict.image.period, (1,))
        self.assertEqual(verdict.describe(),
                         "x=(0) lies in the tail set but x + t = (1) does "
                         "not")
        self.assertFalse(verdict.to_json()["accepted"])

    def test_accepts_realized_fingerprint(self):
        s = sample("shift_root.sub")
        self.assertTrue(kappa_admissible(s, RAdicRational(-1, 2, 3)))
        self.assertTrue(kappa_admissible(s, RAdicRational(0, 1, 3)))
