import random
import unittest
from itertools import product

from autsub.autgroup import PRUNED, aut_group, search_generator
from autsub.blockcode import code_compose, code_power, codes_equal, \
    identity_code, shift_code
from autsub.conj import CONJUGATE, decide_conjugacy
from autsub.exceptions import ResourceLimitError
from autsub.groups import element_order
from autsub.limits import Limits
from autsub.reduce import height
from autsub.sofic import subset_graph
from autsub.substitution import Substitution, is_infinite, is_injective, \
    is_primitive

LIMITS = Limits(word=20000, kernel=200000, pmax=12, periodic_budget=64)


def random_substitutions(seed, count):
    """
    Distinct primitive, injective substitutions with an infinite shift on
    two or three letters, of length two to four.
    """
    rng = random.Random(seed)
    seen = set()
    found = []
    for _ in range(5000):
        if len(found) == count:
            break
        alphabet = "abc"[:rng.choice([2, 3])]
        r = rng.choice([2, 3, 4])
        rules = {a: "".join(rng.choice(alphabet) for _ in range(r))
                 for a in alphabet}
        s = Substitution(list(alphabet), rules)
        if s in seen:
            continue
        seen.add(s)
        if is_primitive(s) and is_injective(s) and is_infinite(s, LIMITS):
            found.append(s)
    return found


class RandomSubstitutionTestCase(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.substitutions = random_substitutions(2024, 24)

    def test_enough_samples(self):
        self.assertGreaterEqual(len(self.substitutions), 20)

    def test_paths_present_the_allowed_digit_words(self):
        for s in self.substitutions:
            automaton = subset_graph(s, LIMITS)
            for length in range(7):
                allowed = {w for w in product(range(s.r), repeat=length)
                           if automaton.allows(w)}
                self.assertEqual(set(automaton.path_words(length)), allowed,
                                 msg=repr(s))

    def test_presentations(self):
        computed = pruned = 0
        for s in self.substitutions:
            try:
                if height(s, LIMITS).h != 1:
                    continue
                p = aut_group(s, LIMITS)
            except ResourceLimitError:
                continue
            computed += 1
            with self.subTest(substitution=repr(s)):
                self._check(s, p)
                pruned += self._search_pruned(s, p)
        self.assertGreaterEqual(computed, 5)
        self.assertGreaterEqual(pruned, 1)

    def _check(self, s, p):
        identity = identity_code(s)
        self.assertTrue(codes_equal(p.kernel[0], identity, s, LIMITS))
        for code in p.kernel:
            self.assertEqual(code.kappa.num, 0)
        for i, a in enumerate(p.kernel):
            for j, b in enumerate(p.kernel):
                self.assertTrue(codes_equal(
                    code_compose(a, b, s, LIMITS),
                    p.kernel[p.kernel_table[i][j]], s, LIMITS))
        self.assertEqual(p.quotient_order,
                         p.root_denominator * len(p.kernel))
        if p.root is not None:
            ell, n = p.root.kappa.num, p.root.kappa.den
            residue = code_compose(code_power(p.root, n, s, LIMITS),
                                 shift_code(s, -ell, LIMITS), s, LIMITS)
            e = next(i for i, k in enumerate(p.kernel)
                     if codes_equal(residue, k, s, LIMITS))
            m = element_order(p.kernel_table, e)
            self.assertTrue(codes_equal(code_power(p.root, n * m, s, LIMITS),
                                        shift_code(s, ell * m, LIMITS), s,
                                        LIMITS))
        report = decide_conjugacy(s, Substitution(s.alphabet, s.rules),
                                  LIMITS)
        self.assertEqual(report.decision, CONJUGATE)
        self.assertTrue(codes_equal(code_compose(report.inverse,
                                                 report.witness, s, LIMITS),
                                    identity, s, LIMITS))

    def _search_pruned(self, s, p):
        """A pruned fingerprint has no two-block automorphism either."""
        searched = 0
        for candidate in p.candidates:
            if candidate.verdict != PRUNED:
                continue
            self.assertFalse(candidate.admissibility)
            try:
                codes = search_generator(s, candidate, p.automaton.c, LIMITS)
            except ResourceLimitError:
                continue
            self.assertEqual(codes, [], msg=str(candidate.kappa))
            searched += 1
        return searched
