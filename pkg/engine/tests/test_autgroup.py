import os
import unittest

import autsub
from autsub.autgroup import PRUNED, REALIZED, SEARCHED_EMPTY, \
    BlockMapSearch, TowerElement, _ForcingRule, assemble_presentation, \
    aut_group, candidate_kappas, enumerate_candidate_kappas, \
    make_candidate, one_sided_aut, search_generator, search_kernel
from autsub.blockcode import code_power, codes_equal, identity_code, \
    letter_code, shift_code
from autsub.exceptions import InternalConsistencyError, PreconditionError, \
    ResourceLimitError
from autsub.lib.utils import read_substitution_file
from autsub.limits import Limits
from autsub.radic import RAdicRational
from autsub.reduce import pure_base
from autsub.substitution import parse_substitution

SAMPLES = os.path.join(os.path.dirname(autsub.__file__), "samples")


def sample(name):
    return read_substitution_file(os.path.join(SAMPLES, name))


class BlockMapSearchTestCase(unittest.TestCase):

    def setUp(self):
        self.x, self.y = ("x",), ("y",)
        self.alternating = {("0", "1"), ("1", "0")}

    def test_adjacency_only(self):
        """solutions come back in variable order"""
        for propagate in (True, False):
            search = BlockMapSearch([self.x, self.y], ["0", "1"],
                                    [(self.x, self.y)], self.alternating, [],
                                    Limits(propagate=propagate))
            self.assertEqual(search.solutions(), [
                {self.x: "0", self.y: "1"},
                {self.x: "1", self.y: "0"},
            ])

    def test_forcing(self):
        rule = _ForcingRule((self.x,), (self.y,), lambda values: ("1",))
        for propagate in (True, False):
            search = BlockMapSearch([self.x, self.y], ["0", "1"],
                                    [(self.x, self.y)], self.alternating,
                                    [rule], Limits(propagate=propagate))
            self.assertEqual(search.solutions(),
                             [{self.x: "0", self.y: "1"}])

    def test_failed_choice_is_undone(self):
        """a dead end on the middle variable must not leak into siblings"""
        z = ("z",)
        allowed = {("0", "1"), ("1", "0"), ("1", "2"), ("2", "1")}
        expected = [(a, b, c) for a in "012" for b in "012" for c in "012"
                    if (a, b) in allowed and (b, c) in allowed]
        for propagate in (True, False):
            search = BlockMapSearch([self.x, self.y, z], ["0", "1", "2"],
                                    [(self.x, self.y), (self.y, z)], allowed,
                                    [], Limits(propagate=propagate))
            found = [(sol[self.x], sol[self.y], sol[z])
                     for sol in search.solutions()]
            self.assertEqual(found, sorted(expected))
            self.assertEqual(len(found), 6)

    def test_caps(self):
        search = BlockMapSearch([self.x, self.y], ["0", "1"],
                                [(self.x, self.y)], self.alternating, [],
                                Limits(kernel=1))
        with self.assertRaises(ResourceLimitError) as cm:
            search.solutions()
        self.assertEqual(cm.exception.cap, "kernel")
        brute = BlockMapSearch([self.x, self.y], ["0", "1"],
                               [(self.x, self.y)], self.alternating, [],
                               Limits(kernel=3, propagate=False))
        with self.assertRaises(ResourceLimitError):
            brute.solutions()

    def test_unknown_forced_window(self):
        rule = _ForcingRule((self.x,), (("z",),), lambda values: ("1",))
        with self.assertRaises(InternalConsistencyError):
            BlockMapSearch([self.x, self.y], ["0", "1"], [],
                           self.alternating, [rule])


class CandidateTestCase(unittest.TestCase):

    def test_make_candidate(self):
        self.assertEqual(make_candidate(3, 2, 1, 1, 2).N, 4)
        self.assertEqual(make_candidate(2, 3, 2, 1, 3).N, 1365)
        candidate = make_candidate(3, 2, 1, 1, 1)
        self.assertEqual(candidate.kappa, RAdicRational(-1, 2, 3))
        self.assertEqual((candidate.ell, candidate.n), (-1, 2))

    def test_shift_root_denominators(self):
        candidates = enumerate_candidate_kappas(sample("shift_root.sub"))
        self.assertEqual([c.d for c in candidates], [8, 7, 5, 4, 2])
        self.assertEqual([c.p for c in candidates], [2, 6, 4, 2, 1])
        self.assertEqual([c.k for c in candidates], [1, 104, 16, 2, 1])
        for c in candidates:
            self.assertEqual(c.kappa, RAdicRational(-1, c.d, 3))
        self.assertTrue(candidates[-1].admissibility)

    def test_coincidence_candidate_is_pruned(self):
        s = sample("coincidence.sub")
        candidates = enumerate_candidate_kappas(s)
        self.assertEqual([(c.d, c.verdict) for c in candidates],
                         [(3, PRUNED)])
        self.assertEqual(candidate_kappas(s), [])
        self.assertIn("witness", candidates[0].to_json())

    def test_no_candidates_for_thue_morse(self):
        self.assertEqual(enumerate_candidate_kappas(sample("thue_morse.sub")),
                         [])


class KernelAndGeneratorTestCase(unittest.TestCase):

    def test_thue_morse_kernel(self):
        """letter swap and identity"""
        tm = sample("thue_morse.sub")
        exchange = letter_code(tm, {"a": "b", "b": "a"}, tm.alphabet)
        kernel = search_kernel(tm)
        self.assertEqual(len(kernel), 2)
        self.assertTrue(codes_equal(kernel[0], identity_code(tm), tm))
        self.assertTrue(codes_equal(kernel[1], exchange, tm))
        brute = search_kernel(tm, limits=Limits(propagate=False))
        self.assertEqual([code.table for code in brute],
                         [code.table for code in kernel])

    def test_trivial_kernel_with_coincidence(self):
        self.assertEqual(len(search_kernel(sample("coincidence.sub"))), 1)

    def test_shift_root_generator(self):
        s = sample("shift_root.sub")
        candidate = make_candidate(3, 2, 1, 1, 1)
        codes = search_generator(s, candidate)
        self.assertEqual(len(codes), 1)
        root = codes[0]
        self.assertEqual((root.left, root.right), (1, 0))
        self.assertEqual(root.kappa, RAdicRational(-1, 2, 3))
        self.assertTrue(codes_equal(code_power(root, 2, s),
                                    shift_code(s, -1), s))
        brute = search_generator(s, candidate,
                                 limits=Limits(propagate=False))
        self.assertEqual([code.table for code in brute], [root.table])

    def test_kernel_cap(self):
        with self.assertRaises(ResourceLimitError) as cm:
            search_kernel(sample("thue_morse.sub"), limits=Limits(kernel=1))
        self.assertEqual(cm.exception.cap, "kernel")


class AssembleTestCase(unittest.TestCase):

    def setUp(self):
        self.tm = sample("thue_morse.sub")

    def test_requires_identity(self):
        exchange = letter_code(self.tm, {"a": "b", "b": "a"},
                               self.tm.alphabet)
        with self.assertRaises(InternalConsistencyError):
            assemble_presentation(self.tm, [exchange], None)

    def test_requires_closed_kernel(self):
        with self.assertRaises(InternalConsistencyError):
            assemble_presentation(self.tm, [identity_code(self.tm),
                                            shift_code(self.tm, 1)], None)


class AutGroupTestCase(unittest.TestCase):

    def test_thue_morse(self):
        tm = sample("thue_morse.sub")
        p = aut_group(tm)
        self.assertEqual(p.iso_type, "Z × Z/2")
        self.assertIsNone(p.root)
        self.assertEqual(len(p.kernel), 2)
        self.assertEqual(p.kernel_table, [[0, 1], [1, 0]])
        self.assertEqual(p.quotient_order, 2)
        self.assertEqual([str(r) for r in p.relations], ["K1^2 = Id"])
        self.assertEqual(p.candidates, [])
        self.assertEqual(p.one_sided.status,
                         "unknown (bounded by kernel size ≤ c)")
        self.assertEqual(p.one_sided.bound, 2)
        self.assertTrue(p.to_json()["end_equals_aut"])

    def test_coincidence(self):
        p = aut_group(sample("coincidence.sub"))
        self.assertEqual(p.iso_type, "Z")
        self.assertEqual(p.quotient_order, 1)
        self.assertEqual([(c.d, c.verdict) for c in p.candidates],
                         [(3, PRUNED)])
        self.assertEqual(p.one_sided.status, "trivial")

    def test_period_doubling(self):
        p = aut_group(sample("period_doubling.sub"))
        self.assertEqual(p.iso_type, "Z")
        self.assertIsNone(p.root)

    def test_shift_root(self):
        """root with fingerprint -1/2"""
        s = sample("shift_root.sub")
        p = aut_group(s)
        self.assertEqual(p.iso_type, "Z")
        self.assertEqual(p.root.kappa, RAdicRational(-1, 2, 3))
        self.assertEqual(p.root_denominator, 2)
        self.assertEqual(p.quotient_order, 2)
        self.assertEqual(str(p.relations[0]), "G^2 = σ^-1")
        verdicts = [c.verdict for c in p.candidates]
        self.assertEqual(verdicts[-1], REALIZED)
        for verdict in verdicts[:-1]:
            self.assertIn(verdict, (PRUNED, SEARCHED_EMPTY))
        self.assertEqual(p.to_json()["root_digits"],
                         {"preperiod": [], "period": [1]})

    def test_parallel_search_is_deterministic(self):
        s = sample("shift_root.sub")
        serial = aut_group(s)
        parallel = aut_group(sample("shift_root.sub"), Limits(jobs=3))
        self.assertEqual(serial.to_json(), parallel.to_json())

    def test_height_two(self):
        """tower over a base without kernel"""
        s = sample("height_two.sub")
        p = aut_group(s)
        self.assertEqual(p.height.h, 2)
        self.assertEqual(p.tower.h, 2)
        for code in p.kernel:
            self.assertEqual(code.source_alphabet, s.alphabet)
        self.assertEqual(p.tower.g, 1)
        self.assertIsNone(p.tower.torsion)
        self.assertEqual(len(p.kernel), 1)
        self.assertEqual(p.iso_type, "Z")
        self.assertNotIn("W^2 = Id", [str(r) for r in p.relations])

    def test_rejects_finite_and_non_primitive(self):
        with self.assertRaises(PreconditionError):
            aut_group(parse_substitution("a -> ab\nb -> ab"))
        with self.assertRaises(PreconditionError):
            aut_group(parse_substitution("a -> aa\nb -> ab"))

    def test_one_sided(self):
        self.assertEqual(one_sided_aut(sample("shift_root.sub")).status,
                         "trivial")


class TowerElementTestCase(unittest.TestCase):

    def setUp(self):
        self.s = sample("height_two.sub")
        self.tower = pure_base(self.s)
        self.base = self.tower.base
        self.step = TowerElement(identity_code(self.base), 1)

    def test_phase_carries_into_base_shift(self):
        twice = self.step.compose(self.step, self.tower)
        self.assertEqual(twice.phase, 0)
        self.assertTrue(codes_equal(twice.code, shift_code(self.base, 1),
                                    self.base))
        self.assertTrue(codes_equal(twice.lift(self.tower),
                                    shift_code(self.s, 2), self.s))

    def test_lift_of_phase_is_shift(self):
        self.assertTrue(codes_equal(self.step.lift(self.tower),
                                    shift_code(self.s, 1), self.s))

    def test_power(self):
        zero = self.step.power(0, self.tower)
        self.assertEqual(zero.phase, 0)
        self.assertTrue(codes_equal(zero.code, identity_code(self.base),
                                    self.base))
        four = self.step.power(4, self.tower)
        self.assertEqual(four.phase, 0)
        self.assertTrue(codes_equal(four.lift(self.tower),
                                    shift_code(self.s, 4), self.s))
        back = TowerElement(shift_code(self.base, -1), 0)
        self.assertEqual(back.compose(self.step.power(2, self.tower),
                                      self.tower).phase, 0)
        self.assertTrue(codes_equal(
            back.compose(self.step.power(2, self.tower), self.tower).code,
            identity_code(self.base), self.base))
