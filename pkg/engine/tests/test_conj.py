import math
import os
import unittest

import autsub
from autsub.autgroup import aut_group
from autsub.blockcode import code_compose, codes_equal, identity_code, \
    invert_code
from autsub.conj import CONJUGATE, INCOMPATIBLE, INCONCLUSIVE, \
    NOT_CONJUGATE, candidate_conj_kappas, decide_conjugacy, \
    invariant_gate, length_gate, search_conjugacy
from autsub.exceptions import PreconditionError, ResourceLimitError
from autsub.lib.utils import read_substitution_file
from autsub.limits import Limits
from autsub.radic import RAdicRational
from autsub.sofic import subset_graph
from autsub.substitution import parse_substitution

SAMPLES = os.path.join(os.path.dirname(autsub.__file__), "samples")


def sample(name):
    return read_substitution_file(os.path.join(SAMPLES, name))


def of_length(r):
    return parse_substitution(f"a -> a{'b' * (r - 1)}\n"
                              f"b -> b{'a' * (r - 1)}")


class GateTestCase(unittest.TestCase):

    def test_length_gate(self):
        self.assertEqual(length_gate(of_length(4), of_length(2)), (1, 2))
        self.assertEqual(length_gate(of_length(2), of_length(8)), (3, 1))
        self.assertEqual(length_gate(of_length(3), of_length(3)), (1, 1))
        self.assertEqual(length_gate(of_length(4), of_length(8)), (3, 2))
        self.assertIsNone(length_gate(of_length(6), of_length(10)))
        self.assertIsNone(length_gate(of_length(2), of_length(3)))
        self.assertIsNone(length_gate(of_length(6), of_length(12)))

    def test_invariant_gate(self):
        gate = invariant_gate(sample("shift_root.sub"),
                              sample("height_two.sub"))
        self.assertEqual(gate.obstruction, "height 1 ≠ 2")
        gate = invariant_gate(sample("shift_root.sub"),
                              sample("shift_root_pqr.sub"))
        self.assertTrue(gate.compatible)
        self.assertEqual(gate.pair.c, 1)
        with self.assertRaises(PreconditionError):
            invariant_gate(sample("thue_morse.sub"),
                           sample("coincidence.sub"))


class ClassesTestCase(unittest.TestCase):

    def test_one_class_per_coset(self):
        classes = candidate_conj_kappas(sample("shift_root.sub"))
        self.assertEqual(classes[0].k, 0)
        self.assertEqual(len(classes), 58)
        self.assertEqual({c.d for c in classes[1:]},
                         {2, 4, 5, 7, 8, 10, 11, 13, 14, 16})
        for c in classes[1:]:
            self.assertEqual(c.kappa.den, c.d)
            self.assertTrue(-1 < c.kappa.as_fraction() < 0)
        self.assertEqual(len({c.kappa for c in classes}), len(classes))

    def test_class_count_is_totient_sum(self):
        """one class per reduced fraction below each admissible q"""
        s = parse_substitution("a -> cca\nb -> bcc\nc -> abb")
        bound = 2 * subset_graph(s).denominator_bound
        expected = 1 + sum(1 for q in range(2, bound + 1)
                           if math.gcd(q, 3) == 1
                           for m in range(1, q) if math.gcd(m, q) == 1)
        classes = candidate_conj_kappas(s)
        self.assertEqual(len(classes), expected)
        self.assertEqual(len({c.kappa for c in classes}), len(classes))
        for c in classes[1:]:
            self.assertEqual(c.kappa.den, c.d)
        report = decide_conjugacy(s, parse_substitution("a -> cca\n"
                                                        "b -> bcc\n"
                                                        "c -> abb"))
        self.assertEqual(report.decision, CONJUGATE)

    def test_class_cap(self):
        s = sample("shift_root.sub")
        with self.assertRaises(ResourceLimitError) as cm:
            candidate_conj_kappas(s, limits=Limits(classes=5))
        self.assertEqual(cm.exception.cap, "classes")
        report = decide_conjugacy(s, sample("shift_root_pqr.sub"),
                                  Limits(classes=5))
        self.assertEqual(report.decision, INCONCLUSIVE)
        self.assertEqual(report.exit_code, 3)
        self.assertTrue(report.obstruction.startswith("cap 'classes'"))

    def test_thue_morse_has_only_zero_class(self):
        classes = candidate_conj_kappas(sample("thue_morse.sub"))
        self.assertEqual([c.k for c in classes], [0])

    def test_search_relabelling(self):
        s, s2 = sample("shift_root.sub"), sample("shift_root_pqr.sub")
        codes = search_conjugacy(s, s2, candidate_conj_kappas(s)[0])
        self.assertEqual(len(codes), 1)


    def test_conjugacies_differ_by_target_automorphism(self):
        """the quotient of two conjugacies is an automorphism of the target"""
        s, s2 = sample("shift_root.sub"), sample("shift_root_pqr.sub")
        classes = candidate_conj_kappas(s)
        first = search_conjugacy(s, s2, classes[0])[0]
        self.assertEqual(classes[1].kappa, RAdicRational(-1, 2, 3))
        second = search_conjugacy(s, s2, classes[1])
        self.assertEqual(len(second), 1)
        quotient = code_compose(second[0], invert_code(first, s, s2), s2)
        p = aut_group(s2)
        self.assertEqual(len(p.kernel), 1)
        self.assertTrue(codes_equal(quotient, p.root, s2))


class DecideTestCase(unittest.TestCase):

    def test_relabelled_copy_is_conjugate(self):
        """letter relabelling is found in the zero class"""
        report = decide_conjugacy(sample("shift_root.sub"),
                                  sample("shift_root_pqr.sub"))
        self.assertEqual(report.decision, CONJUGATE)
        self.assertEqual(report.exit_code, 0)
        self.assertEqual(report.powers, (1, 1))
        self.assertEqual((report.witness.left, report.witness.right), (0, 0))
        self.assertEqual(report.witness.table,
                         {("a",): "P", ("b",): "Q", ("c",): "R"})
        self.assertEqual(report.witness.kappa, RAdicRational(0, 1, 3))
        self.assertEqual(report.inverse.table,
                         {("P",): "a", ("Q",): "b", ("R",): "c"})
        self.assertEqual(report.all_conjugacies, "Aut(target) ∘ Φ0")
        data = report.to_json()
        self.assertEqual(data["classes_searched"], 1)
        self.assertEqual(data["classes_total"], 58)

    def test_symmetric(self):
        report = decide_conjugacy(sample("shift_root_pqr.sub"),
                                  sample("shift_root.sub"))
        self.assertEqual(report.decision, CONJUGATE)

    def test_self_conjugacy_picks_identity(self):
        tm = sample("thue_morse.sub")
        report = decide_conjugacy(tm, sample("thue_morse.sub"))
        self.assertEqual(report.decision, CONJUGATE)
        self.assertTrue(codes_equal(report.witness, identity_code(tm), tm))

    def test_deterministic_with_jobs(self):
        s, s2 = sample("shift_root.sub"), sample("shift_root_pqr.sub")
        serial = decide_conjugacy(s, s2).to_json()
        parallel = decide_conjugacy(sample("shift_root.sub"),
                                    sample("shift_root_pqr.sub"),
                                    Limits(jobs=2)).to_json()
        self.assertEqual(serial, parallel)

    def test_column_number_obstruction(self):
        report = decide_conjugacy(sample("coincidence.sub"),
                                  sample("thue_morse.sub"))
        self.assertEqual(report.decision, NOT_CONJUGATE)
        self.assertEqual(report.powers, (1, 2))
        self.assertEqual(report.obstruction, "column number 1 ≠ 2")
        self.assertEqual(report.exit_code, 1)

    def test_height_obstruction(self):
        report = decide_conjugacy(sample("shift_root.sub"),
                                  sample("height_two.sub"))
        self.assertEqual(report.decision, NOT_CONJUGATE)
        self.assertEqual(report.obstruction, "height 1 ≠ 2")

    def test_finite_inputs(self):
        finite = parse_substitution("a -> ab\nb -> ab")
        report = decide_conjugacy(finite, parse_substitution("a -> ab\n"
                                                             "b -> ab"))
        self.assertEqual(report.decision, INCOMPATIBLE)
        self.assertEqual(report.exit_code, 2)
        report = decide_conjugacy(finite, sample("thue_morse.sub"))
        self.assertEqual(report.decision, NOT_CONJUGATE)
        self.assertEqual(report.obstruction, "exactly one shift is finite")

    def test_lengths_without_common_base(self):
        report = decide_conjugacy(sample("thue_morse.sub"),
                                  sample("shift_root.sub"))
        self.assertEqual(report.decision, INCOMPATIBLE)
        self.assertIsNone(report.powers)

    def test_non_primitive(self):
        with self.assertRaises(PreconditionError):
            decide_conjugacy(parse_substitution("a -> aa\nb -> ab"),
                             sample("thue_morse.sub"))
