"""
Deciding topological conjugacy of two constant-length substitution shifts.

The decision runs through gates before any search:

    lengths: r and r' must be powers of a common integer; θ^m and θ'^n then
        have the same length;
    finiteness: exactly one finite shift means not conjugate;
    invariants: height and column number of the pure bases must agree.

Past the gates the fingerprint classes κ (one per coset of ℤ, κ = 0 first)
are searched in order with the block-map searches of autgroup, now with
the target language on the right-hand side. The first invertible solution
is lifted back to θ and θ' as the witness Φ₀; every conjugacy is then
Aut(X_θ') ∘ Φ₀.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from sympy import factorint

from .autgroup import PENDING, REALIZED, SEARCHED_EMPTY, SKIPPED, \
    CandidateKappa, make_candidate, three_block_search, two_block_search
from .blockcode import BlockCode, code_compose, codes_equal, identity_code, \
    invert_code, trim_radius
from .exceptions import InternalConsistencyError, PreconditionError, \
    ResourceLimitError
from .lib.utils import run_ordered
from .limits import DEFAULT_LIMITS, Limits
from .radic import RAdicRational, expand, mult_order
from .reduce import Injectivization, TowerConjugacy, height, injectivize, \
    lift_tower_code, pure_base
from .sofic import SubsetAutomaton, subset_graph
from .substitution import Substitution, is_infinite, is_primitive, power

logger = logging.getLogger(__name__)

__all__ = [
    "CONJUGATE",
    "NOT_CONJUGATE",
    "INCOMPATIBLE",
    "INCONCLUSIVE",
    "ConjReport",
    "AlignedPair",
    "GateResult",
    "length_gate",
    "invariant_gate",
    "candidate_conj_kappas",
    "search_conjugacy",
    "decide_conjugacy",
]

CONJUGATE = "conjugate"
NOT_CONJUGATE = "not-conjugate"
INCOMPATIBLE = "incompatible-input"
INCONCLUSIVE = "inconclusive"

EXIT_CODES = {
    CONJUGATE: 0,
    NOT_CONJUGATE: 1,
    INCOMPATIBLE: 2,
    INCONCLUSIVE: 3,
}


def length_gate(s: Substitution,
                s2: Substitution) -> Optional[Tuple[int, int]]:
    """
    The least (m, n) with r^m = r'^n, or None when the lengths are not
    powers of a common integer. Both prime exponent vectors must be
    proportional.
    """
    f1, f2 = factorint(s.r), factorint(s2.r)
    if set(f1) != set(f2):
        return None
    ratios = {Fraction(int(f2[p]), int(f1[p])) for p in f1}
    if len(ratios) != 1:
        return None
    ratio = ratios.pop()
    return ratio.numerator, ratio.denominator


@dataclass
class AlignedPair:
    """
    Both shifts reduced for the search: pure bases of a common length, made
    injective, with the subset graph of the source.
    """

    source_tower: TowerConjugacy
    target_tower: TowerConjugacy
    source_inj: Injectivization
    target_inj: Injectivization
    automaton: SubsetAutomaton

    @property
    def source(self) -> Substitution:
        return self.source_inj.target

    @property
    def target(self) -> Substitution:
        return self.target_inj.target

    @property
    def c(self) -> int:
        return self.automaton.c


@dataclass
class GateResult:
    obstruction: Optional[str] = None
    pair: Optional[AlignedPair] = None

    @property
    def compatible(self) -> bool:
        return self.obstruction is None


def _align_bases(t1: TowerConjugacy, t2: TowerConjugacy,
                 limits: Limits) -> Tuple[Substitution, Substitution]:
    b1, b2 = t1.base, t2.base
    if b1.r == b2.r:
        return b1, b2
    g = math.gcd(t1.power, t2.power)
    return (power(b1, t2.power // g, limits),
            power(b2, t1.power // g, limits))


def invariant_gate(s: Substitution, s2: Substitution,
                   limits: Limits = DEFAULT_LIMITS) -> GateResult:
    """
    Compare height and column number of two substitutions of equal length;
    on a match, return their injective pure bases ready for the search.
    """
    if s.r != s2.r:
        raise PreconditionError(
            f"lengths {s.r} and {s2.r} are not aligned")
    h1, h2 = height(s, limits), height(s2, limits)
    if h1.h != h2.h:
        return GateResult(f"height {h1.h} ≠ {h2.h}")
    t1, t2 = pure_base(s, h1, limits), pure_base(s2, h2, limits)
    b1, b2 = _align_bases(t1, t2, limits)
    inj1, inj2 = injectivize(b1, limits), injectivize(b2, limits)
    a1 = subset_graph(inj1.target, limits)
    a2 = subset_graph(inj2.target, limits)
    if a1.c != a2.c:
        return GateResult(f"column number {a1.c} ≠ {a2.c}")
    return GateResult(pair=AlignedPair(t1, t2, inj1, inj2, a1))


def candidate_conj_kappas(s: Substitution,
                          automaton: Optional[SubsetAutomaton] = None,
                          limits: Limits = DEFAULT_LIMITS
                          ) -> List[CandidateKappa]:
    """
    One fingerprint per coset of ℤ: κ = 0, then every k/(1 - r^p) in
    (-1, 0) whose reduced denominator q satisfies 2 ≤ q ≤ (r-1)(r^j-1)
    and gcd(q, r) = 1, ordered by q and then k. With p = ord_q(r) these
    are k = m·(r^p - 1)/q for 1 ≤ m < q coprime to q.

    Raises:
        ResourceLimitError: If there are more than `limits.classes` classes.
    """
    if automaton is None:
        automaton = subset_graph(s, limits)
    r, c = s.r, automaton.c
    classes = [make_candidate(r, 1, 1, 0, c)]
    bound = (r - 1) * automaton.denominator_bound
    for q in range(2, bound + 1):
        if math.gcd(q, r) != 1:
            continue
        p = mult_order(r, q)
        step = (r ** p - 1) // q
        for m in range(1, q):
            if math.gcd(m, q) != 1:
                continue
            if len(classes) >= limits.classes:
                raise ResourceLimitError(
                    f"more than {limits.classes} fingerprint classes up to "
                    f"denominator {bound}", cap="classes")
            classes.append(make_candidate(r, q, p, m * step, c))
    logger.info("%d fingerprint classes up to denominator %d.",
                len(classes), bound)
    return classes


def search_conjugacy(s: Substitution, s2: Substitution,
                     cls: CandidateKappa, c: Optional[int] = None,
                     limits: Limits = DEFAULT_LIMITS) -> List[BlockCode]:
    """
    Conjugacies from the shift of `s` onto the shift of `s2` with
    fingerprint cls.kappa: 3-block maps for κ = 0, 2-block maps otherwise.
    Only solutions with an inverse code are returned.

    Raises:
        ResourceLimitError: If no solution is invertible and some solution
            had no inverse within the radius cap.
    """
    if c is None:
        c = subset_graph(s, limits).c
    if cls.k == 0:
        codes = three_block_search(s, s2, c, limits)
    else:
        codes = two_block_search(s, s2, cls.p, cls.k, cls.N, c, limits)
    found, capped = [], None
    for code in codes:
        try:
            invert_code(code, s, s2, limits=limits)
        except PreconditionError:
            continue
        except ResourceLimitError as e:
            capped = e
            continue
        found.append(code)
    if not found and capped is not None:
        logger.warning("Class %s: a factor map has no inverse within the "
                       "radius cap.", cls.kappa)
        raise capped
    logger.info("Class %s: %d solutions, %d invertible.", cls.kappa,
                len(codes), len(found))
    return found


@dataclass
class ConjReport:
    """
    Outcome of decide_conjugacy. A conjugate decision carries the witness
    Φ₀ from X_θ to X_θ' and its inverse; the other decisions name the
    obstruction.
    """

    source: Substitution
    target: Substitution
    decision: str
    obstruction: Optional[str] = None
    witness: Optional[BlockCode] = None
    inverse: Optional[BlockCode] = None
    powers: Optional[Tuple[int, int]] = None
    classes: List[CandidateKappa] = field(default_factory=list)
    witness_class: Optional[CandidateKappa] = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.decision]

    @property
    def all_conjugacies(self) -> Optional[str]:
        if self.decision != CONJUGATE:
            return None
        return "Aut(target) ∘ Φ0"

    def to_json(self) -> Dict:
        out = {
            "decision": self.decision,
            "obstruction": self.obstruction,
            "powers": list(self.powers) if self.powers else None,
            "witness": self.witness.to_json() if self.witness else None,
            "inverse": self.inverse.to_json() if self.inverse else None,
            "witness_digits": (expand(self.witness.kappa).to_json()
                               if self.witness is not None else None),
            "all_conjugacies": self.all_conjugacies,
            "classes_searched": sum(1 for cls in self.classes
                                    if cls.verdict in (SEARCHED_EMPTY,
                                                       REALIZED)),
            "classes_total": len(self.classes),
        }
        return out


def _witness_key(code: BlockCode, s: Substitution):
    index = {a: i for i, a in enumerate(code.target_alphabet)}
    return (code.left + code.right,
            tuple(index[code.table[w]] for w in s.sorted_words(code.table)))


def _lift_witness(code: BlockCode, pair: AlignedPair, s: Substitution,
                  limits: Limits) -> BlockCode:
    base = pair.source_inj.source
    inner = code_compose(code, pair.source_inj.forward, base, limits)
    on_bases = code_compose(pair.target_inj.inverse, inner, base, limits)
    lifted = lift_tower_code(on_bases, pair.source_tower, pair.target_tower,
                             limits=limits)
    kappa = lifted.kappa
    if kappa is not None:
        kappa = RAdicRational(kappa.num, kappa.den, s.r)
    return trim_radius(lifted.with_kappa(kappa), s, limits)


def decide_conjugacy(s: Substitution, s2: Substitution,
                     limits: Limits = DEFAULT_LIMITS) -> ConjReport:
    """
    Decide whether the shifts of `s` and `s2` are topologically conjugate.
    A cap reached during the search gives an inconclusive report instead
    of raising.

    Raises:
        PreconditionError: If either substitution is not primitive.
    """
    for sub in (s, s2):
        if not is_primitive(sub):
            raise PreconditionError(f"{sub!r} is not primitive")
    report = ConjReport(s, s2, PENDING)
    try:
        return _decide(report, limits)
    except ResourceLimitError as e:
        logger.warning("Conjugacy search stopped at a cap: %s", e)
        report.decision = INCONCLUSIVE
        report.obstruction = f"cap '{e.cap}' reached: {e}"
        return report


def _decide(report: ConjReport, limits: Limits) -> ConjReport:
    s, s2 = report.source, report.target
    infinite = is_infinite(s, limits), is_infinite(s2, limits)
    if not any(infinite):
        report.decision = INCOMPATIBLE
        report.obstruction = "both shifts are finite (out of scope)"
        return report
    if not all(infinite):
        report.decision = NOT_CONJUGATE
        report.obstruction = "exactly one shift is finite"
        return report

    powers = length_gate(s, s2)
    if powers is None:
        report.decision = INCOMPATIBLE
        report.obstruction = (f"lengths {s.r} and {s2.r} are not powers of "
                              f"a common integer")
        return report
    report.powers = powers
    t1, t2 = power(s, powers[0], limits), power(s2, powers[1], limits)
    gate = invariant_gate(t1, t2, limits)
    if not gate.compatible:
        report.decision = NOT_CONJUGATE
        report.obstruction = gate.obstruction
        logger.info("Invariant gate: %s.", gate.obstruction)
        return report

    pair = gate.pair
    classes = candidate_conj_kappas(pair.source, pair.automaton, limits)
    report.classes = classes
    capped = None

    def attempt(cls: CandidateKappa):
        try:
            return search_conjugacy(pair.source, pair.target, cls, pair.c,
                                    limits)
        except ResourceLimitError as e:
            return e

    results = run_ordered(attempt, classes, limits.jobs)
    try:
        for cls, outcome in zip(classes, results):
            if isinstance(outcome, ResourceLimitError):
                capped = outcome
                continue
            if not outcome:
                cls.verdict = SEARCHED_EMPTY
                continue
            cls.verdict = REALIZED
            report.witness_class = cls
            lifted = [_lift_witness(code, pair, s, limits)
                      for code in outcome]
            report.witness = min(lifted, key=lambda c: _witness_key(c, s))
            break
    finally:
        results.close()
    for cls in classes:
        if cls.verdict == PENDING and report.witness is not None:
            cls.verdict = SKIPPED

    if report.witness is None:
        if capped is not None:
            raise capped
        report.decision = NOT_CONJUGATE
        report.obstruction = (f"all {len(classes)} fingerprint classes "
                              f"searched without a conjugacy")
        return report

    report.inverse = invert_code(report.witness, s, s2, limits=limits)
    if not (codes_equal(code_compose(report.inverse, report.witness, s,
                                     limits), identity_code(s), s, limits)
            and codes_equal(code_compose(report.witness, report.inverse, s2,
                                         limits), identity_code(s2), s2,
                            limits)):
        raise InternalConsistencyError("witness and inverse do not compose "
                                       "to the identity")
    report.decision = CONJUGATE
    logger.info("Conjugate: witness of radii (%d, %d), kappa %s.",
                report.witness.left, report.witness.right,
                report.witness.kappa)
    return report
