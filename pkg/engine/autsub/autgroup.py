"""
Automorphism groups of primitive constant-length substitution shifts.

On a pure, injective base θ the fingerprint κ maps Aut(X_θ, σ) onto a
cyclic subgroup (1/d)ℤ of ℚ with d ≤ r^j - 1, and its kernel is a finite
group of 3-block codes. The search therefore has two parts:

    search_kernel: 3-block maps g with κ = 0,
    search_generator: 2-block maps f with κ = -1/d, for the candidate
        denominators d that survive the sofic prune.

aut_group runs both, verifies every relation by composing codes, and lifts
the result back through the injectivization and the height tower.
"""

import logging
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .blockcode import BlockCode, code_compose, code_power, codes_equal, \
    identity_code, shift_code, trim_radius
from .exceptions import InternalConsistencyError, ResourceLimitError
from .groups import element_order, group_name
from .lib.utils import run_ordered
from .limits import DEFAULT_LIMITS, Limits
from .radic import RAdicRational, expand, mult_order
from .reduce import HeightReport, Injectivization, TowerConjugacy, height, \
    injectivize, lift_tower_code, pure_base
from .sofic import Admissibility, SubsetAutomaton, kappa_admissible, \
    subset_graph
from .substitution import Substitution, Symbol, Word, \
    check_primitive_infinite, language, theta_power_word

logger = logging.getLogger(__name__)

__all__ = [
    "CandidateKappa",
    "Relation",
    "AutPresentation",
    "TowerElement",
    "TowerPresentation",
    "OneSidedReport",
    "BlockMapSearch",
    "make_candidate",
    "enumerate_candidate_kappas",
    "candidate_kappas",
    "two_block_search",
    "three_block_search",
    "search_generator",
    "search_kernel",
    "assemble_presentation",
    "aut_group",
    "lift_injectivization",
    "lift_height",
    "one_sided_aut",
]

PENDING = "pending"
PRUNED = "pruned"
SEARCHED_EMPTY = "searched-empty"
REALIZED = "realized"
SKIPPED = "skipped"


@dataclass
class CandidateKappa:
    """
    A fingerprint κ = k/(1 - r^p) to search for, with the shift offset
    N = k(1 + r^p + … + r^{(c!-1)p}) of the self-similarity condition.
    """

    r: int
    d: int
    p: int
    k: int
    N: int
    verdict: str = PENDING
    admissibility: Optional[Admissibility] = None

    @property
    def kappa(self) -> RAdicRational:
        return RAdicRational(self.k, 1 - self.r ** self.p, self.r)

    @property
    def ell(self) -> int:
        return self.kappa.num

    @property
    def n(self) -> int:
        return self.kappa.den

    def to_json(self) -> Dict:
        out = {
            "d": self.d,
            "p": self.p,
            "k": self.k,
            "N": self.N,
            "kappa": self.kappa.to_json(),
            "digits": expand(self.kappa).to_json(),
            "verdict": self.verdict,
        }
        if self.admissibility is not None and not self.admissibility:
            out["witness"] = self.admissibility.to_json()
        return out


def make_candidate(r: int, d: int, p: int, k: int, c: int) -> CandidateKappa:
    n_terms = math.factorial(c)
    offset = k * sum(r ** (i * p) for i in range(n_terms))
    return CandidateKappa(r, d, p, k, offset)


def enumerate_candidate_kappas(s: Substitution,
                               automaton: Optional[SubsetAutomaton] = None,
                               limits: Limits = DEFAULT_LIMITS
                               ) -> List[CandidateKappa]:
    """
    Every denominator 2 ≤ d ≤ r^j - 1 coprime to r, largest first, as the
    representative κ = -1/d, each with its prune verdict.
    """
    if automaton is None:
        automaton = subset_graph(s, limits)
    r, c = s.r, automaton.c
    candidates = []
    for d in range(automaton.denominator_bound, 1, -1):
        if math.gcd(d, r) != 1:
            continue
        p = mult_order(r, d)
        candidate = make_candidate(r, d, p, (r ** p - 1) // d, c)
        verdict = kappa_admissible(s, candidate.kappa, limits.pmax,
                                   automaton, limits)
        candidate.admissibility = verdict
        if not verdict:
            candidate.verdict = PRUNED
        candidates.append(candidate)
        logger.info("Candidate d=%d (p=%d, k=%d, N=%d): %s.", d, p,
                    candidate.k, candidate.N,
                    "pruned" if not verdict else "kept")
    return candidates


def candidate_kappas(s: Substitution,
                     automaton: Optional[SubsetAutomaton] = None,
                     limits: Limits = DEFAULT_LIMITS) -> List[CandidateKappa]:
    return [candidate
            for candidate in enumerate_candidate_kappas(s, automaton, limits)
            if candidate.verdict != PRUNED]


@dataclass
class _ForcingRule:
    parents: Tuple[Word, ...]
    children: Tuple[Word, ...]
    force: Callable[[Tuple[Symbol, ...]], Sequence[Symbol]]


class BlockMapSearch:
    """
    All maps from source windows to target symbols such that

        - every adjacent pair of windows has its output pair in
          `allowed_pairs`;
        - whenever the parents of a forcing rule are assigned, its children
          take the values the rule forces.

    With `limits.propagate` the search assigns windows in canonical order
    and applies the rules as it goes, undoing them through a trail on
    backtrack; `limits.kernel` bounds the number of tried values. Without it
    every table is enumerated and `limits.kernel` bounds their number.
    """

    def __init__(self, variables: Sequence[Word], domain: Sequence[Symbol],
                 adjacent: Sequence[Tuple[Word, Word]],
                 allowed_pairs, rules: Sequence[_ForcingRule],
                 limits: Limits = DEFAULT_LIMITS):
        self.variables = list(variables)
        self.domain = list(domain)
        self.adjacent = list(adjacent)
        self.allowed = frozenset(allowed_pairs)
        self.rules = list(rules)
        self.limits = limits
        known = set(self.variables)
        self._neighbours: Dict[Word, List[Tuple[Word, bool]]] = {
            v: [] for v in self.variables}
        for left, right in self.adjacent:
            self._neighbours[left].append((right, True))
            self._neighbours[right].append((left, False))
        self._rules_of: Dict[Word, List[_ForcingRule]] = {
            v: [] for v in self.variables}
        for rule in self.rules:
            for window in rule.children:
                if window not in known:
                    raise InternalConsistencyError(
                        f"forced window {window!r} is not in the language")
            for parent in set(rule.parents):
                self._rules_of[parent].append(rule)

    def solutions(self) -> List[Dict[Word, Symbol]]:
        if self.limits.propagate:
            found = self._propagate_search()
        else:
            found = self._brute_force()
        index = {a: i for i, a in enumerate(self.domain)}
        found.sort(key=lambda table: tuple(index[table[v]]
                                           for v in self.variables))
        return found

    def _assign(self, assignment, trail, queue, window, value) -> bool:
        current = assignment.get(window)
        if current is not None:
            return current == value
        assignment[window] = value
        trail.append(window)
        queue.append(window)
        return True

    def _propagate(self, assignment, trail, queue) -> bool:
        while queue:
            window = queue.pop()
            value = assignment[window]
            for other, first in self._neighbours[window]:
                other_value = assignment.get(other)
                if other_value is None:
                    continue
                pair = (value, other_value) if first else (other_value, value)
                if pair not in self.allowed:
                    return False
            for rule in self._rules_of[window]:
                values = tuple(assignment.get(p) for p in rule.parents)
                if None in values:
                    continue
                for child, symbol in zip(rule.children, rule.force(values)):
                    if not self._assign(assignment, trail, queue, child,
                                        symbol):
                        return False
        return True

    def _propagate_search(self) -> List[Dict[Word, Symbol]]:
        assignment: Dict[Word, Symbol] = {}
        trail: List[Word] = []
        solutions: List[Dict[Word, Symbol]] = []
        nodes = 0
        # Explicit stack of (position, next value index, trail mark).
        stack: List[List[int]] = [[0, 0, 0]]
        while stack:
            frame = stack[-1]
            # Drop the previous choice of this frame, failed or explored.
            self._undo(assignment, trail, frame[2])
            position = frame[0]
            while (position < len(self.variables)
                   and self.variables[position] in assignment):
                position += 1
            frame[0] = position
            if position == len(self.variables):
                solutions.append(dict(assignment))
                stack.pop()
                continue
            if frame[1] == len(self.domain):
                stack.pop()
                continue
            value = self.domain[frame[1]]
            frame[1] += 1
            nodes += 1
            if nodes > self.limits.kernel:
                raise ResourceLimitError(
                    f"block map search exceeded {self.limits.kernel} nodes",
                    cap="kernel")
            frame[2] = len(trail)
            queue: List[Word] = []
            if (self._assign(assignment, trail, queue,
                             self.variables[position], value)
                    and self._propagate(assignment, trail, queue)):
                stack.append([position + 1, 0, len(trail)])
        return solutions

    @staticmethod
    def _undo(assignment, trail, mark):
        while len(trail) > mark:
            del assignment[trail.pop()]

    def _satisfies(self, assignment: Dict[Word, Symbol]) -> bool:
        for left, right in self.adjacent:
            if (assignment[left], assignment[right]) not in self.allowed:
                return False
        for rule in self.rules:
            values = tuple(assignment[p] for p in rule.parents)
            for child, symbol in zip(rule.children, rule.force(values)):
                if assignment[child] != symbol:
                    return False
        return True

    def _brute_force(self) -> List[Dict[Word, Symbol]]:
        total = len(self.domain) ** len(self.variables)
        if total > self.limits.kernel:
            raise ResourceLimitError(
                f"{total} candidate tables exceed the cap "
                f"{self.limits.kernel}; enable propagation", cap="kernel")
        solutions = []
        for values in product(self.domain, repeat=len(self.variables)):
            assignment = dict(zip(self.variables, values))
            if self._satisfies(assignment):
                solutions.append(assignment)
        return solutions


def _power_images(s: Substitution, m: int, limits: Limits
                  ) -> Dict[Symbol, Word]:
    return {a: theta_power_word(s, a, m, limits) for a in s.alphabet}


def two_block_search(source: Substitution, target: Substitution, p: int,
                     k: int, offset: int, c: int,
                     limits: Limits = DEFAULT_LIMITS) -> List[BlockCode]:
    """
    Maps f: L_2(source) → target alphabet with

        f(x_0x_1)f(x_1x_2) ∈ L_2(target) for x_0x_1x_2 ∈ L_3(source),
        f(u_{i-1}u_i) = θ'^M(f(x_{-1}x_0)f(x_0x_1))_{N+i}, 0 ≤ i < r^M,

    where M = c!·p, u = θ^M(x_{-1}·x_0) has the image of x_0 starting at
    index 0, and the right-hand word is indexed from 0. Every solution is a
    code of radii (1, 0) with κ = k/(1 - r^p).
    """
    m = math.factorial(c) * p
    width = source.r ** m
    if 2 * width > limits.word:
        raise ResourceLimitError(
            f"condition words of length {2 * width} exceed {limits.word}",
            cap="word")
    source_images = _power_images(source, m, limits)
    target_images = _power_images(target, m, limits)
    slices: Dict[Tuple[Symbol, ...], Word] = {}

    def force(values: Tuple[Symbol, ...]) -> Word:
        forced = slices.get(values)
        if forced is None:
            word = target_images[values[0]] + target_images[values[1]]
            forced = slices[values] = word[offset:offset + width]
        return forced

    variables = source.sorted_words(language(source, 2, limits))
    triples = source.sorted_words(language(source, 3, limits))
    children_of: Dict[Word, Tuple[Word, ...]] = {}
    rules = []
    for w in triples:
        parent = w[0:2]
        children = children_of.get(parent)
        if children is None:
            u = source_images[w[0]] + source_images[w[1]]
            children = tuple(u[width + i - 1:width + i + 1]
                             for i in range(width))
            children_of[parent] = children
        rules.append(_ForcingRule((parent, w[1:3]), children, force))
    search = BlockMapSearch(
        variables, target.alphabet, [(w[0:2], w[1:3]) for w in triples],
        language(target, 2, limits), rules, limits)
    kappa = RAdicRational(k, 1 - source.r ** p, source.r)
    return [BlockCode(1, 0, table, source.alphabet, target.alphabet, kappa)
            for table in search.solutions()]


def three_block_search(source: Substitution, target: Substitution, c: int,
                       limits: Limits = DEFAULT_LIMITS) -> List[BlockCode]:
    """
    Maps g: L_3(source) → target alphabet with

        g(x_0x_1x_2)g(x_1x_2x_3) ∈ L_2(target) for x_0…x_3 ∈ L_4(source),
        g(u_{i-1}u_iu_{i+1}) = θ'^{c!}(g(x_{-1}x_0x_1))_i, 0 ≤ i < r^{c!},

    where u = θ^{c!}(x_{-1}·x_0x_1) is indexed from -r^{c!}. Every solution
    is a code of radii (1, 1) with κ = 0.
    """
    m = math.factorial(c)
    width = source.r ** m
    if 3 * width > limits.word:
        raise ResourceLimitError(
            f"condition words of length {3 * width} exceed {limits.word}",
            cap="word")
    source_images = _power_images(source, m, limits)
    target_images = _power_images(target, m, limits)

    def force(values: Tuple[Symbol, ...]) -> Word:
        return target_images[values[0]]

    variables = source.sorted_words(language(source, 3, limits))
    quads = source.sorted_words(language(source, 4, limits))
    rules = []
    for w in variables:
        u = source_images[w[0]] + source_images[w[1]] + source_images[w[2]]
        children = tuple(u[width + i - 1:width + i + 2]
                         for i in range(width))
        rules.append(_ForcingRule((w,), children, force))
    search = BlockMapSearch(
        variables, target.alphabet, [(w[0:3], w[1:4]) for w in quads],
        language(target, 2, limits), rules, limits)
    kappa = RAdicRational.from_int(0, source.r)
    return [BlockCode(1, 1, table, source.alphabet, target.alphabet, kappa)
            for table in search.solutions()]


def search_generator(s: Substitution, candidate: CandidateKappa,
                     c: Optional[int] = None,
                     limits: Limits = DEFAULT_LIMITS) -> List[BlockCode]:
    """
    Automorphisms of radii (1, 0) with fingerprint candidate.kappa.
    """
    if c is None:
        c = subset_graph(s, limits).c
    codes = two_block_search(s, s, candidate.p, candidate.k, candidate.N, c,
                             limits)
    logger.info("Generator search at d=%d: %d solutions.", candidate.d,
                len(codes))
    return codes


def search_kernel(s: Substitution, c: Optional[int] = None,
                  limits: Limits = DEFAULT_LIMITS) -> List[BlockCode]:
    """
    The automorphisms with κ = 0, as codes of radii (1, 1). The identity
    projection g(x, y, z) = y is always among them.
    """
    if c is None:
        c = subset_graph(s, limits).c
    codes = three_block_search(s, s, c, limits)
    identity = identity_code(s)
    if not any(codes_equal(code, identity, s, limits) for code in codes):
        raise InternalConsistencyError("kernel search lost the identity")
    logger.info("Kernel search: %d automorphisms with kappa 0.", len(codes))
    return codes


@dataclass(frozen=True)
class Relation:
    """
    An identity between codes, checked by composition before it is listed.
    """

    text: str

    def __str__(self):
        return self.text


@dataclass
class TowerElement:
    """
    The automorphism Ψ_j of the tower: apply the base code on the aligned
    blocks, then advance the phase by j (0 ≤ j < h).
    """

    code: BlockCode
    phase: int

    def compose(self, other: "TowerElement", tower: TowerConjugacy,
                limits: Limits = DEFAULT_LIMITS) -> "TowerElement":
        """
        (X)_i ∘ (Y)_j = (XY)_{i+j}, carrying (XYσ')_{i+j-h} past h.
        """
        base = tower.base
        code = code_compose(self.code, other.code, base, limits)
        phase = self.phase + other.phase
        if phase >= tower.h:
            code = code_compose(code, shift_code(base, 1, limits), base,
                                limits)
            phase -= tower.h
        return TowerElement(code, phase)

    def power(self, n: int, tower: TowerConjugacy,
              limits: Limits = DEFAULT_LIMITS) -> "TowerElement":
        """n-fold composition in the tower, n ≥ 0."""
        result = TowerElement(identity_code(tower.base), 0)
        for _ in range(n):
            result = self.compose(result, tower, limits)
        return result

    def lift(self, tower: TowerConjugacy,
             limits: Limits = DEFAULT_LIMITS) -> BlockCode:
        return lift_tower_code(self.code, tower, phase_shift=self.phase,
                               limits=limits)

    def to_json(self) -> Dict:
        return {"phase": self.phase, "base_code": self.code.to_json()}


@dataclass
class TowerPresentation:
    """
    Generators of Aut on a tower of height h over a base whose fingerprints
    form (1/k)ℤ. Φ is the base automorphism with κ = 1/k; `generator` has
    rotation g/k with g = gcd(k, h), and for g > 1 `torsion` is the
    rotation-free element Φ^{k/g}σ'^{-1} in phase h - h/g, of order g.
    """

    h: int
    k: int
    g: int
    phi: BlockCode
    generator: TowerElement
    torsion: Optional[TowerElement] = None

    @property
    def cyclic_rotations(self) -> bool:
        return self.g == 1

    def to_json(self) -> Dict:
        return {
            "h": self.h,
            "k": self.k,
            "g": self.g,
            "generator": self.generator.to_json(),
            "torsion": self.torsion.to_json() if self.torsion else None,
        }


@dataclass(frozen=True)
class OneSidedReport:
    status: str
    bound: Optional[int] = None

    def to_json(self) -> Dict:
        return {"status": self.status, "bound": self.bound}


@dataclass
class AutPresentation:
    """
    Aut(X_θ, σ) as a finite kernel (κ = 0) extended by the cyclic group of
    fingerprints. `root` generates the fingerprints when they are not just
    the integers; its κ is ℓ/n with n = `root_denominator`.
    """

    substitution: Substitution
    kernel: List[BlockCode]
    kernel_table: List[List[int]]
    kernel_name: str
    root: Optional[BlockCode]
    root_denominator: int
    relations: List[Relation]
    action: List[int]
    iso_type: str
    candidates: List[CandidateKappa] = field(default_factory=list)
    automaton: Optional[SubsetAutomaton] = None
    height: Optional[HeightReport] = None
    injectivization: Optional[Injectivization] = None
    tower: Optional[TowerPresentation] = None
    one_sided: Optional[OneSidedReport] = None

    @property
    def quotient_order(self) -> int:
        """
        |Aut / ⟨σ⟩|.
        """
        return self.root_denominator * len(self.kernel)

    def to_json(self) -> Dict:
        return {
            "iso_type": self.iso_type,
            "quotient_order": self.quotient_order,
            "kernel": [code.to_json() for code in self.kernel],
            "kernel_table": self.kernel_table,
            "kernel_name": self.kernel_name,
            "root": self.root.to_json() if self.root is not None else None,
            "root_digits": (expand(self.root.kappa).to_json()
                            if self.root is not None else None),
            "relations": [str(relation) for relation in self.relations],
            "action": self.action,
            "candidates": [c.to_json() for c in self.candidates],
            "tower": self.tower.to_json() if self.tower else None,
            "one_sided": self.one_sided.to_json() if self.one_sided else None,
            "end_equals_aut": True,
        }


def _index_of(code: BlockCode, codes: Sequence[BlockCode], s: Substitution,
              limits: Limits) -> Optional[int]:
    for i, other in enumerate(codes):
        if codes_equal(code, other, s, limits):
            return i
    return None


def _sigma(exponent: int) -> str:
    return "Id" if exponent == 0 else f"σ^{exponent}"


def assemble_presentation(s: Substitution, kernel: Sequence[BlockCode],
                          root: Optional[BlockCode],
                          limits: Limits = DEFAULT_LIMITS) -> AutPresentation:
    """
    Multiplication table of the kernel, the relations tying the root to σ
    and the kernel, and the isomorphism type. Every relation is checked by
    composing codes on the shift of `s`.

    Raises:
        InternalConsistencyError: If the kernel is not closed or a relation
            fails its check.
    """
    identity = identity_code(s)
    kernel = sorted(kernel,
                    key=lambda code: not codes_equal(code, identity, s,
                                                     limits))
    if not kernel or not codes_equal(kernel[0], identity, s, limits):
        raise InternalConsistencyError("kernel does not contain the identity")

    table: List[List[int]] = []
    for a in kernel:
        row = []
        for b in kernel:
            index = _index_of(code_compose(a, b, s, limits), kernel, s,
                              limits)
            if index is None:
                raise InternalConsistencyError(
                    "kernel is not closed under composition")
            row.append(index)
        table.append(row)
    kernel_name = group_name(table)

    relations: List[Relation] = []
    for i in range(1, len(kernel)):
        relations.append(Relation(f"K{i}^{element_order(table, i)} = Id"))

    action = list(range(len(kernel)))
    n = 1
    if root is not None:
        ell, n = root.kappa.num, root.kappa.den
        residue = code_compose(code_power(root, n, s, limits),
                               shift_code(s, -ell, limits), s, limits)
        e = _index_of(residue, kernel, s, limits)
        if e is None:
            raise InternalConsistencyError(
                f"G^{n} ∘ σ^{-ell} is not in the kernel")
        relations.insert(0, Relation(
            f"G^{n} = {_sigma(ell)}" if e == 0
            else f"G^{n} = {_sigma(ell)} ∘ K{e}"))
        m = element_order(table, e)
        if not codes_equal(code_power(root, n * m, s, limits),
                           shift_code(s, ell * m, limits), s, limits):
            raise InternalConsistencyError(
                f"G^{n * m} differs from σ^{ell * m}")
        if m > 1:
            relations.insert(1, Relation(f"G^{n * m} = {_sigma(ell * m)}"))
        for i, element in enumerate(kernel):
            conjugated = code_compose(root, element, s, limits)
            for j, other in enumerate(kernel):
                if codes_equal(conjugated,
                               code_compose(other, root, s, limits), s,
                               limits):
                    action[i] = j
                    break
            else:
                raise InternalConsistencyError(
                    f"G does not normalize the kernel at K{i}")
            if action[i] != i:
                relations.append(Relation(f"G ∘ K{i} = K{action[i]} ∘ G"))

    if len(kernel) == 1:
        iso_type = "Z"
    elif action == list(range(len(kernel))):
        iso_type = f"Z × {kernel_name}"
    else:
        iso_type = f"{kernel_name} ⋊ Z"
    return AutPresentation(
        substitution=s, kernel=list(kernel), kernel_table=table,
        kernel_name=kernel_name, root=root, root_denominator=n,
        relations=relations, action=action, iso_type=iso_type)


def lift_injectivization(presentation: AutPresentation, inj: Injectivization,
                         limits: Limits = DEFAULT_LIMITS) -> AutPresentation:
    """
    Conjugate every code by the injectivization, Ψ = τ⁻¹∘Φ∘τ, and
    reassemble the presentation on the source shift.
    """
    if inj.trivial:
        presentation.injectivization = inj
        return presentation
    s = inj.source

    def conjugate(code: BlockCode) -> BlockCode:
        inner = code_compose(code, inj.forward, s, limits)
        return trim_radius(code_compose(inj.inverse, inner, s, limits), s,
                           limits)

    lifted = assemble_presentation(
        s, [conjugate(code) for code in presentation.kernel],
        conjugate(presentation.root) if presentation.root else None, limits)
    lifted.candidates = presentation.candidates
    lifted.automaton = presentation.automaton
    lifted.injectivization = inj
    return lifted


def _closure(generators: Sequence[BlockCode], s: Substitution,
             limits: Limits) -> List[BlockCode]:
    elements = [identity_code(s)]
    for code in generators:
        if _index_of(code, elements, s, limits) is None:
            elements.append(code)
    frontier = list(elements)
    while frontier:
        fresh = []
        for a in frontier:
            for b in list(elements):
                for product_code in (code_compose(a, b, s, limits),
                                     code_compose(b, a, s, limits)):
                    if _index_of(product_code, elements, s, limits) is None:
                        product_code = trim_radius(product_code, s, limits)
                        elements.append(product_code)
                        fresh.append(product_code)
        frontier = fresh
    return elements


def lift_height(presentation: AutPresentation, tower: TowerConjugacy,
                limits: Limits = DEFAULT_LIMITS) -> AutPresentation:
    """
    Aut of the tower X_θ ≅ X_θ' × {0,…,h-1} from Aut of its base.

    With base fingerprints (1/k)ℤ, the tower rotations h·κ + j form
    (g/k)ℤ for g = gcd(k, h). The generator (Φ^a σ'^m)_b has rotation g/k;
    the rotation-free part is generated by the lifted base kernel and, for
    g > 1, the torsion element (Φ^{k/g}σ'^{-1})_{h-h/g}. All codes are
    built on X_θ and the presentation is reassembled there.
    """
    if tower.trivial:
        return presentation
    h, base, s = tower.h, tower.base, tower.original
    root = presentation.root
    k = presentation.root_denominator if root is not None else 1
    if root is not None:
        ell = root.kappa.num
        a = pow(ell % k, -1, k) if k > 1 else 0
        b = (1 - a * ell) // k
        phi = code_compose(code_power(root, a, base, limits),
                           shift_code(base, b, limits), base, limits)
    else:
        phi = shift_code(base, 1, limits)
    g = math.gcd(k, h)
    kk, hh = k // g, h // g
    a2 = pow(hh % kk, -1, kk) if kk > 1 else 0
    b2 = (1 - a2 * hh) // kk
    m, phase = divmod(b2, h)
    generator = TowerElement(
        code_compose(code_power(phi, a2, base, limits),
                     shift_code(base, m, limits), base, limits), phase)
    torsion = None
    if g > 1:
        torsion = TowerElement(
            code_compose(code_power(phi, kk, base, limits),
                         shift_code(base, -1, limits), base, limits),
            h - hh)

    kernel_generators = [lift_tower_code(code, tower, limits=limits)
                         for code in presentation.kernel]
    torsion_code = None
    if torsion is not None:
        torsion_code = torsion.lift(tower, limits)
        kernel_generators.append(torsion_code)
    kernel = _closure(kernel_generators, s, limits)
    tower_root = generator.lift(tower, limits) if kk > 1 else None
    lifted = assemble_presentation(s, kernel, tower_root, limits)
    if torsion_code is not None and len(presentation.kernel) == 1:
        cycle = torsion.power(g, tower, limits)
        if (cycle.phase != 0
                or not codes_equal(cycle.code, identity_code(base), base,
                                   limits)
                or not codes_equal(code_power(torsion_code, g, s, limits),
                                   identity_code(s), s, limits)):
            raise InternalConsistencyError(f"W^{g} is not the identity")
        lifted.relations.append(Relation(f"W^{g} = Id"))
    lifted.candidates = presentation.candidates
    lifted.automaton = presentation.automaton
    lifted.injectivization = presentation.injectivization
    lifted.tower = TowerPresentation(h, k, g, phi, generator, torsion)
    logger.info("Lifted through height %d: k=%d, gcd=%d, Aut ≅ %s.", h, k,
                g, lifted.iso_type)
    return lifted


def one_sided_aut(s: Substitution,
                  automaton: Optional[SubsetAutomaton] = None,
                  limits: Limits = DEFAULT_LIMITS) -> OneSidedReport:
    """
    The one-sided shift has only the identity when κ is injective, i.e.
    with a coincidence (c = 1). Otherwise only the bound c is known.
    """
    if automaton is None:
        automaton = subset_graph(s, limits)
    if automaton.c == 1:
        return OneSidedReport("trivial", 1)
    return OneSidedReport(
        "unknown (bounded by kernel size ≤ c)", automaton.c)


def aut_group(s: Substitution,
              limits: Limits = DEFAULT_LIMITS) -> AutPresentation:
    """
    Aut(X_θ, σ) for a primitive substitution with infinite shift.

    The search runs on the injectivization of the pure base: the kernel
    first, then the candidate denominators from the largest down; the first
    candidate with a solution gives the root. The result is lifted back to
    θ with every relation rechecked.
    """
    check_primitive_infinite(s, limits)
    report = height(s, limits)
    tower = pure_base(s, report, limits)
    inj = injectivize(tower.base, limits)
    theta = inj.target
    automaton = subset_graph(theta, limits)
    c = automaton.c

    kernel = search_kernel(theta, c, limits)
    candidates = enumerate_candidate_kappas(theta, automaton, limits)
    survivors = [cand for cand in candidates if cand.verdict != PRUNED]
    root = None
    results = run_ordered(
        lambda cand: search_generator(theta, cand, c, limits), survivors,
        limits.jobs)
    try:
        for candidate, codes in zip(survivors, results):
            if codes:
                candidate.verdict = REALIZED
                root = codes[0]
                break
            candidate.verdict = SEARCHED_EMPTY
    finally:
        results.close()
    for candidate in survivors:
        if candidate.verdict == PENDING:
            candidate.verdict = SKIPPED

    presentation = assemble_presentation(theta, kernel, root, limits)
    presentation.candidates = candidates
    presentation.automaton = automaton
    presentation = lift_injectivization(presentation, inj, limits)
    presentation = lift_height(presentation, tower, limits)
    presentation.height = report
    presentation.automaton = automaton
    presentation.one_sided = one_sided_aut(theta, automaton, limits)
    logger.info("Aut of %r ≅ %s (quotient by the shift of order %d).",
                s, presentation.iso_type, presentation.quotient_order)
    return presentation
