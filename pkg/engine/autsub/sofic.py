"""
The subset graph of a constant-length substitution and the sofic shift it
presents.

Composing column maps shrinks the alphabet: θ_{w_1}∘…∘θ_{w_k}(𝒜). The least
size reached is the column number c, and the digit words whose composition
reaches c are forbidden. The graph has the subsets of size > c reachable
from 𝒜 as vertices and an i-labelled edge θ_i(A) → A, so the digit words
avoiding the forbidden set are the label sequences of paths ending at 𝒜.

Digit words are least significant digit first throughout: the word
(d_0, …, d_{k-1}) stands for θ_{d_0}∘…∘θ_{d_{k-1}}.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, \
    Set, Tuple

import networkx as nx

from .limits import DEFAULT_LIMITS, Limits
from .radic import RAdicDigits, RAdicRational, expand
from .substitution import Substitution, Symbol, fiber_letters, language, \
    periodic_letters

logger = logging.getLogger(__name__)

__all__ = [
    "SubsetAutomaton",
    "Admissibility",
    "column_number",
    "subset_graph",
    "shortest_forbidden",
    "periodic_points_count",
    "kappa_admissible",
    "to_dot",
]

Subset = FrozenSet[Symbol]
Digits = Tuple[int, ...]


def _image(s: Substitution, i: int, subset: Subset) -> Subset:
    column = s.column(i)
    return frozenset(column[a] for a in subset)


def _reachable_subsets(s: Substitution) -> Dict[Subset, int]:
    """
    Every image θ_{w_1}∘…∘θ_{w_k}(𝒜), k ≥ 0, with the least k reaching it.
    """
    full = frozenset(s.alphabet)
    depth = {full: 0}
    queue = deque([full])
    while queue:
        subset = queue.popleft()
        for i in range(s.r):
            image = _image(s, i, subset)
            if image not in depth:
                depth[image] = depth[subset] + 1
                queue.append(image)
    return depth


def column_number(s: Substitution) -> int:
    """
    Least size of an image of 𝒜 under a composition of column maps.
    """
    return min(len(subset) for subset in _reachable_subsets(s))


def shortest_forbidden(s: Substitution) -> int:
    """
    Length j ≥ 1 of the shortest digit word whose composition has size c.
    """
    c = column_number(s)
    full = frozenset(s.alphabet)
    level: Set[Subset] = {full}
    seen: Set[Subset] = set()
    j = 0
    while True:
        j += 1
        level = {_image(s, i, subset) for subset in level
                 for i in range(s.r)} - seen
        if any(len(subset) == c for subset in level):
            return j
        seen |= level


def periodic_points_count(s: Substitution,
                          limits: Limits = DEFAULT_LIMITS) -> int:
    """
    |P|: the 2-words x_{-1}x_0 seeding a two-sided θ-periodic point, i.e.
    x_{-1} periodic under the last column map and x_0 under the first.
    """
    return len(_periodic_pairs(s, limits))


def _periodic_pairs(s: Substitution, limits: Limits) -> List[Tuple[Symbol,
                                                                   Symbol]]:
    last = periodic_letters(s.column(s.r - 1))
    first = periodic_letters(s.column(0))
    return [pair for pair in s.sorted_words(language(s, 2, limits))
            if pair[0] in last and pair[1] in first]


def _subset_key(s: Substitution, subset: Subset):
    return -len(subset), sorted(s.index(a) for a in subset)


def _render_subset(s: Substitution, subset: Subset) -> str:
    return "{" + ",".join(sorted(subset, key=s.index)) + "}"


class SubsetAutomaton:
    """
    The labelled subset graph of θ together with the invariants read from
    it. Build it with `subset_graph`. Example usage:

        automaton = subset_graph(parse_substitution("0->01\\n1->10"))
        automaton.c              # 2
        automaton.sigma_empty    # True
        automaton.augment        # True, |P| = 4 > 2

    Attributes:
        substitution: θ.
        graph: networkx MultiDiGraph on frozensets; edge attribute "label".
        c: Column number.
        j: Shortest forbidden word length.
        sigma_empty: No left-infinite path through vertices of size > c.
        periodic_pairs: Seeds of the θ-periodic points.
        augment: |P| > c, so Σ̂ adds the constant points 0̄ and (r-1)̄.
    """

    def __init__(self, substitution: Substitution, graph: nx.MultiDiGraph,
                 c: int, j: int, periodic_pairs: Sequence[Tuple[Symbol,
                                                                Symbol]]):
        self.substitution = substitution
        self.graph = graph
        self.c = c
        self.j = j
        self.full: Subset = frozenset(substitution.alphabet)
        self.periodic_pairs = list(periodic_pairs)
        large = [v for v in graph.nodes if len(v) > c]
        self.sigma_empty = nx.is_directed_acyclic_graph(graph.subgraph(large))

    @property
    def r(self) -> int:
        return self.substitution.r

    @property
    def periodic_count(self) -> int:
        return len(self.periodic_pairs)

    @property
    def augment(self) -> bool:
        return self.periodic_count > self.c

    @property
    def denominator_bound(self) -> int:
        return self.r ** self.j - 1

    def vertices(self) -> List[Subset]:
        return sorted(self.graph.nodes,
                      key=lambda v: _subset_key(self.substitution, v))

    def edges(self) -> List[Tuple[Subset, Subset, List[int]]]:
        """
        (source, target, labels) with parallel edges merged, in vertex
        order.
        """
        order = {v: n for n, v in enumerate(self.vertices())}
        merged: Dict[Tuple[Subset, Subset], List[int]] = {}
        for source, target, label in self.graph.edges(data="label"):
            merged.setdefault((source, target), []).append(label)
        return [(source, target, sorted(labels))
                for (source, target), labels in sorted(
                    merged.items(),
                    key=lambda item: (order[item[0][0]], order[item[0][1]]))]

    def render(self, subset: Subset) -> str:
        return _render_subset(self.substitution, subset)

    def allows(self, digits: Sequence[int]) -> bool:
        """
        Whether the digit word avoids the forbidden words, i.e. its
        composition image has size > c.
        """
        return len(fiber_letters(self.substitution, digits)) > self.c

    def path_words(self, length: int) -> Iterator[Digits]:
        """
        Label words (d_0, …, d_{length-1}) of the paths through vertices
        of size > c that end at 𝒜, walking the edges backwards.
        """
        def walk(subset: Subset, suffix: Digits) -> Iterator[Digits]:
            if len(suffix) == length:
                yield suffix
                return
            for i in range(self.r):
                image = _image(self.substitution, i, subset)
                if len(image) > self.c and self.graph.has_edge(image, subset):
                    yield from walk(image, (i,) + suffix)

        if len(self.full) > self.c:
            yield from walk(self.full, ())

    def is_sigma_point(self, period: Sequence[int]) -> bool:
        """
        Whether the purely periodic point with the given repeating digits
        lies in Σ: the images Θ_w^m(𝒜) stay above c for all m.
        """
        subset = self.full
        seen: Set[Subset] = set()
        while subset not in seen:
            seen.add(subset)
            for digit in reversed(period):
                subset = _image(self.substitution, digit, subset)
                if len(subset) <= self.c:
                    return False
        return True

    def in_sigma_hat(self, period: Sequence[int]) -> bool:
        if self.augment and len(set(period)) == 1 \
                and period[0] in (0, self.r - 1):
            return True
        return self.is_sigma_point(period)

    def sigma_hat_points(self, pmax: int, budget: int) -> List[Digits]:
        """
        Periods of purely periodic points of Σ̂, as Lyndon words of length at
        most `pmax` in order of length, with 0̄ and (r-1)̄ first when Σ̂ is
        augmented. Stops after `budget` points.

        The search prepends the least significant digit, so a word's image
        is θ_d applied to its suffix's image; forbidden words are factor
        closed, so their extensions are never visited.
        """
        points: List[Digits] = []
        if self.augment:
            points.extend([(0,), (self.r - 1,)] if self.r > 1 else [(0,)])
        if len(self.full) <= self.c:
            return points[:budget]
        level: List[Tuple[Digits, Subset]] = [((), self.full)]
        visited = 0
        node_budget = budget * 64
        for length in range(1, pmax + 1):
            next_level: List[Tuple[Digits, Subset]] = []
            for word, subset in level:
                for digit in range(self.r):
                    image = _image(self.substitution, digit, subset)
                    if len(image) <= self.c:
                        continue
                    extended = (digit,) + word
                    next_level.append((extended, image))
                    visited += 1
                    if (_is_lyndon(extended) and extended not in points
                            and self.is_sigma_point(extended)):
                        points.append(extended)
                        if len(points) >= budget:
                            logger.info("Periodic point budget %d reached at "
                                        "period %d.", budget, length)
                            return points
                    if visited >= node_budget:
                        logger.info("Periodic point search stopped after %d "
                                    "words.", visited)
                        return points
            level = next_level
            if not level:
                break
        return points

    def to_json(self) -> Dict:
        return {
            "vertices": [self.render(v) for v in self.vertices()],
            "edges": [
                {"source": self.render(source), "target": self.render(target),
                 "labels": labels}
                for source, target, labels in self.edges()],
            "c": self.c,
            "j": self.j,
            "sigma_empty": self.sigma_empty,
            "periodic_count": self.periodic_count,
            "augment": self.augment,
        }


def _is_lyndon(word: Digits) -> bool:
    return all(word < word[i:] + word[:i] for i in range(1, len(word)))


def subset_graph(s: Substitution, limits: Limits = DEFAULT_LIMITS
                 ) -> SubsetAutomaton:
    """
    The subset graph: vertices {A reachable : |A| > c} ∪ {𝒜}, an i-labelled
    edge θ_i(A) → A whenever both ends are vertices.
    """
    reachable = _reachable_subsets(s)
    c = min(len(subset) for subset in reachable)
    full = frozenset(s.alphabet)
    vertices = [v for v in reachable if len(v) > c or v == full]
    graph = nx.MultiDiGraph()
    for vertex in sorted(vertices, key=lambda v: _subset_key(s, v)):
        graph.add_node(vertex)
    for vertex in list(graph.nodes):
        for i in range(s.r):
            image = _image(s, i, vertex)
            if image in graph:
                graph.add_edge(image, vertex, label=i)
    automaton = SubsetAutomaton(s, graph, c, shortest_forbidden(s),
                                _periodic_pairs(s, limits))
    logger.info("Subset graph of %r: %d vertices, c=%d, j=%d, |P|=%d, "
                "sigma empty: %s.", s, graph.number_of_nodes(), c,
                automaton.j, automaton.periodic_count, automaton.sigma_empty)
    return automaton


@dataclass(frozen=True)
class Admissibility:
    """
    Verdict of the κ prune. A rejection names the periodic point x of Σ̂
    (its repeating digits), the sign of the translation tried and the
    expansion of x ± t whose period leaves Σ̂.
    """

    accepted: bool
    witness: Optional[Digits] = None
    sign: int = 0
    image: Optional[RAdicDigits] = None

    def __bool__(self):
        return self.accepted

    def describe(self) -> str:
        if self.accepted:
            return "admissible"
        op = "+" if self.sign > 0 else "-"
        period = "".join(str(d) for d in reversed(self.witness))
        return (f"x=({period}) lies in the tail set but x {op} t = "
                f"{self.image.render()} does not")

    def to_json(self) -> Dict:
        if self.accepted:
            return {"accepted": True}
        return {
            "accepted": False,
            "witness": list(self.witness),
            "sign": self.sign,
            "image": self.image.to_json(),
        }


def kappa_admissible(s: Substitution, t: RAdicRational,
                     pmax: Optional[int] = None,
                     automaton: Optional[SubsetAutomaton] = None,
                     limits: Limits = DEFAULT_LIMITS) -> Admissibility:
    """
    Sound prune for a fingerprint t: every automorphism fingerprint maps
    the tail set Σ̃ onto itself, so t is rejected when some periodic point x
    of Σ̂ has x + t or x - t outside Σ̃. A rational has an eventually
    periodic expansion, and it lies in Σ̃ exactly when its period does.
    Acceptance proves nothing.
    """
    if t.num == 0:
        return Admissibility(True)
    if automaton is None:
        automaton = subset_graph(s, limits)
    if pmax is None:
        pmax = limits.pmax
    for point in automaton.sigma_hat_points(pmax, limits.periodic_budget):
        for shift in range(len(point)):
            rotated = point[shift:] + point[:shift]
            x = RAdicRational.from_periodic(rotated, s.r)
            for sign in (1, -1):
                y = x + t if sign > 0 else x - t
                digits = expand(y)
                if not automaton.in_sigma_hat(digits.period):
                    verdict = Admissibility(False, rotated, sign, digits)
                    logger.info("Fingerprint %s rejected: %s.", t,
                                verdict.describe())
                    return verdict
    return Admissibility(True)


def to_dot(automaton: SubsetAutomaton, name: str = "subsets") -> str:
    """
    Graphviz rendering: vertices labelled as set literals, parallel edges
    merged into one comma-separated label.
    """
    ids = {v: f"v{n}" for n, v in enumerate(automaton.vertices())}
    lines = [f"digraph {name} {{"]
    for vertex, ident in ids.items():
        lines.append(f'    {ident} [label="{automaton.render(vertex)}"];')
    for source, target, labels in automaton.edges():
        label = ",".join(str(i) for i in labels)
        lines.append(f'    {ids[source]} -> {ids[target]} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
