"""
Structural normalization of a substitution before the automorphism search.

    height: the height h and the return-word data it is computed from.
    pure_base: a height-one substitution θ' with X_θ ≅ X_θ' × {0,…,h-1}.
    injectivize: an injective substitution conjugate to the input, with the
        letter-to-letter conjugacy and its inverse code.

All three keep enough data to carry automorphisms of the reduced shift back
to the original one.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, \
    Tuple

from .blockcode import BlockCode, invert_code, letter_code, shift_code, \
    code_compose, trim_radius
from .exceptions import InternalConsistencyError, PreconditionError, \
    ResourceLimitError
from .limits import DEFAULT_LIMITS, Limits
from .radic import RAdicRational
from .substitution import Substitution, Symbol, Word, check_primitive_infinite, \
    cycle_length, is_injective, is_primitive, language, power

logger = logging.getLogger(__name__)

__all__ = [
    "HeightReport",
    "TowerConjugacy",
    "Injectivization",
    "fixed_letter_power",
    "height",
    "pure_base",
    "injectivize",
    "lift_tower_code",
]


@dataclass(frozen=True)
class HeightReport:
    """
    Attributes:
        h: The height, the largest divisor of `g` coprime to r.
        g: gcd of the return-word lengths.
        return_lengths: Lengths of the return words to `fixed_letter`.
        fixed_letter: First letter of the fixed point u = θ^power(u).
        power: Least k such that θ^k(fixed_letter) starts with it.
        return_words: The return words themselves, in canonical order.
    """

    h: int
    g: int
    return_lengths: FrozenSet[int]
    fixed_letter: Symbol
    power: int
    return_words: Tuple[Word, ...] = ()

    def to_json(self) -> Dict:
        return {
            "h": self.h,
            "g": self.g,
            "return_lengths": sorted(self.return_lengths),
            "fixed_letter": self.fixed_letter,
            "power": self.power,
        }


def fixed_letter_power(s: Substitution) -> Tuple[Symbol, int]:
    """
    The first letter a, in canonical order, that is periodic under θ_0,
    with its cycle length k. θ^k(a) starts with a.
    """
    first = s.column(0)
    for a in s.alphabet:
        k = cycle_length(first, a)
        if k:
            return a, k
    raise InternalConsistencyError("a self-map of a finite set has a cycle")


def _split_at(word: Word, letter: Symbol) -> List[Word]:
    starts = [i for i, b in enumerate(word) if b == letter]
    if not starts or starts[0] != 0:
        raise InternalConsistencyError(
            f"return word image does not start with {letter!r}")
    ends = starts[1:] + [len(word)]
    return [word[i:j] for i, j in zip(starts, ends)]


def _strip_base_primes(g: int, r: int) -> int:
    h = g
    common = math.gcd(h, r)
    while common > 1:
        h //= common
        common = math.gcd(h, r)
    return h


def height(s: Substitution, limits: Limits = DEFAULT_LIMITS) -> HeightReport:
    """
    The height of θ, from the return words to the first letter of a
    θ-periodic point.

    The first return word in the fixed point u of t = θ^k is closed under
    "apply t and cut before every occurrence of the letter"; u = t^n(u)
    starts with t^n of that word, so the closure lists every return word
    of u.
    """
    check_primitive_infinite(s, limits)
    a, k = fixed_letter_power(s)
    t = power(s, k, limits)

    prefix: Word = (a,)
    while a not in prefix[1:]:
        prefix = t.apply(prefix)
        if len(prefix) > limits.word:
            raise ResourceLimitError(
                f"no return to {a!r} within {limits.word} letters",
                cap="word")
    first = prefix[:prefix.index(a, 1)]

    returns = {first}
    frontier = [first]
    while frontier:
        fresh = []
        for word in frontier:
            image = t.apply(word)
            if len(image) > limits.word:
                raise ResourceLimitError(
                    f"return word image of length {len(image)} exceeds "
                    f"{limits.word}", cap="word")
            for piece in _split_at(image, a):
                if piece not in returns:
                    returns.add(piece)
                    fresh.append(piece)
        frontier = fresh

    lengths = frozenset(len(word) for word in returns)
    g = 0
    for n in lengths:
        g = math.gcd(g, n)
    h = _strip_base_primes(g, s.r)
    if h >= s.size:
        raise InternalConsistencyError(
            f"height {h} is not below the alphabet size {s.size}")
    logger.info("Height of %r is %d (return lengths %s, gcd %d).",
                s, h, sorted(lengths), g)
    return HeightReport(h, g, lengths, a, k,
                        tuple(sorted(returns, key=s.sort_key)))


def _block_symbol(block: Word) -> Symbol:
    if all(len(a) == 1 for a in block):
        return "".join(block)
    return ".".join(block)


@dataclass
class TowerConjugacy:
    """
    The presentation X_θ ≅ X_θ' × {0,…,h-1}: letters of X_θ fall into h
    phase classes, and the aligned h-blocks starting in class `phase` are
    the letters of the base θ'.

    Attributes:
        h: The height.
        original: The substitution θ.
        base: The pure base θ'.
        power: k when θ' was built from the aligned blocks of θ^k.
        phase: Class of the first letter of every aligned block.
        classes: Phase class of every letter of θ.
        blocks: Base letter ↦ the h-block it stands for.
    """

    h: int
    original: Substitution
    base: Substitution
    power: int = 1
    phase: int = 0
    classes: Dict[Symbol, int] = field(default_factory=dict)
    blocks: Dict[Symbol, Word] = field(default_factory=dict)

    def __post_init__(self):
        self._symbols: Dict[Word, Symbol] = {
            block: symbol for symbol, block in self.blocks.items()}

    @property
    def trivial(self) -> bool:
        return self.h == 1

    def symbol_of(self, block: Sequence[Symbol]) -> Symbol:
        try:
            return self._symbols[tuple(block)]
        except KeyError:
            raise PreconditionError(
                f"{tuple(block)!r} is not an aligned block") from None

    def encode(self, word: Sequence[Symbol]) -> Word:
        """
        Aligned word of θ (starting in the base phase, length a multiple
        of h) to the word of base letters.
        """
        word = tuple(word)
        if len(word) % self.h:
            raise PreconditionError(
                f"length {len(word)} is not a multiple of {self.h}")
        return tuple(self.symbol_of(word[i:i + self.h])
                     for i in range(0, len(word), self.h))

    def decode(self, symbols: Sequence[Symbol]) -> Word:
        out: List[Symbol] = []
        for symbol in symbols:
            out.extend(self.blocks[symbol])
        return tuple(out)

    def to_json(self) -> Dict:
        return {
            "h": self.h,
            "power": self.power,
            "phase": self.phase,
            "classes": {a: self.classes[a] for a in self.original.alphabet},
            "base": {symbol: list(self.base.image(symbol))
                     for symbol in self.base.alphabet},
        }


def _trivial_tower(s: Substitution) -> TowerConjugacy:
    return TowerConjugacy(
        h=1, original=s, base=s, power=1, phase=0,
        classes={a: 0 for a in s.alphabet},
        blocks={a: (a,) for a in s.alphabet})


def _letter_classes(report: HeightReport) -> Dict[Symbol, int]:
    classes: Dict[Symbol, int] = {}
    for word in report.return_words:
        for i, b in enumerate(word):
            if classes.setdefault(b, i % report.h) != i % report.h:
                raise InternalConsistencyError(
                    f"letter {b!r} occurs in two phase classes")
    return classes


def _class_offset(t: Substitution, classes: Mapping[Symbol, int],
                  h: int) -> int:
    """
    The e with class(t_0(b)) = R·class(b) + e (mod h) for every letter b.
    """
    first = t.column(0)
    offsets = {(classes[first[b]] - t.r * classes[b]) % h for b in t.alphabet}
    if len(offsets) != 1:
        raise InternalConsistencyError(
            f"images do not respect the phase classes: offsets {offsets}")
    return offsets.pop()


def pure_base(s: Substitution, report: Optional[HeightReport] = None,
              limits: Limits = DEFAULT_LIMITS) -> TowerConjugacy:
    """
    The pure base of θ on the aligned h-blocks.

    Blocks start in a class C with C ≡ r·C + e (mod h), so θ of a block is
    again r aligned blocks. When no class is fixed the construction runs on
    θ^k, whose fixed letter gives e = 0.

    Raises:
        InternalConsistencyError: If the base fails its height-one recheck.
    """
    if report is None:
        report = height(s, limits)
    h = report.h
    if h == 1:
        return _trivial_tower(s)

    classes = _letter_classes(report)
    t, k = s, 1
    offset = _class_offset(s, classes, h)
    phase = next((c for c in range(h) if (s.r * c + offset - c) % h == 0),
                 None)
    if phase is None:
        k = report.power
        t = power(s, k, limits)
        offset = _class_offset(t, classes, h)
        phase = next(c for c in range(h) if (t.r * c + offset - c) % h == 0)
        logger.info("No phase class is fixed by theta; building the base "
                    "from theta^%d.", k)

    blocks = {
        _block_symbol(word): word
        for word in s.sorted_words(language(s, h, limits))
        if classes[word[0]] == phase}
    symbols = {word: symbol for symbol, word in blocks.items()}
    rules: Dict[Symbol, Word] = {}
    for symbol, word in blocks.items():
        image = t.apply(word)
        pieces = [image[i:i + h] for i in range(0, len(image), h)]
        for piece in pieces:
            if piece not in symbols:
                raise InternalConsistencyError(
                    f"theta of block {word!r} leaves the aligned blocks")
        rules[symbol] = tuple(symbols[piece] for piece in pieces)

    base = Substitution(list(blocks), rules, tokens=True)
    if not is_primitive(base) or height(base, limits).h != 1:
        raise InternalConsistencyError(
            f"pure base {base!r} of {s!r} does not have height one")
    logger.info("Pure base of %r on %d aligned %d-blocks: %r.",
                s, len(blocks), h, base)
    return TowerConjugacy(h=h, original=s, base=base, power=k, phase=phase,
                          classes=classes, blocks=blocks)


def lift_tower_code(code: BlockCode, source: TowerConjugacy,
                    target: Optional[TowerConjugacy] = None,
                    phase_shift: int = 0,
                    limits: Limits = DEFAULT_LIMITS) -> BlockCode:
    """
    The code σ^phase_shift ∘ Φ_0 on the original shift, where Φ_0 acts as
    `code` on the aligned blocks and keeps every point's phase.

    A letter in class C sits at offset o = C - phase inside its aligned
    block, so a window of h-1 extra letters to the left locates the block.
    """
    if target is None:
        target = source
    if source.h != target.h:
        raise PreconditionError("towers of different heights")
    h, s = source.h, source.original
    if h == 1:
        lifted = code
    else:
        left = h - 1 + h * code.left
        right = h * (code.right + 1) - 1
        table: Dict[Word, Symbol] = {}
        for window in language(s, left + right + 1, limits):
            o = (source.classes[window[left]] - source.phase) % h
            start = left - o - h * code.left
            blocks = tuple(
                source.symbol_of(window[start + h * i:start + h * (i + 1)])
                for i in range(code.width))
            table[window] = target.blocks[code.output(blocks)][o]
        kappa = (RAdicRational(code.kappa.num * h, code.kappa.den, s.r)
                 if code.kappa is not None else None)
        lifted = trim_radius(
            BlockCode(left, right, table, s.alphabet,
                      target.original.alphabet, kappa), s, limits)
    if phase_shift:
        lifted = code_compose(lifted, shift_code(s, phase_shift, limits), s,
                              limits)
    return lifted


@dataclass
class Injectivization:
    """
    Attributes:
        source: The input substitution θ.
        target: The injective substitution θ̃.
        forward: Radius-0 code τ from X_θ onto X_θ̃.
        inverse: Inverse code of τ.
        merges: (merged letter, representative) pairs in merge order.
    """

    source: Substitution
    target: Substitution
    forward: BlockCode
    inverse: BlockCode
    merges: List[Tuple[Symbol, Symbol]] = field(default_factory=list)

    @property
    def trivial(self) -> bool:
        return not self.merges

    def to_json(self) -> Dict:
        return {
            "merges": [list(pair) for pair in self.merges],
            "target": {a: list(self.target.image(a))
                       for a in self.target.alphabet},
            "inverse_radius": self.inverse.left,
        }


def injectivize(s: Substitution, limits: Limits = DEFAULT_LIMITS
                ) -> Injectivization:
    """
    Merge letters with equal images until θ is injective. Each step sends
    the later letter of the first equal pair (canonical order) to the
    earlier one and rewrites every image through the merge.

    Raises:
        PreconditionError: If θ is not primitive or its shift is finite.
        ResourceLimitError: If the inverse code needs a radius above the cap.
    """
    check_primitive_infinite(s, limits)
    tau: Dict[Symbol, Symbol] = {a: a for a in s.alphabet}
    current = s
    merges: List[Tuple[Symbol, Symbol]] = []
    while not is_injective(current):
        seen: Dict[Word, Symbol] = {}
        merged = None
        for a in current.alphabet:
            image = current.image(a)
            if image in seen:
                merged = (a, seen[image])
                break
            seen[image] = a
        b, a = merged
        step = {x: (a if x == b else x) for x in current.alphabet}
        alphabet = [x for x in current.alphabet if x != b]
        rules = {x: tuple(step[y] for y in current.image(x))
                 for x in alphabet}
        current = Substitution(alphabet, rules, tokens=s.tokens)
        tau = {x: step[y] for x, y in tau.items()}
        merges.append((b, a))
        logger.info("Merged %r into %r: equal images.", b, a)

    forward = letter_code(s, tau, current.alphabet)
    if merges:
        inverse = invert_code(forward, s, current, limits=limits)
        logger.info("Injectivization of %r onto %r; inverse radius %d.",
                    s, current, inverse.left)
    else:
        inverse = forward
    return Injectivization(s, current, forward, inverse, merges)
