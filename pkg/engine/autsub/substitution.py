"""
Constant-length substitutions and the language of their shifts.

A Substitution θ sends every letter of an ordered alphabet 𝒜 to a word of
the common length r. Words are tuples of symbols. Symbols are strings, one
character each unless the substitution file declared its alphabet, in which
case they are arbitrary whitespace-free tokens.

Example usage:

    theta = parse_substitution("0->01\\n1->10")
    language(theta, 3)
    # frozenset({('0', '0', '1'), ('0', '1', '0'), ...})

"""

import logging
import math
import threading
from collections import OrderedDict
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, \
    Sequence, Set, Tuple

import numpy as np

from .exceptions import PreconditionError, ResourceLimitError, \
    SubstitutionParseError
from .limits import DEFAULT_LIMITS, Limits

logger = logging.getLogger(__name__)

__all__ = [
    "Symbol",
    "Word",
    "Substitution",
    "LanguageCache",
    "parse_substitution",
    "render_word",
    "is_primitive",
    "is_infinite",
    "is_injective",
    "theta_power_word",
    "power",
    "language",
    "complexity",
    "fiber_letters",
    "check_primitive_infinite",
]

Symbol = str
Word = Tuple[Symbol, ...]

ALPHABET_KEYWORD = "alphabet:"
ARROW = "->"
COMMENT = "#"


def render_word(word: Iterable[Symbol]) -> str:
    """
    Human readable form of a word: letters are concatenated when every
    symbol is a single character and space separated otherwise.
    """
    word = tuple(word)
    if all(len(symbol) == 1 for symbol in word):
        return "".join(word)
    return " ".join(word)


class LanguageCache:
    """
    Per-substitution store of the sets L_n. Each entry is written once and
    never changed, so readers need no lock; writers take `_lock` so that
    concurrent searches do not compute the same set twice.
    """

    def __init__(self):
        self._words: Dict[int, FrozenSet[Word]] = {}
        self._lock = threading.Lock()
        self.closed = False
        self.infinite: Optional[bool] = None

    def get(self, n: int) -> Optional[FrozenSet[Word]]:
        return self._words.get(n)

    def put(self, n: int, words: FrozenSet[Word]) -> FrozenSet[Word]:
        with self._lock:
            return self._words.setdefault(n, words)

    def lengths(self) -> List[int]:
        return sorted(self._words)


class Substitution:
    """
    A constant-length substitution. Instances are immutable; they carry
    their own LanguageCache.

    Args:
        alphabet: Symbols in canonical (declaration) order.
        rules: Image word of every symbol.
        tokens: Whether the symbols came from an `alphabet:` declaration.
    """

    def __init__(self, alphabet: Sequence[Symbol],
                 rules: Mapping[Symbol, Sequence[Symbol]],
                 tokens: bool = False):
        alphabet = tuple(alphabet)
        if not alphabet:
            raise PreconditionError("empty alphabet")
        if len(set(alphabet)) != len(alphabet):
            raise PreconditionError(f"repeated symbol in {alphabet!r}")
        images = OrderedDict((a, tuple(rules[a])) for a in alphabet)
        lengths = {len(word) for word in images.values()}
        if len(lengths) != 1:
            raise PreconditionError(
                f"image lengths differ: {sorted(lengths)}")
        r = lengths.pop()
        if r < 2:
            raise PreconditionError(f"length must be at least 2, got {r}")
        known = set(alphabet)
        for a, word in images.items():
            unknown = [b for b in word if b not in known]
            if unknown:
                raise PreconditionError(
                    f"image of {a!r} uses unknown symbol {unknown[0]!r}")

        self._alphabet: Tuple[Symbol, ...] = alphabet
        self._rules: "OrderedDict[Symbol, Word]" = images
        self._r: int = r
        self._tokens: bool = tokens
        self._index: Dict[Symbol, int] = {a: i for i, a in enumerate(alphabet)}
        self._columns: Tuple[Dict[Symbol, Symbol], ...] = tuple(
            {a: images[a][i] for a in alphabet} for i in range(r))
        self.language_cache = LanguageCache()

    @property
    def alphabet(self) -> Tuple[Symbol, ...]:
        return self._alphabet

    @property
    def rules(self) -> Mapping[Symbol, Word]:
        return self._rules

    @property
    def r(self) -> int:
        return self._r

    @property
    def tokens(self) -> bool:
        return self._tokens

    @property
    def size(self) -> int:
        return len(self._alphabet)

    def index(self, symbol: Symbol) -> int:
        return self._index[symbol]

    def column(self, i: int) -> Dict[Symbol, Symbol]:
        """
        The column map θ_i: letter ↦ (i+1)-st letter of its image.
        """
        return self._columns[i]

    def image(self, symbol: Symbol) -> Word:
        return self._rules[symbol]

    def apply(self, word: Iterable[Symbol]) -> Word:
        out: List[Symbol] = []
        for symbol in word:
            out.extend(self._rules[symbol])
        return tuple(out)

    def sort_key(self, word: Sequence[Symbol]) -> Tuple[int, ...]:
        return tuple(self._index[a] for a in word)

    def sorted_words(self, words: Iterable[Word]) -> List[Word]:
        return sorted(words, key=self.sort_key)

    def render(self, word: Iterable[Symbol]) -> str:
        return render_word(word)

    def to_text(self) -> str:
        """
        The substitution in the input file format.
        """
        lines = []
        if self._tokens:
            lines.append(f"{ALPHABET_KEYWORD} {' '.join(self._alphabet)}")
        for a, word in self._rules.items():
            rhs = " ".join(word) if self._tokens else "".join(word)
            lines.append(f"{a} {ARROW} {rhs}")
        return "\n".join(lines) + "\n"

    def _key(self):
        return self._alphabet, tuple(self._rules.values())

    def __eq__(self, other):
        if not isinstance(other, Substitution):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        rules = ", ".join(
            f"{a}->{render_word(w)}" for a, w in self._rules.items())
        return f"Substitution({rules})"


def parse_substitution(text: str) -> Substitution:
    """
    Parse the substitution file format:

        # comment
        alphabet: s1 s2 ...      (optional, before any rule)
        x -> w

    Without an `alphabet:` line every symbol is a single character and the
    alphabet is the order in which rules are declared.

    Raises:
        SubstitutionParseError: On any malformed line, duplicate rule,
            unknown symbol, unequal image lengths or empty alphabet.
    """
    declared: Optional[List[Symbol]] = None
    rules: "OrderedDict[Symbol, Word]" = OrderedDict()
    rule_lines: Dict[Symbol, int] = {}
    length: Optional[int] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(COMMENT, 1)[0].strip()
        if not line:
            continue
        if line.startswith(ALPHABET_KEYWORD):
            if declared is not None:
                raise SubstitutionParseError(
                    "alphabet declared twice", lineno)
            if rules:
                raise SubstitutionParseError(
                    "alphabet must be declared before the rules", lineno)
            declared = line[len(ALPHABET_KEYWORD):].split()
            if not declared:
                raise SubstitutionParseError("empty alphabet", lineno)
            if len(set(declared)) != len(declared):
                raise SubstitutionParseError(
                    "repeated symbol in alphabet", lineno)
            continue
        if ARROW not in line:
            raise SubstitutionParseError(
                f"expected 'x {ARROW} w', got {line!r}", lineno)
        lhs, rhs = (part.strip() for part in line.split(ARROW, 1))
        if not lhs or not rhs:
            raise SubstitutionParseError(
                f"expected 'x {ARROW} w', got {line!r}", lineno)

        if declared is not None:
            word = tuple(rhs.split())
            if lhs not in declared:
                raise SubstitutionParseError(
                    f"unknown symbol {lhs!r}", lineno)
        else:
            if len(lhs) != 1:
                raise SubstitutionParseError(
                    f"symbol {lhs!r} must be a single character "
                    f"unless an alphabet is declared", lineno)
            if any(ch.isspace() for ch in rhs):
                raise SubstitutionParseError(
                    "whitespace inside an image requires an alphabet "
                    "declaration", lineno)
            word = tuple(rhs)

        if lhs in rules:
            raise SubstitutionParseError(
                f"duplicate rule for {lhs!r} (first on line "
                f"{rule_lines[lhs]})", lineno)
        if length is None:
            length = len(word)
        elif len(word) != length:
            raise SubstitutionParseError(
                f"image of {lhs!r} has length {len(word)}, expected "
                f"{length}", lineno)
        rules[lhs] = word
        rule_lines[lhs] = lineno

    alphabet = list(declared) if declared is not None else list(rules)
    if not alphabet:
        raise SubstitutionParseError("empty alphabet")
    for a in alphabet:
        if a not in rules:
            raise SubstitutionParseError(f"no rule for symbol {a!r}")
    known = set(alphabet)
    for a, word in rules.items():
        for b in word:
            if b not in known:
                raise SubstitutionParseError(
                    f"unknown symbol {b!r} in the image of {a!r}",
                    rule_lines[a])
    if length < 2:
        raise SubstitutionParseError(
            f"images must have length at least 2, got {length}",
            rule_lines[alphabet[0]])
    return Substitution(alphabet, rules, tokens=declared is not None)


def incidence_matrix(s: Substitution) -> np.ndarray:
    """
    M[a, b] = number of occurrences of b in θ(a).
    """
    matrix = np.zeros((s.size, s.size), dtype=np.int64)
    for a in s.alphabet:
        for b in s.image(a):
            matrix[s.index(a), s.index(b)] += 1
    return matrix


def is_primitive(s: Substitution) -> bool:
    """
    Some power k ≤ (|𝒜|-1)²+1 of the incidence matrix is positive.
    Only the zero pattern matters, so the powers are kept boolean.
    """
    step = (incidence_matrix(s) > 0).astype(np.int64)
    current = step.copy()
    bound = (s.size - 1) ** 2 + 1
    for _ in range(bound):
        if np.all(current > 0):
            return True
        current = np.minimum(current @ step, 1)
    return bool(np.all(current > 0))


def is_injective(s: Substitution) -> bool:
    return len(set(s.rules.values())) == s.size


def theta_power_word(s: Substitution, a: Symbol, m: int,
                     limits: Limits = DEFAULT_LIMITS) -> Word:
    """
    θ^m(a), a word of length r^m.

    Raises:
        ResourceLimitError: If r^m exceeds the word-length cap.
    """
    if m < 0:
        raise ValueError(f"exponent must be non-negative, got {m}")
    if s.r ** m > limits.word:
        raise ResourceLimitError(
            f"theta^{m}({a}) has length {s.r}^{m} > {limits.word}",
            cap="word")
    word: Word = (a,)
    for _ in range(m):
        word = s.apply(word)
    return word


def power(s: Substitution, k: int, limits: Limits = DEFAULT_LIMITS
          ) -> Substitution:
    """
    The substitution θ^k of length r^k.
    """
    if k < 1:
        raise ValueError(f"power must be positive, got {k}")
    if k == 1:
        return s
    rules = {a: theta_power_word(s, a, k, limits) for a in s.alphabet}
    return Substitution(s.alphabet, rules, tokens=s.tokens)


def _two_word_closure(s: Substitution) -> FrozenSet[Word]:
    words: Set[Word] = set()
    for a in s.alphabet:
        image = s.image(a)
        words.update(zip(image, image[1:]))
    frontier = list(words)
    while frontier:
        fresh: List[Word] = []
        for x, y in frontier:
            glued = s.image(x) + s.image(y)
            for pair in zip(glued, glued[1:]):
                if pair not in words:
                    words.add(pair)
                    fresh.append(pair)
        frontier = fresh
    return frozenset(words)


def language(s: Substitution, n: int,
             limits: Limits = DEFAULT_LIMITS) -> FrozenSet[Word]:
    """
    L_n(X_θ), the words of length n occurring in the shift.

    L_2 is the closure of the 2-subwords of the images θ(a) under
    "apply θ and collect interior and boundary 2-words". Every longer word
    spans at most two blocks θ^m(x)θ^m(y) once r^m ≥ n, so L_n is read off
    θ^m of the 2-words.
    """
    if n < 1:
        raise ValueError(f"word length must be positive, got {n}")
    cache = s.language_cache
    cached = cache.get(n)
    if cached is not None:
        return cached

    two_words = cache.get(2)
    if two_words is None:
        two_words = cache.put(2, _two_word_closure(s))
        cache.closed = True
    if n == 2:
        return two_words

    m = 0
    while s.r ** m < n:
        m += 1
    if 2 * s.r ** m > limits.word:
        raise ResourceLimitError(
            f"L_{n} needs words of length {2 * s.r ** m} > {limits.word}",
            cap="word")
    words: Set[Word] = set()
    for pair in two_words:
        block = pair
        for _ in range(m):
            block = s.apply(block)
        for i in range(len(block) - n + 1):
            words.add(block[i:i + n])
    return cache.put(n, frozenset(words))


def complexity(s: Substitution, n: int,
               limits: Limits = DEFAULT_LIMITS) -> int:
    return len(language(s, n, limits))


def is_infinite(s: Substitution, limits: Limits = DEFAULT_LIMITS) -> bool:
    """
    Scan p(1), ..., p(B+1) for a plateau p(n+1) = p(n) with B = |𝒜|²·r.
    A plateau makes the minimal shift periodic, hence finite. No plateau up
    to B is reported as infinite with a warning, as the bound is not a
    proof.
    """
    cache = s.language_cache
    if cache.infinite is not None:
        return cache.infinite
    bound = s.size ** 2 * s.r
    previous = complexity(s, 1, limits)
    for n in range(1, bound + 1):
        current = complexity(s, n + 1, limits)
        if current == previous:
            logger.info("Complexity plateau p(%d) = p(%d) = %d: the shift "
                        "is periodic.", n, n + 1, current)
            cache.infinite = False
            return False
        previous = current
    logger.warning("No complexity plateau up to n = %d; treating the shift "
                   "of %r as infinite.", bound, s)
    cache.infinite = True
    return True


def check_primitive_infinite(s: Substitution,
                             limits: Limits = DEFAULT_LIMITS) -> None:
    """
    Raises:
        PreconditionError: If `s` is not primitive or its shift is finite.
    """
    if not is_primitive(s):
        raise PreconditionError(f"{s!r} is not primitive")
    if not is_infinite(s, limits):
        raise PreconditionError(f"the shift of {s!r} is finite")


def fiber_letters(s: Substitution, digits: Sequence[int]) -> Set[Symbol]:
    """
    Letters seen at coordinate 0 when θ^n(a), a ∈ 𝒜, is placed so that
    coordinate 0 falls at offset Σ digits[i]·r^i inside it. This is
    θ_{z_0}∘θ_{z_1}∘…∘θ_{z_{n-1}}(𝒜) for the digit word z, least
    significant first.
    """
    letters = set(s.alphabet)
    for digit in reversed(digits):
        if not 0 <= digit < s.r:
            raise ValueError(f"digit {digit} out of range for r={s.r}")
        column = s.column(digit)
        letters = {column[a] for a in letters}
    return letters


def cycle_length(mapping: Mapping[Symbol, Symbol], start: Symbol) -> int:
    """
    Least k ≥ 1 such that mapping^k(start) = start, or 0 when start is
    not periodic.
    """
    seen: Dict[Symbol, int] = {}
    current, step = start, 0
    while current not in seen:
        seen[current] = step
        current = mapping[current]
        step += 1
        if current == start:
            return step
    return 0


def periodic_letters(mapping: Mapping[Symbol, Symbol]) -> Set[Symbol]:
    return {a for a in mapping if cycle_length(mapping, a)}


def lcm(values: Iterable[int]) -> int:
    result = 1
    for value in values:
        result = result * value // math.gcd(result, value)
    return result
