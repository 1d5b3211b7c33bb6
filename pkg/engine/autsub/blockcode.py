"""
Sliding block codes on substitution shifts.

A BlockCode with radii (left, right) maps a point x to the point whose
0-coordinate is table[x_{-left} … x_{right}]. Tables only list windows that
occur in the source shift; values off the language never influence the
induced map.
"""

import logging
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .exceptions import AlphabetMismatchError, InadmissibleWindowError, \
    PreconditionError, ResourceLimitError
from .limits import DEFAULT_LIMITS, Limits
from .radic import RAdicRational
from .substitution import Substitution, Symbol, Word, language, render_word

logger = logging.getLogger(__name__)

__all__ = [
    "BlockCode",
    "code_apply",
    "code_compose",
    "codes_equal",
    "shift_code",
    "identity_code",
    "letter_code",
    "code_power",
    "trim_radius",
    "invert_code",
]


class BlockCode:
    """
    A sliding block code from the shift over `source_alphabet` to the shift
    over `target_alphabet`.

    Args:
        left: Left radius, ≥ 0.
        right: Right radius, ≥ 0.
        table: Window of length left+right+1 ↦ target symbol.
        source_alphabet: Alphabet the windows are drawn from.
        target_alphabet: Alphabet of the outputs.
        kappa: Optional κ fingerprint.
    """

    def __init__(self, left: int, right: int, table: Mapping[Word, Symbol],
                 source_alphabet: Sequence[Symbol],
                 target_alphabet: Sequence[Symbol],
                 kappa: Optional[RAdicRational] = None):
        if left < 0 or right < 0:
            raise ValueError(f"radii must be non-negative: ({left}, {right})")
        width = left + right + 1
        for window in table:
            if len(window) != width:
                raise ValueError(
                    f"window {window!r} does not have width {width}")
        self.left = left
        self.right = right
        self.table: Dict[Word, Symbol] = dict(table)
        self.source_alphabet: Tuple[Symbol, ...] = tuple(source_alphabet)
        self.target_alphabet: Tuple[Symbol, ...] = tuple(target_alphabet)
        self.kappa = kappa

    @property
    def width(self) -> int:
        return self.left + self.right + 1

    def output(self, window: Sequence[Symbol]) -> Symbol:
        try:
            return self.table[tuple(window)]
        except KeyError:
            raise InadmissibleWindowError(window) from None

    def with_kappa(self, kappa: Optional[RAdicRational]) -> "BlockCode":
        return BlockCode(self.left, self.right, self.table,
                         self.source_alphabet, self.target_alphabet, kappa)

    def sorted_items(self):
        index = {a: i for i, a in enumerate(self.source_alphabet)}
        return sorted(self.table.items(),
                      key=lambda item: tuple(index[a] for a in item[0]))

    def to_json(self) -> Dict:
        return {
            "left": self.left,
            "right": self.right,
            "kappa": self.kappa.to_json() if self.kappa is not None else None,
            "table": {render_word(window): symbol
                      for window, symbol in self.sorted_items()},
        }

    def __repr__(self):
        return (f"BlockCode(left={self.left}, right={self.right}, "
                f"kappa={self.kappa}, windows={len(self.table)})")


def code_apply(c: BlockCode, w: Sequence[Symbol]) -> Word:
    """
    Slide the local rule of `c` over the finite word `w`. The result has
    length |w| - left - right.
    """
    w = tuple(w)
    if len(w) < c.width:
        raise ValueError(
            f"word of length {len(w)} is shorter than the window {c.width}")
    return tuple(c.output(w[i:i + c.width])
                 for i in range(len(w) - c.width + 1))


def _add_kappa(k1: Optional[RAdicRational], k2: Optional[RAdicRational]
               ) -> Optional[RAdicRational]:
    if k1 is None or k2 is None:
        return None
    return k1 + k2


def code_compose(c1: BlockCode, c2: BlockCode, s: Substitution,
                 limits: Limits = DEFAULT_LIMITS) -> BlockCode:
    """
    The code c1∘c2 (apply c2 first) on the shift of `s`, the source of c2.
    Radii add, and so do fingerprints when both are known.
    """
    if c2.target_alphabet != c1.source_alphabet:
        raise AlphabetMismatchError(
            f"cannot compose: {c2.target_alphabet} is not "
            f"{c1.source_alphabet}")
    if c2.source_alphabet != s.alphabet:
        raise AlphabetMismatchError(
            f"code over {c2.source_alphabet} applied to the shift of {s!r}")
    left, right = c1.left + c2.left, c1.right + c2.right
    table = {}
    for window in language(s, left + right + 1, limits):
        table[window] = c1.output(code_apply(c2, window))
    return BlockCode(left, right, table, c2.source_alphabet,
                     c1.target_alphabet, _add_kappa(c1.kappa, c2.kappa))


def _padded_output(c: BlockCode, window: Word, left: int) -> Symbol:
    offset = left - c.left
    return c.output(window[offset:offset + c.width])


def codes_equal(c1: BlockCode, c2: BlockCode, s: Substitution,
                limits: Limits = DEFAULT_LIMITS) -> bool:
    """
    Whether c1 and c2 induce the same map on the shift of `s`. Both codes
    are read on the admissible windows of the common radii.
    """
    if (c1.source_alphabet != c2.source_alphabet
            or c1.target_alphabet != c2.target_alphabet):
        return False
    left, right = max(c1.left, c2.left), max(c1.right, c2.right)
    try:
        for window in language(s, left + right + 1, limits):
            if (_padded_output(c1, window, left)
                    != _padded_output(c2, window, left)):
                return False
    except InadmissibleWindowError:
        return False
    return True


def shift_code(s: Substitution, k: int = 1,
               limits: Limits = DEFAULT_LIMITS) -> BlockCode:
    """
    σ^k as a block code: (σ^k x)_0 = x_k, with κ = k.
    """
    if k >= 0:
        left, right, pick = 0, k, k
    else:
        left, right, pick = -k, 0, 0
    table = {window: window[pick]
             for window in language(s, left + right + 1, limits)}
    return BlockCode(left, right, table, s.alphabet, s.alphabet,
                     RAdicRational.from_int(k, s.r))


def identity_code(s: Substitution) -> BlockCode:
    return shift_code(s, 0)


def letter_code(s: Substitution, mapping: Mapping[Symbol, Symbol],
                target_alphabet: Sequence[Symbol],
                kappa: Optional[RAdicRational] = None) -> BlockCode:
    """
    The radius-0 code applying `mapping` letter by letter.
    """
    table = {(a,): mapping[a] for a in s.alphabet}
    if kappa is None:
        kappa = RAdicRational.from_int(0, s.r)
    return BlockCode(0, 0, table, s.alphabet, target_alphabet, kappa)


def code_power(c: BlockCode, n: int, s: Substitution,
               limits: Limits = DEFAULT_LIMITS) -> BlockCode:
    """
    The n-fold composite c∘c∘…∘c; n = 0 gives the identity.
    """
    if n < 0:
        raise ValueError(f"power must be non-negative, got {n}")
    if c.source_alphabet != c.target_alphabet:
        raise AlphabetMismatchError("only endomorphism codes have powers")
    result = identity_code(s)
    base = c
    while n:
        if n & 1:
            result = code_compose(base, result, s, limits)
        n >>= 1
        if n:
            base = code_compose(base, base, s, limits)
    return result


def _depends_on(c: BlockCode, drop_left: int,
                drop_right: int) -> Optional[Dict[Word, Symbol]]:
    """
    The reduced table when the output ignores the `drop_left` leftmost and
    `drop_right` rightmost window letters, or None when it does not.
    """
    end = c.width - drop_right
    reduced: Dict[Word, Symbol] = {}
    for window, symbol in c.table.items():
        key = window[drop_left:end]
        if reduced.setdefault(key, symbol) != symbol:
            return None
    return reduced


def trim_radius(c: BlockCode, s: Substitution,
                limits: Limits = DEFAULT_LIMITS) -> BlockCode:
    """
    Shrink the window of `c` to the least left radius, then the least right
    radius, that still determine the output on the shift of `s`.
    """
    if c.source_alphabet != s.alphabet:
        raise AlphabetMismatchError(
            f"code over {c.source_alphabet} trimmed on the shift of {s!r}")
    missing = language(s, c.width, limits).difference(c.table)
    if missing:
        raise InadmissibleWindowError(sorted(missing)[0])
    drop_left = 0
    while drop_left < c.left and _depends_on(
            c, drop_left + 1, 0) is not None:
        drop_left += 1
    drop_right = 0
    while drop_right < c.right and _depends_on(
            c, drop_left, drop_right + 1) is not None:
        drop_right += 1
    if not drop_left and not drop_right:
        return c
    table = _depends_on(c, drop_left, drop_right)
    return BlockCode(c.left - drop_left, c.right - drop_right, table,
                     c.source_alphabet, c.target_alphabet, c.kappa)


def invert_code(c: BlockCode, source: Substitution, target: Substitution,
                radius_cap: Optional[int] = None,
                limits: Limits = DEFAULT_LIMITS) -> BlockCode:
    """
    The inverse of the conjugacy `c` from the shift of `source` onto the
    shift of `target`, as a code of symmetric radius R, R = 0, 1, … .

    A radius works when every target window of length 2R+1 that is the
    image of a source window determines the source letter above its centre,
    and every admissible target window is such an image.

    Raises:
        PreconditionError: `c` misses admissible target windows, so it is
            not onto.
        ResourceLimitError: No radius up to the cap works.
    """
    if radius_cap is None:
        radius_cap = limits.radius
    target_words = None
    for radius in range(radius_cap + 1):
        width = 2 * radius + 1
        table: Dict[Word, Symbol] = {}
        consistent = True
        for window in language(source, width + c.left + c.right, limits):
            image = code_apply(c, window)
            centre = window[c.left + radius]
            if table.setdefault(image, centre) != centre:
                consistent = False
                break
        if not consistent:
            continue
        target_words = language(target, width, limits)
        missing = target_words.difference(table)
        if missing:
            raise PreconditionError(
                f"code is not onto: target window "
                f"{render_word(sorted(missing)[0])} has no preimage")
        kappa = -c.kappa if c.kappa is not None else None
        logger.debug("Inverse code found at radius %d.", radius)
        return BlockCode(radius, radius, table, c.target_alphabet,
                         c.source_alphabet, kappa)
    raise ResourceLimitError(
        f"no inverse code of radius at most {radius_cap}", cap="radius")
