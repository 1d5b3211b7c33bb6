"""
Exact arithmetic for κ fingerprints.

A fingerprint is a rational number whose denominator is coprime to the base
r, read as an element of the r-adic integers ℤ_r. Such numbers are exactly
the eventually periodic base-r digit sequences. Digits are stored least
significant first, so `digits[0]` is the rightmost digit x_0.

    RAdicRational: reduced p/q with gcd(q, r) = 1.
    RAdicDigits: preperiod and period digit words of an RAdicRational.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.ntheory import n_order

from .exceptions import RAdicError

logger = logging.getLogger(__name__)

__all__ = [
    "RAdicRational",
    "RAdicDigits",
    "expand",
    "floor_ceil",
    "cyclic_generator",
    "bezout_coefficients",
    "mult_order",
]


@dataclass(frozen=True)
class RAdicRational:
    """
    The r-adic integer num/den. Instances are normalized on construction:
    gcd(num, den) = 1 and den > 0. A denominator sharing a factor with r
    has no r-adic meaning and raises RAdicError.
    """

    num: int
    den: int
    r: int

    def __post_init__(self):
        if self.r < 2:
            raise RAdicError(f"base must be at least 2, got {self.r}")
        if self.den == 0:
            raise RAdicError("zero denominator")
        num, den = self.num, self.den
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        num, den = num // g, den // g
        if math.gcd(den, self.r) != 1:
            raise RAdicError(
                f"{num}/{den} is not an element of Z_{self.r}: "
                f"gcd({den}, {self.r}) > 1")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_fraction(cls, value: Fraction, r: int) -> "RAdicRational":
        return cls(value.numerator, value.denominator, r)

    @classmethod
    def from_int(cls, value: int, r: int) -> "RAdicRational":
        return cls(value, 1, r)

    @classmethod
    def from_periodic(cls, word: Sequence[int], r: int) -> "RAdicRational":
        """
        Value of the purely periodic point whose repeating block is `word`
        (least significant digit first): W/(1 - r^len(word)).
        """
        if not word:
            raise RAdicError("a periodic word must be nonempty")
        block = sum(d * r ** i for i, d in enumerate(word))
        return cls(block, 1 - r ** len(word), r)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def is_integer(self) -> bool:
        return self.den == 1

    def _coerce(self, other) -> "RAdicRational":
        if isinstance(other, RAdicRational):
            if other.r != self.r:
                raise RAdicError(
                    f"cannot combine Z_{self.r} with Z_{other.r}")
            return other
        if isinstance(other, int):
            return RAdicRational(other, 1, self.r)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RAdicRational.from_fraction(
            self.as_fraction() + other.as_fraction(), self.r)

    __radd__ = __add__

    def __neg__(self):
        return RAdicRational(-self.num, self.den, self.r)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, int):
            return NotImplemented
        return RAdicRational(self.num * other, self.den, self.r)

    __rmul__ = __mul__

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"{self.num}/{self.den}"

    def to_json(self) -> Dict[str, int]:
        return {"num": self.num, "den": self.den}


@dataclass(frozen=True)
class RAdicDigits:
    """
    Eventually periodic digit expansion ...PPP·Q of an r-adic integer.
    Both words are least significant first; the preperiod is as short as
    possible and the period is primitive, so equal values have equal
    digits. The period is read off where the preperiod ends and is not
    rotated further: -7/8 in base 3 has period (1, 2) and no preperiod.
    """

    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]
    r: int

    def to_rational(self) -> RAdicRational:
        head = sum(d * self.r ** i for i, d in enumerate(self.preperiod))
        tail = Fraction(
            sum(d * self.r ** i for i, d in enumerate(self.period)),
            1 - self.r ** len(self.period))
        value = head + self.r ** len(self.preperiod) * tail
        return RAdicRational.from_fraction(value, self.r)

    def render(self) -> str:
        """
        Most significant first, period in parentheses: "(1)2" for the
        3-adic 1/2 = ...1112.
        """
        sep = "" if self.r <= 10 else ","
        period = sep.join(str(d) for d in reversed(self.period))
        head = sep.join(str(d) for d in reversed(self.preperiod))
        if head and sep:
            head = sep + head
        return f"({period}){head}"

    def to_json(self) -> Dict[str, List[int]]:
        return {"preperiod": list(self.preperiod),
                "period": list(self.period)}


def expand(q: RAdicRational) -> RAdicDigits:
    """
    Eventually periodic base-r expansion of q in ℤ_r.

    The remainder sequence a_0 = num, a_{n+1} = (a_n - x_n·den)/r with
    x_n ≡ a_n·den⁻¹ (mod r) stays in a bounded range, so it cycles. The
    tail value after n digits is a_n/den, hence the first repeated remainder
    marks the shortest preperiod and the minimal period.
    """
    r, den = q.r, q.den
    inverse = pow(den, -1, r)
    seen: Dict[int, int] = {}
    digits: List[int] = []
    a = q.num
    while a not in seen:
        seen[a] = len(digits)
        digit = (a * inverse) % r
        digits.append(digit)
        a = (a - digit * den) // r
    start = seen[a]
    return RAdicDigits(tuple(digits[:start]), tuple(digits[start:]), r)


def floor_ceil(q: RAdicRational) -> Tuple[int, int]:
    value = q.as_fraction()
    return math.floor(value), math.ceil(value)


def mult_order(r: int, d: int) -> int:
    """
    Least p ≥ 1 with r^p ≡ 1 (mod d).
    """
    if d < 1:
        raise RAdicError(f"modulus must be positive, got {d}")
    if math.gcd(r, d) != 1:
        raise RAdicError(f"gcd({r}, {d}) > 1: {r} has no order modulo {d}")
    if d == 1:
        return 1
    return int(n_order(r, d))


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def bezout_coefficients(qs: Sequence[RAdicRational]) -> List[int]:
    """
    Integers [c_0, c_1, ..., c_k] with c_0 + Σ c_i·qs[i] = 1/q, where q is
    the least common denominator of `qs`.

    Each p_i/q_i is first turned into 1/q_i + (integer) by a multiplier
    u_i ≡ p_i⁻¹ (mod q_i); two unit fractions 1/a, 1/b combine into
    1/lcm(a, b) through a Bezout identity on a/g and b/g.
    """
    coefficients = [0] * (len(qs) + 1)
    # Current combination equals 1/current_den (mod ℤ) with
    # `coefficients[1:]` as multipliers on the inputs.
    current_den = 1
    for i, q in enumerate(qs, start=1):
        if q.den == 1:
            continue
        u = pow(q.num % q.den, -1, q.den)
        g = math.gcd(current_den, q.den)
        a_, b_ = current_den // g, q.den // g
        # x·b_ + y·a_ = 1, so x/current_den + y/q.den = 1/lcm.
        x, y = _extended_gcd(b_, a_)
        coefficients = [c * x for c in coefficients]
        coefficients[i] += y * u
        current_den = current_den * q.den // g
    value = Fraction(coefficients[0]) + sum(
        (c * q.as_fraction() for c, q in zip(coefficients[1:], qs)),
        Fraction(0))
    target = Fraction(1, current_den)
    coefficients[0] += int(target - value)
    return coefficients


def _extended_gcd(a: int, b: int) -> Tuple[int, int]:
    """
    (x, y) with a·x + b·y = gcd(a, b).
    """
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        quotient, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - quotient * x1
        y0, y1 = y1, y0 - quotient * y1
    return x0, y0


def cyclic_generator(
    qs: Sequence[RAdicRational], r: Optional[int] = None
) -> RAdicRational:
    """
    The generator 1/q of the subgroup of ℚ spanned by ℤ and `qs`.

    Args:
        qs: Fingerprints, all over the same base.
        r: Base to use when `qs` is empty. Defaults to the base of the
            inputs, or 2.

    Returns:
        RAdicRational 1/q where q is the least common denominator.
    """
    if not qs:
        return RAdicRational(1, 1, r or 2)
    base = qs[0].r
    if any(q.r != base for q in qs):
        raise RAdicError("fingerprints over different bases")
    q = _lcm(x.den for x in qs)
    generator = RAdicRational(1, q, base)
    coefficients = bezout_coefficients(qs)
    check = Fraction(coefficients[0]) + sum(
        (c * x.as_fraction() for c, x in zip(coefficients[1:], qs)),
        Fraction(0))
    if check != generator.as_fraction():
        # Bezout bookkeeping and the lcm must agree.
        raise RAdicError(
            f"generator check failed: combination gives {check}, "
            f"expected {generator}")
    return generator
