"""Quadratic irrationals (P + sqrt(D)) / Q and their plus/minus continued fractions.

Every comparison is done in exact integer arithmetic. A ``QuadSurd`` is always
stored in the canonical form read off its primitive minimal polynomial
``a*w**2 + b*w + c`` (a > 0, gcd(a, b, c) = 1), so ``D`` is the discriminant
of the number and ``Q`` divides ``D - P**2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Literal, Sequence

from .arith import gcd3, is_discriminant, isqrt

__all__ = [
    "QuadSurd",
    "QuadPoly",
    "CFExpansion",
    "PeriodMatrix",
    "Shape",
    "make_surd",
    "from_poly",
    "to_poly",
    "sqrt_surd",
    "is_reduced",
    "is_m_reduced",
    "floor_of",
    "ceil_of",
    "cf_step_plus",
    "cf_step_minus",
    "expand",
    "stats",
    "canonical_rotation",
    "minimal_period",
    "period_matrix",
    "matrix_parity_class",
    "ambiguous_shape",
    "literal_shape",
    "reverse_conjugate",
    "eventual_period_length",
]

Kind = Literal["plus", "minus"]


class SurdError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class QuadSurd:
    """The real number (P + sqrt(D)) / Q; build with :func:`make_surd`."""

    P: int
    Q: int
    D: int

    def __float__(self) -> float:
        return (self.P + self.D**0.5) / self.Q

    def to_json(self) -> dict[str, str]:
        return {"P": str(self.P), "Q": str(self.Q), "D": str(self.D)}

    @classmethod
    def from_json(cls, obj: dict) -> QuadSurd:
        return make_surd(int(obj["P"]), int(obj["Q"]), int(obj["D"]))

    def __str__(self) -> str:
        return f"({self.P}+sqrt({self.D}))/{self.Q}"


@dataclass(frozen=True)
class QuadPoly:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


@dataclass(frozen=True)
class CFExpansion:
    kind: Kind
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.period)


@dataclass(frozen=True)
class PeriodMatrix:
    p: int
    q: int
    r: int
    s: int

    @property
    def det(self) -> int:
        return self.p * self.s - self.q * self.r

    @property
    def trace(self) -> int:
        return self.p + self.s

    def __matmul__(self, other: PeriodMatrix) -> PeriodMatrix:
        return PeriodMatrix(
            self.p * other.p + self.q * other.r,
            self.p * other.q + self.q * other.s,
            self.r * other.p + self.s * other.r,
            self.r * other.q + self.s * other.s,
        )


class Shape(str, Enum):
    ODD_PALINDROME = "odd_palindrome"
    EVEN_PALINDROME = "even_palindrome"
    OFFSET_PALINDROME = "offset_palindrome"
    NONE = "none"


def _sign_surd(m: int, n: int, D: int) -> int:
    """Sign of m + n*sqrt(D) for a non-square D > 0."""
    if m >= 0 and n >= 0:
        return 0 if m == 0 and n == 0 else 1
    if m <= 0 and n <= 0:
        return -1
    # opposite signs: compare m**2 with n**2 * D (never equal, D non-square)
    if m > 0:
        return 1 if m * m > n * n * D else -1
    return 1 if n * n * D > m * m else -1


def make_surd(P: int, Q: int, D: int) -> QuadSurd:
    """Canonical form of the number (P + sqrt(D)) / Q."""
    if Q == 0:
        raise SurdError("Q must be nonzero")
    if not is_discriminant(D):
        raise SurdError(f"{D} is not a valid discriminant")
    # Q*w - P = sqrt(D)  =>  Q^2 w^2 - 2PQ w + (P^2 - D) = 0
    a, b, c = Q * Q, -2 * P * Q, P * P - D
    g = gcd3(a, b, c)
    a, b, c = a // g, b // g, c // g
    disc = b * b - 4 * a * c
    if Q > 0:
        return QuadSurd(-b, 2 * a, disc)
    return QuadSurd(b, -2 * a, disc)


def from_poly(f: QuadPoly) -> QuadSurd:
    """Larger root of a*w^2 + b*w + c."""
    if f.a <= 0:
        raise SurdError("leading coefficient must be positive")
    if gcd3(f.a, f.b, f.c) != 1:
        raise SurdError(f"polynomial {f} is not primitive")
    if not is_discriminant(f.disc):
        raise SurdError(f"{f.disc} is not a valid discriminant")
    return QuadSurd(-f.b, 2 * f.a, f.disc)


def to_poly(w: QuadSurd) -> QuadPoly:
    """Primitive minimal polynomial of w with a > 0."""
    c = (w.P * w.P - w.D) // (2 * w.Q)
    if w.Q > 0:
        return QuadPoly(w.Q // 2, -w.P, c)
    return QuadPoly(-w.Q // 2, w.P, -c)


def sqrt_surd(n: int) -> QuadSurd:
    """sqrt(n) written as (0 + sqrt(4n)) / 2."""
    return make_surd(0, 2, 4 * n)


def _gt_one(P: int, Q: int, D: int) -> bool:
    # (P + sqrt D)/Q > 1  <=>  sign(Q) * sign(P - Q + sqrt D) > 0
    s = _sign_surd(P - Q, 1, D)
    return s > 0 if Q > 0 else s < 0


def is_reduced(w: QuadSurd) -> bool:
    """w > 1 and -1 < w' < 0."""
    if not _gt_one(w.P, w.Q, w.D):
        return False
    sq = 1 if w.Q > 0 else -1
    # w' = (P - sqrt D)/Q < 0 and w' + 1 = (P + Q - sqrt D)/Q > 0
    return (_sign_surd(w.P, -1, w.D) * sq < 0
            and _sign_surd(w.P + w.Q, -1, w.D) * sq > 0)


def is_m_reduced(w: QuadSurd) -> bool:
    """w > 1 and 0 < w' < 1."""
    if not _gt_one(w.P, w.Q, w.D):
        return False
    sq = 1 if w.Q > 0 else -1
    return (_sign_surd(w.P, -1, w.D) * sq > 0
            and _sign_surd(w.P - w.Q, -1, w.D) * sq < 0)


def floor_of(w: QuadSurd) -> int:
    r = isqrt(w.D)
    if w.Q > 0:
        return (w.P + r) // w.Q
    # (P + sqrt D)/Q = (-P - sqrt D)/|Q| and -sqrt D lies in (-r-1, -r)
    return (-w.P - r - 1) // (-w.Q)


def ceil_of(w: QuadSurd) -> int:
    return floor_of(w) + 1


def cf_step_plus(w: QuadSurd) -> tuple[int, QuadSurd]:
    """digit = floor(w), next = 1 / (w - digit)."""
    a = floor_of(w)
    P = a * w.Q - w.P
    return a, QuadSurd(P, (w.D - P * P) // w.Q, w.D)


def cf_step_minus(w: QuadSurd) -> tuple[int, QuadSurd]:
    """digit = ceil(w), next = 1 / (digit - w)."""
    b = ceil_of(w)
    P = b * w.Q - w.P
    return b, QuadSurd(P, (P * P - w.D) // w.Q, w.D)


_STEPS = {"plus": cf_step_plus, "minus": cf_step_minus}


def minimal_period(word: Sequence[int]) -> tuple[int, ...]:
    """Shortest block whose repetition gives ``word``."""
    n = len(word)
    word = tuple(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def canonical_rotation(word: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least rotation; used as the class identifier of a cycle."""
    word = tuple(word)
    return min(word[i:] + word[:i] for i in range(len(word)))


def expand(w: QuadSurd, kind: Kind = "plus") -> CFExpansion:
    """Eventually periodic plus or minus continued fraction of w."""
    step = _STEPS[kind]
    seen: dict[tuple[int, int], int] = {}
    digits: list[int] = []
    cur = w
    while (cur.P, cur.Q) not in seen:
        seen[(cur.P, cur.Q)] = len(digits)
        a, cur = step(cur)
        digits.append(a)
    start = seen[(cur.P, cur.Q)]
    period = minimal_period(digits[start:])
    if kind == "minus" and min(period) < 2:
        raise AssertionError(f"minus period {period} of {w} has a digit below 2")
    return CFExpansion(kind, tuple(digits[:start]), period)


def stats(e: CFExpansion) -> dict[str, int | None]:
    """Period length l, digit sum S (plus kind) and count S+ of digits >= 3 (minus kind)."""
    if e.kind == "plus":
        return {"l": len(e.period), "S": sum(e.period), "S_plus": None}
    return {"l": len(e.period), "S": None, "S_plus": sum(1 for b in e.period if b >= 3)}


def eventual_period_length(w: QuadSurd, kind: Kind = "plus") -> int:
    return len(expand(w, kind).period)


def period_matrix(word: Sequence[int]) -> PeriodMatrix:
    """Product (a1 1; 1 0) ... (an 1; 1 0), left to right."""
    if not word:
        raise ValueError("period_matrix needs a nonempty word")
    p, q, r, s = 1, 0, 0, 1
    for a in word:
        # (p q; r s) (a 1; 1 0) = (a p + q, p; a r + s, r)
        p, q = a * p + q, p
        r, s = a * r + s, r
    return PeriodMatrix(p, q, r, s)


# GF(2) matrices as 4-tuples (p, q, r, s)
_O = (1, 1, 1, 0)
_E = (0, 1, 1, 0)
_I = (1, 0, 0, 1)
_O2 = (0, 1, 1, 1)


def _mul2(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, int, int, int]:
    return (
        (x[0] & y[0]) ^ (x[1] & y[2]),
        (x[0] & y[1]) ^ (x[1] & y[3]),
        (x[2] & y[0]) ^ (x[3] & y[2]),
        (x[2] & y[1]) ^ (x[3] & y[3]),
    )


def matrix_parity_class(word: Sequence[int]) -> bool:
    """Whether the GF(2) image of the digit-matrix product lies in {I, O, O^2}."""
    if not word:
        raise ValueError("matrix_parity_class needs a nonempty word")
    m = _I
    for a in word:
        m = _mul2(m, _O if a % 2 else _E)
    return m in (_I, _O, _O2)


def _is_palindrome(word: tuple[int, ...]) -> bool:
    return word == word[::-1]


def literal_shape(word: Sequence[int]) -> Shape:
    """Shape of ``word`` as written, without rotating it.

    Unlike :func:`ambiguous_shape`, a word [c0, palindrome] of odd length is
    reported as offset too; the coefficient law a | b holds for it as well.
    """
    word = tuple(word)
    if _is_palindrome(word):
        return Shape.ODD_PALINDROME if len(word) % 2 else Shape.EVEN_PALINDROME
    if len(word) > 1 and _is_palindrome(word[1:]):
        return Shape.OFFSET_PALINDROME
    return Shape.NONE


def ambiguous_shape(period: Sequence[int]) -> Shape:
    """Palindromic shape of a period up to rotation.

    Odd periods can only be odd palindromes. For even periods a rotation that
    is itself a palindrome wins over one of the form [c0, palindrome].
    """
    period = tuple(period)
    if not period:
        raise ValueError("ambiguous_shape needs a nonempty period")
    rotations = [period[i:] + period[:i] for i in range(len(period))]
    if any(_is_palindrome(r) for r in rotations):
        return Shape.ODD_PALINDROME if len(period) % 2 else Shape.EVEN_PALINDROME
    if len(period) % 2 == 0 and any(_is_palindrome(r[1:]) for r in rotations):
        return Shape.OFFSET_PALINDROME
    return Shape.NONE


def reverse_conjugate(w: QuadSurd) -> QuadSurd:
    """-1/w' = (P + sqrt D) / ((D - P^2)/Q)."""
    return QuadSurd(w.P, (w.D - w.P * w.P) // w.Q, w.D)
