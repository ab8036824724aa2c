"""Reduced and m-reduced numbers of a discriminant, their cycles, and the counts built on them.

For a discriminant D every candidate is written w = (B + sqrt D) / (2a) with
minimal polynomial a*w^2 - B*w + c, c = (B^2 - D) / (4a), gcd(a, B, c) = 1.

* reduced (w > 1, -1 < w' < 0): 1 <= B < sqrt D and sqrt D - B < 2a < sqrt D + B.
* m-reduced (w > 1, 0 < w' < 1): a > 0, c > 0 and B > a + c. Writing
  s = a + c, d = a - c, k = B - s >= 1 gives D = d^2 + 2ks + k^2, so k and |d|
  are below sqrt D and s is determined by (k, d).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Literal

from .arith import is_discriminant, isqrt
from .surd import QuadSurd, canonical_rotation, cf_step_minus, cf_step_plus

__all__ = [
    "InvariantViolation",
    "Cycle",
    "DiscriminantProfile",
    "enumerate_reduced",
    "enumerate_m_reduced",
    "classes",
    "profile",
    "valid_discriminants",
]


class InvariantViolation(RuntimeError):
    """Two independent computations of the same quantity disagree."""


def _check(D: int) -> None:
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a valid discriminant")


def valid_discriminants(lo: int, hi: int) -> list[int]:
    return [D for D in range(max(lo, 1), hi + 1) if is_discriminant(D)]


def enumerate_reduced(D: int) -> set[QuadSurd]:
    """Q(D): every reduced quadratic irrational of discriminant D."""
    _check(D)
    r = isqrt(D)
    out = set()
    for B in range(2 - D % 2, r + 1, 2):
        N = B * B - D  # = 4ac < 0
        # (2a + B)^2 > D  and  |2a - B| <= r
        a_lo = max(1, (r + 2 - B) // 2)
        a_hi = (r + B) // 2
        for a in range(a_lo, a_hi + 1):
            if N % (4 * a):
                continue
            c = N // (4 * a)
            if gcd(gcd(a, B), c) == 1:
                out.add(QuadSurd(B, 2 * a, D))
    return out


def enumerate_m_reduced(D: int) -> set[QuadSurd]:
    """Q+(D): every m-reduced quadratic irrational of discriminant D."""
    _check(D)
    r = isqrt(D)
    out = set()
    for k in range(1, r + 1):
        for d in range(-r, r + 1):
            num = D - d * d - k * k
            if num <= 0 or num % (2 * k):
                continue
            s = num // (2 * k)
            if (s - d) % 2 or abs(d) >= s:
                continue
            a, c = (s + d) // 2, (s - d) // 2
            B = s + k
            if gcd(gcd(a, B), c) == 1:
                out.add(QuadSurd(B, 2 * a, D))
    return out


@dataclass(frozen=True)
class Cycle:
    kind: Literal["plus", "minus"]
    word: tuple[int, ...]  # canonical (least) rotation
    members: tuple[QuadSurd, ...]  # in shift order, starting at members[0]
    digits: tuple[int, ...]  # digits in the same order as members

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def digit_sum(self) -> int:
        return sum(self.word)


def classes(D: int, kind: Literal["plus", "minus"] = "plus",
            members: set[QuadSurd] | None = None) -> list[Cycle]:
    """Partition Q(D) (plus) or Q+(D) (minus) into shift-map cycles, sorted by word."""
    if members is None:
        members = enumerate_reduced(D) if kind == "plus" else enumerate_m_reduced(D)
    step = cf_step_plus if kind == "plus" else cf_step_minus
    remaining = set(members)
    cycles = []
    for start in sorted(members):
        if start not in remaining:
            continue
        orbit, digits = [], []
        w = start
        while True:
            if w not in remaining:
                raise InvariantViolation(
                    f"{kind} shift of D={D} left the enumerated set at {w}")
            remaining.discard(w)
            orbit.append(w)
            a, w = step(w)
            digits.append(a)
            if w == start:
                break
        cycles.append(Cycle(kind, canonical_rotation(digits), tuple(orbit), tuple(digits)))
    cycles.sort(key=lambda cy: (cy.word, cy.members[0]))
    return cycles


@dataclass
class DiscriminantProfile:
    D: int
    kappa: int
    kappa_plus: int
    h: int
    h_plus: int
    cycles_plus: list[tuple[int, ...]]
    cycles_minus: list[tuple[int, ...]]
    reduced: set[QuadSurd] = field(default_factory=set, repr=False, compare=False)
    m_reduced: set[QuadSurd] = field(default_factory=set, repr=False, compare=False)
    plus: list[Cycle] = field(default_factory=list, repr=False, compare=False)
    minus: list[Cycle] = field(default_factory=list, repr=False, compare=False)


def profile(D: int) -> DiscriminantProfile:
    """kappa, kappa+, h, h+ of D; kappa and kappa+ are computed two ways and compared."""
    _check(D)
    reduced = enumerate_reduced(D)
    m_reduced = enumerate_m_reduced(D)
    plus = classes(D, "plus", reduced)
    minus = classes(D, "minus", m_reduced)
    by_length = sum(cy.length for cy in plus)
    by_sum = sum(cy.digit_sum for cy in plus)
    if by_length != len(reduced):
        raise InvariantViolation(
            f"D={D}: |Q(D)|={len(reduced)} but plus-cycle lengths sum to {by_length}")
    if by_sum != len(m_reduced):
        raise InvariantViolation(
            f"D={D}: |Q+(D)|={len(m_reduced)} but plus-cycle digit sums give {by_sum}")
    return DiscriminantProfile(
        D=D,
        kappa=len(reduced),
        kappa_plus=len(m_reduced),
        h=len(plus),
        h_plus=len(minus),
        cycles_plus=[cy.word for cy in plus],
        cycles_minus=[cy.word for cy in minus],
        reduced=reduced,
        m_reduced=m_reduced,
        plus=plus,
        minus=minus,
    )
