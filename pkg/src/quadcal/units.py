"""Fundamental units, conductors, the unit index and the class-number formula for orders."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, log2

from .arith import factorize, is_discriminant, isqrt, kronecker
from .enumeration import Cycle, InvariantViolation, classes
from .surd import QuadSurd, period_matrix

__all__ = [
    "FundamentalUnit",
    "ConductorSplit",
    "fundamental_unit",
    "unit_from_cycle",
    "conductor_split",
    "is_fundamental",
    "unit_power",
    "unit_index_mu",
    "class_number_formula",
]


@dataclass(frozen=True)
class FundamentalUnit:
    """eps = (t + u sqrt D) / 2 with t^2 - D u^2 = 4 * norm."""

    t: int
    u: int
    norm: int

    def to_json(self) -> dict:
        return {"t": str(self.t), "u": str(self.u), "norm": self.norm}


@dataclass(frozen=True)
class ConductorSplit:
    D0: int
    f: int


def unit_from_cycle(D: int, cycle: Cycle) -> FundamentalUnit:
    """Read eps_D off the period matrix (p q; r s) of one plus cycle.

    With w purely periodic, w = (p w + q)/(r w + s), so r w^2 + (s-p) w - q = 0
    is g times the primitive polynomial of w, g = gcd(r, s-p, q). The unit
    r w + s then equals ((p + s) + g sqrt D) / 2 and has norm det = (-1)^l.
    """
    M = period_matrix(cycle.digits)
    u = gcd(gcd(M.r, M.s - M.p), M.q)
    t = M.trace
    norm = M.det
    if t * t - D * u * u != 4 * norm:
        raise InvariantViolation(
            f"D={D}: cycle {cycle.word} gives t={t}, u={u} with t^2-Du^2 != {4 * norm}")
    return FundamentalUnit(t, u, norm)


def fundamental_unit(D: int, cycles: list[Cycle] | None = None) -> FundamentalUnit:
    """eps_D from the principal cycle, the one through (B + sqrt D)/2 with B maximal."""
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a valid discriminant")
    if cycles is None:
        cycles = classes(D, "plus")
    r = isqrt(D)
    B = r if (r - D) % 2 == 0 else r - 1
    anchor = QuadSurd(B, 2, D)
    principal = next(cy for cy in cycles if anchor in cy.members)
    return unit_from_cycle(D, principal)


def is_fundamental(D: int) -> bool:
    if not is_discriminant(D):
        return False
    if D % 4 == 1:
        return all(e == 1 for e in factorize(D).values())
    m = D // 4
    return m % 4 in (2, 3) and all(e == 1 for e in factorize(m).values())


def conductor_split(D: int) -> ConductorSplit:
    """The unique D = f^2 * D0 with D0 a fundamental discriminant."""
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a valid discriminant")
    f = 1
    for p, e in factorize(D).items():
        f *= p ** (e // 2)
    D0 = D // (f * f)
    # D0 is D's squarefree kernel; a kernel that is 2 or 3 (mod 4) needs the 4 back
    if D0 % 4 != 1:
        D0 *= 4
        f //= 2
    if not is_fundamental(D0) or f * f * D0 != D:
        raise InvariantViolation(f"conductor split of {D} failed: D0={D0}, f={f}")
    return ConductorSplit(D0, f)


def unit_power(eps: FundamentalUnit, D0: int, k: int) -> tuple[int, int]:
    """(t_k, u_k) with eps^k = (t_k + u_k sqrt D0) / 2."""
    t1, u1 = eps.t, eps.u
    t, u = t1, u1
    for _ in range(k - 1):
        t, u = (t1 * t + D0 * u1 * u) // 2, (t1 * u + u1 * t) // 2
    return t, u


def unit_index_mu(D0: int, f: int, eps0: FundamentalUnit | None = None,
                  eps: FundamentalUnit | None = None) -> int:
    """Least k >= 1 with f | u_k, i.e. eps_{D0}^k lies in the order of conductor f.

    The result is checked against eps = eps_{f^2 D0} (computed when not given):
    eps_{D0}^mu must equal it coefficient for coefficient.
    """
    if f == 1:
        return 1
    if eps0 is None:
        eps0 = fundamental_unit(D0)
    if eps is None:
        eps = fundamental_unit(f * f * D0)
    cap = max(1, int(6 * f * log2(D0)))
    t1, u1 = eps0.t, eps0.u
    t, u = t1, u1
    for k in range(1, cap + 1):
        if u % f == 0:
            if (t, u) != (eps.t, f * eps.u):
                raise InvariantViolation(
                    f"eps_{D0}^{k} = ({t}, {u}) does not match eps_{f * f * D0} = {eps}")
            return k
        t, u = (t1 * t + D0 * u1 * u) // 2, (t1 * u + u1 * t) // 2
    raise InvariantViolation(f"unit index search for D0={D0}, f={f} passed cap {cap}")


def class_number_formula(D: int, h_D0: int, mu: int | None = None) -> int:
    """h(D) = h(D0) f / mu * prod over p | f of (1 - chi_D0(p)/p), in exact rationals."""
    split = conductor_split(D)
    D0, f = split.D0, split.f
    if mu is None:
        mu = unit_index_mu(D0, f)
    value = Fraction(h_D0 * f, mu)
    for p in factorize(f):
        value *= 1 - Fraction(kronecker(D0, p), p)
    if value.denominator != 1 or value <= 0:
        raise InvariantViolation(f"class-number formula for D={D} gave {value}")
    return int(value)
