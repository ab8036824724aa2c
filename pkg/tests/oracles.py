"""Slow, independent reference computations used to freeze and cross-check values.

Nothing here imports the engine's enumeration or continued-fraction code.
Reducedness is decided numerically with 60-digit decimals, far away from the
exact integer comparisons used in the package.
"""

from decimal import Decimal, getcontext
from math import gcd, isqrt

getcontext().prec = 60


def trial_division_is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def brute_two_squares(p):
    for x in range(1, isqrt(p // 2) + 1):
        for y in range(x + 1, isqrt(p) + 1):
            if x * x + y * y == p:
                return x, y
    return None


def legendre_by_squaring(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if a in {x * x % p for x in range(1, p)} else -1


def _roots(a, b, D):
    # larger and smaller root of a w^2 + b w + c with b^2 - 4ac = D
    s = Decimal(D).sqrt()
    return (-b + s) / (2 * a), (-b - s) / (2 * a)


def brute_reduced(D):
    """Q(D) as a set of (P, Q) pairs, w = (P + sqrt D)/Q, by scanning (a, b)."""
    out = set()
    bound = 2 * isqrt(D) + 4
    for a in range(1, bound):
        for b in range(-bound, bound + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if gcd(gcd(a, b), c) != 1:
                continue
            w, w2 = _roots(a, b, D)
            if w > 1 and -1 < w2 < 0:
                out.add((-b, 2 * a))
    return out


def brute_m_reduced(D):
    """Q+(D) by scanning (a, c) with a + c <= (D - 1)/2 and B^2 = D + 4ac."""
    out = set()
    top = (D - 1) // 2
    for a in range(1, top + 1):
        for c in range(1, top - a + 1):
            B2 = D + 4 * a * c
            B = isqrt(B2)
            if B * B != B2 or gcd(gcd(a, B), c) != 1:
                continue
            w, w2 = _roots(a, -B, D)
            if w > 1 and 0 < w2 < 1:
                out.add((B, 2 * a))
    return out


def decimal_cf_digits(P, Q, D, n, minus=False):
    """First n plus (or minus) digits of (P + sqrt D)/Q from 60-digit decimals."""
    x = (Decimal(P) + Decimal(D).sqrt()) / Decimal(Q)
    digits = []
    for _ in range(n):
        a = int(x.to_integral_value(rounding="ROUND_CEILING" if minus else "ROUND_FLOOR"))
        digits.append(a)
        x = 1 / (a - x) if minus else 1 / (x - a)
    return digits


def naive_matrix_product(word):
    m = [[1, 0], [0, 1]]
    for a in word:
        d = [[a, 1], [1, 0]]
        m = [[sum(m[i][k] * d[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    return m


PELL_SEARCH_LIMIT = 10_000


def pell_ascending(D, limit=PELL_SEARCH_LIMIT):
    """Least u >= 1 with D u^2 - 4 or D u^2 + 4 a square; -4 tried first (smaller t).

    Returns (t, u, norm) or None when u would exceed ``limit``.
    """
    for u in range(1, limit + 1):
        for norm in (-1, 1):
            t2 = D * u * u + 4 * norm
            t = isqrt(t2)
            if t2 >= 0 and t * t == t2:
                return t, u, norm
    return None


def pell_sympy(D):
    """Minimal nontrivial solution of t^2 - D u^2 = +-4 from sympy's LMM solver."""
    from sympy.solvers.diophantine.diophantine import diop_DN

    sols = [(abs(x), abs(y), N // 4) for N in (-4, 4) for x, y in diop_DN(D, N) if y]
    return min(sols, key=lambda s: (s[1], s[0]))


def pell_oracle(D):
    """Ascending search where it terminates quickly, sympy's solver beyond that."""
    return pell_ascending(D) or pell_sympy(D)
