"""Exact integer primitives: square roots, primality, quadratic symbols, two squares."""

from math import gcd, isqrt as _isqrt

__all__ = [
    "isqrt",
    "is_perfect_square",
    "kronecker",
    "is_prime",
    "two_squares",
    "is_discriminant",
    "factorize",
    "PRIME_LIMIT",
]

# Miller-Rabin with the first twelve prime bases is deterministic below this
# bound (Sorenson & Webster 2015: psi_12 = 3317044064679887385961981).
PRIME_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def isqrt(n: int) -> int:
    """Largest r with r*r <= n."""
    if n < 0:
        raise ValueError(f"isqrt of negative number {n}")
    return _isqrt(n)


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = _isqrt(n)
    return r * r == n


def is_discriminant(D: int) -> bool:
    """True for D > 0, D = 0 or 1 (mod 4), D not a square."""
    return D > 0 and D % 4 in (0, 1) and not is_perfect_square(D)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n), defined for all integers a, n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    # factor out powers of two with the (a|2) rule
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        n >>= v
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    Trial division by small primes, then Miller-Rabin with twelve fixed bases,
    which is proven correct for every n < PRIME_LIMIT (about 3.3e24). Larger
    inputs raise ValueError rather than return a probabilistic answer.
    """
    if n < 2:
        return False
    if n >= PRIME_LIMIT:
        raise ValueError(f"{n} exceeds the deterministic primality bound {PRIME_LIMIT}")
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def two_squares(p: int) -> tuple[int, int]:
    """The unique (x, y) with x*x + y*y = p and 0 < x < y, for a prime p = 1 (mod 4)."""
    if p % 4 != 1 or not is_prime(p):
        raise ValueError(f"two_squares needs a prime p = 1 (mod 4), got {p}")
    for x in range(1, _isqrt(p // 2) + 1):
        y2 = p - x * x
        y = _isqrt(y2)
        if y * y == y2:
            return x, y
    raise AssertionError(f"no two-squares decomposition found for prime {p}")


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (only used on conductors)."""
    if n < 1:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(abs(n)).values()) if n else False


def gcd3(a: int, b: int, c: int) -> int:
    return gcd(gcd(a, b), c)
