"""Deterministic primality testing for 64-bit integers."""

from __future__ import annotations

_SMALL_LIMIT = 1_000_000

# Witnesses proving primality for every n < 3.3e24, which covers 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _miller_rabin(n: int, a: int) -> bool:
    # n odd, n > 2, 1 < a < n
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Exact primality for 0 <= n < 2**64 (trial division below 1e6, else Miller-Rabin)."""
    if n < 0 or n >= 1 << 64:
        raise ValueError(f"is_prime requires 0 <= n < 2**64, got {n}")
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < _SMALL_LIMIT:
        f = 49
        while f * f <= n:
            if n % f == 0:
                return False
            f += 2
        return True
    for a in _MR_WITNESSES:
        if not _miller_rabin(n, a):
            return False
    return True
