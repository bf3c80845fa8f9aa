"""Small prime utilities shared by the recurrence, estimator, and sieve modules."""

from __future__ import annotations

import math
from collections.abc import Iterator

import numpy as np

# Witness set proven deterministic for n < 3.3e24, far beyond the 9.0e15
# data-type bound honored elsewhere in the package.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    if n < 2:
        return 2
    c = n + 1 + (n % 2)
    if n == 2:
        return 3
    while not is_prime(c):
        c += 2
    return c


def prev_prime(n: int) -> int:
    """Largest prime strictly less than n."""
    if n <= 2:
        raise ValueError(f"no prime below {n}")
    if n == 3:
        return 2
    c = n - 2 if n % 2 else n - 1
    while not is_prime(c):
        c -= 2
    return c


def primes() -> Iterator[int]:
    """Unbounded ascending prime generator (incremental dict sieve)."""
    yield 2
    composites: dict[int, int] = {}
    q = 3
    while True:
        p = composites.pop(q, None)
        if p is None:
            composites[q * q] = q
            yield q
        else:
            x = q + 2 * p
            while x in composites:
                x += 2 * p
            composites[x] = p
        q += 2


def primes_between(lo: int, hi: int) -> Iterator[int]:
    """Primes p with lo <= p <= hi, ascending."""
    for p in primes():
        if p > hi:
            return
        if p >= lo:
            yield p


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (plain in-memory sieve)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def primorial(p: int) -> int:
    """Product of all primes <= p."""
    out = 1
    for q in primes():
        if q > p:
            return out
        out *= q


def primorial_totient(p: int) -> int:
    """Euler totient of the primorial of p, i.e. the product of (q - 1)."""
    out = 1
    for q in primes():
        if q > p:
            return out
        out *= q - 1
