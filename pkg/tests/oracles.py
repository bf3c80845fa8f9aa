"""Independent brute-force oracles used only by tests.

Every oracle here avoids the code paths it checks: primality by trial
division, scans by naive cyclic comparison, reductions by explicit
addition search, interval counts by recounting lists.
"""

from __future__ import annotations

import math
from functools import lru_cache


def trial_division_primes(limit: int) -> list[int]:
    """All primes <= limit by trial division against smaller primes."""
    base = []
    r = math.isqrt(limit)
    for n in range(2, r + 1):
        if all(n % p for p in base if p * p <= n):
            base.append(n)
    out = list(base)
    for n in range(r + 1, limit + 1):
        if all(n % p for p in base if p * p <= n):
            out.append(n)
    return out


def naive_cyclic_scan(gaps: list[int], pattern: list[int]) -> list[int]:
    """Start indices of cyclic occurrences, by direct modular comparison."""
    n = len(gaps)
    out = []
    for i in range(n):
        if all(gaps[(i + t) % n] == pattern[t] for t in range(len(pattern))):
            out.append(i)
    return out


def additions_of(gaps: tuple[int, ...]) -> set[tuple[int, ...]]:
    """Every constellation reachable by one adjacent-gap addition."""
    out = set()
    for i in range(len(gaps) - 1):
        out.add(gaps[:i] + (gaps[i] + gaps[i + 1],) + gaps[i + 2 :])
    return out


@lru_cache(maxsize=None)
def reduces_to(source: tuple[int, ...], target: tuple[int, ...]) -> bool:
    """Whether repeated adjacent additions turn source into target."""
    if source == target:
        return True
    if len(source) <= len(target):
        return False
    return any(reduces_to(nxt, target) for nxt in additions_of(source))


def even_compositions(total: int) -> list[tuple[int, ...]]:
    """All ordered sequences of even parts >= 2 summing to total."""
    if total == 0:
        return [()]
    out = []
    for first in range(2, total + 1, 2):
        for rest in even_compositions(total - first):
            out.append((first,) + rest)
    return out


def brute_closure(target: tuple[int, ...]) -> set[tuple[int, ...]]:
    """All even compositions of the gap sum that reduce to the target."""
    return {c for c in even_compositions(sum(target)) if reduces_to(c, target)}


def match_starts(primes: list[int], pattern: list[int]) -> list[int]:
    """Constellation match starts over a complete ascending prime list."""
    j = len(pattern)
    out = []
    for i in range(len(primes) - j):
        if all(primes[i + t + 1] - primes[i + t] == pattern[t] for t in range(j)):
            out.append(primes[i])
    return out


def recount_interval(starts: list[int], sigma: int, q: int) -> int:
    """Matches lying entirely inside [q, q^2]."""
    return sum(1 for m in starts if m >= q and m + sigma <= q * q)
