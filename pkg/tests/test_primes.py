from itertools import islice

import numpy as np
import pytest

from gapsieve.primes import (
    is_prime,
    next_prime,
    prev_prime,
    primes,
    primorial,
    primorial_totient,
    simple_sieve,
)
from oracles import trial_division_primes


def test_is_prime_matches_trial_division():
    oracle = set(trial_division_primes(2000))
    for n in range(2000 + 1):
        assert is_prime(n) == (n in oracle)


def test_is_prime_large_composites():
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7
    assert is_prime(2**61 - 1)


def test_next_prev_prime():
    assert next_prime(2) == 3
    assert next_prime(23) == 29
    assert next_prime(1) == 2
    assert prev_prime(29) == 23
    assert prev_prime(3) == 2
    with pytest.raises(ValueError):
        prev_prime(2)


def test_generator_matches_sieve():
    want = simple_sieve(10_000).tolist()
    got = list(islice(primes(), len(want)))
    assert got == want


def test_simple_sieve_counts():
    assert simple_sieve(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert simple_sieve(1).size == 0
    assert simple_sieve(10**6).size == 78498


def test_primorials():
    assert primorial(2) == 2
    assert primorial(7) == 210
    assert primorial(13) == 30030
    assert primorial_totient(7) == 48
    assert primorial_totient(19) == 1_658_880
    assert primorial_totient(23) == 36_495_360


def test_simple_sieve_dtype():
    assert simple_sieve(100).dtype == np.int64
