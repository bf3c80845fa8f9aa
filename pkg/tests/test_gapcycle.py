import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapsieve.constellation import Constellation, parse
from gapsieve.errors import CapacityError, ConfigError
from gapsieve.gapcycle import (
    GapCycle,
    base_cycle,
    build_cycle,
    dump_cycle,
    estimated_build_bytes,
    generators,
    next_prime_of,
    positions_of,
    scan_count,
    step_recursion,
    uniformity_statistic,
)
from gapsieve.primes import next_prime, primorial, primorial_totient, simple_sieve
from oracles import naive_cyclic_scan

PAPER_G5 = "6,4,2,4,2,4,6,2"
PAPER_G7 = (
    "10,2,4,2,4,6,2,6,4,2,4,6,6,2,6,4,2,6,4,6,8,4,2,4,2,4,8,6,4,6,"
    "2,4,6,2,6,6,4,2,4,6,2,6,4,2,4,2,10,2"
)


def test_base_cycle():
    c = base_cycle()
    assert c.stage_prime == 2 and c.gaps.tolist() == [2]
    c.validate()


def test_first_step_reaches_stage_three():
    c = step_recursion(base_cycle())
    assert c.stage_prime == 3
    assert c.gaps.tolist() == [4, 2]


def test_paper_cycles_exact():
    assert dump_cycle(build_cycle(5)) == f"p=5 phi=8 primorial=30\n{PAPER_G5}\n"
    assert dump_cycle(build_cycle(7)) == f"p=7 phi=48 primorial=210\n{PAPER_G7}\n"


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_invariants_small_stages(cycles, p):
    c = cycles[p]
    c.validate()
    assert c.phi == primorial_totient(p)
    assert c.primorial == primorial(p)
    if p >= 3:
        assert int(c.gaps[-1]) == 2
        assert int(c.gaps[0]) == next_prime(p) - 1
        body = c.gaps[:-1]
        assert np.array_equal(body, body[::-1])
        assert not np.any(c.gaps % 2)


def test_step_length_formula(cycles):
    for p, c in cycles.items():
        if p == 13:
            continue
        nxt = step_recursion(c)
        assert nxt.phi == (nxt.stage_prime - 1) * c.phi


def test_next_prime_of(cycles):
    assert next_prime_of(cycles[3]) == 5
    assert next_prime_of(cycles[5]) == 7
    assert next_prime_of(cycles[7]) == 11


def test_build_rejects_non_prime():
    with pytest.raises(ConfigError, match="not prime"):
        build_cycle(4)


def test_build_capacity_error_names_bytes():
    with pytest.raises(CapacityError, match=f"{estimated_build_bytes(29):,}"):
        build_cycle(29)


def test_step_recursion_honors_stage_budget(big_cycles):
    with pytest.raises(CapacityError, match="stage 23"):
        step_recursion(big_cycles[19], max_stage=19)


def test_gaps_are_read_only(cycles):
    with pytest.raises(ValueError):
        cycles[5].gaps[0] = 4


def test_scan_fixtures(cycles):
    assert scan_count(cycles[5], parse("2")) == 3
    assert scan_count(cycles[5], parse("242")) == 1
    assert scan_count(cycles[7], parse("2")) == 15
    assert scan_count(cycles[7], parse("66")) == 2


def test_scan_counts_wraparound():
    # (2,4) only occurs across the seam of the 2-gap stage-3 cycle
    c = build_cycle(3)
    assert scan_count(c, parse("24")) == 1
    assert scan_count(c, parse("42")) == 1
    assert scan_count(c, parse("222")) == 0


def test_scan_pattern_longer_than_cycle():
    c = base_cycle()
    assert scan_count(c, parse("22")) == 1  # wraps twice over the single cell
    assert scan_count(c, parse("24")) == 0


def test_scan_huge_gap_never_matches(cycles):
    assert scan_count(cycles[7], Constellation((256,))) == 0


def test_positions_fixtures(cycles):
    pos = positions_of(cycles[5], parse("2,4,2"))
    assert len(pos) == 1 and pos[0].offset == 10
    assert len(positions_of(cycles[5], parse("6"))) == 2
    pos66 = positions_of(cycles[7], parse("66"))
    assert len(pos66) == 2
    # generator coordinates 47 and 151: the two survivors
    assert [p.offset + 1 for p in pos66] == [47, 151]


@settings(max_examples=30)
@given(st.lists(st.sampled_from([2, 4, 6, 8, 10]), min_size=1, max_size=4).map(tuple))
def test_scan_matches_naive_oracle(gaps):
    c = build_cycle(7)
    s = Constellation(gaps)
    naive = naive_cyclic_scan(c.gaps.tolist(), list(gaps))
    assert scan_count(c, s) == len(naive)
    assert [p.index for p in positions_of(c, s)] == naive


def test_positions_ascending_and_sized(cycles, suite):
    for s in suite:
        pos = positions_of(cycles[11], s)
        assert len(pos) == scan_count(cycles[11], s)
        offs = [p.offset for p in pos]
        assert offs == sorted(offs)


def test_scan_reversal_symmetry(big_cycles, suite):
    for p in (5, 7, 11, 13, 17, 19):
        c = big_cycles[p]
        for s in suite:
            assert scan_count(c, s) == scan_count(c, s.reverse())


def test_generators_match_gcd_filter(cycles):
    for p in (3, 5, 7, 11, 13):
        c = cycles[p]
        prim = c.primorial
        want = [n for n in range(1, prim + 1) if math.gcd(n, prim) == 1]
        assert generators(c).tolist() == want


def test_cycle_front_is_true_prime_gaps(big_cycles):
    # generators strictly between p_next and p_next^2 are exactly the primes
    # there; small stages need the periodic extension to reach p_next^2
    for p in (5, 7, 11, 13, 17, 19):
        c = big_cycles[p]
        q = next_prime(p)
        gens = generators(c)
        reps = q * q // c.primorial + 1
        ext = np.concatenate([gens + k * c.primorial for k in range(reps)])
        window = ext[(ext > q) & (ext < q * q)]
        want = simple_sieve(q * q - 1)
        assert window.tolist() == want[want > q].tolist()


def test_uniformity_degenerate_cases():
    stat = uniformity_statistic([0, 10, 20, 30], span=40, bins=4)
    assert stat.statistic == 0.0
    assert stat.dof == 3
    n = 12
    stat = uniformity_statistic(list(range(n)), span=1000, bins=2)
    assert stat.statistic == pytest.approx(n)


def test_uniformity_baseline_diagnostic(cycles):
    pos = positions_of(cycles[13], parse("2"))
    stat = uniformity_statistic(pos, cycles[13].primorial, 16)
    assert stat.dof == 15
    assert stat.statistic >= 0.0
    assert sum(stat.bin_counts) == len(pos)


def test_uniformity_errors():
    with pytest.raises(ConfigError, match="no copies"):
        uniformity_statistic([], span=30, bins=4)
    with pytest.raises(ConfigError):
        uniformity_statistic([1], span=30, bins=1)


def test_dump_format_has_exact_shape(cycles):
    text = dump_cycle(cycles[3])
    assert text == "p=3 phi=2 primorial=6\n4,2\n"
