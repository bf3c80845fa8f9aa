import pytest

from gapsieve.constellation import closure, parse
from gapsieve.errors import ConfigError
from gapsieve.gapcycle import scan_count
from gapsieve.primes import primorial
from gapsieve.recurrence import (
    advance,
    conditions_hold,
    default_init_prime,
    init_counts,
    run_to,
    to_density,
)


def test_init_fixtures(cycles):
    sc = init_counts(closure(parse("2")), 5, cycle=cycles[5])
    assert sc.values == {parse("2"): 3}

    sc = init_counts(closure(parse("66")), 7, cycle=cycles[7])
    assert sc.root_value() == 2

    sc = init_counts(closure(parse("242")), 5, cycle=cycles[5])
    assert sc.values[parse("242")] == 1
    assert sc.values[parse("2222")] == 0


def test_default_init_primes():
    assert default_init_prime(closure(parse("2"))) == 2
    assert default_init_prime(closure(parse("6"))) == 3
    assert default_init_prime(closure(parse("66"))) == 7
    assert default_init_prime(closure(parse("666"))) == 7


def test_init_unsatisfiable_advises_sieve():
    # 31 gaps of 2: no driving terms, but no buildable stage clears length 31
    g = closure(parse("2" * 31), max_sigma=62)
    with pytest.raises(ConfigError, match="sieve"):
        default_init_prime(g)


def test_advance_fixtures(cycles):
    sc = init_counts(closure(parse("2")), 5, cycle=cycles[5])
    assert advance(sc).root_value() == (7 - 2) * 3 == 15

    sc66 = init_counts(closure(parse("66")), 7, cycle=cycles[7])
    nxt = advance(sc66)
    assert nxt.stage_prime == 11
    assert nxt.root_value() == 26
    # driver contribution pinned by scanning the four drivers at stage 7
    driver_sum = sum(scan_count(cycles[7], d) for d, _ in sc66.graph.drivers_of(parse("66")))
    assert driver_sum == 26 - (11 - 3) * 2 == 10


def test_quadruplet_pure_survivor_factor():
    # all driving terms of 242 stay at count 0, so each stage multiplies by p-4
    snaps = run_to(parse("242"), 19, "exact")
    by_stage = {sc.stage_prime: sc for sc in snaps}
    assert by_stage[5].values[parse("2222")] == 0
    prev = None
    for sc in snaps:
        assert sc.values[parse("2222")] == 0
        if prev is not None and prev.stage_prime >= 5:
            assert sc.root_value() == (sc.stage_prime - 4) * prev.root_value()
        prev = sc


def test_run_to_twin_table():
    snaps = run_to(parse("2"), 13, "exact")
    assert [(sc.stage_prime, sc.root_value()) for sc in snaps] == [
        (2, 1), (3, 1), (5, 3), (7, 15), (11, 135), (13, 1485),
    ]


def test_density_mode_values():
    snaps = run_to(parse("2"), 7, "density")
    x7 = snaps[-1].root_value()
    assert x7 == pytest.approx(15 / 210, rel=1e-12)


def test_density_equals_exact_over_primorial(suite):
    for s in suite:
        exact = run_to(s, 19, "exact")
        dens = run_to(s, 19, "density")
        for e, d in zip(exact, dens):
            assert e.stage_prime == d.stage_prime
            prim = primorial(e.stage_prime)
            for node in e.graph.nodes:
                want = e.values[node] / prim
                got = d.values[node]
                assert got == pytest.approx(want, rel=1e-12, abs=1e-300)


def test_oracle_equivalence_small_stages(cycles, suite):
    # recurrence equals direct scans wherever the evolution conditions hold
    for s in suite:
        snaps = run_to(s, 13, "exact")
        for sc in snaps:
            if sc.stage_prime in cycles:
                assert sc.root_value() == scan_count(cycles[sc.stage_prime], s), s.text


def test_counts_strictly_increasing_once_positive(suite):
    # strict growth needs the survivor multiplier p - (j+1) to be at least 2
    for s in suite:
        snaps = run_to(s, 23, "exact")
        prev = None
        for sc in snaps:
            v = sc.root_value()
            if prev is not None and prev > 0 and sc.stage_prime > len(s) + 2:
                assert v > prev
            prev = v


def test_reversal_symmetry_in_both_modes(suite):
    for s in suite:
        fwd = run_to(s, 19, "exact")
        rev = run_to(s.reverse(), 19, "exact")
        assert [sc.root_value() for sc in fwd] == [sc.root_value() for sc in rev]
        fwd_d = run_to(s, 19, "density")
        rev_d = run_to(s.reverse(), 19, "density")
        for a, b in zip(fwd_d, rev_d):
            assert a.root_value() == pytest.approx(b.root_value(), rel=1e-12, abs=1e-300)


def test_triple_gap_dominance():
    wide = {sc.stage_prime: sc.root_value() for sc in run_to(parse("2,10,2"), 23, "exact")}
    quad = {sc.stage_prime: sc.root_value() for sc in run_to(parse("242"), 23, "exact")}
    for p in (13, 17, 19, 23):
        assert wide[p] > quad[p]


def test_run_to_errors():
    with pytest.raises(ConfigError, match="not prime"):
        run_to(parse("2"), 12, "exact")
    with pytest.raises(ConfigError, match="below the initialization"):
        run_to(parse("66"), 5, "exact")
    with pytest.raises(ConfigError, match="density"):
        run_to(parse("2"), 10007, "exact")
    # density mode passes the same stage fine
    assert run_to(parse("2"), 10007, "density")[-1].stage_prime == 10007


def test_init_counts_errors(cycles):
    with pytest.raises(ConfigError, match="not prime"):
        init_counts(closure(parse("2")), 9)
    with pytest.raises(ConfigError, match="conditions"):
        init_counts(closure(parse("666")), 5, cycle=cycles[5])
    with pytest.raises(ConfigError, match="stage 7"):
        init_counts(closure(parse("2")), 5, cycle=cycles[7])


def test_conditions_hold():
    g = closure(parse("666"))  # max node length 9, gap sum 18
    assert not conditions_hold(g, 7)
    assert conditions_hold(g, 11)


def test_snapshots_immutable(cycles):
    sc = init_counts(closure(parse("2")), 5, cycle=cycles[5])
    with pytest.raises(TypeError):
        sc.values[parse("2")] = 99


def test_density_stays_in_unit_range(suite):
    for s in suite:
        for sc in run_to(s, 97, "density"):
            for v in sc.values.values():
                assert 0.0 <= v <= 1.0
