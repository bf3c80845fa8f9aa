"""Exact stage-to-stage evolution of constellation counts.

Once every driving term of a constellation is short enough relative to the
next sieving prime (length below p_next - 1 and gap sum below 2*p_next),
the count of each closure member evolves deterministically:

    N_next(s) = (p_next - (j + 1)) * N(s) + sum of driver counts

Exact mode keeps arbitrary-precision integers; density mode divides the
same recurrence by p_next each step, tracking N/p# instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Literal, Mapping

from .constellation import ClosureGraph, Constellation, closure
from .errors import ConfigError
from .gapcycle import DEFAULT_MAX_STAGE, GapCycle, build_cycle, scan_count
from .primes import is_prime, next_prime, primorial

# Exact integers at stage p carry ~p# digits' worth of growth; past this
# stage the density form is required.
DEFAULT_EXACT_STAGE_CAP = 10_000

Mode = Literal["exact", "density"]


@dataclass(frozen=True)
class StageCounts:
    """Immutable per-stage snapshot of counts (or densities) per closure node."""

    stage_prime: int
    mode: Mode
    graph: ClosureGraph
    values: Mapping[Constellation, int | float]

    def root_value(self) -> int | float:
        return self.values[self.graph.root]


def conditions_hold(graph: ClosureGraph, stage: int) -> bool:
    """Whether every closure node is evolvable into the given stage."""
    return graph.max_length < stage - 1 and graph.sigma < 2 * stage


def default_init_prime(graph: ClosureGraph, max_stage: int = DEFAULT_MAX_STAGE) -> int:
    """Smallest buildable stage whose successor satisfies the count conditions.

    Initialization is tied to when the conditions first hold, not to when the
    constellation first appears in a cycle; scans may legitimately be zero.
    """
    p = 2
    while p <= max_stage:
        if conditions_hold(graph, next_prime(p)):
            return p
        p = next_prime(p)
    raise ConfigError(
        f"no buildable stage <= {max_stage} can initialize counts for "
        f"{graph.root.text} (gap sum {graph.sigma}); only sieve counting applies"
    )


def init_counts(
    graph: ClosureGraph,
    init_prime: int,
    cycle: GapCycle | None = None,
    max_stage: int = DEFAULT_MAX_STAGE,
) -> StageCounts:
    """Exact counts for every closure node, scanned from the stage cycle."""
    if not is_prime(init_prime):
        raise ConfigError(f"initialization stage {init_prime} is not prime")
    if not conditions_hold(graph, next_prime(init_prime)):
        raise ConfigError(
            f"stage {init_prime} cannot initialize {graph.root.text}: a closure node of "
            f"length {graph.max_length} and gap sum {graph.sigma} violates the "
            f"count conditions at stage {next_prime(init_prime)}"
        )
    if cycle is None:
        cycle = build_cycle(init_prime, max_stage=max_stage)
    elif cycle.stage_prime != init_prime:
        raise ConfigError(f"cycle is for stage {cycle.stage_prime}, not {init_prime}")
    values = {node: scan_count(cycle, node) for node in graph.nodes}
    return StageCounts(init_prime, "exact", graph, MappingProxyType(values))


def to_density(sc: StageCounts) -> StageCounts:
    """Convert exact counts to densities N/p#."""
    if sc.mode == "density":
        return sc
    prim = primorial(sc.stage_prime)
    values = {node: v / prim for node, v in sc.values.items()}
    return StageCounts(sc.stage_prime, "density", sc.graph, MappingProxyType(values))


def advance(sc: StageCounts) -> StageCounts:
    """One recurrence step, to the next prime stage."""
    p = next_prime(sc.stage_prime)
    if not conditions_hold(sc.graph, p):
        raise ConfigError(f"count conditions do not hold at stage {p}")
    vals = sc.values
    out: dict[Constellation, int | float] = {}
    for node in sc.graph.nodes:
        survivors = (p - (len(node) + 1)) * vals[node]
        drivers = sum(mult * vals[d] for d, mult in sc.graph.drivers_of(node))
        if sc.mode == "exact":
            out[node] = survivors + drivers
        else:
            out[node] = (survivors + drivers) / p
    return StageCounts(p, sc.mode, sc.graph, MappingProxyType(out))


def run_to(
    s: Constellation,
    stop: int,
    mode: Mode = "exact",
    init_prime: int | None = None,
    max_stage: int = DEFAULT_MAX_STAGE,
    exact_cap: int = DEFAULT_EXACT_STAGE_CAP,
    max_sigma: int | None = None,
) -> list[StageCounts]:
    """Evolve counts for s through every prime stage up to and including stop.

    Returns the per-stage snapshots from the initialization stage onward.
    The first snapshot's values come from scanning the cycle; later ones
    from the recurrence alone.
    """
    if not is_prime(stop):
        raise ConfigError(f"target stage {stop} is not prime")
    if mode == "exact" and stop > exact_cap:
        raise ConfigError(
            f"exact mode is capped at stage {exact_cap}; use density mode for {stop}"
        )
    graph = closure(s) if max_sigma is None else closure(s, max_sigma=max_sigma)
    start = default_init_prime(graph, max_stage) if init_prime is None else init_prime
    if stop < start:
        raise ConfigError(f"target stage {stop} is below the initialization stage {start}")
    sc = init_counts(graph, start, max_stage=max_stage)
    if mode == "density":
        sc = to_density(sc)
    snaps = [sc]
    while sc.stage_prime < stop:
        sc = advance(sc)
        snaps.append(sc)
    return snaps
