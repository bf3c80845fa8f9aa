"""Cycle of gaps between the generators of Z mod p# at each sieve stage.

A stage's cycle lists the gaps between consecutive integers coprime to the
primorial p#, read cyclically starting from 1. One recursion step builds the
next stage's cycle: identify the next prime from the first gap, concatenate
that many copies of the current cycle, then merge one adjacent pair of gaps
at every multiple of the new prime that survived the previous stages.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .constellation import Constellation
from .errors import CapacityError, ConfigError
from .primes import is_prime, next_prime, primorial, primorial_totient

# phi(23#) is ~36.5M one-byte cells; the next stage is ~1GB plus working
# arrays, so anything past 23 is opt-in.
DEFAULT_MAX_STAGE = 23


@dataclass(frozen=True, eq=False)
class GapCycle:
    """Immutable cycle of gaps for one sieve stage (one byte per gap)."""

    stage_prime: int
    gaps: np.ndarray

    def __post_init__(self) -> None:
        if self.gaps.dtype != np.uint8:
            object.__setattr__(self, "gaps", self.gaps.astype(np.uint8))
        self.gaps.flags.writeable = False  # safe to share across threads

    @property
    def phi(self) -> int:
        """Number of gaps; equals the totient of the primorial."""
        return int(self.gaps.size)

    @property
    def primorial(self) -> int:
        """Sum of the gaps; equals the primorial of the stage prime."""
        return int(self.gaps.sum(dtype=np.int64))

    def validate(self) -> None:
        """Check the structural invariants; raises ValueError on violation."""
        p = self.stage_prime
        g = self.gaps
        if self.phi != primorial_totient(p):
            raise ValueError(f"gap count {self.phi} != phi({p}#)")
        if self.primorial != primorial(p):
            raise ValueError(f"gap sum {self.primorial} != {p}#")
        if p == 2:
            if g.tolist() != [2]:
                raise ValueError("base cycle must be the single gap 2")
            return
        if g[-1] != 2:
            raise ValueError("cycle must end in a 2")
        if int(g[0]) != next_prime(p) - 1:
            raise ValueError(f"first gap {g[0]} != nextprime({p}) - 1")
        if np.any(g % 2):
            raise ValueError("all gaps must be even")
        body = g[:-1]
        if not np.array_equal(body, body[::-1]):
            raise ValueError("cycle body is not palindromic")


def estimated_build_bytes(p: int) -> int:
    """Rough peak memory for building the stage-p cycle."""
    phi_prev = primorial_totient(p - 1)
    phi_new = primorial_totient(p)
    # concatenated cells + result + int64 index/work arrays over the prior stage
    return phi_new * 2 + 48 * phi_prev


def base_cycle() -> GapCycle:
    """The stage-2 cycle: the lone generator 1 mod 2, cyclic gap 2."""
    return GapCycle(2, np.array([2], dtype=np.uint8))


def next_prime_of(c: GapCycle) -> int:
    """The next sieving prime, read off the first gap."""
    return int(c.gaps[0]) + 1


def step_recursion(c: GapCycle, max_stage: int = DEFAULT_MAX_STAGE) -> GapCycle:
    """Build the next stage's cycle from the current one.

    Concatenates p_next copies of the current gaps, then performs exactly
    phi(p#) adjacent-gap merges: one at every boundary value p_next*u where
    u runs over the current generators 1, 1+g_1, 1+g_1+g_2, ... The merge
    spacing is the elementwise product p_next * gaps, whose final entry
    wraps around the end of the cycle.
    """
    p_next = next_prime_of(c)
    if p_next > max_stage:
        raise CapacityError(
            f"stage {p_next} exceeds the buildable maximum {max_stage}; "
            f"building it needs about {estimated_build_bytes(p_next):,} bytes "
            f"(raise max_stage to proceed)"
        )
    g = c.gaps
    phi = g.size
    prim = c.primorial

    cumg = np.cumsum(g, dtype=np.int64)  # partial sums S_1..S_phi, S_phi = p#
    u = np.empty(phi, dtype=np.int64)  # generators of the current stage
    u[0] = 1
    u[1:] = 1 + cumg[:-1]

    # Boundary after cell t of the concatenation sits at value
    # 1 + (t // phi)*p# + S_{t % phi + 1}; solve for t at each struck value.
    m = p_next * u - 1
    copy_idx, rem = np.divmod(m, prim)
    at_seam = rem == 0  # struck value sits on a copy boundary
    inner = np.searchsorted(cumg, rem)
    inner = np.where(at_seam, phi - 1, inner)
    copy_idx = np.where(at_seam, copy_idx - 1, copy_idx)
    if not np.array_equal(cumg[inner[~at_seam]], rem[~at_seam]):
        raise RuntimeError("struck value does not land on a gap boundary")
    merge_at = copy_idx * phi + inner

    if np.any(np.diff(merge_at) < 2):
        # Adjacent merges would collide; struck values are >= 2*p_next apart
        # so this cannot happen while gaps stay below 2*p_next.
        raise RuntimeError("overlapping merges in recursion step")

    cells = np.tile(g, p_next)
    merged = cells[merge_at].astype(np.int64) + cells[merge_at + 1]
    if merged.max(initial=0) > 255:
        raise CapacityError(
            f"merged gap {int(merged.max())} exceeds the one-byte cell at stage {p_next}"
        )
    cells[merge_at] = merged.astype(np.uint8)
    keep = np.ones(cells.size, dtype=bool)
    keep[merge_at + 1] = False
    out = cells[keep]
    if out.size != (p_next - 1) * phi:
        raise RuntimeError("recursion step produced a wrong-length cycle")
    return GapCycle(p_next, out)


def build_cycle(p: int, max_stage: int = DEFAULT_MAX_STAGE) -> GapCycle:
    """Cycle of gaps for stage p, built by iterating the recursion from stage 2."""
    if not is_prime(p):
        raise ConfigError(f"stage {p} is not prime")
    if p > max_stage:
        raise CapacityError(
            f"stage {p} exceeds the buildable maximum {max_stage}; "
            f"building it needs about {estimated_build_bytes(p):,} bytes "
            f"(raise max_stage to proceed)"
        )
    c = base_cycle()
    while c.stage_prime < p:
        c = step_recursion(c, max_stage=max_stage)
    return c


class Position(NamedTuple):
    """Start of a constellation copy: gap index and cumulative-sum offset."""

    index: int
    offset: int


def _start_mask(gaps: np.ndarray, pattern: Sequence[int]) -> np.ndarray:
    """Boolean mask over cyclic start cells matching the pattern."""
    n = gaps.size
    j = len(pattern)
    if any(a > 255 for a in pattern):
        return np.zeros(n, dtype=bool)
    reps = -(-(n + j - 1) // n)  # wrap as many times as the pattern needs
    ext = np.tile(gaps, reps)[: n + j - 1]
    hits = np.ones(n, dtype=bool)
    for t, a in enumerate(pattern):
        hits &= ext[t : t + n] == a
    return hits


def scan_count(c: GapCycle, s: Constellation) -> int:
    """Number of copies of s in the cycle, counted cyclically."""
    return int(np.count_nonzero(_start_mask(c.gaps, s.gaps)))


def positions_of(c: GapCycle, s: Constellation) -> list[Position]:
    """Ascending start positions of every copy of s in the cycle."""
    idx = np.flatnonzero(_start_mask(c.gaps, s.gaps))
    cum = np.cumsum(c.gaps, dtype=np.int64)
    return [Position(int(i), int(cum[i - 1]) if i else 0) for i in idx]


class UniformityStat(NamedTuple):
    statistic: float
    dof: int
    bin_counts: tuple[int, ...]


def uniformity_statistic(
    positions: Sequence[Position] | Sequence[int], span: int, bins: int
) -> UniformityStat:
    """Chi-squared statistic of position offsets against equal-width bins.

    Offsets are cumulative-sum coordinates in [0, span); the expected
    occupancy is count/bins per bin. Returns the statistic and its degrees
    of freedom; interpreting the tail is left to the caller.
    """
    if bins < 2:
        raise ConfigError("need at least 2 bins")
    offsets = [p.offset if isinstance(p, Position) else int(p) for p in positions]
    if not offsets:
        raise ConfigError("no copies: cannot assess uniformity of an empty position list")
    counts = [0] * bins
    for off in offsets:
        counts[off * bins // span] += 1
    expected = len(offsets) / bins
    stat = sum((o - expected) ** 2 for o in counts) / expected
    return UniformityStat(float(stat), bins - 1, tuple(counts))


def dump_cycle(c: GapCycle) -> str:
    """Exact dump format: header line, then the comma-separated gaps."""
    header = f"p={c.stage_prime} phi={c.phi} primorial={c.primorial}\n"
    return header + ",".join(map(str, c.gaps.tolist())) + "\n"


def generators(c: GapCycle) -> np.ndarray:
    """The integers coprime to p# in [1, p#], recovered from the gaps."""
    out = np.empty(c.phi, dtype=np.int64)
    out[0] = 1
    out[1:] = 1 + np.cumsum(c.gaps, dtype=np.int64)[:-1]
    return out
