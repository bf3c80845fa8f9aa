"""Segmented Eratosthenes sieve with multi-constellation gap matching.

Ground truth for the estimates: stream primes in odd-only segments, match
every configured constellation against the running gap stream in a single
pass, and aggregate per-checkpoint interval counts Cnt(q, s) over [q, q^2]
from the match ledger with a difference array instead of the classic
per-integer count matrix.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .constellation import Constellation, parse
from .errors import CapacityError, ConfigError
from .primes import is_prime, simple_sieve

# One byte of odd-composite bitmap per odd number; the default segment is
# sized for L2-cache locality.
DEFAULT_SEGMENT_SIZE = 256 * 1024
HARD_LIMIT = 9_000_000_000_000_000  # 64-bit arithmetic budget

_LEDGER_MAGIC = b"GSLD"
_LEDGER_VERSION = 1


@dataclass(frozen=True)
class SieveConfig:
    """Parameters of one sieve run."""

    limit: int
    segment_size: int = DEFAULT_SEGMENT_SIZE
    constellations: tuple[Constellation, ...] = ()
    checkpoints: Sequence[int] | str = "auto"
    threads: int = 1

    def __post_init__(self) -> None:
        if self.limit < 9:
            raise ConfigError(f"sieve limit {self.limit} is below the minimum 9")
        if self.limit > HARD_LIMIT:
            raise CapacityError(f"sieve limit {self.limit} exceeds the 9.0E15 bound")
        if self.segment_size < 1024:
            raise ConfigError(f"segment size {self.segment_size} is below the minimum 1024")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")


@dataclass(frozen=True, eq=False)
class MatchLedger:
    """Per constellation, the ascending start primes of every full match."""

    limit: int
    starts: Mapping[Constellation, np.ndarray]

    def first_start(self, s: Constellation) -> int | None:
        arr = self.starts[s]
        return int(arr[0]) if arr.size else None


@dataclass(frozen=True, eq=False)
class CheckpointTable:
    """Cnt(q, s) for every checkpoint prime q and configured constellation."""

    checkpoints: np.ndarray
    counts: Mapping[Constellation, np.ndarray]

    def cnt(self, q: int, s: Constellation) -> int:
        i = int(np.searchsorted(self.checkpoints, q))
        if i >= self.checkpoints.size or self.checkpoints[i] != q:
            raise ConfigError(f"{q} is not a checkpoint of this table")
        return int(self.counts[s][i])


def _segment_bounds(limit: int, segment_size: int) -> Iterator[tuple[int, int]]:
    span = 2 * segment_size
    low = 3
    while low <= limit:
        yield low, min(low + span, limit + 1)
        low += span


def _sieve_segment(low: int, high: int, base: list[int]) -> np.ndarray:
    """Primes in [low, high) for odd low; base holds odd primes to sqrt(high)."""
    mask = np.ones((high - low + 1) // 2, dtype=bool)
    for p in base:
        start = p * p
        if start >= high:
            break
        if start < low:
            start = low + (-low) % p
            if start % 2 == 0:
                start += p
        mask[(start - low) // 2 :: p] = False
    return low + 2 * np.flatnonzero(mask).astype(np.int64)


def iter_prime_blocks(config: SieveConfig) -> Iterator[np.ndarray]:
    """Ascending primes <= limit, yielded as int64 segment arrays.

    Segments may be sieved ahead by worker threads; the yielded order is
    always the natural one, so consumers see a strictly ordered stream.
    """
    limit = config.limit
    yield np.array([2], dtype=np.int64)
    base = [int(p) for p in simple_sieve(math.isqrt(limit))[1:]]
    bounds = _segment_bounds(limit, config.segment_size)
    if config.threads == 1:
        for low, high in bounds:
            yield _sieve_segment(low, high, base)
        return
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        window: list = []
        exhausted = False
        while True:
            while not exhausted and len(window) < config.threads + 2:
                bound = next(bounds, None)
                if bound is None:
                    exhausted = True
                    break
                window.append(pool.submit(_sieve_segment, *bound, base))
            if not window:
                return
            yield window.pop(0).result()


def stream_primes(config: SieveConfig) -> Iterator[int]:
    """Exactly the primes in [2, limit], ascending, as plain ints."""
    for block in iter_prime_blocks(config):
        yield from block.tolist()


class _StreamMatcher:
    """Rolling multi-pattern matcher over a segmented gap stream.

    Keeps the trailing primes of the previous feed so matches that straddle
    segment boundaries are found exactly once: a match is reported by the
    feed that supplies its final gap.
    """

    def __init__(self, patterns: Sequence[Constellation]):
        if not patterns:
            raise ConfigError("constellation list is empty")
        self.patterns = [np.array(p.gaps, dtype=np.int64) for p in patterns]
        self.maxj = max(p.size for p in self.patterns)
        self.prev = np.empty(0, dtype=np.int64)

    def feed(self, block: np.ndarray) -> list[np.ndarray]:
        """New match starts per pattern contributed by this block."""
        if block.size == 0:
            return [np.empty(0, dtype=np.int64) for _ in self.patterns]
        arr = np.concatenate([self.prev, block])
        gaps = np.diff(arr)
        seam = self.prev.size - 1  # index of the first gap ending in this block
        hits_out = []
        for pat in self.patterns:
            j = pat.size
            n = gaps.size - j + 1
            if n <= 0:
                hits_out.append(np.empty(0, dtype=np.int64))
                continue
            ok = gaps[:n] == pat[0]
            for t in range(1, j):
                ok &= gaps[t : t + n] == pat[t]
            idx = np.flatnonzero(ok)
            idx = idx[idx + j - 1 >= seam]  # not already reported last feed
            hits_out.append(arr[idx])
        self.prev = arr[-(self.maxj + 1) :]
        return hits_out


def match_stream(
    blocks: Iterable[np.ndarray | Sequence[int]],
    constellations: Sequence[Constellation],
    limit: int,
) -> MatchLedger:
    """Single-pass multi-constellation matching over an ordered prime stream."""
    matcher = _StreamMatcher(constellations)
    found: list[list[np.ndarray]] = [[] for _ in constellations]
    for block in blocks:
        hits = matcher.feed(np.asarray(block, dtype=np.int64))
        for acc, h in zip(found, hits):
            if h.size:
                acc.append(h)
    starts = {}
    for s, acc in zip(constellations, found):
        starts[s] = (
            np.concatenate(acc) if acc else np.empty(0, dtype=np.int64)
        )
    return MatchLedger(limit=limit, starts=MappingProxyType(starts))


def match_constellations(config: SieveConfig) -> MatchLedger:
    """Sieve up to the limit and match every configured constellation."""
    return match_stream(iter_prime_blocks(config), config.constellations, config.limit)


def first_occurrence(
    s: Constellation,
    limit: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> int | None:
    """Smallest prime starting a copy of s that completes within the limit."""
    config = SieveConfig(limit=limit, segment_size=segment_size, threads=threads)
    matcher = _StreamMatcher([s])
    for block in iter_prime_blocks(config):
        hits = matcher.feed(block)[0]
        if hits.size:
            return int(hits[0])
    return None


def _ceil_sqrt(x: np.ndarray) -> np.ndarray:
    """Elementwise smallest integer r with r*r >= x (exact within 64 bits)."""
    r = np.sqrt(x.astype(np.float64)).astype(np.int64)
    r = np.where(r * r < x, r + 1, r)
    return np.where((r >= 1) & ((r - 1) * (r - 1) >= x), r - 1, r)


def checkpoints_auto(limit: int) -> np.ndarray:
    """All primes q >= 3 with q^2 <= limit."""
    return simple_sieve(math.isqrt(limit))[1:]


def resolve_checkpoints(config: SieveConfig) -> np.ndarray:
    if isinstance(config.checkpoints, str):
        if config.checkpoints != "auto":
            raise ConfigError(f"unknown checkpoint policy {config.checkpoints!r}")
        return checkpoints_auto(config.limit)
    qs = np.array(sorted(int(q) for q in config.checkpoints), dtype=np.int64)
    if qs.size == 0:
        raise ConfigError("explicit checkpoint list is empty")
    for q in qs.tolist():
        if not is_prime(q):
            raise ConfigError(f"checkpoint {q} is not prime")
        if q * q > config.limit:
            raise ConfigError(f"checkpoint {q} has q^2 > limit {config.limit}")
    return qs


def interval_counts(ledger: MatchLedger, checkpoints: Sequence[int] | np.ndarray) -> CheckpointTable:
    """Cnt(q, s) = matches starting at or after q that end by q^2.

    Each match start m covers the contiguous checkpoint range with
    ceil(sqrt(m + sigma)) <= q <= m, located by two binary searches; a
    difference array over checkpoint indices is then prefix-summed. Memory
    is O(#checkpoints) beyond the ledger itself.
    """
    qs = np.asarray(checkpoints, dtype=np.int64)
    if qs.size == 0:
        raise ConfigError("no checkpoints given")
    if np.any(np.diff(qs) <= 0):
        raise ConfigError("checkpoints must be strictly ascending")
    if int(qs[-1]) ** 2 > ledger.limit:
        raise ConfigError(
            f"checkpoint {int(qs[-1])} has q^2 > sieve limit {ledger.limit}"
        )
    counts = {}
    for s, starts in ledger.starts.items():
        lo = np.searchsorted(qs, _ceil_sqrt(starts + s.sigma), side="left")
        hi = np.searchsorted(qs, starts, side="right") - 1
        valid = lo <= hi
        diff = np.zeros(qs.size + 1, dtype=np.int64)
        np.add.at(diff, lo[valid], 1)
        np.add.at(diff, hi[valid] + 1, -1)
        counts[s] = np.cumsum(diff)[:-1]
    return CheckpointTable(checkpoints=qs, counts=MappingProxyType(counts))


def write_ledger(ledger: MatchLedger, path) -> None:
    """Binary dump: per constellation a GSLD section with little-endian starts."""
    with open(path, "wb") as fh:
        for s, starts in ledger.starts.items():
            text = s.text.encode("utf-8")
            fh.write(_LEDGER_MAGIC)
            fh.write(struct.pack("<BH", _LEDGER_VERSION, len(text)))
            fh.write(text)
            fh.write(struct.pack("<Q", starts.size))
            fh.write(starts.astype("<i8").tobytes())


def _read_exact(fh, n: int, path) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise ConfigError(f"{path}: truncated ledger file")
    return data


def read_ledger(path, limit: int = HARD_LIMIT) -> MatchLedger:
    """Read a ledger dump written by write_ledger."""
    starts: dict[Constellation, np.ndarray] = {}
    with open(path, "rb") as fh:
        while True:
            magic = fh.read(4)
            if not magic:
                break
            if magic != _LEDGER_MAGIC:
                raise ConfigError(f"{path}: bad ledger section magic {magic!r}")
            version, tlen = struct.unpack("<BH", _read_exact(fh, 3, path))
            if version != _LEDGER_VERSION:
                raise ConfigError(f"{path}: unsupported ledger version {version}")
            s = parse(_read_exact(fh, tlen, path).decode("utf-8"))
            (count,) = struct.unpack("<Q", _read_exact(fh, 8, path))
            data = _read_exact(fh, 8 * count, path)
            starts[s] = np.frombuffer(data, dtype="<i8").astype(np.int64)
    return MatchLedger(limit=limit, starts=MappingProxyType(starts))
