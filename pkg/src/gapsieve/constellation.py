"""Constellations of prime gaps: parsing, driving terms, and their closure.

A constellation is a finite sequence of even gaps. A driving term of a
constellation s is any longer constellation that collapses to s when one
adjacent pair of its gaps is added together; iterating driving terms yields
a finite closure because all members share the gap sum and lengths are
bounded by half of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .errors import CapacityError, ParseError

DEFAULT_MAX_CLOSURE_SIGMA = 40


@dataclass(frozen=True, order=True)
class Constellation:
    """An ordered sequence of even gaps >= 2."""

    gaps: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.gaps) == 0:
            raise ValueError("a constellation needs at least one gap")
        for a in self.gaps:
            if not isinstance(a, int) or a < 2 or a % 2:
                raise ValueError(f"gap {a!r} is not an even integer >= 2")

    def __len__(self) -> int:
        return len(self.gaps)

    def __iter__(self):
        return iter(self.gaps)

    @property
    def sigma(self) -> int:
        """Sum of the gaps: the span between the first and last element."""
        return sum(self.gaps)

    @property
    def text(self) -> str:
        """Canonical display form: compact digits when unambiguous."""
        if all(a < 10 for a in self.gaps):
            return "".join(str(a) for a in self.gaps)
        return ",".join(str(a) for a in self.gaps)

    def reverse(self) -> "Constellation":
        return Constellation(self.gaps[::-1])

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"Constellation({self.text!r})"


def parse(text: str) -> Constellation:
    """Parse constellation text.

    Two forms are accepted and parse identically: comma-separated decimal
    gaps ("2,10,2"), and compact digit strings ("242") where every character
    is one single-digit gap. A comma-free multi-digit string whose digits do
    not all form valid gaps is read as one decimal gap ("10" is the gap 10,
    while "24" is the two gaps 2,4).
    """
    text = text.strip()
    if not text:
        raise ParseError("empty constellation text")
    if "," in text:
        gaps = []
        for tok in text.split(","):
            tok = tok.strip()
            gaps.append(_parse_gap(tok))
        return Constellation(tuple(gaps))
    if not text.isdigit():
        raise ParseError(f"malformed constellation text {text!r}")
    digits = [int(ch) for ch in text]
    if all(d >= 2 and d % 2 == 0 for d in digits):
        return Constellation(tuple(digits))
    if len(text) > 1:
        return Constellation((_parse_gap(text),))
    raise ParseError(f"gap {text!r} is odd or below 2")


def _parse_gap(tok: str) -> int:
    if not tok or not tok.isdigit():
        raise ParseError(f"malformed gap token {tok!r}")
    a = int(tok)
    if a < 2:
        raise ParseError(f"gap {tok!r} is below 2")
    if a % 2:
        raise ParseError(f"gap {tok!r} is odd")
    return a


def read_constellation_file(path) -> list[Constellation]:
    """Read a list file: one constellation per line, '#' comments allowed."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            try:
                out.append(parse(body))
            except ParseError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    return out


def sigma(s: Constellation) -> int:
    return s.sigma


def length(s: Constellation) -> int:
    return len(s)


def reverse(s: Constellation) -> Constellation:
    return s.reverse()


def _splits(s: Constellation):
    """One constellation per (position, even part) split of a gap of s."""
    g = s.gaps
    for i, a in enumerate(g):
        for b in range(2, a - 1, 2):
            yield Constellation(g[:i] + (b, a - b) + g[i + 1 :])


def preimages(s: Constellation) -> set[Constellation]:
    """All constellations that yield s upon one adjacent-gap addition.

    Each member splits exactly one gap a_i into an even pair (b, a_i - b),
    so it is one gap longer than s and has the same gap sum.
    """
    return set(_splits(s))


@dataclass(frozen=True)
class ClosureGraph:
    """Transitive driving-term DAG of a constellation.

    Nodes are the root plus every iterated driving term; an edge s̄ -> t
    (stored on t as an in-edge) carries the number of distinct adjacent
    additions in s̄ that produce t.
    """

    root: Constellation
    nodes: tuple[Constellation, ...]
    in_edges: Mapping[Constellation, tuple[tuple[Constellation, int], ...]] = field(repr=False)

    @property
    def sigma(self) -> int:
        return self.root.sigma

    @property
    def max_length(self) -> int:
        return max(len(n) for n in self.nodes)

    def drivers_of(self, node: Constellation) -> tuple[tuple[Constellation, int], ...]:
        return self.in_edges[node]


def closure(s: Constellation, max_sigma: int = DEFAULT_MAX_CLOSURE_SIGMA) -> ClosureGraph:
    """Transitive closure of driving terms, as a deduplicated DAG.

    Finite because every node shares the root's gap sum and node length is
    bounded by sigma/2 (the all-2s refinement).
    """
    if s.sigma > max_sigma:
        estimate = 2 ** (s.sigma // 2 - 1)
        raise CapacityError(
            f"gap sum {s.sigma} exceeds the closure budget {max_sigma}; "
            f"up to {estimate:,} driving terms would be enumerated"
        )
    seen = {s}
    frontier = [s]
    edges: dict[Constellation, tuple[tuple[Constellation, int], ...]] = {}
    while frontier:
        node = frontier.pop()
        # One entry per distinct addition in the driving term; kept as an
        # explicit multiplicity even though distinct splits can be shown to
        # never collide.
        mult: dict[Constellation, int] = {}
        for p in _splits(node):
            mult[p] = mult.get(p, 0) + 1
        edges[node] = tuple((p, mult[p]) for p in sorted(mult))
        for p in mult:
            if p not in seen:
                seen.add(p)
                frontier.append(p)
    nodes = tuple(sorted(seen, key=lambda c: (len(c), c.gaps)))
    return ClosureGraph(root=s, nodes=nodes, in_edges=MappingProxyType(edges))
