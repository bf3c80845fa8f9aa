"""Estimates of constellation counts in [q, q^2] and their errors.

Two estimate families: the uniformity-based form (q^2 - q) * N/p# taken at
the stage just below q, and the classical Hardy-Littlewood asymptotics for
the single gap 2 and the quadruplet 242, with their constants computed as
truncated Euler products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constellation import Constellation
from .errors import ConfigError
from .primes import next_prime, simple_sieve
from .recurrence import StageCounts

DEFAULT_HL_TRUNCATION = 10**6

# Asymptotic interval forms F(N) = coeff * N / (ln N)^power, differenced
# over [q, q^2]; the bare forms, not their logarithmic-integral refinements.
HL_FORM_TAG = "coeff*N/(ln N)^m differenced over [q,q^2]"


@dataclass(frozen=True)
class HLConstants:
    """Truncated Euler products for the twin and quadruplet constants."""

    c2: float
    c4: float
    truncation_bound: int
    tail_tolerance: float


def compute_hl_constants(truncation_bound: int = DEFAULT_HL_TRUNCATION) -> HLConstants:
    """Euler products over primes up to the bound.

    c2 multiplies p(p-2)/(p-1)^2 over odd primes; c4 multiplies
    q^3(q-4)/(q-1)^4 over primes >= 5. Both decrease monotonically in the
    bound; the reported tail tolerance bounds the remaining relative error.
    Bounds below 1000 are accepted (partial products) but make no accuracy
    claim.
    """
    if truncation_bound < 3:
        raise ConfigError(f"truncation bound {truncation_bound} is below 3")
    ps = simple_sieve(truncation_bound).astype(np.float64)
    odd = ps[ps >= 3]
    c2 = float(np.prod(odd * (odd - 2) / (odd - 1) ** 2))
    quad = ps[ps >= 5]
    c4 = float(np.prod(quad**3 * (quad - 4) / (quad - 1) ** 4))
    # Leading tail factor is 1 - O(6/q^2); summed over primes past the bound.
    tail = 6.0 / (truncation_bound * math.log(truncation_bound))
    return HLConstants(c2=c2, c4=c4, truncation_bound=truncation_bound, tail_tolerance=tail)


_HL_FORMS: dict[tuple[int, ...], tuple[str, float, int]] = {
    (2,): ("c2", 2.0, 2),
    (2, 4, 2): ("c4", 13.5, 4),
}


def has_hl_form(s: Constellation) -> bool:
    return s.gaps in _HL_FORMS


def hl_interval_estimate(s: Constellation, q: int, constants: HLConstants) -> float:
    """F(q^2) - F(q) under the configured asymptotic form for s."""
    if q < 3:
        raise ConfigError(f"checkpoint {q} is below 3")
    form = _HL_FORMS.get(s.gaps)
    if form is None:
        raise ConfigError(f"no HL form configured for {s.text}")
    which, coeff, power = form
    c = constants.c2 if which == "c2" else constants.c4

    def f(n: float) -> float:
        return coeff * c * n / math.log(n) ** power

    return f(float(q) * q) - f(float(q))


def uniform_estimate(stage: int, prev: StageCounts) -> float:
    """Expected copies of the root constellation in [stage, stage^2].

    Uses the density at the stage immediately below: (q^2 - q) * N/p#.
    """
    if prev.mode != "density":
        raise ConfigError("uniform_estimate needs a density-mode snapshot")
    if next_prime(prev.stage_prime) != stage:
        raise ConfigError(
            f"stage {stage} does not follow snapshot stage {prev.stage_prime}; "
            "is it below the initialization stage?"
        )
    return (stage * stage - stage) * float(prev.root_value())


def percent_error(est: float | None, cnt: int) -> float | None:
    """Signed relative error (est - cnt)/cnt; None when undefined."""
    if est is None or cnt == 0:
        return None
    if cnt < 0:
        raise ValueError("counts cannot be negative")
    return (est - cnt) / cnt


@dataclass(frozen=True)
class EstimateRow:
    """One (checkpoint, constellation) comparison row."""

    q: int
    q_squared: int
    constellation: Constellation
    cnt: int
    est_uniform: float | None
    est_hl: float | None
    err_uniform: float | None
    err_hl: float | None
