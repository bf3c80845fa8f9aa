"""Gap cycles of Eratosthenes sieve stages, constellation counts, and estimates."""

__version__ = "0.1.0"

from .constellation import (
    ClosureGraph,
    Constellation,
    closure,
    parse,
    preimages,
    read_constellation_file,
)
from .errors import CapacityError, ConfigError, GapsieveError, ParseError
from .gapcycle import (
    DEFAULT_MAX_STAGE,
    GapCycle,
    Position,
    build_cycle,
    dump_cycle,
    next_prime_of,
    positions_of,
    scan_count,
    step_recursion,
    uniformity_statistic,
)
from .recurrence import StageCounts, advance, init_counts, run_to, to_density
from .sieve import (
    CheckpointTable,
    MatchLedger,
    SieveConfig,
    first_occurrence,
    interval_counts,
    match_constellations,
    match_stream,
    stream_primes,
)
from .estimator import (
    EstimateRow,
    HLConstants,
    compute_hl_constants,
    hl_interval_estimate,
    percent_error,
    uniform_estimate,
)
from .report import ComparisonReport, emit_csv, emit_svg, run_compare

__all__ = [
    "CapacityError",
    "CheckpointTable",
    "ClosureGraph",
    "ComparisonReport",
    "ConfigError",
    "Constellation",
    "DEFAULT_MAX_STAGE",
    "EstimateRow",
    "GapCycle",
    "GapsieveError",
    "HLConstants",
    "MatchLedger",
    "ParseError",
    "Position",
    "SieveConfig",
    "StageCounts",
    "advance",
    "build_cycle",
    "closure",
    "compute_hl_constants",
    "dump_cycle",
    "emit_csv",
    "emit_svg",
    "first_occurrence",
    "hl_interval_estimate",
    "init_counts",
    "interval_counts",
    "match_constellations",
    "match_stream",
    "next_prime_of",
    "parse",
    "percent_error",
    "positions_of",
    "preimages",
    "read_constellation_file",
    "run_compare",
    "run_to",
    "scan_count",
    "step_recursion",
    "stream_primes",
    "to_density",
    "uniform_estimate",
    "uniformity_statistic",
]
