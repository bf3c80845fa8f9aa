"""Command-line interface.

Subcommands: cycle, exact-count, recurrence, sieve-count, first, hl,
compare, diagnose-uniformity. Exit codes: 0 success, 2 config error,
3 capacity error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

from . import __version__
from .constellation import parse as parse_constellation
from .constellation import read_constellation_file
from .errors import ConfigError, GapsieveError
from .estimator import compute_hl_constants, hl_interval_estimate
from .gapcycle import (
    DEFAULT_MAX_STAGE,
    build_cycle,
    dump_cycle,
    positions_of,
    scan_count,
    uniformity_statistic,
)
from .recurrence import DEFAULT_EXACT_STAGE_CAP, run_to
from .report import emit_svg, render_csv, run_compare
from .sieve import (
    DEFAULT_SEGMENT_SIZE,
    SieveConfig,
    first_occurrence,
    interval_counts,
    match_constellations,
    resolve_checkpoints,
    write_ledger,
)


def _parse_constellation_arg(value: str):
    """A single constellation from a CLI argument."""
    return parse_constellation(value)


def _load_constellations(value: str):
    """File path, or an inline list separated by ';' (gap commas stay inside)."""
    if os.path.exists(value):
        out = read_constellation_file(value)
    else:
        out = [parse_constellation(tok) for tok in value.split(";") if tok.strip()]
    if not out:
        raise ConfigError(f"no constellations in {value!r}")
    return tuple(out)


def _load_checkpoints(value: str):
    if value == "auto":
        return "auto"
    qs = []
    with open(value, "r", encoding="utf-8") as fh:
        for line in fh:
            body = line.split("#", 1)[0].strip()
            if body:
                qs.append(int(body))
    if not qs:
        raise ConfigError(f"no checkpoints in {value!r}")
    return tuple(qs)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(rows: list[list], header: list[str], fmt: str) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="," if fmt == "csv" else "\t", lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gapsieve",
        description="Gap cycles of Eratosthenes sieve stages, constellation counts, and estimates.",
    )
    ap.add_argument("--version", action="version", version=f"gapsieve {__version__}")
    ap.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    ap.add_argument("--format", choices=("tsv", "csv"), default="tsv", help="table format (default tsv)")
    ap.add_argument("--threads", type=int, default=1, help="sieve worker threads (default 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cycle", help="dump the cycle of gaps for a stage")
    p.add_argument("-p", "--prime", type=int, required=True, help="stage prime")
    p.add_argument("--max-stage", type=int, default=DEFAULT_MAX_STAGE)

    p = sub.add_parser("exact-count", help="scan a stage cycle for constellation copies")
    p.add_argument("-p", "--prime", type=int, required=True)
    p.add_argument("-s", "--constellation", action="append", default=[], metavar="S")
    p.add_argument("--constellations", metavar="FILE|LIST", help="file path or ';'-separated list")
    p.add_argument("--max-stage", type=int, default=DEFAULT_MAX_STAGE)

    p = sub.add_parser("recurrence", help="evolve exact counts or densities across stages")
    p.add_argument("-s", "--constellation", required=True, metavar="S")
    p.add_argument("--to", type=int, required=True, metavar="Q", help="final stage prime")
    p.add_argument("--mode", choices=("exact", "density"), default="exact")
    p.add_argument("--init-prime", type=int, default=None)
    p.add_argument("--all-nodes", action="store_true", help="emit every closure node")
    p.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_STAGE_CAP)
    p.add_argument("--max-stage", type=int, default=DEFAULT_MAX_STAGE)

    p = sub.add_parser("sieve-count", help="sieve, match constellations, count per checkpoint")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--constellations", required=True, metavar="FILE|LIST")
    p.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_SIZE)
    p.add_argument("--checkpoints", default="auto", metavar="auto|FILE")
    p.add_argument("--ledger-out", metavar="PATH", help="dump the binary match ledger here")

    p = sub.add_parser("first", help="first occurrence of a constellation among primes")
    p.add_argument("-s", "--constellation", required=True, metavar="S")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_SIZE)

    p = sub.add_parser("hl", help="Hardy-Littlewood constants (and optional interval estimate)")
    p.add_argument("--bound", type=int, default=10**6, help="Euler product truncation bound")
    p.add_argument("--estimate", metavar="S", help="also estimate this constellation over [q,q^2]")
    p.add_argument("--q", type=int, default=None, help="checkpoint prime for --estimate")

    p = sub.add_parser("compare", help="full estimate-versus-count comparison, CSV output")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--constellations", required=True, metavar="FILE|LIST")
    p.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_SIZE)
    p.add_argument("--checkpoints", default="auto", metavar="auto|FILE")
    p.add_argument("--svg", metavar="PATH", help="also render the error curves here")
    p.add_argument("--max-stage", type=int, default=DEFAULT_MAX_STAGE)

    p = sub.add_parser("diagnose-uniformity", help="chi-squared of copy positions in a cycle")
    p.add_argument("-p", "--prime", type=int, required=True)
    p.add_argument("-s", "--constellation", required=True, metavar="S")
    p.add_argument("--bins", type=int, default=16)
    p.add_argument("--max-stage", type=int, default=DEFAULT_MAX_STAGE)

    return ap


def _gather(args) -> tuple:
    out = [parse_constellation(t) for t in args.constellation]
    if getattr(args, "constellations", None):
        out.extend(_load_constellations(args.constellations))
    if not out:
        raise ConfigError("no constellations given (use -s or --constellations)")
    return tuple(out)


def _cmd_cycle(args) -> str:
    return dump_cycle(build_cycle(args.prime, max_stage=args.max_stage))


def _cmd_exact_count(args) -> str:
    cyc = build_cycle(args.prime, max_stage=args.max_stage)
    rows = [[cyc.stage_prime, s.text, scan_count(cyc, s)] for s in _gather(args)]
    return _table(rows, ["p", "constellation", "count"], args.format)


def _cmd_recurrence(args) -> str:
    s = parse_constellation(args.constellation)
    snaps = run_to(
        s,
        args.to,
        args.mode,
        init_prime=args.init_prime,
        max_stage=args.max_stage,
        exact_cap=args.exact_cap,
    )
    rows = []
    for sc in snaps:
        nodes = sc.graph.nodes if args.all_nodes else (sc.graph.root,)
        for node in nodes:
            v = sc.values[node]
            rows.append([sc.stage_prime, node.text, v if sc.mode == "exact" else repr(v)])
    return _table(rows, ["stage_prime", "node", "count_or_density"], args.format)


def _sieve_config(args) -> SieveConfig:
    return SieveConfig(
        limit=args.limit,
        segment_size=args.segment_size,
        constellations=_load_constellations(args.constellations),
        checkpoints=_load_checkpoints(args.checkpoints),
        threads=args.threads,
    )


def _cmd_sieve_count(args) -> str:
    config = _sieve_config(args)
    ledger = match_constellations(config)
    if args.ledger_out:
        write_ledger(ledger, args.ledger_out)
    table = interval_counts(ledger, resolve_checkpoints(config))
    rows = []
    for s in config.constellations:
        counts = table.counts[s]
        for i, q in enumerate(table.checkpoints.tolist()):
            rows.append([q, q * q, s.text, int(counts[i])])
    return _table(rows, ["q", "q_squared", "constellation", "count"], args.format)


def _cmd_first(args) -> str:
    s = parse_constellation(args.constellation)
    hit = first_occurrence(s, args.limit, segment_size=args.segment_size, threads=args.threads)
    return _table(
        [[s.text, hit if hit is not None else "not-found", args.limit]],
        ["constellation", "first_start", "limit"],
        args.format,
    )


def _cmd_hl(args) -> str:
    constants = compute_hl_constants(args.bound)
    rows = [
        ["c2", repr(constants.c2), constants.truncation_bound],
        ["c4", repr(constants.c4), constants.truncation_bound],
    ]
    if args.estimate:
        if args.q is None:
            raise ConfigError("--estimate needs --q")
        s = parse_constellation(args.estimate)
        rows.append([f"est[{s.text},q={args.q}]", repr(hl_interval_estimate(s, args.q, constants)), constants.truncation_bound])
    return _table(rows, ["name", "value", "truncation_bound"], args.format)


def _cmd_compare(args) -> str:
    config = _sieve_config(args)
    report = run_compare(config, max_stage=args.max_stage)
    if args.svg:
        emit_svg(report, args.svg)
    return render_csv(report)


def _cmd_diagnose(args) -> str:
    cyc = build_cycle(args.prime, max_stage=args.max_stage)
    s = parse_constellation(args.constellation)
    stat = uniformity_statistic(positions_of(cyc, s), cyc.primorial, args.bins)
    return _table(
        [[args.prime, s.text, args.bins, repr(stat.statistic), stat.dof]],
        ["p", "constellation", "bins", "chi_squared", "dof"],
        args.format,
    )


_COMMANDS = {
    "cycle": _cmd_cycle,
    "exact-count": _cmd_exact_count,
    "recurrence": _cmd_recurrence,
    "sieve-count": _cmd_sieve_count,
    "first": _cmd_first,
    "hl": _cmd_hl,
    "compare": _cmd_compare,
    "diagnose-uniformity": _cmd_diagnose,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = _COMMANDS[args.command](args)
        _emit(text, args.out)
    except GapsieveError as exc:
        print(f"gapsieve: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"gapsieve: i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
