"""Pipeline orchestration: recurrence densities vs sieve counts, CSV and SVG.

run_compare drives one full comparison: sieve the interval, count matches
per checkpoint, evolve densities for every estimable constellation, and
join everything into rows of counts, estimates, and signed errors.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from . import __version__
from .constellation import Constellation, parse
from .errors import ConfigError, GapsieveError
from .estimator import (
    EstimateRow,
    HLConstants,
    compute_hl_constants,
    has_hl_form,
    hl_interval_estimate,
    percent_error,
    uniform_estimate,
    HL_FORM_TAG,
)
from .gapcycle import DEFAULT_MAX_STAGE
from .primes import prev_prime
from .recurrence import StageCounts, run_to
from .sieve import SieveConfig, interval_counts, match_constellations, resolve_checkpoints

CSV_HEADER = ["q", "q_squared", "constellation", "count", "est_uniform", "est_hl", "err_uniform", "err_hl"]


@dataclass(frozen=True)
class ComparisonReport:
    metadata: tuple[tuple[str, str], ...]
    rows: tuple[EstimateRow, ...]


def _density_by_stage(s: Constellation, up_to: int, max_stage: int) -> dict[int, StageCounts]:
    """Density snapshots keyed by stage prime, from initialization to up_to."""
    snaps = run_to(s, up_to, "density", max_stage=max_stage)
    return {sc.stage_prime: sc for sc in snaps}


def run_compare(config: SieveConfig, max_stage: int = DEFAULT_MAX_STAGE) -> ComparisonReport:
    """Full estimate-versus-count comparison for one sieve configuration."""
    if not config.constellations:
        raise ConfigError("comparison needs at least one constellation")
    checkpoints = resolve_checkpoints(config)
    ledger = match_constellations(config)
    table = interval_counts(ledger, checkpoints)

    top = int(checkpoints[-1])
    densities: dict[Constellation, dict[int, StageCounts]] = {}
    unavailable: dict[Constellation, str] = {}
    for s in config.constellations:
        try:
            densities[s] = _density_by_stage(s, top, max_stage)
        except GapsieveError as exc:
            unavailable[s] = str(exc)

    constants: HLConstants | None = None
    if any(has_hl_form(s) for s in config.constellations):
        constants = compute_hl_constants()

    rows = []
    for s in sorted(config.constellations, key=lambda c: c.text):
        by_stage = densities.get(s)
        for i, q in enumerate(checkpoints.tolist()):
            cnt = int(table.counts[s][i])
            est_u = None
            if by_stage is not None and q > 2:
                prev = by_stage.get(prev_prime(q))
                if prev is not None:
                    est_u = uniform_estimate(q, prev)
            est_hl = None
            if constants is not None and has_hl_form(s):
                est_hl = hl_interval_estimate(s, q, constants)
            rows.append(
                EstimateRow(
                    q=q,
                    q_squared=q * q,
                    constellation=s,
                    cnt=cnt,
                    est_uniform=est_u,
                    est_hl=est_hl,
                    err_uniform=percent_error(est_u, cnt),
                    err_hl=percent_error(est_hl, cnt),
                )
            )

    meta = [
        ("generated_by", f"gapsieve/{__version__}"),
        ("limit", str(config.limit)),
        ("segment_size", str(config.segment_size)),
        ("constellations", ";".join(s.text for s in sorted(config.constellations, key=lambda c: c.text))),
        ("checkpoint_policy", "auto" if isinstance(config.checkpoints, str) else f"explicit:{len(checkpoints)}"),
        ("hl_form", HL_FORM_TAG),
    ]
    if constants is not None:
        meta.append(("hl_truncation_bound", str(constants.truncation_bound)))
    for s in sorted(unavailable, key=lambda c: c.text):
        first = ledger.first_start(s)
        meta.append((f"estimate_unavailable[{s.text}]", unavailable[s]))
        meta.append((f"first_occurrence[{s.text}]", str(first) if first is not None else "not-found"))
    return ComparisonReport(metadata=tuple(meta), rows=tuple(rows))


def _fmt(x: float | None) -> str:
    return "" if x is None else repr(x)


def render_csv(report: ComparisonReport) -> str:
    """CSV text: '#'-prefixed metadata, the fixed header, then the rows."""
    buf = io.StringIO()
    for key, value in report.metadata:
        buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in report.rows:
        writer.writerow(
            [r.q, r.q_squared, r.constellation.text, r.cnt,
             _fmt(r.est_uniform), _fmt(r.est_hl), _fmt(r.err_uniform), _fmt(r.err_hl)]
        )
    return buf.getvalue()


def emit_csv(report: ComparisonReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_csv(report))


def read_csv(path_or_buf) -> tuple[tuple[tuple[str, str], ...], tuple[EstimateRow, ...]]:
    """Parse an emitted CSV back into metadata and rows (exact round-trip)."""
    if hasattr(path_or_buf, "read"):
        lines = path_or_buf.read().splitlines()
    else:
        with open(path_or_buf, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    meta = []
    body = []
    for line in lines:
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta.append((key, value))
        else:
            body.append(line)
    rows = []
    reader = csv.reader(body)
    header = next(reader)
    if header != CSV_HEADER:
        raise ConfigError(f"unexpected CSV header {header!r}")

    def num(tok: str) -> float | None:
        return None if tok == "" else float(tok)

    for rec in reader:
        if not rec:
            continue
        rows.append(
            EstimateRow(
                q=int(rec[0]),
                q_squared=int(rec[1]),
                constellation=parse(rec[2]),
                cnt=int(rec[3]),
                est_uniform=num(rec[4]),
                est_hl=num(rec[5]),
                err_uniform=num(rec[6]),
                err_hl=num(rec[7]),
            )
        )
    return tuple(meta), tuple(rows)


# --- SVG rendering -----------------------------------------------------------

_SVG_W, _SVG_H = 960, 540
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 170, 30, 50
_PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
]


def _series(report: ComparisonReport) -> list[tuple[str, list[tuple[float, float]]]]:
    out: dict[str, list[tuple[float, float]]] = {}
    for r in report.rows:
        x = math.log10(r.q_squared)
        if r.err_uniform is not None:
            out.setdefault(r.constellation.text, []).append((x, 100.0 * r.err_uniform))
        if r.err_hl is not None:
            out.setdefault(f"{r.constellation.text} HL", []).append((x, 100.0 * r.err_hl))
    return sorted(out.items())


def render_svg(report: ComparisonReport) -> str:
    """Error curves versus log10(q^2); one polyline per series."""
    series = _series(report)
    if not series:
        raise ConfigError("report has no defined error values to plot")
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys + [0.0]), max(ys + [0.0])
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    pad = 0.05 * (y1 - y0) or 1.0
    y0, y1 = y0 - pad, y1 + pad
    plot_w = _SVG_W - _MARGIN_L - _MARGIN_R
    plot_h = _SVG_H - _MARGIN_T - _MARGIN_B

    def px(x: float) -> float:
        return _MARGIN_L + (x - x0) / (x1 - x0) * plot_w

    def py(y: float) -> float:
        return _MARGIN_T + (y1 - y) / (y1 - y0) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333"/>',
    ]
    for i in range(5):
        xv = x0 + i * (x1 - x0) / 4
        yv = y0 + i * (y1 - y0) / 4
        parts.append(
            f'<line x1="{px(xv):.1f}" y1="{_MARGIN_T + plot_h}" x2="{px(xv):.1f}" '
            f'y2="{_MARGIN_T + plot_h + 5}" stroke="#333"/>'
            f'<text x="{px(xv):.1f}" y="{_MARGIN_T + plot_h + 18}" text-anchor="middle">{xv:.2f}</text>'
        )
        parts.append(
            f'<line x1="{_MARGIN_L - 5}" y1="{py(yv):.1f}" x2="{_MARGIN_L}" y2="{py(yv):.1f}" stroke="#333"/>'
            f'<text x="{_MARGIN_L - 8}" y="{py(yv) + 4:.1f}" text-anchor="end">{yv:.1f}</text>'
        )
    if y0 < 0 < y1:
        parts.append(
            f'<line x1="{_MARGIN_L}" y1="{py(0.0):.1f}" x2="{_MARGIN_L + plot_w}" '
            f'y2="{py(0.0):.1f}" stroke="#bbb" stroke-dasharray="4 3"/>'
        )
    parts.append(
        f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{_SVG_H - 12}" '
        f'text-anchor="middle">log10(q^2)</text>'
    )
    parts.append(
        f'<text x="18" y="{_MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {_MARGIN_T + plot_h / 2:.1f})">error (%)</text>'
    )
    for i, (label, pts) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        if len(pts) > 1:
            coords = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in pts)
            parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for x, y in pts:
            parts.append(f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="2" fill="{color}"/>')
        ly = _MARGIN_T + 16 + 16 * i
        lx = _SVG_W - _MARGIN_R + 12
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 24}" y="{ly}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_svg(report: ComparisonReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(report))
