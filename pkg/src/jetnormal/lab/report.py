"""Comma-separated and plain-text renderings of lab results."""
from __future__ import annotations

import csv
import io

from ..io import format_float


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format_float(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def convergence_csv(report, order_n) -> str:
    rows = [
        (report.quantity, order_n, float(h), float(e), report.slope, report.slope_expected)
        for h, e in zip(report.h_values, report.errors)
    ]
    return _csv(["quantity", "order", "h", "error", "slope", "slope_expected"], rows)


def convergence_text(report, order_n) -> str:
    lines = [f"{report.quantity}, order {order_n}", f"{'h':>10} {'error':>14}"]
    lines += [f"{h:>10.4g} {e:>14.6e}" for h, e in zip(report.h_values, report.errors)]
    lines.append(f"log-log slope {report.slope:.4f} (expected {report.slope_expected:g})")
    return "\n".join(lines)


BENCH_HEADER = [
    "surface", "h", "n_points", "noise", "density", "tilt_deg", "pipeline",
    "count", "failures", "rmse_deg", "pgp5", "pgp10", "auc",
]


def bench_csv(rows) -> str:
    out = []
    for r in rows:
        s, m = r.spec, r.metrics
        out.append((
            r.surface, float(s.h), s.n_points, float(s.noise_sigma_rel), s.density, float(s.tilt_deg),
            r.pipeline, m.count, r.failures, float(m.rmse_deg),
            float(m.pgp.get(5.0, float("nan"))), float(m.pgp.get(10.0, float("nan"))), float(m.auc),
        ))
    return _csv(BENCH_HEADER, out)


def bench_text(rows) -> str:
    lines = [f"{'surface':<12}{'h':>6}{'noise':>8}{'density':>10}{'tilt':>6}  {'pipeline':<22}{'rmse':>9}{'pgp5':>7}{'pgp10':>7}{'auc':>7}{'fail':>5}"]
    for r in rows:
        s, m = r.spec, r.metrics
        lines.append(
            f"{r.surface:<12}{s.h:>6.3g}{s.noise_sigma_rel:>8.4g}{s.density:>10}{s.tilt_deg:>6.3g}  "
            f"{r.pipeline:<22}{m.rmse_deg:>9.4f}{m.pgp.get(5.0, float('nan')):>7.3f}"
            f"{m.pgp.get(10.0, float('nan')):>7.3f}{m.auc:>7.3f}{r.failures:>5d}"
        )
    return "\n".join(lines)


def profile_csv(rows) -> str:
    return _csv(
        ["lo_deg", "hi_deg", "mean_unaligned", "mean_aligned", "count", "failures"],
        [(r.lo_deg, r.hi_deg, r.mean_unaligned, r.mean_aligned, r.count, r.failures) for r in rows],
    )


def profile_text(rows) -> str:
    lines = [f"{'bin':>10} {'unaligned':>11} {'aligned':>11} {'n':>5}"]
    for r in rows:
        flag = "  (empty)" if r.empty else ""
        lines.append(f"{r.lo_deg:>4.0f}-{r.hi_deg:<4.0f}  {r.mean_unaligned:>11.4f} {r.mean_aligned:>11.4f} {r.count:>5d}{flag}")
    return "\n".join(lines)
