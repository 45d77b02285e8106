"""CSV / JSON serialization and run manifests.

Floats are written with 17 significant digits, which round-trips any
IEEE double exactly, so a parsed CSV gives back the same CurvePoints.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable

from . import __version__
from .baselines import BaselineKind
from .experiment import CurvePoint, ThresholdReport

CURVE_COLUMNS = ("n_bar", "p_err", "ci_low", "ci_high", "errors", "trials")


def fmt(x: float) -> str:
    return f"{x:.17g}"


def curve_csv(points: Iterable[CurvePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_COLUMNS)
    for p in points:
        w.writerow([fmt(p.n_bar), fmt(p.p_hat), fmt(p.ci_low), fmt(p.ci_high), p.errors, p.trials])
    return buf.getvalue()


def parse_curve_csv(text: str) -> list[CurvePoint]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CURVE_COLUMNS:
        raise ValueError(f"expected header {','.join(CURVE_COLUMNS)}")
    return [
        CurvePoint(float(r[0]), float(r[1]), float(r[2]), float(r[3]), int(r[4]), int(r[5]))
        for r in rows[1:]
    ]


def table_csv(columns: Iterable[str], rows: Iterable[Iterable[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(columns))
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def write_text(path: str | Path, text: str) -> None:
    """Write ``text``; OSError (unwritable path) propagates to the caller."""
    with open(path, "w", newline="") as fh:
        fh.write(text)


def emit_curve_csv(points: Iterable[CurvePoint], path: str | Path) -> None:
    write_text(path, curve_csv(points))


# -- manifests ----------------------------------------------------------------


def config_hash(values: dict[str, Any]) -> str:
    """sha256 of the canonical JSON of the resolved configuration."""
    blob = json.dumps(values, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def make_manifest(values: dict[str, Any], started: datetime, finished: datetime | None = None) -> dict[str, Any]:
    return {
        "tool": "qreading",
        "version": __version__,
        "seed": values["seed"],
        "config": dict(sorted(values.items())),
        "config_sha256": config_hash(values),
        "started": started.astimezone(timezone.utc).isoformat(),
        "finished": None if finished is None else finished.astimezone(timezone.utc).isoformat(),
    }


def manifest_json(manifest: dict[str, Any]) -> str:
    return json.dumps(manifest, indent=2, sort_keys=True) + "\n"


def load_manifest(path: str | Path) -> dict[str, Any]:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or not isinstance(data.get("config"), dict):
        raise ValueError(f"{path}: not a run manifest (no 'config' object)")
    return data


# -- threshold reports ----------------------------------------------------------


def _num(x: float | None) -> float | None:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return float(fmt(x))


def threshold_document(
    report: ThresholdReport,
    curve: list[CurvePoint],
    baseline_at: dict[float, float],
    *,
    metric: str,
    manifest_hash: str,
) -> dict[str, Any]:
    """JSON-ready threshold report.

    ``baseline_at`` maps the grid values to the closed-form baseline, used
    to list the bracketing points with both curves side by side.
    """
    bracket_points = []
    if report.bracket is not None:
        lo, hi = report.bracket
        for p in curve:
            if lo <= p.n_bar <= hi:
                bracket_points.append(
                    {"n_bar": _num(p.n_bar), "p_err": _num(p.p_hat), "errors": p.errors,
                     "trials": p.trials, "baseline": _num(baseline_at[p.n_bar])}
                )
    doc: dict[str, Any] = {
        "baseline": BaselineKind(report.baseline).value,
        "metric": metric,
        "threshold": _num(report.threshold_n_bar),
        "bracket": None if report.bracket is None else [_num(report.bracket[0]), _num(report.bracket[1])],
        "bracket_points": bracket_points,
        "left_censored": report.left_censored,
        "low_resolution": report.low_resolution,
        "method": report.method,
        "manifest_sha256": manifest_hash,
    }
    if report.threshold_n_bar is None:
        doc["reason"] = report.reason
    elif report.reason:
        doc["note"] = report.reason
    return doc


def threshold_json(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def now() -> datetime:
    return datetime.now(timezone.utc)
