"""``qread`` command line: baseline, cell-error, codec-test, curve, threshold.

Exit codes: 0 success, 1 validation error (bad flags, bad configuration,
failed codec check), 2 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from itertools import combinations
from typing import Any, Sequence

import numpy as np

from . import __version__
from . import io as qio
from .baselines import PcExponent, baseline_error, optimal_coherent_error, optimal_squeezed_error
from .codes import CodeError, DecodeFailure, Family, build_code, decode_bits, encode_bits, rs_decode, rs_encode
from .config import KEYS, ConfigError, RunConfig, build, parse_config, resolve
from .experiment import ExperimentConfig, run_curve, threshold_find
from .photonics import (
    ClickModel,
    DolinarConfig,
    GuessPolicy,
    HeterodyneConfig,
    MemoryCellPair,
    dolinar_bit_error_analytic,
    heterodyne_bit_error_analytic,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as validation errors (exit 1)."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid {text!r} must look like start:stop:points")
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid {text!r} must look like start:stop:points") from None
    if points < 1 or start < 0 or (points > 1 and stop <= start) or not (math.isfinite(start) and math.isfinite(stop)):
        raise UsageError(f"grid {text!r}: need 0 <= start < stop and points >= 1")
    return start, stop, points


def _grid_values(text: str) -> list[float]:
    start, stop, points = parse_grid(text)
    return [float(x) for x in np.linspace(start, stop, points)]


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        qio.write_text(out, text)


# -- experiment-style commands --------------------------------------------------

# flag -> config key
_FLAG_KEYS = {
    "family": "code.family",
    "n": "code.n",
    "k": "code.k",
    "delta": "code.delta",
    "r": "code.r",
    "m": "code.m",
    "b": "code.b",
    "kappa0": "cells.kappa0",
    "kappa1": "cells.kappa1",
    "p0": "cells.p0",
    "receiver": "receiver.kind",
    "efficiency": "receiver.efficiency",
    "rounds": "receiver.rounds",
    "initial_guess": "receiver.initial_guess",
    "click_model": "receiver.click_model",
    "trials": "trials",
    "seed": "seed",
    "metric": "metric",
    "baseline": "baseline",
    "pc_exponent": "baseline.pc_exponent",
    "min_errors": "adaptive.min_errors",
    "max_trials": "adaptive.max_trials",
    "max_bracket": "threshold.max_bracket",
}


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", help="flat key=value configuration file")
    src.add_argument("--manifest", help="replay the configuration stored in a run manifest")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override any config key")
    for flag in _FLAG_KEYS:
        p.add_argument("--" + flag.replace("_", "-"), dest=flag, default=None, help=f"sets {_FLAG_KEYS[flag]}")
    p.add_argument("--grid", help="start:stop:points (sets grid.start/stop/points)")
    p.add_argument("--energy-per-info-bit", action="store_true", default=None,
                   help="read the grid as photons per information bit")
    p.add_argument("--workers", type=int, default=1, help="worker processes (does not change results)")
    p.add_argument("--out", help="curve CSV path (default: stdout)")
    p.add_argument("--manifest-out", help="write the resolved run manifest here")


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    over: dict[str, Any] = {}
    for flag, key in _FLAG_KEYS.items():
        v = getattr(args, flag)
        if v is not None:
            over[key] = v
    if args.grid is not None:
        start, stop, points = parse_grid(args.grid)
        over.update({"grid.start": repr(start), "grid.stop": repr(stop), "grid.points": str(points)})
    if args.energy_per_info_bit:
        over["energy_per_info_bit"] = "true"
    for item in args.set:
        if "=" not in item:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
        over[key] = value
    return over


def _load_run(args: argparse.Namespace) -> RunConfig:
    over = _overrides(args)
    if args.manifest is not None:
        stored = qio.load_manifest(args.manifest)["config"]
        raw = {k: (None if v is None else str(v)) for k, v in stored.items()}
        raw.update(over)
        # an explicit --seed beats QREAD_SEED, as for config files
        return build(resolve(raw, {} if "seed" in over else None))
    return parse_config(args.config, over)


def _run_curve(args: argparse.Namespace) -> tuple[RunConfig, list, str, Any]:
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    run = _load_run(args)
    started = qio.now()
    curve = run_curve(run.experiment, workers=args.workers)
    manifest = qio.make_manifest(run.values, started, qio.now())
    if args.manifest_out:
        qio.write_text(args.manifest_out, qio.manifest_json(manifest))
    return run, curve, qio.curve_csv(curve), manifest


def cmd_curve(args: argparse.Namespace) -> int:
    _, _, text, _ = _run_curve(args)
    _emit(text, args.out)
    return EXIT_OK


def cmd_threshold(args: argparse.Namespace) -> int:
    run, curve, text, manifest = _run_curve(args)
    if args.out:
        qio.write_text(args.out, text)
    report = threshold_find(
        curve, run.experiment.cells, run.baseline, max_bracket=run.max_bracket, exponent=run.pc_exponent
    )
    baseline_at = {
        p.n_bar: baseline_error(run.baseline, run.experiment.cells, p.n_bar, run.pc_exponent) for p in curve
    }
    doc = qio.threshold_document(
        report, curve, baseline_at, metric=run.experiment.metric.value, manifest_hash=manifest["config_sha256"]
    )
    _emit(qio.threshold_json(doc), args.json_out)
    return EXIT_OK


# -- baseline / cell-error --------------------------------------------------------


def _cells(args: argparse.Namespace) -> MemoryCellPair:
    for name in ("kappa0", "kappa1", "p0"):
        v = getattr(args, name)
        if not 0.0 <= v <= 1.0:
            raise ConfigError(f"cells.{name}", f"{v} outside [0, 1]")
    return MemoryCellPair(args.kappa0, args.kappa1, args.p0, 1.0 - args.p0)


def _add_cell_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kappa0", type=float, default=0.1)
    p.add_argument("--kappa1", type=float, default=0.95)
    p.add_argument("--p0", type=float, default=0.5, help="prior of bit 0")
    p.add_argument("--grid", required=True, help="start:stop:points")
    p.add_argument("--out", help="CSV path (default: stdout)")


def cmd_baseline(args: argparse.Namespace) -> int:
    cells = _cells(args)
    rows = []
    for x in _grid_values(args.grid):
        pc = optimal_coherent_error(cells, x, args.pc_exponent)
        ps = optimal_squeezed_error(cells, x)
        rows.append((x, pc, ps, ps if math.isnan(pc) else min(pc, ps)))
    _emit(qio.table_csv(("n_bar", "p_coherent", "p_squeezed", "p_min"), rows), args.out)
    return EXIT_OK


def cmd_cell_error(args: argparse.Namespace) -> int:
    cells = _cells(args)
    if args.receiver == "heterodyne":
        rx: HeterodyneConfig | DolinarConfig = HeterodyneConfig()
    else:
        if not 0.0 <= args.efficiency <= 1.0:
            raise ConfigError("receiver.efficiency", f"{args.efficiency} outside [0, 1]")
        rx = DolinarConfig.from_efficiency(
            args.efficiency, args.rounds, initial_guess=args.initial_guess, click_model=args.click_model
        )
    grid = _grid_values(args.grid)
    if args.trials < 1:
        raise ConfigError("trials", "must be >= 1")
    identity = build_code("bch", n=1, delta=1)
    cfg = ExperimentConfig(identity, rx, cells, tuple(grid), args.trials, seed=args.seed)
    curve = run_curve(cfg, workers=args.workers)
    rows = []
    for p in curve:
        exact = (
            heterodyne_bit_error_analytic(cells, p.n_bar)
            if isinstance(rx, HeterodyneConfig)
            else dolinar_bit_error_analytic(cells, p.n_bar, rx)
        )
        rows.append((p.n_bar, float(exact), p.p_hat, p.ci_low, p.ci_high, p.errors, p.trials))
    cols = ("n_bar", "analytic", "p_mc", "ci_low", "ci_high", "errors", "trials")
    _emit(qio.table_csv(cols, rows), args.out)
    return EXIT_OK


# -- codec-test -----------------------------------------------------------------------


def _codec_from_args(args: argparse.Namespace):
    n = args.n
    if args.family == "bch" and n is None:
        n = 15
    if args.family == "rs" and n is None:
        n = 255
    try:
        return build_code(args.family, n=n, k=args.k, delta=args.delta, r=args.r, m=args.m, b=args.b)
    except CodeError as exc:
        raise ConfigError("code", str(exc)) from None


def _corrects(spec, info, word, positions, rng) -> bool:
    """Corrupt ``word`` at ``positions`` and check that decoding recovers ``info``."""
    bad = word.copy()
    if spec.family is Family.RS:
        bad[positions] ^= rng.integers(1, spec.field.q, len(positions))
        try:
            return bool(np.array_equal(rs_decode(spec, bad), info))
        except DecodeFailure:
            return False
    bad[positions] ^= 1
    try:
        return bool(np.array_equal(decode_bits(spec, bad), info))
    except DecodeFailure:
        return False


def cmd_codec_test(args: argparse.Namespace) -> int:
    spec = _codec_from_args(args)
    rng = np.random.default_rng(args.seed)
    if spec.family is Family.RS:
        info = rng.integers(0, spec.field.q, spec.k)
        word = rs_encode(spec, info)
        unit = "symbol "
    else:
        info = rng.integers(0, 2, spec.K).astype(np.uint8)
        word = encode_bits(spec, info)
        unit = ""
    print(f"{spec.describe()}: rate {spec.rate:.4f}, corrects up to {spec.t} {unit or 'bit '}errors")
    weights = [args.weight] if args.weight is not None else list(range(1, spec.t + 1))
    all_ok = True
    for w in weights:
        if not 0 <= w <= spec.n:
            raise ConfigError("weight", f"{w} outside [0, {spec.n}]")
        total = math.comb(spec.n, w)
        if total <= args.max_exhaustive:
            patterns = (np.array(c, dtype=np.int64) for c in combinations(range(spec.n), w))
            label = f"weight-{w} {unit}patterns"
        else:
            total = args.samples
            patterns = (rng.choice(spec.n, w, replace=False) for _ in range(total))
            label = f"random weight-{w} {unit}patterns"
        ok = sum(_corrects(spec, info, word, pos, rng) for pos in patterns)
        print(f"{ok}/{total} {label} corrected")
        all_ok &= ok == total
    return EXIT_OK if all_ok else EXIT_INVALID


# -- entry point ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qread", description="Quantum reading with classical codes: curves, thresholds, checks.")
    p.add_argument("--version", action="version", version=f"qread {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("baseline", help="optimal uncoded error grids P_c, P_s")
    _add_cell_flags(b)
    b.add_argument("--pc-exponent", choices=[e.value for e in PcExponent], default=PcExponent.SQUARED.value)
    b.set_defaults(func=cmd_baseline)

    c = sub.add_parser("cell-error", help="uncoded per-cell receiver error, analytic and Monte Carlo")
    _add_cell_flags(c)
    c.add_argument("--receiver", choices=["heterodyne", "dolinar"], default="dolinar")
    c.add_argument("--efficiency", type=float, default=0.9)
    c.add_argument("--rounds", type=int, default=2)
    c.add_argument("--initial-guess", choices=[g.value for g in GuessPolicy], default=GuessPolicy.MOST_LIKELY.value)
    c.add_argument("--click-model", choices=[m.value for m in ClickModel], default=ClickModel.PRINTED.value)
    c.add_argument("--trials", type=int, default=100000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--workers", type=int, default=1)
    c.set_defaults(func=cmd_cell_error)

    t = sub.add_parser("codec-test", help="encode/corrupt/decode round trips up to the correction radius")
    t.add_argument("--family", choices=[f.value for f in Family], required=True)
    for name in ("n", "k", "delta", "r", "m"):
        t.add_argument("--" + name, type=int)
    t.add_argument("--b", type=int, default=1)
    t.add_argument("--weight", type=int, help="test only this error weight (default: 1..t)")
    t.add_argument("--samples", type=int, default=1000, help="random patterns when enumeration is too large")
    t.add_argument("--max-exhaustive", type=int, default=200000)
    t.add_argument("--seed", type=int, default=0)
    t.set_defaults(func=cmd_codec_test)

    cv = sub.add_parser("curve", help="Monte Carlo error curve as CSV")
    _add_experiment_flags(cv)
    cv.set_defaults(func=cmd_curve)

    th = sub.add_parser("threshold", help="curve plus crossing point against a baseline, as JSON")
    _add_experiment_flags(th)
    th.add_argument("--json-out", help="threshold JSON path (default: stdout)")
    th.set_defaults(func=cmd_threshold)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return int(args.func(args))
    except (UsageError, ConfigError, CodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
