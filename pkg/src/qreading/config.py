"""Flat ``key = value`` run configuration.

Files hold one ``key = value`` per line; ``#`` starts a comment.  Command
line overrides are applied on top of the file, and ``QREAD_SEED`` (when
set) replaces the file's seed.  Every key below has a documented meaning;
anything else is rejected.

    code.family           rs | bch | rm                       (required)
    code.n, code.k        length / dimension (RS needs both)
    code.delta            BCH design distance (or give code.k)
    code.r, code.m        Reed-Muller order and number of variables
    code.b                first consecutive root exponent     [1]
    cells.kappa0/kappa1   transmissivities                    [0.1 / 0.95]
    cells.p0              prior of bit 0 (p1 = 1 - p0)        [0.5]
    receiver.kind         heterodyne | dolinar                [dolinar]
    receiver.efficiency   photodetector efficiency 1 - eta    [0.9]
    receiver.rounds       Dolinar rounds l                    [2]
    receiver.initial_guess  most-likely | fixed-zero | random [most-likely]
    receiver.click_model  printed | efficiency                [printed]
    grid.start/stop/points  evenly spaced n_bar grid          (required)
    trials                trials per grid point               [10000]
    seed                  64-bit master seed                  [0]
    metric                info-bit-error-rate | block-error-rate
    baseline              min-of-both | optimal-coherent | optimal-squeezed
    baseline.pc_exponent  squared | unsquared                 [squared]
    energy_per_info_bit   true | false                        [false]
    adaptive.min_errors   stop a point after this many errors [off]
    adaptive.max_trials   cap for adaptive sampling
    threshold.max_bracket widest bracket before low-resolution flag [0.5]
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .baselines import BaselineKind, PcExponent
from .codes import CodeError, build_code
from .experiment import ExperimentConfig, Metric
from .photonics import ClickModel, DolinarConfig, GuessPolicy, HeterodyneConfig, MemoryCellPair

SEED_ENV = "QREAD_SEED"


class ConfigError(ValueError):
    """Invalid or incomplete configuration; ``key`` names the culprit."""

    def __init__(self, key: str, message: str) -> None:
        super().__init__(f"{key}: {message}")
        self.key = key


def _int(text: str) -> int:
    return int(text, 0)


def _float(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise ValueError("must be finite")
    return v


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected true or false")


def _choice(enum) -> Callable[[str], str]:
    def parse(text: str) -> str:
        return enum(text.strip().lower()).value

    return parse


_FAMILIES = ("rs", "bch", "rm")


def _family(text: str) -> str:
    t = text.strip().lower()
    if t not in _FAMILIES:
        raise ValueError(f"expected one of {', '.join(_FAMILIES)}")
    return t


def _receiver_kind(text: str) -> str:
    t = text.strip().lower()
    if t not in ("heterodyne", "dolinar"):
        raise ValueError("expected heterodyne or dolinar")
    return t


# key -> (parser, default); None default means optional/absent
KEYS: dict[str, tuple[Callable[[str], Any], Any]] = {
    "code.family": (_family, None),
    "code.n": (_int, None),
    "code.k": (_int, None),
    "code.delta": (_int, None),
    "code.r": (_int, None),
    "code.m": (_int, None),
    "code.b": (_int, 1),
    "cells.kappa0": (_float, 0.1),
    "cells.kappa1": (_float, 0.95),
    "cells.p0": (_float, 0.5),
    "receiver.kind": (_receiver_kind, "dolinar"),
    "receiver.efficiency": (_float, 0.9),
    "receiver.rounds": (_int, 2),
    "receiver.initial_guess": (_choice(GuessPolicy), GuessPolicy.MOST_LIKELY.value),
    "receiver.click_model": (_choice(ClickModel), ClickModel.PRINTED.value),
    "grid.start": (_float, None),
    "grid.stop": (_float, None),
    "grid.points": (_int, None),
    "trials": (_int, 10000),
    "seed": (_int, 0),
    "metric": (_choice(Metric), Metric.INFO_BIT.value),
    "baseline": (_choice(BaselineKind), BaselineKind.MIN_OF_BOTH.value),
    "baseline.pc_exponent": (_choice(PcExponent), PcExponent.SQUARED.value),
    "energy_per_info_bit": (_bool, False),
    "adaptive.min_errors": (_int, None),
    "adaptive.max_trials": (_int, None),
    "threshold.max_bracket": (_float, 0.5),
}


@dataclass(frozen=True)
class RunConfig:
    """A validated configuration: the materialized key values plus built objects."""

    values: dict[str, Any]
    experiment: ExperimentConfig
    baseline: BaselineKind
    pc_exponent: PcExponent
    max_bracket: float


def parse_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Split ``key = value`` lines into a dict of raw strings."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}", f"expected key = value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
        if key in out:
            raise ConfigError(key, f"given twice ({source}:{lineno})")
        out[key] = value
    return out


def load_file(path: str | Path) -> dict[str, str]:
    """Read a config file; OSError propagates so callers can map it to an I/O exit code."""
    path = Path(path)
    return parse_text(path.read_text(), str(path))


def resolve(raw: dict[str, Any], env: dict[str, str] | None = None) -> dict[str, Any]:
    """Parse raw strings (or already typed values) and fill in defaults."""
    env = os.environ if env is None else env
    raw = dict(raw)
    if SEED_ENV in env and env[SEED_ENV] != "":
        raw["seed"] = env[SEED_ENV]
    values: dict[str, Any] = {}
    for key, (parse, default) in KEYS.items():
        if key in raw and raw[key] is not None:
            v = raw[key]
            try:
                values[key] = parse(v) if isinstance(v, str) else parse(str(v))
            except ValueError as exc:
                raise ConfigError(key, f"invalid value {v!r} ({exc})") from None
        else:
            values[key] = default
    unknown = set(raw) - set(KEYS)
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")
    return values


def _require(values: dict[str, Any], key: str) -> Any:
    if values[key] is None:
        raise ConfigError(key, "missing required key")
    return values[key]


def build(values: dict[str, Any]) -> RunConfig:
    """Turn resolved values into experiment objects, naming the bad key on failure."""
    family = _require(values, "code.family")
    for key in ("code.n", "code.k", "code.delta", "code.r", "code.m"):
        if values[key] is not None and values[key] < 0:
            raise ConfigError(key, "must be >= 0")
    if family == "rs":
        _require(values, "code.n")
        _require(values, "code.k")
    elif family == "bch":
        _require(values, "code.n")
        if values["code.delta"] is None and values["code.k"] is None:
            raise ConfigError("code.delta", "missing required key (or give code.k)")
    else:
        _require(values, "code.r")
        _require(values, "code.m")
    try:
        code = build_code(
            family, n=values["code.n"], k=values["code.k"], delta=values["code.delta"],
            r=values["code.r"], m=values["code.m"], b=values["code.b"],
        )
    except CodeError as exc:
        raise ConfigError(_code_key(family, str(exc)), str(exc)) from None

    for key in ("cells.kappa0", "cells.kappa1", "cells.p0"):
        if not 0.0 <= values[key] <= 1.0:
            raise ConfigError(key, f"{values[key]} outside [0, 1]")
    cells = MemoryCellPair(values["cells.kappa0"], values["cells.kappa1"], values["cells.p0"], 1.0 - values["cells.p0"])

    if values["receiver.kind"] == "heterodyne":
        receiver = HeterodyneConfig()
    else:
        eff = values["receiver.efficiency"]
        if not 0.0 <= eff <= 1.0:
            raise ConfigError("receiver.efficiency", f"{eff} outside [0, 1]")
        if values["receiver.rounds"] < 1:
            raise ConfigError("receiver.rounds", "must be >= 1")
        receiver = DolinarConfig.from_efficiency(
            eff, values["receiver.rounds"],
            initial_guess=values["receiver.initial_guess"], click_model=values["receiver.click_model"],
        )

    start, stop = _require(values, "grid.start"), _require(values, "grid.stop")
    points = _require(values, "grid.points")
    if points < 1:
        raise ConfigError("grid.points", "must be >= 1")
    if start < 0:
        raise ConfigError("grid.start", "must be >= 0")
    if points > 1 and stop <= start:
        raise ConfigError("grid.stop", "must exceed grid.start")
    if points == 1 and stop != start:
        raise ConfigError("grid.stop", "must equal grid.start for a one-point grid")
    grid = tuple(float(x) for x in np.linspace(start, stop, points))

    if values["trials"] < 1:
        raise ConfigError("trials", "must be >= 1")
    if not 0 <= values["seed"] < 1 << 64:
        raise ConfigError("seed", "must be a 64-bit unsigned integer")
    min_err, max_tr = values["adaptive.min_errors"], values["adaptive.max_trials"]
    if min_err is not None:
        if min_err < 1:
            raise ConfigError("adaptive.min_errors", "must be >= 1")
        if max_tr is None:
            raise ConfigError("adaptive.max_trials", "missing required key (adaptive.min_errors is set)")
        if max_tr < values["trials"]:
            raise ConfigError("adaptive.max_trials", "must be >= trials")
    if values["threshold.max_bracket"] <= 0:
        raise ConfigError("threshold.max_bracket", "must be > 0")

    experiment = ExperimentConfig(
        code=code, receiver=receiver, cells=cells, n_bar_grid=grid, trials=values["trials"],
        seed=values["seed"], metric=Metric(values["metric"]),
        energy_per_info_bit=values["energy_per_info_bit"],
        min_errors=min_err, max_trials=max_tr if min_err is not None else None,
    )
    return RunConfig(
        values=values, experiment=experiment, baseline=BaselineKind(values["baseline"]),
        pc_exponent=PcExponent(values["baseline.pc_exponent"]), max_bracket=values["threshold.max_bracket"],
    )


def _code_key(family: str, message: str) -> str:
    for key in ("delta", "k", "n", "r", "m", "b"):
        if f"{key}=" in message or f"code.{key}" in message:
            return f"code.{key}"
    return "code.family"


def parse_config(
    path: str | Path | None = None,
    overrides: dict[str, Any] | None = None,
    env: dict[str, str] | None = None,
) -> RunConfig:
    """File keys, then ``QREAD_SEED``, then overrides (highest precedence)."""
    raw: dict[str, Any] = load_file(path) if path is not None else {}
    env = dict(os.environ if env is None else env)
    if overrides:
        for key in overrides:
            if key not in KEYS:
                raise ConfigError(key, "unknown key")
        if overrides.get("seed") is not None:
            env.pop(SEED_ENV, None)
        raw.update({k: v for k, v in overrides.items() if v is not None})
    return build(resolve(raw, env))
