"""Monte Carlo error curves and threshold detection against uncoded baselines.

Each trial draws a uniform message, encodes it, writes the N cell bits,
reads every cell with the configured receiver and decodes.  Trials are
keyed by (seed, grid point index, trial index), so a curve is the same
whatever the chunking or the number of worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq
from scipy.special import ndtri

from . import _montecarlo as MC
from .baselines import BaselineKind, PcExponent, baseline_error
from .codes import CodeSpec, Family
from .photonics import (
    DolinarConfig,
    GuessPolicy,
    HeterodyneConfig,
    MemoryCellPair,
    ReceiverConfig,
    _round_click_probs,
    initial_guess,
    log_prior_ratio,
)
from .rng import seed_to_uint64

#: Trials per work unit.  Fixed so the task list never depends on worker count.
CHUNK_TRIALS = 2000
_Z95 = float(ndtri(0.975))
_TINY = 1e-300
_MAX_ROUNDS = MC.CELL_STRIDE - 2


class Metric(str, Enum):
    INFO_BIT = "info-bit-error-rate"
    BLOCK = "block-error-rate"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a curve, apart from the worker count.

    With ``energy_per_info_bit`` the grid is read as photons per information
    bit and each cell is probed with n_bar * K / N.  ``min_errors`` turns on
    adaptive sampling: batches of ``trials`` are added until that many error
    events are seen or ``max_trials`` is reached.
    """

    code: CodeSpec
    receiver: ReceiverConfig
    cells: MemoryCellPair
    n_bar_grid: tuple[float, ...]
    trials: int
    seed: int = 0
    metric: Metric = Metric.INFO_BIT
    energy_per_info_bit: bool = False
    min_errors: int | None = None
    max_trials: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_bar_grid", tuple(float(x) for x in self.n_bar_grid))
        object.__setattr__(self, "metric", Metric(self.metric))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        grid = self.n_bar_grid
        if not grid:
            raise ValueError("n_bar grid is empty")
        if any(not math.isfinite(x) or x < 0 for x in grid):
            raise ValueError("n_bar grid values must be finite and >= 0")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("n_bar grid must be strictly ascending")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if isinstance(self.receiver, DolinarConfig) and self.receiver.rounds > _MAX_ROUNDS:
            raise ValueError(f"Dolinar rounds must be <= {_MAX_ROUNDS}")
        if self.min_errors is not None:
            if self.min_errors < 1:
                raise ValueError("min_errors must be >= 1")
            if self.max_trials is None or self.max_trials < self.trials:
                raise ValueError("adaptive sampling needs max_trials >= trials")

    @property
    def rate(self) -> float:
        return self.code.rate

    def cell_n_bar(self, n_bar: float) -> float:
        return n_bar * self.code.rate if self.energy_per_info_bit else n_bar


@dataclass(frozen=True)
class CurvePoint:
    """One grid point; ``trials`` is the denominator of ``p_hat`` (bits or blocks)."""

    n_bar: float
    p_hat: float
    ci_low: float
    ci_high: float
    errors: int
    trials: int


@dataclass(frozen=True)
class ThresholdReport:
    baseline: BaselineKind
    threshold_n_bar: float | None
    bracket: tuple[float, float] | None
    left_censored: bool = False
    low_resolution: bool = False
    reason: str = ""
    method: str = (
        "piecewise-linear interpolation of log p_hat in n_bar, root of "
        "log p_hat - log baseline in the first bracketing grid segment"
    )


def wilson_ci(errors: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1 or not 0 <= errors <= trials:
        raise ValueError(f"need 0 <= errors <= trials and trials >= 1, got {errors}/{trials}")
    z2 = _Z95 * _Z95
    p = errors / trials
    denom = 1.0 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = _Z95 * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    low = 0.0 if errors == 0 else max(0.0, centre - half)
    high = 1.0 if errors == trials else min(1.0, centre + half)
    # guard against rounding pushing the bounds past the estimate
    return min(low, p), max(high, p)


# -- kernel plumbing ---------------------------------------------------------

_DUMMY_I64 = np.zeros(1, dtype=np.int64)
_DUMMY_U8_2D = np.zeros((1, 1), dtype=np.uint8)
_DUMMY_TABLE = np.zeros((0, 1, 16, 1), dtype=np.uint64)
_DUMMY_VOTES = np.zeros((1, 1), dtype=np.int64)


def _code_args(code: CodeSpec) -> tuple:
    """(family, k, s, b, t, exp2, log, order, table, G, info_pos, degrees, vote_idx)."""
    if code.family is Family.RS:
        fs = code.field
        return (
            MC.FAMILY_RS, code.k, fs.s, code.params["b"], code.t, fs.exp2,
            fs.log_table.astype(np.int64), fs.order, code.params["syndrome_table"],
            _DUMMY_U8_2D, _DUMMY_I64, _DUMMY_I64, _DUMMY_VOTES,
        )
    G = np.ascontiguousarray(code.generator_matrix, dtype=np.uint8)
    if code.family is Family.BCH:
        ext = code.params["ext"]
        return (
            MC.FAMILY_BCH, code.k, 1, code.params["b"], code.t, ext.exp2,
            ext.log_table.astype(np.int64), ext.order, _DUMMY_TABLE,
            G, np.asarray(code.params["info_positions"], dtype=np.int64), _DUMMY_I64, _DUMMY_VOTES,
        )
    return (
        MC.FAMILY_RM, code.k, 1, 0, code.t, _DUMMY_I64, _DUMMY_I64, 1, _DUMMY_TABLE,
        G, _DUMMY_I64, np.asarray(code.params["degrees"], dtype=np.int64),
        np.asarray(code.params["vote_idx"], dtype=np.int64),
    )


def _receiver_args(receiver: ReceiverConfig, cells: MemoryCellPair, n_bar: float) -> tuple:
    """(rx, amp, mid, d, lam, fixed_bit, pclick, guess_mode, guess0, rounds) for one cell energy."""
    root = math.sqrt(n_bar)
    amp = np.array([math.sqrt(cells.kappa0) * root, math.sqrt(cells.kappa1) * root])
    pclick = np.zeros((2, 2))
    if isinstance(receiver, HeterodyneConfig):
        d = float(amp[1] - amp[0])
        fixed = -1 if d != 0 else (1 if cells.p1 > cells.p0 else 0)
        lam = log_prior_ratio(cells)
        return (MC.RX_HETERODYNE, amp, float(amp.mean()), d, lam, fixed, pclick, 0, 0, 0)
    if not isinstance(receiver, DolinarConfig):
        raise TypeError(f"unsupported receiver {receiver!r}")
    for x in (0, 1):
        pclick[x] = _round_click_probs(x, cells, n_bar, receiver)
    random_guess = receiver.initial_guess is GuessPolicy.RANDOM
    guess0 = 0 if random_guess else initial_guess(cells, receiver)
    return (MC.RX_DOLINAR, amp, 0.0, 0.0, 0.0, -1, pclick, int(random_guess), guess0, receiver.rounds)


def _count(cfg: ExperimentConfig, point: int, t0: int, t1: int) -> tuple[int, int, int]:
    code_args = _code_args(cfg.code)
    family, rest = code_args[0], code_args[1:]
    rx_args = _receiver_args(cfg.receiver, cfg.cells, cfg.cell_n_bar(cfg.n_bar_grid[point]))
    bits, blocks, fails = MC.run_trials(
        family, seed_to_uint64(cfg.seed), point, t0, t1, *rest, *rx_args
    )
    return int(bits), int(blocks), int(fails)


def run_trial(cfg: ExperimentConfig, n_bar: float, trial_index: int, point_index: int = 0) -> tuple[int, bool]:
    """One encode/read/decode trial; returns (info bit errors, block error).

    ``point_index`` selects the random substream, so passing the index
    that ``n_bar`` has in ``cfg.n_bar_grid`` reproduces that curve's trial.
    """
    one = ExperimentConfig(
        cfg.code, cfg.receiver, cfg.cells, (n_bar,), 1, cfg.seed, cfg.metric, cfg.energy_per_info_bit
    )
    code_args = _code_args(one.code)
    rx_args = _receiver_args(one.receiver, one.cells, one.cell_n_bar(n_bar))
    bits, blocks, _ = MC.run_trials(
        code_args[0], seed_to_uint64(cfg.seed), point_index, trial_index, trial_index + 1,
        *code_args[1:], *rx_args,
    )
    return int(bits), bool(blocks)


_WORKER_CFG: ExperimentConfig | None = None


def _init_worker(cfg: ExperimentConfig) -> None:
    global _WORKER_CFG
    _WORKER_CFG = cfg


def _worker_task(task: tuple[int, int, int]) -> tuple[int, int, int]:
    assert _WORKER_CFG is not None
    return _count(_WORKER_CFG, *task)


def _chunks(point: int, t0: int, t1: int) -> list[tuple[int, int, int]]:
    return [(point, a, min(a + CHUNK_TRIALS, t1)) for a in range(t0, t1, CHUNK_TRIALS)]


def _make_point(cfg: ExperimentConfig, n_bar: float, bit_errors: int, block_errors: int, blocks: int) -> CurvePoint:
    if cfg.metric is Metric.INFO_BIT:
        errors, denom = bit_errors, blocks * cfg.code.K
    else:
        errors, denom = block_errors, blocks
    low, high = wilson_ci(errors, denom)
    return CurvePoint(n_bar, errors / denom, low, high, errors, denom)


def run_curve(cfg: ExperimentConfig, workers: int = 1) -> list[CurvePoint]:
    """Error-rate curve over ``cfg.n_bar_grid``.

    Counts are summed per point, so the output does not depend on
    ``workers``.  With adaptive sampling every point advances in batches of
    ``cfg.trials`` until it has ``cfg.min_errors`` error events (in the
    configured metric) or ``cfg.max_trials`` trials.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    npts = len(cfg.n_bar_grid)
    done = [0] * npts
    tallies = [[0, 0, 0] for _ in range(npts)]
    pending = list(range(npts))
    pool = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(cfg,)) if workers > 1 else None
    try:
        while pending:
            tasks = []
            for p in pending:
                step = cfg.trials
                if cfg.max_trials is not None:
                    step = min(step, cfg.max_trials - done[p])
                tasks.extend(_chunks(p, done[p], done[p] + step))
                done[p] += step
            if pool is None:
                results = [_count(cfg, *task) for task in tasks]
            else:
                results = list(pool.map(_worker_task, tasks))
            for (p, _, _), res in zip(tasks, results):
                for i in range(3):
                    tallies[p][i] += res[i]
            if cfg.min_errors is None:
                break
            idx = 0 if cfg.metric is Metric.INFO_BIT else 1
            pending = [
                p for p in pending
                if tallies[p][idx] < cfg.min_errors and done[p] < cfg.max_trials
            ]
    finally:
        if pool is not None:
            pool.shutdown()
    return [
        _make_point(cfg, cfg.n_bar_grid[p], tallies[p][0], tallies[p][1], done[p])
        for p in range(npts)
    ]


def threshold_find(
    curve: list[CurvePoint],
    cells: MemoryCellPair,
    baseline: BaselineKind | str = BaselineKind.MIN_OF_BOTH,
    *,
    max_bracket: float = 0.5,
    exponent: PcExponent | str = PcExponent.SQUARED,
) -> ThresholdReport:
    """Smallest n_bar where the interpolated coded curve drops below the baseline.

    Zero error counts are clipped to half an event (0.5 / trials) before
    taking logs.  A bracket wider than ``max_bracket`` is flagged as low
    resolution; a curve already below the baseline at the first point gives
    that point, flagged as left-censored.
    """
    baseline = BaselineKind(baseline)
    if len(curve) < 2:
        raise ValueError("threshold search needs at least two curve points")
    xs = np.array([pt.n_bar for pt in curve])
    if np.any(np.diff(xs) <= 0):
        raise ValueError("curve points must be strictly ascending in n_bar")
    logp = np.array([math.log(max(pt.p_hat, 0.5 / pt.trials)) for pt in curve])

    def gap_at(x: float, i: int) -> float:
        # i indexes the segment [xs[i], xs[i+1]]
        w = (x - xs[i]) / (xs[i + 1] - xs[i])
        lp = (1 - w) * logp[i] + w * logp[i + 1]
        return lp - log_base(x)

    def log_base(x: float) -> float:
        return math.log(max(baseline_error(baseline, cells, x, exponent), _TINY))

    gaps = [logp[i] - log_base(xs[i]) for i in range(len(xs))]
    below = [i for i, g in enumerate(gaps) if g < 0]
    if not below:
        return ThresholdReport(
            baseline, None, None,
            reason=f"coded curve stays at or above the {baseline.value} baseline on [{xs[0]}, {xs[-1]}]",
        )
    j = below[0]
    if j == 0:
        return ThresholdReport(
            baseline, float(xs[0]), (float(xs[0]), float(xs[0])), left_censored=True,
            reason="coded curve is already below the baseline at the first grid point",
        )
    lo, hi = float(xs[j - 1]), float(xs[j])
    root = lo if gaps[j - 1] == 0 else brentq(gap_at, lo, hi, args=(j - 1,), xtol=1e-12)
    return ThresholdReport(baseline, float(root), (lo, hi), low_resolution=hi - lo > max_bracket)
