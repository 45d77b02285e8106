"""Coherent probes, pure-loss memory cells and the two receivers.

Conventions: a coherent state |alpha> has mean photon number |alpha|^2; a
pure-loss channel of transmissivity kappa maps it to |sqrt(kappa) alpha>;
heterodyne outcomes beta have density exp(-|beta - mu|^2) / pi, i.e. each
quadrature is Gaussian with variance 1/2 around the state amplitude mu.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from itertools import product

import numpy as np
from numba import njit
from scipy.special import gammaln, ndtr


class DegenerateChannelWarning(RuntimeWarning):
    """Both memory-cell hypotheses produce the same output state."""


@dataclass(frozen=True)
class CoherentState:
    amplitude: complex

    @property
    def n_bar(self) -> float:
        return abs(self.amplitude) ** 2

    @classmethod
    def from_photons(cls, n_bar: float) -> CoherentState:
        """Real, positive amplitude sqrt(n_bar)."""
        if n_bar < 0:
            raise ValueError(f"mean photon number must be >= 0, got {n_bar}")
        return cls(complex(math.sqrt(n_bar), 0.0))


@dataclass(frozen=True)
class MemoryCellPair:
    """Binary memory cell: lossy channels kappa0 / kappa1 with priors p0 / p1."""

    kappa0: float
    kappa1: float
    p0: float = 0.5
    p1: float = 0.5

    def __post_init__(self) -> None:
        for name in ("kappa0", "kappa1"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.p0 < 0 or self.p1 < 0 or not math.isclose(self.p0 + self.p1, 1.0, abs_tol=1e-12):
            raise ValueError(f"priors p0={self.p0}, p1={self.p1} must be nonnegative and sum to 1")

    def kappa(self, bit: int) -> float:
        return self.kappa1 if bit else self.kappa0

    def swapped(self) -> MemoryCellPair:
        return MemoryCellPair(self.kappa1, self.kappa0, self.p1, self.p0)


class GuessPolicy(str, Enum):
    MOST_LIKELY = "most-likely"
    FIXED_ZERO = "fixed-zero"
    RANDOM = "random"


class ClickModel(str, Enum):
    # Q1 = sum_{n>=1} (1-eta)^n |n><n|, the operator as written for the receiver
    PRINTED = "printed"
    # conventional inefficient detector, P(click) = 1 - exp(-(1-eta)|delta|^2)
    EFFICIENCY = "efficiency"


@dataclass(frozen=True)
class HeterodyneConfig:
    """Heterodyne + maximum-likelihood decision; priors come from the cells."""

    kind = "heterodyne"


@dataclass(frozen=True)
class DolinarConfig:
    """l-round Dolinar receiver with detector parameter eta = 1 - efficiency."""

    rounds: int = 2
    eta_det: float = 0.1
    initial_guess: GuessPolicy = GuessPolicy.MOST_LIKELY
    click_model: ClickModel = ClickModel.PRINTED

    kind = "dolinar"

    def __post_init__(self) -> None:
        if self.rounds < 1:
            raise ValueError(f"Dolinar rounds must be >= 1, got {self.rounds}")
        if not 0.0 <= self.eta_det <= 1.0:
            raise ValueError(f"detector parameter eta={self.eta_det} outside [0, 1]")
        object.__setattr__(self, "initial_guess", GuessPolicy(self.initial_guess))
        object.__setattr__(self, "click_model", ClickModel(self.click_model))

    @classmethod
    def from_efficiency(cls, efficiency: float = 0.9, rounds: int = 2, **kwargs) -> DolinarConfig:
        return cls(rounds=rounds, eta_det=1.0 - efficiency, **kwargs)

    @property
    def efficiency(self) -> float:
        return 1.0 - self.eta_det


ReceiverConfig = HeterodyneConfig | DolinarConfig


# -- states and channels ---------------------------------------------------


def fock_amplitudes(state: CoherentState, n_max: int) -> np.ndarray:
    """<n|alpha> = exp(-|alpha|^2/2) alpha^n / sqrt(n!) for n = 0..n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    a = complex(state.amplitude)
    n = np.arange(n_max + 1)
    if a == 0:
        out = np.zeros(n_max + 1, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = -abs(a) ** 2 / 2 + n * math.log(abs(a)) - 0.5 * gammaln(n + 1)
    return np.exp(log_mag) * np.exp(1j * n * np.angle(a))


def wigner(state: CoherentState, r) -> np.ndarray | float:
    """W(r) = (1/pi) exp(-|r - rbar|^2), rbar = sqrt(2) (Re alpha, Im alpha).

    Quadratures are scaled so the vacuum has variance 1/2 each, which fixes
    the prefactor at 1/pi for a unit integral.  ``r`` has shape (..., 2).
    """
    r = np.asarray(r, dtype=float)
    rbar = math.sqrt(2) * np.array([state.amplitude.real, state.amplitude.imag])
    d2 = np.sum((r - rbar) ** 2, axis=-1)
    out = np.exp(-d2) / math.pi
    return float(out) if out.ndim == 0 else out


def lossy_output(state: CoherentState, kappa: float) -> CoherentState:
    if not 0.0 <= kappa <= 1.0:
        raise ValueError(f"transmissivity {kappa} outside [0, 1]")
    return CoherentState(math.sqrt(kappa) * complex(state.amplitude))


# -- heterodyne --------------------------------------------------------------


def heterodyne_sample(mean: CoherentState, rng: np.random.Generator, size=None):
    """Draw beta ~ exp(-|beta - mu|^2)/pi for the (already attenuated) state."""
    re = rng.normal(0.0, math.sqrt(0.5), size)
    im = rng.normal(0.0, math.sqrt(0.5), size)
    return complex(mean.amplitude) + (re + 1j * im)


def _hypothesis_means(cells: MemoryCellPair, probe: CoherentState) -> tuple[complex, complex]:
    a = complex(probe.amplitude)
    return math.sqrt(cells.kappa0) * a, math.sqrt(cells.kappa1) * a


def log_prior_ratio(cells: MemoryCellPair) -> float:
    """log(p0 / p1), the log of the likelihood-ratio threshold."""
    if cells.p1 == 0:
        return math.inf
    if cells.p0 == 0:
        return -math.inf
    return math.log(cells.p0 / cells.p1)


def mle_decide(beta, cells: MemoryCellPair, probe: CoherentState):
    """Decide 1 iff p(beta|1)/p(beta|0) >= p0/p1.

    For the two circular Gaussians the log-likelihood ratio is
    2 Re((beta - m) conj(d)) with m the midpoint and d = mu1 - mu0, so
    the rule is a half-plane test against the perpendicular bisector,
    shifted along d when the priors differ.  Works elementwise on arrays.
    """
    mu0, mu1 = _hypothesis_means(cells, probe)
    d = mu1 - mu0
    if d == 0:
        warnings.warn(
            "memory cell hypotheses are indistinguishable; returning the higher-prior bit",
            DegenerateChannelWarning,
            stacklevel=2,
        )
        bit = 1 if cells.p1 > cells.p0 else 0
        return np.full(np.shape(beta), bit, dtype=np.uint8) if np.ndim(beta) else bit
    m = 0.5 * (mu0 + mu1)
    llr = 2.0 * np.real((np.asarray(beta) - m) * np.conj(d))
    out = (llr >= log_prior_ratio(cells)).astype(np.uint8)
    return int(out) if out.ndim == 0 else out


def heterodyne_bit_error_analytic(cells: MemoryCellPair, n_bar: float) -> float:
    """Exact per-cell error of heterodyne + ML decision.

    Along d the two outcome densities are N(-D/2, 1/2) and N(+D/2, 1/2)
    with D = |sqrt(kappa1) - sqrt(kappa0)| sqrt(n_bar); the boundary sits at
    log(p0/p1) / (2D).  Equal priors reduce this to Q(D / sqrt(2)).
    """
    D = abs(math.sqrt(cells.kappa1) - math.sqrt(cells.kappa0)) * math.sqrt(n_bar)
    if D == 0:
        return min(cells.p0, cells.p1) if cells.p0 != cells.p1 else 0.5
    sigma = math.sqrt(0.5)
    lam = log_prior_ratio(cells)
    if math.isinf(lam):
        return 0.0
    boundary = lam / (2 * D)
    err0 = 1.0 - ndtr((boundary + D / 2) / sigma)
    err1 = ndtr((boundary - D / 2) / sigma)
    return float(cells.p0 * err0 + cells.p1 * err1)


# -- Dolinar -----------------------------------------------------------------


@njit(cache=True)
def click_prob(abs2, eta, efficiency_model):
    """Click probability for a coherent state with |delta|^2 = abs2."""
    if efficiency_model:
        return -math.expm1(-(1.0 - eta) * abs2)
    # sum_{n>=1} (1-eta)^n e^{-x} x^n / n! = e^{-eta x} - e^{-x}
    return math.exp(-eta * abs2) - math.exp(-abs2)


def click_probability(displaced_amplitude: complex, eta_det: float, model: ClickModel | str = ClickModel.PRINTED) -> float:
    if not 0.0 <= eta_det <= 1.0:
        raise ValueError(f"detector parameter eta={eta_det} outside [0, 1]")
    return float(click_prob(abs(displaced_amplitude) ** 2, eta_det, ClickModel(model) is ClickModel.EFFICIENCY))


def initial_guess(cells: MemoryCellPair, cfg: DolinarConfig, rng: np.random.Generator | None = None) -> int:
    if cfg.initial_guess is GuessPolicy.FIXED_ZERO:
        return 0
    if cfg.initial_guess is GuessPolicy.RANDOM:
        if rng is None:
            raise ValueError("random initial guess needs a random stream")
        return int(rng.random() < 0.5)
    return 1 if cells.p1 > cells.p0 else 0


@njit(cache=True)
def dolinar_chain(guess, click_if_0, click_if_1, uniforms):
    """Run the guess/displace/detect rounds and return the declared bit.

    ``click_if_g`` is the per-round click probability while the current
    guess is g; a click flips the guess.
    """
    g = guess
    for u in uniforms:
        if u < (click_if_1 if g else click_if_0):
            g ^= 1
    return g


def _round_click_probs(true_bit: int, cells: MemoryCellPair, n_bar: float, cfg: DolinarConfig):
    """Click probabilities per round given the current guess is 0 / 1."""
    eff = cfg.click_model is ClickModel.EFFICIENCY
    amp_x = math.sqrt(cells.kappa(true_bit) * n_bar / cfg.rounds)
    out = []
    for g in (0, 1):
        amp_g = math.sqrt(cells.kappa(g) * n_bar / cfg.rounds)
        out.append(click_prob((amp_x - amp_g) ** 2, cfg.eta_det, eff))
    return out


def dolinar_read(
    true_bit: int,
    probe: CoherentState,
    cells: MemoryCellPair,
    cfg: DolinarConfig,
    rng: np.random.Generator,
) -> int:
    """Simulate one Dolinar read of a cell holding ``true_bit``.

    Each of the l rounds sees the slice |sqrt(kappa_x) alpha / sqrt(l)>,
    displaced by the current guess's slice amplitude.
    """
    p_g0, p_g1 = _round_click_probs(true_bit, cells, probe.n_bar, cfg)
    guess = initial_guess(cells, cfg, rng)
    return int(dolinar_chain(guess, p_g0, p_g1, rng.random(cfg.rounds)))


def dolinar_bit_error_analytic(cells: MemoryCellPair, n_bar: float, cfg: DolinarConfig) -> float:
    """Exact error probability by summing over all 2^l click patterns."""
    if cfg.initial_guess is GuessPolicy.RANDOM:
        starts = [(0, 0.5), (1, 0.5)]
    else:
        starts = [(initial_guess(cells, cfg), 1.0)]
    total = 0.0
    for x, prior in ((0, cells.p0), (1, cells.p1)):
        clicks = _round_click_probs(x, cells, n_bar, cfg)
        for g0, w in starts:
            for pattern in product((False, True), repeat=cfg.rounds):
                g, prob = g0, 1.0
                for click in pattern:
                    p = clicks[g]
                    prob *= p if click else 1.0 - p
                    if click:
                        g ^= 1
                if g != x:
                    total += prior * w * prob
    return total


def dolinar_floor(cells: MemoryCellPair, cfg: DolinarConfig, n_max: float = 100.0, points: int = 20001):
    """Minimum of the uncoded Dolinar error over n_bar in (0, n_max].

    Returns (floor, argmin).  Grid search followed by bounded refinement.
    """
    from scipy.optimize import minimize_scalar

    grid = np.linspace(n_max / (points - 1), n_max, points)
    vals = np.array([dolinar_bit_error_analytic(cells, x, cfg) for x in grid])
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, points - 1)]
    res = minimize_scalar(
        lambda x: dolinar_bit_error_analytic(cells, x, cfg), bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-10},
    )
    if res.fun < vals[i]:
        return float(res.fun), float(res.x)
    return float(vals[i]), float(grid[i])
