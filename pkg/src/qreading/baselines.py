"""Optimal uncoded error probabilities used as threshold targets.

Coherent probes with Helstrom measurements give

    P_c = (1 - sqrt(1 - exp(-n (sqrt(k0) - sqrt(k1))^2))) / 2

and the optimized two-mode-squeezed (EPR) transmitter gives

    P_s = exp(-mu n) / 2,
    mu  = (k0 + k1 + 2)/2 - 2 sqrt(k0 k1) - sqrt((1 - k0)(1 - k1)).
"""

from __future__ import annotations

import math
from enum import Enum

from .photonics import MemoryCellPair


class BaselineKind(str, Enum):
    OPTIMAL_COHERENT = "optimal-coherent"
    OPTIMAL_SQUEEZED = "optimal-squeezed"
    MIN_OF_BOTH = "min-of-both"


class PcExponent(str, Enum):
    SQUARED = "squared"
    # unsquared difference, kept for audit; undefined (nan) when kappa1 > kappa0
    UNSQUARED = "unsquared"


def optimal_coherent_error(
    cells: MemoryCellPair, n_bar: float, exponent: PcExponent | str = PcExponent.SQUARED
) -> float:
    if n_bar < 0:
        raise ValueError(f"n_bar must be >= 0, got {n_bar}")
    diff = math.sqrt(cells.kappa0) - math.sqrt(cells.kappa1)
    if PcExponent(exponent) is PcExponent.SQUARED:
        diff = diff * diff
    inner = -math.expm1(-n_bar * diff)
    if inner < 0:
        return math.nan
    return (1.0 - math.sqrt(inner)) / 2.0


def squeezed_mu(cells: MemoryCellPair) -> float:
    k0, k1 = cells.kappa0, cells.kappa1
    return (k0 + k1 + 2) / 2 - 2 * math.sqrt(k0 * k1) - math.sqrt((1 - k0) * (1 - k1))


def optimal_squeezed_error(cells: MemoryCellPair, n_bar: float) -> float:
    if n_bar < 0:
        raise ValueError(f"n_bar must be >= 0, got {n_bar}")
    return math.exp(-squeezed_mu(cells) * n_bar) / 2.0


def baseline_error(
    kind: BaselineKind | str,
    cells: MemoryCellPair,
    n_bar: float,
    exponent: PcExponent | str = PcExponent.SQUARED,
) -> float:
    kind = BaselineKind(kind)
    if kind is BaselineKind.OPTIMAL_COHERENT:
        return optimal_coherent_error(cells, n_bar, exponent)
    if kind is BaselineKind.OPTIMAL_SQUEEZED:
        return optimal_squeezed_error(cells, n_bar)
    pc = optimal_coherent_error(cells, n_bar, exponent)
    ps = optimal_squeezed_error(cells, n_bar)
    return ps if math.isnan(pc) else min(pc, ps)
