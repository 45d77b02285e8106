from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import gammaln

from qreading.baselines import (
    BaselineKind,
    PcExponent,
    baseline_error,
    optimal_coherent_error,
    optimal_squeezed_error,
    squeezed_mu,
)
from qreading.photonics import MemoryCellPair

CELLS = MemoryCellPair(0.1, 0.95)
# Helstrom bound from the Fock-basis overlap <a|b>, evaluated independently below
PC_N2 = 0.11926421416988048
MU = 0.696426565347138
PS_N1 = 0.24918149663049113
# n_bar where P_s and P_c cross for (0.1, 0.95)
CROSSOVER = 2.202841554010012


def helstrom_from_fock(cells, n_bar, terms=120):
    n = np.arange(terms)

    def amps(a):
        return np.exp(-a * a / 2 + n * math.log(a) - 0.5 * gammaln(n + 1)) if a > 0 else (n == 0) * 1.0

    overlap = float(np.dot(amps(math.sqrt(cells.kappa0 * n_bar)), amps(math.sqrt(cells.kappa1 * n_bar))))
    return 0.5 * (1 - math.sqrt(1 - overlap**2))


def test_coherent_examples():
    assert optimal_coherent_error(CELLS, 0) == 0.5
    assert optimal_coherent_error(MemoryCellPair(0.3, 0.3), 10) == 0.5
    assert optimal_coherent_error(CELLS, 2) == pytest.approx(PC_N2, abs=1e-12)


@pytest.mark.parametrize("n_bar", [0.1, 1.0, 2.0, 5.0, 12.0])
def test_coherent_equals_helstrom_oracle(n_bar):
    assert optimal_coherent_error(CELLS, n_bar) == pytest.approx(helstrom_from_fock(CELLS, n_bar), abs=1e-12)


def test_unsquared_exponent_audit_mode():
    # unsquared difference: valid when kappa0 > kappa1, nan otherwise
    assert math.isnan(optimal_coherent_error(CELLS, 2, PcExponent.UNSQUARED))
    swapped = CELLS.swapped()
    d = math.sqrt(0.95) - math.sqrt(0.1)
    expect = (1 - math.sqrt(1 - math.exp(-2 * d))) / 2
    assert optimal_coherent_error(swapped, 2, "unsquared") == pytest.approx(expect)
    assert baseline_error("min-of-both", CELLS, 2, "unsquared") == optimal_squeezed_error(CELLS, 2)


def test_squeezed_mu_examples():
    assert squeezed_mu(MemoryCellPair(0.4, 0.4)) == pytest.approx(0, abs=1e-15)
    assert squeezed_mu(MemoryCellPair(0, 1)) == 1.5
    assert squeezed_mu(CELLS) == pytest.approx(MU, abs=1e-12)
    assert squeezed_mu(CELLS) == pytest.approx(0.69643, abs=1e-4)


def test_squeezed_examples():
    assert optimal_squeezed_error(CELLS, 0) == 0.5
    assert optimal_squeezed_error(CELLS, 1) == pytest.approx(PS_N1, abs=1e-12)
    assert optimal_squeezed_error(MemoryCellPair(0.7, 0.7), 30) == 0.5


def test_negative_n_bar_rejected():
    with pytest.raises(ValueError):
        optimal_coherent_error(CELLS, -1)
    with pytest.raises(ValueError):
        optimal_squeezed_error(CELLS, -1)


def test_monotone_symmetric_and_half_at_zero():
    grid = np.linspace(0, 50, 2001)
    for f in (optimal_coherent_error, optimal_squeezed_error):
        vals = np.array([f(CELLS, x) for x in grid])
        assert vals[0] == 0.5
        assert np.all(np.diff(vals) <= 0)
        swapped = np.array([f(CELLS.swapped(), x) for x in grid])
        assert np.allclose(vals, swapped, rtol=0, atol=1e-15)


def test_squeezed_beats_coherent_only_past_crossover():
    grid = np.linspace(0.01, 50, 5000)
    ps = np.array([optimal_squeezed_error(CELLS, x) for x in grid])
    pc = np.array([optimal_coherent_error(CELLS, x) for x in grid])
    assert np.all(ps[grid > CROSSOVER] <= pc[grid > CROSSOVER])
    assert np.all(ps[grid < CROSSOVER] > pc[grid < CROSSOVER])
    assert optimal_squeezed_error(CELLS, CROSSOVER) == pytest.approx(optimal_coherent_error(CELLS, CROSSOVER))


def test_min_of_both():
    for x in (0.5, 2.0, 4.0):
        assert baseline_error(BaselineKind.MIN_OF_BOTH, CELLS, x) == min(
            optimal_coherent_error(CELLS, x), optimal_squeezed_error(CELLS, x)
        )
    assert baseline_error("optimal-coherent", CELLS, 3) == optimal_coherent_error(CELLS, 3)
    assert baseline_error("optimal-squeezed", CELLS, 3) == optimal_squeezed_error(CELLS, 3)
