"""Compiled end-to-end trial loop: draw, encode, read cells, decode, score.

One kernel serves all three families; arrays a family does not use are
passed as small dummies.  Random numbers come from the counter-based
streams in ``rng``, laid out per trial as

    counters [0, K)                       information bits
    CELL_BASE + j * CELL_STRIDE + r       draws for cell j
"""

import math

import numpy as np
from numba import njit

from .codes import _kernels as K
from .rng import draw_u64, standard_normal, trial_key, uniform

FAMILY_RS = 0
FAMILY_BCH = 1
FAMILY_RM = 2

RX_HETERODYNE = 0
RX_DOLINAR = 1

CELL_BASE = 1 << 32
CELL_STRIDE = 64
_SQRT_HALF = math.sqrt(0.5)
_TOP = np.uint64(63)


@njit(cache=True, inline="always")
def _read_cell(x, key, base, rx, amp, mid, d, lam, fixed_bit, pclick, guess_mode, guess0, rounds):
    if rx == RX_HETERODYNE:
        if fixed_bit >= 0:
            return fixed_bit
        # both means are real, so the imaginary quadrature carries no information
        y = amp[x] + _SQRT_HALF * standard_normal(key, base)
        return 1 if 2.0 * (y - mid) * d >= lam else 0
    if guess_mode == 1:
        g = 1 if uniform(key, base + rounds) < 0.5 else 0
    else:
        g = guess0
    for r in range(rounds):
        if uniform(key, base + r) < pclick[x, g]:
            g ^= 1
    return g


@njit(cache=True)
def run_trials(
    family, seed, point, t0, t1,
    k, s, b, t, exp2, log, order, table, G, info_pos, degrees, vote_idx,
    rx, amp, mid, d, lam, fixed_bit, pclick, guess_mode, guess0, rounds,
):
    """Run trials t0..t1-1 of one grid point.

    Returns (info bit errors, block errors, decoder failures) summed over
    the range.  A block counts as an error when any information bit is
    wrong or the bounded-distance decoder gave up.
    """
    if family == FAMILY_RS:
        n_sym = order
        n_cells = n_sym * s
        n_info = k * s
    else:
        n_cells = G.shape[1]
        n_info = G.shape[0]
    bit_err = 0
    blk_err = 0
    fails = 0
    info = np.empty(n_info, dtype=np.uint8)
    word = np.empty(n_cells, dtype=np.uint8)
    for trial in range(t0, t1):
        key = trial_key(seed, point, trial)
        for i in range(n_info):
            info[i] = np.uint8(draw_u64(key, i) >> _TOP)
        if family == FAMILY_RS:
            f = np.zeros(k, dtype=np.int64)
            for l in range(k):
                v = 0
                for j in range(s):
                    v |= np.int64(info[l * s + j]) << j
                f[l] = v
            c = K.rs_encode_symbols(f, n_sym, b, exp2, log, order)
            for i in range(n_sym):
                for j in range(s):
                    word[i * s + j] = (c[i] >> j) & 1
        else:
            word[:] = K.binary_encode(info, G)
        for j in range(n_cells):
            word[j] = _read_cell(
                word[j], key, CELL_BASE + j * CELL_STRIDE, rx, amp, mid, d, lam,
                fixed_bit, pclick, guess_mode, guess0, rounds,
            )
        ok = True
        if family == FAMILY_RS:
            r = np.empty(n_sym, dtype=np.int64)
            for i in range(n_sym):
                v = 0
                for j in range(s):
                    v |= np.int64(word[i * s + j]) << j
                r[i] = v
            fhat, ok = K.rs_decode_symbols(r, k, b, exp2, log, order, table)
            est = np.empty(n_info, dtype=np.uint8)
            for l in range(k):
                for j in range(s):
                    est[l * s + j] = (fhat[l] >> j) & 1
        elif family == FAMILY_BCH:
            est, ok = K.bch_decode_bits(word, t, b, info_pos, exp2, log, order)
        else:
            est = K.rm_decode_bits(word, G, degrees, vote_idx)
        wrong = 0
        for i in range(n_info):
            if est[i] != info[i]:
                wrong += 1
        bit_err += wrong
        if wrong > 0 or not ok:
            blk_err += 1
        if not ok:
            fails += 1
    return bit_err, blk_err, fails
