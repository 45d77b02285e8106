"""Counter-based random substreams for order-independent Monte Carlo.

Every trial owns a 64-bit key mixed from (master seed, grid point, trial);
draw number c of that trial is the SplitMix64 finalizer of key + c * phi.
No state is carried between draws, so any partition of trials across
workers reproduces the same numbers.
"""

import math

import numpy as np
from numba import njit

_PHI = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_POINT_SALT = np.uint64(0xD1B54A32D192ED03)
_TRIAL_SALT = np.uint64(0x8CB92BA72F3D8DD7)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True)
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True)
def trial_key(seed, point, trial):
    k = mix64(np.uint64(seed) ^ _PHI)
    k = mix64(k ^ (np.uint64(point) * _POINT_SALT))
    return mix64(k ^ (np.uint64(trial) * _TRIAL_SALT))


@njit(cache=True)
def draw_u64(key, counter):
    return mix64(key + np.uint64(counter) * _PHI)


@njit(cache=True)
def uniform(key, counter):
    """Double in [0, 1) with 53 random bits."""
    return float(draw_u64(key, counter) >> _S11) * _INV53


@njit(cache=True)
def standard_normal(key, counter):
    """Box-Muller (cosine branch) from draws counter and counter + 1."""
    u1 = 1.0 - uniform(key, counter)
    u2 = uniform(key, counter + 1)
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def seed_to_uint64(seed: int) -> np.uint64:
    return np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)
