"""Binary Reed-Muller codes RM(r, m) with Reed's majority-logic decoder.

Point p in [0, 2^m) stands for the vector with x_i = bit i of p.  Message
bits are the coefficients of the monomials of degree <= r, ordered by
degree and then lexicographically by variable set.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from ..field import FieldSpec
from . import _kernels as K
from .core import CodeError, CodeSpec, Family, _bits


def exponent_set(r: int, m: int, q: int) -> list[tuple[int, ...]]:
    """E_q(r, m): exponent vectors with entries in [0, q-1] summing to at most r."""
    return [e for e in product(range(q), repeat=m) if sum(e) <= r]


def rm_dimension(r: int, m: int, q: int = 2) -> int:
    return len(exponent_set(r, m, q))


def rm_build(r: int, m: int, field: FieldSpec | None = None) -> CodeSpec:
    from .bch import GF2

    field = field or GF2
    q = field.q
    if m < 1:
        raise CodeError(f"RM needs m >= 1, got m={m}")
    if not 0 <= r < m * (q - 1):
        raise CodeError(f"RM order r={r} outside 0..{m * (q - 1) - 1} for m={m}, q={q}")
    if q != 2:
        raise CodeError("only binary Reed-Muller codes are supported")

    n = 1 << m
    monomials = [S for d in range(r + 1) for S in combinations(range(m), d)]
    points = np.arange(n)
    G = np.zeros((len(monomials), n), dtype=np.uint8)
    for row, S in enumerate(monomials):
        mask = 0
        for v in S:
            mask |= 1 << v
        G[row] = (points & mask) == mask
    degrees = np.array([len(S) for S in monomials], dtype=np.int64)

    # checksum groups: for each monomial, the 2^(m-d) subcubes spanned by its variables
    vote_idx = np.zeros((len(monomials), n), dtype=np.int64)
    for row, S in enumerate(monomials):
        rest = [v for v in range(m) if v not in S]
        col = 0
        for fixed in range(1 << len(rest)):
            base = sum(1 << v for i, v in enumerate(rest) if fixed >> i & 1)
            for sub in range(1 << len(S)):
                vote_idx[row, col] = base | sum(1 << v for i, v in enumerate(S) if sub >> i & 1)
                col += 1

    k = len(monomials)
    assert k == rm_dimension(r, m, q)
    return CodeSpec(
        family=Family.RM,
        n=n,
        k=k,
        d_design=1 << (m - r),
        field=field,
        generator_matrix=G,
        params={"r": r, "m": m, "monomials": monomials, "degrees": degrees, "vote_idx": vote_idx},
    )


def rm_encode(spec: CodeSpec, info) -> np.ndarray:
    return K.binary_encode(_bits(info, spec.k, "info"), spec.generator_matrix)


def rm_decode(spec: CodeSpec, received) -> np.ndarray:
    r = _bits(received, spec.n, "received word")
    return K.rm_decode_bits(r, spec.generator_matrix, spec.params["degrees"], spec.params["vote_idx"])
