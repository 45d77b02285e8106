"""Primitive binary BCH codes.

The generator is the lcm of the minimal polynomials of alpha^b ..
alpha^(b+delta-2), built as the product over the distinct cyclotomic cosets
hit by that run.  Encoding is systematic: message bits occupy the last k
positions, so a failed decode still yields the raw message bits.
"""

from __future__ import annotations

import numpy as np

from ..field import FieldPoly, FieldSpec, build_field, cyclotomic_coset, minimal_polynomial
from . import _kernels as K
from .core import CodeError, CodeSpec, DecodeFailure, Family, _bits

GF2 = build_field(1)


def bch_generator(ext: FieldSpec, delta: int, b: int = 1) -> FieldPoly:
    n = ext.order
    g = FieldPoly(GF2, [1])
    seen: set[int] = set()
    for i in range(b, b + delta - 1):
        coset = cyclotomic_coset(i, 2, n)
        if min(coset) in seen:
            continue
        seen.add(min(coset))
        g = g * minimal_polynomial(i, GF2, ext)
    return g


def systematic_generator_matrix(g: FieldPoly, n: int) -> np.ndarray:
    """Rows x^(n-k+j) + (x^(n-k+j) mod g); message bit j lands at n-k+j."""
    r = g.degree
    k = n - r
    G = np.zeros((k, n), dtype=np.uint8)
    for j in range(k):
        mono = FieldPoly.monomial(GF2, r + j)
        rem = mono % g
        G[j, list(range(len(rem.coeffs)))] = rem.coeffs
        G[j, r + j] = 1
    return G


def bch_build(ext: FieldSpec, delta: int, b: int = 1) -> CodeSpec:
    """Narrow-sense (b=1) primitive BCH code of length 2^e - 1 and design distance delta.

    delta = 1 gives the trivial [n, n] code, useful as an uncoded reference.
    """
    n = ext.order
    if delta < 1:
        raise CodeError(f"BCH design distance delta={delta} must be >= 1")
    if b < 0:
        raise CodeError(f"BCH offset b={b} must be >= 0")
    g = bch_generator(ext, delta, b)
    k = n - g.degree
    if k <= 0:
        raise CodeError(f"BCH delta={delta} over {ext!r} leaves no information bits (k={k})")
    G = systematic_generator_matrix(g, n)
    return CodeSpec(
        family=Family.BCH,
        n=n,
        k=k,
        d_design=delta,
        field=GF2,
        generator_poly=g,
        generator_matrix=G,
        params={"delta": delta, "b": b, "ext": ext, "info_positions": np.arange(n - k, n)},
    )


def bch_dimensions(ext: FieldSpec, b: int = 1) -> dict[int, int]:
    """Largest design distance achieving each reachable dimension k."""
    out: dict[int, int] = {}
    n = ext.order
    for delta in range(1, n + 1):
        k = n - bch_generator(ext, delta, b).degree
        if k <= 0:
            break
        out[k] = delta
    return out


def bch_encode(spec: CodeSpec, info) -> np.ndarray:
    return K.binary_encode(_bits(info, spec.k, "info"), spec.generator_matrix)


def bch_decode(spec: CodeSpec, received) -> np.ndarray:
    r = _bits(received, spec.n, "received word")
    ext = spec.params["ext"]
    info, ok = K.bch_decode_bits(
        r, spec.t, spec.params["b"], spec.params["info_positions"], ext.exp2, ext.log_table, ext.order
    )
    if not ok:
        raise DecodeFailure(f"no codeword of {spec.describe()} within radius {spec.t}", info)
    return info
