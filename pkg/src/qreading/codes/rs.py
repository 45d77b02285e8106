"""Reed-Solomon codes over GF(2^s) in evaluation form.

A message f(x) of degree < k is sent as c_i = alpha^(i(1-b)) f(alpha^i),
i = 0..n-1.  The twist alpha^(i(1-b)) makes every codeword a multiple of
g(x) = (x - alpha^b)...(x - alpha^(b+n-k-1)), so syndrome decoding uses the
same g for any b; for b = 1 the twist vanishes and this is the plain
evaluation code on the points 1, alpha, ..., alpha^(n-1).
"""

from __future__ import annotations

import numpy as np

from ..field import FieldPoly, FieldSpec
from . import _kernels as K
from .core import CodeError, CodeSpec, DecodeFailure, Family, _symbols


def rs_generator(field: FieldSpec, k: int, b: int) -> FieldPoly:
    g = FieldPoly(field, [1])
    for j in range(b, b + field.order - k):
        g = g * FieldPoly(field, [field.alpha_pow(j), 1])
    return g


_TABLE_LIMIT_BYTES = 64 << 20


def syndrome_lookup(field: FieldSpec, n: int, k: int, b: int) -> np.ndarray:
    """Per-(position, nibble, value) packed syndrome vectors; empty if not worthwhile.

    Only built for fields up to GF(256), where each syndrome fits a byte.
    """
    nsyn = n - k
    nnib = (field.s + 3) // 4
    W = (nsyn + 7) // 8
    if nsyn == 0 or field.s > 8 or n * nnib * 16 * W * 8 > _TABLE_LIMIT_BYTES:
        return np.zeros((0, 1, 16, 1), dtype=np.uint64)
    order = field.order
    i = np.arange(n)[:, None, None]
    t = np.arange(field.s)[None, :, None]
    j = np.arange(nsyn)[None, None, :]
    # syndrome j of alpha^t at position i: alpha^(t + i(b+j))
    per_bit = field.antilog_table[(t + i * (b + j)) % order].astype(np.uint8)
    packed = np.zeros((n, nnib, 16, W * 8), dtype=np.uint8)
    for h in range(nnib):
        for v in range(1, 16):
            acc = np.zeros((n, nsyn), dtype=np.uint8)
            for bit in range(4):
                tb = 4 * h + bit
                if v >> bit & 1 and tb < field.s:
                    acc ^= per_bit[:, tb, :]
            packed[:, h, v, :nsyn] = acc
    return np.ascontiguousarray(packed).view(np.uint64)


def rs_build(field: FieldSpec, k: int, b: int = 1) -> CodeSpec:
    n = field.order
    if not 1 <= k <= n:
        raise CodeError(f"RS dimension k={k} outside 1..{n}")
    if b < 0:
        raise CodeError(f"RS offset b={b} must be >= 0")
    return CodeSpec(
        family=Family.RS,
        n=n,
        k=k,
        d_design=n - k + 1,
        field=field,
        generator_poly=rs_generator(field, k, b),
        params={
            "b": b,
            "points": tuple(field.alpha_pow(i) for i in range(n)),
            "syndrome_table": syndrome_lookup(field, n, k, b),
        },
    )


def rs_encode(spec: CodeSpec, info) -> np.ndarray:
    """Evaluate the message polynomial (coefficients ``info``) on the code points."""
    f = _symbols(spec, info, spec.k, "info")
    fs = spec.field
    return K.rs_encode_symbols(f, spec.n, spec.params["b"], fs.exp2, fs.log_table, fs.order)


def rs_decode(spec: CodeSpec, received) -> np.ndarray:
    """Berlekamp-Massey / Chien / Forney decoding back to the k message symbols.

    Raises DecodeFailure when more than (n-k)//2 symbols look corrupted.
    """
    r = _symbols(spec, received, spec.n, "received word")
    fs = spec.field
    f, ok = K.rs_decode_symbols(
        r, spec.k, spec.params["b"], fs.exp2, fs.log_table, fs.order, spec.params["syndrome_table"]
    )
    if not ok:
        raise DecodeFailure(f"no codeword of {spec.describe()} within radius {spec.t}", f)
    return f
