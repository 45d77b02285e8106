"""Reed-Solomon, BCH and Reed-Muller codes plus the symbol/bit bridge."""

from __future__ import annotations

import numpy as np

from ..field import build_field
from .bch import bch_build, bch_decode, bch_dimensions, bch_encode
from .core import (
    CodeError,
    CodeSpec,
    DecodeFailure,
    Family,
    bits_to_symbols,
    codeword_to_bits,
    defining_set,
)
from .rm import exponent_set, rm_build, rm_decode, rm_dimension, rm_encode
from .rs import rs_build, rs_decode, rs_encode

__all__ = [
    "CodeError",
    "CodeSpec",
    "DecodeFailure",
    "Family",
    "bch_build",
    "bch_decode",
    "bch_dimensions",
    "bch_encode",
    "bits_to_symbols",
    "build_code",
    "codeword_to_bits",
    "decode_bits",
    "defining_set",
    "encode_bits",
    "exponent_set",
    "rm_build",
    "rm_decode",
    "rm_dimension",
    "rm_encode",
    "rs_build",
    "rs_decode",
    "rs_encode",
]


def _exponent_for_length(n: int, what: str) -> int:
    s = (n + 1).bit_length() - 1
    if n < 1 or (1 << s) - 1 != n:
        raise CodeError(f"{what} length n={n} must be 2^s - 1")
    return s


def build_code(
    family: str | Family,
    *,
    n: int | None = None,
    k: int | None = None,
    delta: int | None = None,
    r: int | None = None,
    m: int | None = None,
    b: int = 1,
) -> CodeSpec:
    """Build a code from flat parameters, as used by the config layer.

    RS needs n = 2^s - 1 and k.  BCH needs n = 2^e - 1 and either delta or
    an exactly reachable k.  RM needs r and m (n, if given, must be 2^m).
    """
    family = Family(family)
    if family is Family.RS:
        if n is None or k is None:
            raise CodeError("RS needs code.n and code.k")
        return rs_build(build_field(_exponent_for_length(n, "RS")), k, b)
    if family is Family.BCH:
        if n is None:
            raise CodeError("BCH needs code.n")
        ext = build_field(_exponent_for_length(n, "BCH"))
        if delta is None:
            if k is None:
                raise CodeError("BCH needs code.delta or code.k")
            dims = bch_dimensions(ext, b)
            if k not in dims:
                raise CodeError(f"no BCH code of length {n} has k={k}; reachable: {sorted(dims)}")
            delta = dims[k]
        spec = bch_build(ext, delta, b)
        if k is not None and spec.k != k:
            raise CodeError(f"BCH delta={delta} gives k={spec.k}, not code.k={k}")
        return spec
    if r is None or m is None:
        raise CodeError("RM needs code.r and code.m")
    spec = rm_build(r, m)
    if n is not None and n != spec.n:
        raise CodeError(f"RM({r},{m}) has length {spec.n}, not code.n={n}")
    if k is not None and k != spec.k:
        raise CodeError(f"RM({r},{m}) has dimension {spec.k}, not code.k={k}")
    return spec


def encode_bits(spec: CodeSpec, info_bits) -> np.ndarray:
    """Message bits (length K) -> cell bits (length N) for any family."""
    if spec.family is Family.RS:
        info = bits_to_symbols(spec, np.asarray(info_bits, dtype=np.uint8))
        if info.shape[0] != spec.k:
            raise CodeError(f"info must have {spec.K} bits")
        return codeword_to_bits(spec, rs_encode(spec, info))
    if spec.family is Family.BCH:
        return bch_encode(spec, info_bits)
    return rm_encode(spec, info_bits)


def decode_bits(spec: CodeSpec, cell_bits) -> np.ndarray:
    """Cell bits (length N) -> message bits (length K); may raise DecodeFailure.

    The failure's ``fallback`` is converted to bits as well.
    """
    if spec.family is Family.RS:
        bits = np.asarray(cell_bits, dtype=np.uint8)
        if bits.shape != (spec.N,):
            raise CodeError(f"received word must have {spec.N} bits")
        try:
            info = rs_decode(spec, bits_to_symbols(spec, bits))
        except DecodeFailure as exc:
            raise DecodeFailure(str(exc), codeword_to_bits(spec, exc.fallback)) from None
        return codeword_to_bits(spec, info)
    if spec.family is Family.BCH:
        return bch_decode(spec, cell_bits)
    return rm_decode(spec, cell_bits)
