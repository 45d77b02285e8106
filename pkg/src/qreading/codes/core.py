from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from ..field import FieldElement, FieldPoly, FieldSpec, basis_compose, basis_expand


class Family(str, Enum):
    RS = "rs"
    BCH = "bch"
    RM = "rm"


class CodeError(ValueError):
    """Invalid code parameters or malformed input words."""


class DecodeFailure(Exception):
    """A bounded-distance decoder found no codeword within its radius.

    ``fallback`` carries the information estimate read off the uncorrected
    word, in the same format the decoder would have returned.
    """

    def __init__(self, message: str, fallback: np.ndarray) -> None:
        super().__init__(message)
        self.fallback = fallback


@dataclass(frozen=True, eq=False)
class CodeSpec:
    family: Family
    n: int
    k: int
    d_design: int
    field: FieldSpec
    generator_poly: FieldPoly | None = None
    generator_matrix: np.ndarray | None = field(default=None, repr=False)
    params: dict[str, Any] = field(default_factory=dict, repr=False)

    @property
    def symbol_bits(self) -> int:
        """Bits per code symbol once written to binary cells."""
        return self.field.s if self.family is Family.RS else 1

    @property
    def N(self) -> int:
        """Number of binary memory cells per codeword."""
        return self.n * self.symbol_bits

    @property
    def K(self) -> int:
        """Information bits per codeword."""
        return self.k * self.symbol_bits

    @property
    def rate(self) -> float:
        return self.K / self.N

    @property
    def t(self) -> int:
        """Guaranteed correction radius (symbols for RS, bits otherwise)."""
        return (self.d_design - 1) // 2

    def describe(self) -> str:
        name = {Family.RS: "RS", Family.BCH: "BCH", Family.RM: "RM"}[self.family]
        if self.family is Family.RS:
            return f"{name}[{self.n},{self.k},{self.d_design}] over GF(2^{self.field.s})"
        if self.family is Family.RM:
            return f"{name}({self.params['r']},{self.params['m']}) [{self.n},{self.k},{self.d_design}]"
        return f"{name}[{self.n},{self.k}] delta={self.d_design}"


def _symbols(spec: CodeSpec, values, length: int, what: str) -> np.ndarray:
    out = []
    for v in values:
        if isinstance(v, FieldElement):
            if v.field != spec.field:
                raise CodeError(f"{what} symbol from {v.field!r}, code is over {spec.field!r}")
            v = v.value
        out.append(int(v))
    arr = np.asarray(out, dtype=np.int64)
    if arr.shape != (length,):
        raise CodeError(f"{what} must have {length} symbols, got {arr.shape[0] if arr.ndim else 0}")
    if arr.size and (arr.min() < 0 or arr.max() >= spec.field.q):
        raise CodeError(f"{what} symbols must lie in [0, {spec.field.q})")
    return arr


def _bits(values, length: int, what: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.shape != (length,):
        raise CodeError(f"{what} must have {length} bits, got shape {arr.shape}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise CodeError(f"{what} must contain only 0/1")
    return arr.astype(np.uint8)


def codeword_to_bits(spec: CodeSpec, symbols) -> np.ndarray:
    """Write code symbols as cell bits (basis expansion for RS, identity otherwise)."""
    if spec.family is not Family.RS:
        return _bits(symbols, spec.n, "codeword")
    syms = _symbols(spec, symbols, len(symbols), "codeword")
    if syms.size == 0:
        return np.zeros(0, dtype=np.uint8)
    return np.concatenate([basis_expand(FieldElement(int(v), spec.field)) for v in syms])


def bits_to_symbols(spec: CodeSpec, bits) -> np.ndarray:
    if spec.family is not Family.RS:
        return _bits(bits, len(bits), "bit string")
    s = spec.field.s
    if len(bits) % s:
        raise CodeError(f"bit string length {len(bits)} is not a multiple of s={s}")
    return np.array(
        [basis_compose(list(bits[i:i + s]), spec.field).value for i in range(0, len(bits), s)],
        dtype=np.int64,
    )


def defining_set(spec: CodeSpec) -> set[int]:
    """Exponents i in Z_n with g(alpha^i) = 0."""
    if spec.family is Family.RM:
        raise CodeError("Reed-Muller codes are not handled as cyclic codes here")
    g = spec.generator_poly
    ext = spec.params.get("ext", spec.field)
    lifted = FieldPoly(ext, [_lift(c, spec.field, ext) for c in g.coeffs])
    return {i for i in range(spec.n) if lifted.evaluate(ext.alpha_pow(i)).value == 0}


def _lift(c: int, base: FieldSpec, ext: FieldSpec) -> int:
    if base == ext or c in (0, 1):
        return c
    raise CodeError("coefficients outside GF(2) need a subfield embedding")  # pragma: no cover
