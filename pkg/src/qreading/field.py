"""GF(2^s) arithmetic and polynomials over it.

Elements are integers whose binary digits are the coefficients of a
polynomial in the primitive element alpha (bit i <-> alpha^i).  Products go
through log / antilog tables, which stay small for s <= 16.

Default moduli (all primitive, so alpha = x generates the multiplicative
group):

    s=1  : x + 1
    s=2  : x^2 + x + 1
    s=3  : x^3 + x + 1
    s=4  : x^4 + x + 1
    s=5  : x^5 + x^2 + 1
    s=6  : x^6 + x + 1
    s=7  : x^7 + x^3 + 1
    s=8  : x^8 + x^4 + x^3 + x^2 + 1
    s=9  : x^9 + x^4 + 1
    s=10 : x^10 + x^3 + 1
    s=11 : x^11 + x^2 + 1
    s=12 : x^12 + x^6 + x^4 + x + 1
    s=13 : x^13 + x^4 + x^3 + x + 1
    s=14 : x^14 + x^10 + x^6 + x + 1
    s=15 : x^15 + x + 1
    s=16 : x^16 + x^12 + x^3 + x + 1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

PRIMITIVE_POLYS: dict[int, int] = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

MAX_EXPONENT = 16


class FieldError(ValueError):
    """Invalid field construction or mixed-field arithmetic."""


def poly2_str(bits: int) -> str:
    """Render a binary polynomial bitmask as ``x^4 + x + 1``."""
    if bits == 0:
        return "0"
    terms = []
    for i in range(bits.bit_length() - 1, -1, -1):
        if bits >> i & 1:
            terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
    return " + ".join(terms)


def _poly2_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _smallest_factor(modulus: int) -> int | None:
    """Return a nontrivial binary factor of ``modulus`` or None if irreducible."""
    s = modulus.bit_length() - 1
    for deg in range(1, s // 2 + 1):
        for low in range(1 << deg):
            cand = (1 << deg) | low
            if _poly2_mod(modulus, cand) == 0:
                return cand
    return None


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(2^s) with a fixed modulus and primitive element alpha = x."""

    s: int
    modulus: int
    log_table: np.ndarray = field(repr=False)
    antilog_table: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return 1 << self.s

    @property
    def order(self) -> int:
        """Size of the multiplicative group, q - 1."""
        return (1 << self.s) - 1

    @cached_property
    def exp2(self) -> np.ndarray:
        # doubled antilog table: exp2[i + j] needs no reduction for i, j < q - 1
        return np.concatenate([self.antilog_table[:-1], self.antilog_table[:-1], [1]]).astype(np.int64)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.s, self.modulus) == (other.s, other.modulus)

    def __hash__(self) -> int:
        return hash((self.s, self.modulus))

    def __repr__(self) -> str:
        return f"GF(2^{self.s}) mod {poly2_str(self.modulus)}"

    # integer-level arithmetic; FieldElement wraps these

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.antilog_table[(int(self.log_table[a]) + int(self.log_table[b])) % self.order])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return int(self.antilog_table[(-int(self.log_table[a])) % self.order])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        return int(self.antilog_table[(int(self.log_table[a]) * e) % self.order])

    def alpha_pow(self, e: int) -> int:
        return int(self.antilog_table[e % self.order])

    def log(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("log of zero")
        return int(self.log_table[a])

    def element(self, value: int) -> FieldElement:
        return FieldElement(value, self)

    @property
    def alpha(self) -> FieldElement:
        return FieldElement(self.alpha_pow(1), self)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(v, self) for v in range(self.q)]


def build_field(s: int, modulus: int | Sequence[int] | None = None) -> FieldSpec:
    """Construct GF(2^s).

    ``modulus`` may be an integer bitmask (bit i = coefficient of x^i) or a
    bit sequence, lowest degree first.  It must be primitive so that x
    generates the multiplicative group; the failure message names the
    offending factor or the actual order of x.
    """
    if not 1 <= s <= MAX_EXPONENT:
        raise FieldError(f"field exponent s={s} outside 1..{MAX_EXPONENT}")
    if modulus is None:
        modulus = PRIMITIVE_POLYS[s]
    elif not isinstance(modulus, (int, np.integer)):
        modulus = sum(int(b) << i for i, b in enumerate(modulus))
    modulus = int(modulus)
    if modulus.bit_length() - 1 != s:
        raise FieldError(f"modulus {poly2_str(modulus)} does not have degree {s}")
    factor = _smallest_factor(modulus)
    if factor is not None:
        raise FieldError(
            f"modulus {poly2_str(modulus)} is reducible: divisible by {poly2_str(factor)}"
        )

    q = 1 << s
    log_table = np.zeros(q, dtype=np.int64)
    antilog = np.zeros(q, dtype=np.int64)
    x = 1
    for i in range(q - 1):
        if i > 0 and x == 1:
            raise FieldError(
                f"modulus {poly2_str(modulus)} is irreducible but not primitive: "
                f"x has order {i}, not {q - 1}"
            )
        antilog[i] = x
        log_table[x] = i
        x <<= 1
        if x & q:
            x ^= modulus
    if x != 1:  # pragma: no cover - impossible for an irreducible modulus
        raise FieldError(f"modulus {poly2_str(modulus)} does not close the cycle")
    antilog[q - 1] = 1
    log_table.setflags(write=False)
    antilog.setflags(write=False)
    return FieldSpec(s, modulus, log_table, antilog)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FieldSpec = field(repr=False)

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.q:
            raise FieldError(f"value {self.value} not in {self.field!r}")

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldError(f"mixed fields: {self.field!r} vs {other.field!r}")

    def __add__(self, other: FieldElement) -> FieldElement:
        return gf_add(self, other)

    __sub__ = __add__

    def __mul__(self, other: FieldElement) -> FieldElement:
        return gf_mul(self, other)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return gf_mul(self, gf_inv(other))

    def __pow__(self, e: int) -> FieldElement:
        return gf_pow(self, e)

    def __neg__(self) -> FieldElement:
        return self

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value


def gf_add(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement(a.value ^ b.value, a.field)


def gf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement(a.field.mul(a.value, b.value), a.field)


def gf_inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.field.inv(a.value), a.field)


def gf_pow(a: FieldElement, e: int) -> FieldElement:
    return FieldElement(a.field.pow(a.value, e), a.field)


class FieldPoly:
    """Polynomial with coefficients in a FieldSpec, lowest degree first.

    Coefficients are held as plain ints internally; ``coefficients`` exposes
    them as FieldElements.  Trailing zeros are stripped on construction.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable[int | FieldElement]) -> None:
        vals = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.field != field:
                    raise FieldError(f"coefficient from {c.field!r} in polynomial over {field!r}")
                c = c.value
            c = int(c)
            if not 0 <= c < field.q:
                raise FieldError(f"coefficient {c} not in {field!r}")
            vals.append(c)
        while vals and vals[-1] == 0:
            vals.pop()
        self.field = field
        self.coeffs: tuple[int, ...] = tuple(vals)

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, coeff: int = 1) -> FieldPoly:
        return cls(field, [0] * degree + [coeff])

    @property
    def coefficients(self) -> list[FieldElement]:
        return [FieldElement(c, self.field) for c in self.coeffs]

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _check(self, other: FieldPoly) -> None:
        if other.field != self.field:
            raise FieldError(f"mixed fields: {self.field!r} vs {other.field!r}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldPoly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __repr__(self) -> str:
        return f"FieldPoly({list(self.coeffs)}, {self.field!r})"

    def __add__(self, other: FieldPoly) -> FieldPoly:
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] ^= c
        return FieldPoly(self.field, out)

    __sub__ = __add__

    def __mul__(self, other: FieldPoly) -> FieldPoly:
        self._check(other)
        if self.is_zero() or other.is_zero():
            return FieldPoly(self.field, [])
        mul = self.field.mul
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] ^= mul(a, b)
        return FieldPoly(self.field, out)

    def __divmod__(self, other: FieldPoly) -> tuple[FieldPoly, FieldPoly]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return FieldPoly(f, []), self
        quot = [0] * (dq + 1)
        lead_inv = f.inv(other.coeffs[-1])
        for shift in range(dq, -1, -1):
            c = rem[shift + len(other.coeffs) - 1]
            if c:
                factor = f.mul(c, lead_inv)
                quot[shift] = factor
                for j, g in enumerate(other.coeffs):
                    rem[shift + j] ^= f.mul(factor, g)
        return FieldPoly(f, quot), FieldPoly(f, rem)

    def __floordiv__(self, other: FieldPoly) -> FieldPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: FieldPoly) -> FieldPoly:
        return divmod(self, other)[1]

    def monic(self) -> FieldPoly:
        if self.is_zero():
            return self
        inv = self.field.inv(self.coeffs[-1])
        return FieldPoly(self.field, [self.field.mul(c, inv) for c in self.coeffs])

    def __call__(self, x: int | FieldElement) -> FieldElement:
        return self.evaluate(x)

    def evaluate(self, x: int | FieldElement) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.field != self.field:
                raise FieldError(f"evaluation point from {x.field!r}")
            x = x.value
        acc = 0
        for c in reversed(self.coeffs):
            acc = self.field.mul(acc, x) ^ c
        return FieldElement(acc, self.field)

    def derivative(self) -> FieldPoly:
        # characteristic 2: only odd-degree terms survive
        return FieldPoly(self.field, [c if i % 2 == 1 else 0 for i, c in enumerate(self.coeffs)][1:])


def poly_gcd(a: FieldPoly, b: FieldPoly) -> FieldPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_lcm(a: FieldPoly, b: FieldPoly) -> FieldPoly:
    if a.is_zero() or b.is_zero():
        return FieldPoly(a.field, [])
    return ((a * b) // poly_gcd(a, b)).monic()


def cyclotomic_coset(i: int, q: int, n: int) -> list[int]:
    """The q-ary cyclotomic coset of i modulo n, starting at i mod n."""
    i %= n
    coset = [i]
    j = i * q % n
    while j != i:
        coset.append(j)
        j = j * q % n
    return coset


def _subfield_map(base: FieldSpec, ext: FieldSpec) -> dict[int, int]:
    """Map ext-field values lying in the copy of ``base`` back to base values."""
    if ext.s % base.s:
        raise FieldError(f"{base!r} is not a subfield of {ext!r}")
    if base == ext:
        return {v: v for v in range(ext.q)}
    # image of the base generator: a root in ext of the base modulus
    mod_bits = [base.modulus >> i & 1 for i in range(base.s + 1)]
    step = ext.order // base.order
    root = None
    for j in range(base.order):
        cand = ext.alpha_pow(step * j)
        acc = 0
        for c in reversed(mod_bits):
            acc = ext.mul(acc, cand) ^ c
        if acc == 0:
            root = cand
            break
    if root is None:  # pragma: no cover - every subfield modulus splits in ext
        raise FieldError(f"no root of {poly2_str(base.modulus)} in {ext!r}")
    mapping = {}
    for v in range(base.q):
        acc, p = 0, 1
        for i in range(base.s):
            if v >> i & 1:
                acc ^= p
            p = ext.mul(p, root)
        mapping[acc] = v
    return mapping


def minimal_polynomial(i: int, field: FieldSpec, ext: FieldSpec, n: int | None = None) -> FieldPoly:
    """Minimal polynomial over ``field`` of beta^i, beta a primitive n-th root of unity in ``ext``.

    ``n`` defaults to q_ext - 1, i.e. beta = alpha.  The result is the
    product of (x - beta^j) over the cyclotomic coset of i.
    """
    if n is None:
        n = ext.order
    if ext.order % n:
        raise FieldError(f"{ext!r} has no primitive {n}-th root of unity")
    to_base = _subfield_map(field, ext)
    beta_log = ext.order // n
    prod = FieldPoly(ext, [1])
    for j in cyclotomic_coset(i, field.q, n):
        prod = prod * FieldPoly(ext, [ext.alpha_pow(beta_log * j), 1])
    try:
        coeffs = [to_base[c] for c in prod.coeffs]
    except KeyError as exc:  # pragma: no cover - Frobenius-closed product lies in base
        raise FieldError("minimal polynomial left the base field") from exc
    return FieldPoly(field, coeffs)


def basis_expand(e: FieldElement) -> np.ndarray:
    """Coordinates of ``e`` in the basis 1, alpha, ..., alpha^(s-1), LSB first."""
    return np.array([(e.value >> i) & 1 for i in range(e.field.s)], dtype=np.uint8)


def basis_compose(bits: Sequence[int], field: FieldSpec) -> FieldElement:
    if len(bits) != field.s:
        raise FieldError(f"expected {field.s} bits for {field!r}, got {len(bits)}")
    value = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise FieldError(f"bit value {b!r} is not 0 or 1")
        value |= int(b) << i
    return FieldElement(value, field)
