from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from qreading.field import (
    PRIMITIVE_POLYS,
    FieldElement,
    FieldError,
    FieldPoly,
    basis_compose,
    basis_expand,
    build_field,
    cyclotomic_coset,
    gf_add,
    gf_inv,
    gf_mul,
    gf_pow,
    minimal_polynomial,
)


def clmul_mod(a: int, b: int, modulus: int, s: int) -> int:
    """Shift-and-add multiplication reduced by the modulus: table-free oracle."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a >> s & 1:
            a ^= modulus
    return acc


def poly2_divides(d: int, p: int) -> bool:
    while p.bit_length() >= d.bit_length():
        p ^= d << (p.bit_length() - d.bit_length())
    return p == 0


@pytest.mark.parametrize("s", range(1, 17))
def test_builtin_moduli_are_primitive(s):
    f = build_field(s)
    q = 1 << s
    assert f.modulus == PRIMITIVE_POLYS[s]
    assert f.q == q
    # antilog enumerates every nonzero element once, and alpha^(q-1) = 1 first
    assert sorted(f.antilog_table[: q - 1].tolist()) == list(range(1, q))
    assert f.alpha_pow(q - 1) == 1
    nz = np.arange(1, q)
    assert np.array_equal(f.antilog_table[f.log_table[nz]], nz)


def test_gf16_default_modulus():
    f = build_field(4)
    assert f.modulus == 0b10011  # x^4 + x + 1


def test_gf2_trivial():
    f = build_field(1)
    assert f.q == 2
    assert f.mul(1, 1) == 1 and f.add(1, 1) == 0


def test_reducible_modulus_names_factor():
    with pytest.raises(FieldError, match="reducible.*x\\^2 \\+ x \\+ 1"):
        build_field(4, 0b10101)  # x^4 + x^2 + 1 = (x^2+x+1)^2


def test_irreducible_but_not_primitive():
    with pytest.raises(FieldError, match="not primitive"):
        build_field(4, 0b11111)  # x^4+x^3+x^2+x+1 has x of order 5


@pytest.mark.parametrize("bad", [0, 17])
def test_exponent_range(bad):
    with pytest.raises(FieldError):
        build_field(bad)


def test_modulus_degree_mismatch():
    with pytest.raises(FieldError):
        build_field(4, 0b1011)


def test_mul_example_gf16():
    f = build_field(4)
    assert f.mul(2, 9) == 1  # alpha * (alpha^3 + 1) = alpha^4 + alpha = 1


@pytest.mark.parametrize("s", [2, 3, 4, 5, 8])
def test_mul_matches_shift_and_add(s):
    f = build_field(s)
    rng = random.Random(s)
    pairs = itertools.product(range(f.q), repeat=2) if s <= 5 else (
        (rng.randrange(f.q), rng.randrange(f.q)) for _ in range(20000)
    )
    for a, b in pairs:
        assert f.mul(a, b) == clmul_mod(a, b, f.modulus, s)


@pytest.mark.parametrize("s", range(1, 9))
def test_inverse_exhaustive(s):
    f = build_field(s)
    for a in range(1, f.q):
        assert f.mul(a, f.inv(a)) == 1


def test_inverse_of_zero():
    f = build_field(4)
    with pytest.raises(ZeroDivisionError):
        f.inv(0)
    with pytest.raises(ZeroDivisionError):
        gf_inv(f.element(0))


@pytest.mark.parametrize("s", [4, 8, 12])
def test_field_axioms_random(s):
    f = build_field(s)
    rng = np.random.default_rng(s)
    for a, b, c in rng.integers(0, f.q, size=(10000, 3)).tolist():
        assert f.mul(a, b) == f.mul(b, a)
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.mul(a, 1) == a
        assert f.add(a, a) == 0


def test_element_operators_and_mixing():
    f, g = build_field(4), build_field(3)
    a, b = f.element(6), f.element(11)
    assert (a + b).value == 6 ^ 11
    assert gf_add(a, b) == a + b
    assert gf_mul(a, b) == a * b
    assert (a * b / b) == a
    assert gf_pow(a, 15).value == 1
    assert gf_pow(a, -1) == gf_inv(a)
    with pytest.raises(FieldError):
        _ = a + g.element(1)
    with pytest.raises(FieldError):
        FieldElement(16, f)


def test_poly_normalization_and_division():
    f = build_field(4)
    p = FieldPoly(f, [3, 0, 5, 0, 0])
    assert p.degree == 2 and p.coeffs == (3, 0, 5)
    assert FieldPoly(f, [0, 0]).degree == -1
    rng = np.random.default_rng(0)
    for _ in range(200):
        a = FieldPoly(f, rng.integers(0, 16, 7).tolist())
        b = FieldPoly(f, rng.integers(0, 16, 4).tolist())
        if b.degree < 0:
            continue
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree < b.degree


def test_minimal_polynomial_examples():
    base, ext = build_field(1), build_field(4)
    assert minimal_polynomial(1, base, ext).coeffs == (1, 1, 0, 0, 1)  # x^4 + x + 1
    assert minimal_polynomial(0, base, ext).coeffs == (1, 1)  # x + 1
    assert minimal_polynomial(5, base, ext).coeffs == (1, 1, 1)  # x^2 + x + 1
    assert cyclotomic_coset(5, 2, 15) == [5, 10]
    assert cyclotomic_coset(1, 2, 15) == [1, 2, 4, 8]


@pytest.mark.parametrize("s", [3, 4, 5, 6])
def test_minimal_polynomials_divide_xn_minus_1(s):
    base, ext = build_field(1), build_field(s)
    n = ext.order
    xn1 = (1 << n) | 1
    for i in range(n):
        m = minimal_polynomial(i, base, ext)
        assert set(m.coeffs) <= {0, 1}
        bits = sum(c << j for j, c in enumerate(m.coeffs))
        assert poly2_divides(bits, xn1)
        lifted = FieldPoly(ext, list(m.coeffs))
        assert lifted(ext.alpha_pow(i)).value == 0


def test_basis_expand_examples():
    f = build_field(4)
    assert basis_expand(f.element(9)).tolist() == [1, 0, 0, 1]
    assert basis_expand(f.element(0)).tolist() == [0, 0, 0, 0]
    for e in f.elements():
        assert basis_compose(basis_expand(e), f) == e
    with pytest.raises(FieldError):
        basis_compose([1, 0, 1], f)
