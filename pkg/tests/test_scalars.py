"""Scalar backend: cyclotomic polynomials, field arithmetic, serialization."""

import cmath
import math
import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from halfder.scalars import (
    CycloElem,
    CyclotomicField,
    GenericQField,
    as_rational,
    cyclotomic_polynomial,
    parse_scalar,
    scalar_to_str,
)


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def test_cyclotomic_base_cases():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)


@pytest.mark.parametrize("t", range(1, 13))
def test_cyclotomic_product_identity(t):
    # multiplying out prod_{d | t} Phi_d must reproduce x^t - 1 exactly;
    # multiplication is independent of the division used to build Phi_t
    prod = [1]
    for d in range(1, t + 1):
        if t % d == 0:
            prod = poly_mul(prod, list(cyclotomic_polynomial(d)))
    expected = [0] * (t + 1)
    expected[0], expected[t] = -1, 1
    assert prod == expected


@pytest.mark.parametrize("t", range(2, 13))
def test_cyclotomic_roots_numeric(t):
    # numeric oracle: Phi_t vanishes exactly at the primitive t-th roots
    coeffs = cyclotomic_polynomial(t)
    assert coeffs[-1] == 1
    assert len(coeffs) - 1 == sum(1 for k in range(1, t + 1) if math.gcd(k, t) == 1)
    for k in range(1, t + 1):
        z = cmath.exp(2j * cmath.pi * k / t)
        val = sum(c * z**j for j, c in enumerate(coeffs))
        if math.gcd(k, t) == 1:
            assert abs(val) < 1e-9
        else:
            assert abs(val) > 1e-9


def test_qpow_generic():
    f = GenericQField("2")
    assert f.qpow(-2) == mpq(1, 4)
    assert f.qpow(0) == 1
    assert f.qpow(7) == 128


def test_qpow_cyclotomic_reduction():
    f4 = CyclotomicField(4)
    assert f4.qpow(6) == f4.from_int(-1)  # zeta_4^2 = -1
    f3 = CyclotomicField(3)
    zeta = f3.zeta
    assert f3.qpow(-1) == zeta * zeta
    assert f3.qpow(-1) == f3.element(["-1", "-1"])  # zeta^2 = -1 - zeta


def test_field_product_example():
    f = CyclotomicField(3)
    z = f.zeta
    assert (f.one - z) * (f.one - z * z) == 3


def test_is_zero_relation():
    f = CyclotomicField(3)
    z = f.zeta
    assert not (f.one + z + z * z)
    assert bool(z)


def test_invert_rational():
    assert 1 / as_rational("-3/7") == mpq(-7, 3)
    with pytest.raises(ZeroDivisionError):
        1 / as_rational(0)


def test_invert_cyclotomic_zero():
    f = CyclotomicField(5)
    with pytest.raises(ZeroDivisionError):
        f.zero.inverse()


@pytest.mark.parametrize("t", range(3, 13))
def test_primitivity(t):
    f = CyclotomicField(t)
    assert f.qpow(t) == 1
    for k in range(1, t):
        assert f.qpow(k) != 1


def test_generic_q_rejects_roots_of_unity():
    for bad in ("0", "1", "-1"):
        with pytest.raises(ValueError):
            GenericQField(bad)


def test_cyclotomic_needs_t_three():
    with pytest.raises(ValueError):
        CyclotomicField(2)


def test_generic_injectivity_window():
    rng = random.Random(7)
    for q in ("2", "3/2"):
        f = GenericQField(q)
        for _ in range(200):
            a = rng.randint(-200, 200)
            b = rng.randint(-200, 200)
            assert (f.qpow(a) == f.qpow(b)) == (a == b)


_rationals = st.fractions(
    min_value=-50, max_value=50, max_denominator=12
)


@st.composite
def cyclo_elems(draw, field):
    coeffs = draw(
        st.lists(_rationals, min_size=field.degree, max_size=field.degree)
    )
    return field.element([str(c) for c in coeffs])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_field_axioms_cyclotomic(data):
    field = CyclotomicField(data.draw(st.sampled_from([3, 4, 5, 6, 12])))
    a = data.draw(cyclo_elems(field))
    b = data.draw(cyclo_elems(field))
    c = data.draw(cyclo_elems(field))
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    if a:
        assert a * a.inverse() == 1


def test_scalar_serialization_round_trip():
    f = CyclotomicField(3)
    x = f.element(["1/2", "-3"])
    assert scalar_to_str(x) == "[1/2, -3]"
    assert parse_scalar(f, scalar_to_str(x)) == x
    g = GenericQField("2")
    assert scalar_to_str(as_rational("6/4")) == "3/2"
    assert scalar_to_str(as_rational("5")) == "5"
    assert parse_scalar(g, "-7/3") == mpq(-7, 3)


def test_modp_maps_are_homomorphisms():
    g = GenericQField("3/2")
    mapper, p = g.modp_map()
    x, y = as_rational("5/4"), as_rational("-7/6")
    assert mapper(x * y) == mapper(x) * mapper(y) % p
    assert mapper(x + y) == (mapper(x) + mapper(y)) % p

    f = CyclotomicField(3)
    mapper, p = f.modp_map()
    a = f.element(["1/2", "3"])
    b = f.element(["-2", "1/5"])
    assert mapper(a * b) == mapper(a) * mapper(b) % p
    assert mapper(a + b) == (mapper(a) + mapper(b)) % p
    # zeta must land on an element of exact order t
    w = mapper(f.zeta)
    assert pow(w, 3, p) == 1 and w != 1
