"""Structure constants, brackets, Lie axioms, generator relations."""

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from halfder.algebra import (
    GAMMA1,
    GAMMA2,
    AlgebraSpec,
    TAG_D,
    TAG_L,
    TAG_X,
    UnsupportedVariantError,
    VIRASORO_GENERIC,
    Window,
    det2,
    elem_iadd,
    jacobi_check,
    lemma41_relations,
)


def L(m1, m2):
    return ((m1, m2), TAG_L)


def X(m1, m2):
    return ((m1, m2), TAG_X)


def D(m1, m2):
    return ((m1, m2), TAG_D)


@pytest.fixture(scope="module")
def vg():
    return AlgebraSpec.virasoro_generic("2")


@pytest.fixture(scope="module")
def vr3():
    return AlgebraSpec.virasoro_root(3)


@pytest.fixture(scope="module")
def tg():
    return AlgebraSpec.torus_generic("2")


@pytest.fixture(scope="module")
def tr3():
    return AlgebraSpec.torus_root(3)


def test_lambda_coeff_examples(vg, vr3):
    assert vg.lambda_coeff((1, 2), (3, 4)) == 48  # 2^6 - 2^4
    assert vg.lambda_coeff((2, 1), (2, 1)) == 0
    assert not vr3.lambda_coeff((3, 0), (0, 3))  # q^0 - q^9 = 0
    f = vr3.field
    assert vr3.lambda_coeff((1, 0), (0, 1)) == f.one - f.zeta


def test_det2_examples():
    assert det2((3, 0), (0, 1)) == -3
    assert det2((3, 3), (1, 1)) == 0
    assert det2((0, 3), (1, 0)) == 3


def test_gamma_class(vr3, tg):
    assert vr3.gamma_class((3, -6)) == GAMMA1
    assert vr3.gamma_class((3, 1)) == GAMMA2
    t4 = AlgebraSpec.virasoro_root(4)
    assert t4.gamma_class((2, 2)) == GAMMA2
    with pytest.raises(UnsupportedVariantError):
        tg.gamma_class((1, 0))


def test_h_coeff_examples(tr3, tg):
    f = tr3.field
    assert tr3.h_coeff((3, 0), (0, 1)) == f.from_int(-3)
    assert tr3.h_coeff((1, 0), (0, 1)) == f.one - f.zeta
    assert not tr3.h_coeff((3, 3), (1, 1))
    with pytest.raises(UnsupportedVariantError):
        tg.h_coeff((1, 0), (0, 1))


def test_g_coeff_examples(tr3):
    f = tr3.field
    assert tr3.g_coeff((1, 0), (0, 1)) == f.one - f.zeta
    assert tr3.g_coeff((3, 0), (0, 3)) == f.from_int(-9)
    assert not tr3.g_coeff((3, 0), (1, 0))


def test_bracket_virasoro(vg):
    assert vg.bracket(L(1, 0), L(0, 1)) == {L(1, 1): mpq(-1)}
    assert vg.bracket(L(2, 1), L(2, 1)) == {}
    assert vg.bracket(L(1, 0), L(-1, 0)) == {}  # degree sum zero


def test_bracket_torus_root(tr3):
    f = tr3.field
    assert tr3.bracket(D(3, 0), X(0, 1)) == {X(3, 1): f.from_int(-3)}
    assert tr3.bracket(D(1, 0), D(2, 0)) == {}  # lambda = q^0 - q^0
    # [x_n, D_m] = -h(m, n) x_{m+n}
    lhs = tr3.bracket(X(0, 1), D(3, 0))
    assert lhs == {X(3, 1): f.from_int(3)}


def test_bracket_tag_mismatch(vg, tg):
    with pytest.raises(UnsupportedVariantError):
        vg.bracket(X(1, 0), X(0, 1))
    with pytest.raises(UnsupportedVariantError):
        tg.bracket(L(1, 0), L(0, 1))


def test_window_enumeration():
    w = Window(2)
    assert len(w.points) == 24  # (2N+1)^2 - 1
    assert (0, 0) not in w
    assert (2, -2) in w
    assert (3, 0) not in w


def test_jacobi_small_windows(vg, tr3):
    rep = jacobi_check(vg, Window(2))
    assert rep.ok and rep.triples_checked > 0 and rep.pairs_checked > 0
    rep = jacobi_check(tr3, Window(2))
    assert rep.ok


def test_jacobi_worker_parallelism(vg, monkeypatch):
    monkeypatch.setenv("HALFDER_THREADS", "2")
    rep = jacobi_check(vg, Window(2), workers=4)
    assert rep.ok


def test_jacobi_detects_corruption(vg):
    class Corrupt(AlgebraSpec):
        __slots__ = ()

        def lambda_coeff(self, m, n):
            return super().lambda_coeff(m, n) + self.field.one

    bad = Corrupt(VIRASORO_GENERIC, vg.field)
    rep = jacobi_check(bad, Window(2))
    assert rep.violations


def test_virasoro_root_center(vr3):
    # every central degree brackets to zero with the whole window
    w = Window(4)
    for m in w.points:
        if vr3.gamma_class(m) != GAMMA1:
            continue
        for n in w.points:
            assert vr3.bracket((m, TAG_L), (n, TAG_L)) == {}


def test_lambda_vanishing_criterion(vr3):
    # lambda(m, n) = 0 iff t divides m2*n1 - m1*n2
    w = Window(4)
    for m in w.points:
        for n in w.points:
            vanish = not vr3.lambda_coeff(m, n)
            assert vanish == (det2(m, n) % 3 == 0)


def test_gamma2_sum_into_center_vanishes(vr3):
    w = Window(4)
    for m in w.points:
        if vr3.gamma_class(m) != GAMMA2:
            continue
        for n in w.points:
            if vr3.gamma_class(n) != GAMMA2:
                continue
            s = (m[0] + n[0], m[1] + n[1])
            if s == (0, 0) or s not in w:
                continue
            if vr3.gamma_class(s) == GAMMA1:
                assert not vr3.lambda_coeff(m, n)


@settings(max_examples=80, deadline=None)
@given(
    m1=st.integers(-9, 9), m2=st.integers(-9, 9),
    n1=st.integers(-9, 9), n2=st.integers(-9, 9),
)
def test_bracket_antisymmetry_random(m1, m2, n1, n2):
    tr = AlgebraSpec.torus_root(4)
    if (m1, m2) == (0, 0) or (n1, n2) == (0, 0):
        return
    for a_tag in (TAG_X, TAG_D):
        for b_tag in (TAG_X, TAG_D):
            a, b = ((m1, m2), a_tag), ((n1, n2), b_tag)
            res = dict(tr.bracket(a, b))
            elem_iadd(res, tr.bracket(b, a))
            assert res == {}


def test_lemma41_all_relations_hold(tg):
    results = lemma41_relations(tg)
    assert len(results) == 12
    assert all(ok for _name, ok in results)


def test_lemma41_derived_value(tg):
    # [[x(1,0), x(0,1)], x(-1,0)] evaluates to (1-q)(q^-1-1) x(0,1) = 1/2 x(0,1) at q=2
    inner = tg.bracket(X(1, 0), X(0, 1))
    (e, coeff), = inner.items()
    outer = tg.bracket(e, X(-1, 0))
    (e2, coeff2), = outer.items()
    assert e2 == X(0, 1)
    assert coeff * coeff2 == mpq(1, 2)


def test_lemma41_wrong_variant(vg, tr3):
    with pytest.raises(UnsupportedVariantError):
        lemma41_relations(vg)
    with pytest.raises(UnsupportedVariantError):
        lemma41_relations(tr3)


def test_spec_json_round_trip(vg, tr3):
    assert AlgebraSpec.from_json(vg.to_json()).to_json() == {
        "variant": "virasoro-generic",
        "q": "2",
    }
    assert AlgebraSpec.from_json(tr3.to_json()).to_json() == {
        "variant": "torus-root",
        "t": 3,
    }
    with pytest.raises(ValueError):
        AlgebraSpec.from_json({"variant": "nope"})


def test_variant_field_pairing():
    from halfder.scalars import CyclotomicField, GenericQField

    with pytest.raises(ValueError):
        AlgebraSpec("virasoro-root", GenericQField("2"))
    with pytest.raises(ValueError):
        AlgebraSpec("torus-generic", CyclotomicField(3))
