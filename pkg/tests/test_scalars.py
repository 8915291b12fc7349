import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhred.errors import InconsistentRadical, ParseError, PoleAtPoint, ZeroDenominator
from qhred.reduction import central_charge_closed, rho_squared
from qhred.scalars import (
    A,
    C,
    EPS,
    I,
    K,
    MU,
    ONE,
    RHO,
    SQRTK,
    ZERO,
    ParamPoint,
    Scalar,
    render_scalar,
    specialize,
    sqrt_rational,
    substitute,
)

ATOMS = [A, K, C, EPS, I, SQRTK, MU, RHO]


@st.composite
def scalars(draw, depth=2):
    """Small random scalars: sums of products of atoms with rational weights."""
    out = ZERO
    for _ in range(draw(st.integers(1, 3))):
        term = Scalar(Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4))))
        for _ in range(draw(st.integers(0, depth))):
            term = term * draw(st.sampled_from(ATOMS))
        out = out + term
    if draw(st.booleans()):
        den = A + draw(st.integers(1, 3)) * K + draw(st.integers(1, 3))
        out = out / den
    return out


def test_imaginary_unit_squares_to_minus_one():
    assert I * I == -1


def test_sqrtk_squares_to_k():
    assert SQRTK * SQRTK == K


def test_mu_squared_relation():
    assert MU * MU == Fraction(9, 2) * C * (4 + EPS**2) / (27 - 2 * C)
    assert (2 * (27 - 2 * C) * MU * MU - 9 * C * (4 + EPS**2)).is_zero()


def test_rho_squared_relation():
    assert RHO * RHO == rho_squared(A, K)


def test_zero_and_polynomial_identity():
    assert ZERO.is_zero()
    assert ((A - 1) * (A + 1) - (A**2 - 1)).is_zero()
    assert not (A - 1).is_zero()


def test_division_by_zero_raises():
    with pytest.raises(ZeroDenominator):
        ONE / (A - A)


def test_central_charge_at_sv_point():
    c = central_charge_closed(A, K)
    assert specialize(c, ParamPoint({"a": 1, "k": Fraction(-2, 3)})) == Fraction(21, 2)


def test_rho_squared_at_sv_point_matches_direct_arithmetic():
    a, k = Fraction(1), Fraction(-2, 3)
    direct = Fraction(-3, 2) * (-1 + 2 * k) * a**2 * (1 + a) ** 2 * (2 * k + 4 * k**2 - a * (1 + a))
    assert direct == Fraction(-196, 9)
    assert specialize(RHO * RHO, ParamPoint({"a": a, "k": k})) == direct
    # the canonical root is +14/3 i
    assert specialize(RHO, ParamPoint({"a": a, "k": k})) == Fraction(14, 3) * I


def test_specialize_linear_factor_to_zero():
    assert specialize(A - 1, ParamPoint({"a": 1})).is_zero()


def test_specialize_pole_raises():
    with pytest.raises(PoleAtPoint):
        specialize(1 / (A - 1), ParamPoint({"a": 1}))


def test_inconsistent_radical_value_raises():
    with pytest.raises(InconsistentRadical):
        specialize(SQRTK, ParamPoint({"k": 4}, {"SQRTK": Scalar(3)}))


def test_explicit_radical_value_is_used():
    assert specialize(SQRTK, ParamPoint({"k": 4}, {"SQRTK": Scalar(-2)})) == -2
    assert specialize(SQRTK, ParamPoint({"k": 4})) == 2


def test_irrational_root_gets_a_radical():
    r = sqrt_rational(Fraction(3, 2))
    assert r * r == Fraction(3, 2)
    assert not r.is_rational()
    s = sqrt_rational(-8)
    assert s * s == -8


def test_mu_at_sv_point():
    mu = Fraction(3, 2) * sqrt_rational(14)
    got = specialize(MU * MU, ParamPoint({"c": Fraction(21, 2), "eps": 0}, {"MU": mu}))
    assert got == Fraction(63, 2)


def test_render_is_reparsable():
    x = (3 * A**2 * K - 1) / (2 * (A + 1)) + I * SQRTK
    assert Scalar(render_scalar(x)) == x
    assert render_scalar(Scalar(render_scalar(x))) == render_scalar(x)


def test_parse_error_on_garbage():
    with pytest.raises(ParseError):
        Scalar("1 + * a")


def test_flip_is_the_sign_automorphism():
    x = 2 + RHO * A + MU * RHO
    assert x.flip("RHO") == 2 - RHO * A - MU * RHO
    assert x.flip("RHO").flip("RHO") == x


@settings(max_examples=60, deadline=None)
@given(scalars(), scalars(), scalars())
def test_distributivity(a, b, c):
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(scalars())
def test_inverse(a):
    if a.is_zero():
        return
    assert a * a.inverse() == 1


@settings(max_examples=60, deadline=None)
@given(scalars(), scalars())
def test_specialize_is_a_ring_homomorphism(a, b):
    p = ParamPoint({"a": Fraction(2, 3), "k": Fraction(-5, 2), "c": 3, "eps": Fraction(1, 2)},
                   {"SQRTK": sqrt_rational(Fraction(-5, 2))})
    try:
        sa, sb = specialize(a, p), specialize(b, p)
    except PoleAtPoint:
        return
    assert specialize(a * b, p) == sa * sb
    assert specialize(a + b, p) == sa + sb


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(ATOMS + [Scalar(2), A + 1]), min_size=2, max_size=8), st.randoms(use_true_random=False))
def test_radical_reduction_is_order_independent(factors, rnd):
    prod = ONE
    for f in factors:
        prod = prod * f
    shuffled = list(factors)
    rnd.shuffle(shuffled)
    other = ONE
    for f in shuffled:
        other = f * other
    assert prod == other
    assert render_scalar(prod) == render_scalar(other)


@settings(max_examples=60, deadline=None)
@given(scalars())
def test_render_round_trip(a):
    assert Scalar(render_scalar(a)) == a


def test_substitute_nested_values():
    x = substitute(A * K, {"a": K + 1})
    assert x == K * K + K
    assert substitute(SQRTK, {"k": 9}) == 3


def test_determinism_across_insertion_order():
    terms = [A, 2 * K, I, MU * RHO, Fraction(1, 3)]
    rng = random.Random(3)
    renders = set()
    for _ in range(5):
        rng.shuffle(terms)
        s = ZERO
        for t in terms:
            s = s + t
        renders.add(render_scalar(s))
    assert len(renders) == 1
