import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhred.axioms import (
    check_ambient,
    grading_defect,
    jacobi_defect,
    quasi_associativity_defect,
    quasi_commutativity_defect,
    random_word,
    sesquilinearity_defect,
    skew_defect,
    wick_defect,
)
from qhred.errors import ParityMismatch, UndefinedBracket
from qhred.lcaengine import (
    Ambient,
    GeneratorSymbol,
    LambdaPoly,
    derive,
    equal,
    lambda_bracket,
    normal_product,
    nth_product,
    parse_field,
    parse_lambda,
    render_field,
    render_lambda,
    zero_mode,
)
from qhred.scalars import A, K, ONE


def fermions_and_currents() -> Ambient:
    """Three neutral fermions with the D(2,1;a) pairing and two Cartan currents."""
    amb = Ambient("toy")
    for i in (1, 2, 3):
        amb.add_generator(GeneratorSymbol(f"Phi{i}", 1, Fraction(1, 2), "neutral"))
    for i in (1, 2):
        amb.add_generator(GeneratorSymbol(f"h{i}", 0, Fraction(1), "current"))
    amb.set_bracket("Phi1", "Phi2", {0: -1})
    amb.set_bracket("Phi1", "Phi3", {0: -A})
    amb.set_bracket("Phi2", "Phi3", {0: 1 + A})
    amb.set_bracket("h1", "h2", {1: K})
    return amb


@pytest.fixture(scope="module")
def toy():
    return fermions_and_currents()


def test_bracket_of_fermions(toy):
    P = lambda_bracket(toy.gen("Phi1"), toy.gen("Phi2"))
    assert P.degree() == 0
    assert P.coeff(0) == toy.scalar(-1)


def test_skew_filled_bracket(toy):
    P = lambda_bracket(toy.gen("Phi3"), toy.gen("Phi2"))
    assert P.coeff(0) == toy.scalar(1 + A)


def test_current_bracket(toy):
    P = lambda_bracket(toy.gen("h1"), toy.gen("h2"))
    assert P == LambdaPoly.lam(toy) * toy.scalar(K)
    assert not lambda_bracket(toy.gen("h1"), toy.gen("h1"))


def test_sesquilinearity_example(toy):
    P = lambda_bracket(derive(toy.gen("Phi1")), toy.gen("Phi2"))
    assert P == LambdaPoly.lam(toy)


def test_derivative_of_vacuum(toy):
    assert derive(toy.one()).is_zero()


def test_leibniz(toy):
    a, b = toy.gen("h1"), toy.gen("Phi1")
    lhs = derive(normal_product(a, b))
    rhs = normal_product(derive(a), b) + normal_product(a, derive(b))
    assert lhs == rhs


def test_vacuum_is_unit(toy):
    a = toy.gen("h2")
    assert normal_product(toy.one(), a) == a
    assert normal_product(a, toy.one()) == a


def test_odd_square_vanishes(toy):
    p = toy.gen("Phi1")
    assert normal_product(p, p).is_zero()


def test_odd_square_with_nonzero_self_bracket():
    amb = Ambient("one fermion")
    amb.add_generator(GeneratorSymbol("psi", 1, Fraction(1, 2), "neutral"))
    amb.set_bracket("psi", "psi", {0: 1})
    psi = amb.gen("psi")
    # :psi psi: = 1/2 int_{-d}^0 [psi_l psi] = 0 since the bracket is constant
    assert normal_product(psi, psi).is_zero()
    # :d(psi) psi: does not vanish
    assert normal_product(derive(psi), psi)


@pytest.mark.parametrize("pair", [("Phi1", "Phi2"), ("h1", "Phi3"), ("h1", "h2"), ("Phi2", "Phi3")])
def test_quasi_commutativity_on_generators(toy, pair):
    a, b = (toy.gen(n) for n in pair)
    assert quasi_commutativity_defect(a, b).is_zero()
    assert quasi_commutativity_defect(derive(a), b).is_zero()


def test_zero_mode_on_vacuum(toy):
    for n in ("Phi1", "h1", "h2"):
        assert zero_mode(toy.gen(n), toy.one()).is_zero()


def test_zero_mode_is_lambda_zero_coefficient(toy):
    a = normal_product(toy.gen("h1"), toy.gen("Phi1"))
    b = normal_product(toy.gen("h2"), toy.gen("Phi2"))
    assert zero_mode(a, b) == lambda_bracket(a, b).coeff(0)
    assert nth_product(a, b, 1) == lambda_bracket(a, b).coeff(1)


def test_equal_ignores_zero_summands(toy):
    a = toy.gen("h1")
    assert equal(a, a + toy.zero())
    assert equal(a + 0 * toy.gen("h2"), a)


def test_skew_symmetry_on_generator_pairs(toy):
    gens = [toy.gen(g.name) for g in toy.gens]
    for a in gens:
        for b in gens:
            assert skew_defect(a, b).is_zero()


def test_jacobi_on_generator_triples(toy):
    gens = [toy.gen(g.name) for g in toy.gens]
    for a in gens:
        for b in gens:
            for c in gens:
                assert not jacobi_defect(a, b, c)


def test_parity_of_mixed_sum_raises(toy):
    mixed = toy.gen("Phi1") + toy.gen("h1")
    with pytest.raises(ParityMismatch):
        mixed.parity()


def test_parity_and_weight_compose(toy):
    w = normal_product(toy.gen("Phi1"), normal_product(toy.gen("h1"), derive(toy.gen("Phi2"))))
    assert w.parity() == 0
    assert w.weight() == Fraction(1, 2) + 1 + Fraction(3, 2)


def test_render_parse_round_trip(toy):
    text = "2*a*:Phi1 d(Phi2) h1: - k*d^2(h2) + 1/(a+1)*:h1 h1:"
    F = parse_field(text, toy)
    assert parse_field(render_field(F), toy) == F
    P = lambda_bracket(F, F)
    assert parse_lambda(render_lambda(P), toy) == P


def test_parse_respects_normal_ordering(toy):
    # :Phi2 Phi1: = -:Phi1 Phi2: for odd letters with a constant bracket
    assert parse_field(":Phi2 Phi1:", toy) == -parse_field(":Phi1 Phi2:", toy)


def test_duplicate_generator_rejected(toy):
    amb = fermions_and_currents()
    with pytest.raises(ValueError):
        amb.add_generator(GeneratorSymbol("h1", 0, Fraction(1)))


def test_marker_rules():
    amb = Ambient("marker")
    amb.add_generator(GeneratorSymbol("h", 0, Fraction(1)))
    amb.add_generator(GeneratorSymbol("Gam", 0, Fraction(0), "marker"))
    amb.set_bracket("h", "h", {1: 1})
    amb.set_marker_derivative("Gam", ":h Gam:")
    G = amb.gen("Gam")
    assert derive(G) == amb.parse(":h Gam:")
    with pytest.raises(ValueError):
        amb.set_bracket("Gam", "h", {0: 1})
    with pytest.raises(UndefinedBracket):
        amb.word(amb.letter("Gam"), amb.letter("h"))


def test_broken_jacobi_is_detected():
    amb = Ambient("broken")
    for n in ("a", "b", "c"):
        amb.add_generator(GeneratorSymbol(n, 0, Fraction(1)))
    amb.set_bracket("a", "b", "a")
    amb.set_bracket("a", "c", "b")
    a, b, c = amb.gen("a"), amb.gen("b"), amb.gen("c")
    defects = [jacobi_defect(x, y, z) for x in (a, b, c) for y in (a, b, c) for z in (a, b, c)]
    assert any(defects)


def test_check_ambient_flags_broken_table():
    amb = Ambient("broken")
    for n in ("a", "b", "c"):
        amb.add_generator(GeneratorSymbol(n, 0, Fraction(1)))
    amb.set_bracket("a", "b", "a")
    amb.set_bracket("a", "c", "b")
    checks = check_ambient(amb, random.Random(0), 5, Fraction(2), True)
    assert any(ch.status != "pass" for ch in checks)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_words_satisfy_axioms(seed):
    amb = fermions_and_currents()
    rng = random.Random(seed)
    a = random_word(amb, rng, Fraction(5, 2), 2)
    b = random_word(amb, rng, Fraction(5, 2), 2)
    c = random_word(amb, rng, Fraction(3, 2), 2)
    assert sesquilinearity_defect(a, b).is_zero()
    assert skew_defect(a, b).is_zero()
    assert not jacobi_defect(a, b, c)
    assert wick_defect(a, b, c).is_zero()
    assert quasi_commutativity_defect(a, b).is_zero()
    assert quasi_associativity_defect(a, b, c).is_zero()
    assert not grading_defect(a, b)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_canonical_form_is_order_independent(seed):
    amb = fermions_and_currents()
    rng = random.Random(seed)
    words = [random_word(amb, rng, Fraction(5, 2), 3) for _ in range(4)]
    total = amb.zero()
    for w in words:
        total = total + w
    rng.shuffle(words)
    other = amb.zero()
    for w in reversed(words):
        other = w + other
    assert total == other
    assert render_field(total) == render_field(other)
    assert parse_field(render_field(total), amb) == total


def test_coefficient_field_is_symbolic(toy):
    P = lambda_bracket(toy.gen("Phi1"), toy.gen("Phi3"))
    assert P.coeff(0).coeff(()) == -A
    assert ONE * P.coeff(0) == P.coeff(0)
