import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhred.freefield import FreeField, kernel_intersection_dims, kernel_jump_level, random_generic_point
from qhred.lcaengine import FieldExpr, derive, lambda_bracket, normal_product
from qhred.reduction import Reduction, reference_fields
from qhred.report import NONGENERIC
from qhred.scalars import ONE
from qhred.suites import kernel_suite, random_points, screenings_suite, sv_fields


@pytest.fixture(scope="module")
def num_free(num):
    return FreeField(num)


@pytest.fixture(scope="module")
def generic():
    a, k = random_points(1, 11)[0]
    return FreeField(Reduction(a, k))


def test_marker_rules_are_sesquilinear(sv_free, generic):
    for ff in (sv_free, generic):
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                assert ff.gamma_consistency_defect(i, j).is_zero()


def test_wrong_marker_derivative_is_inconsistent(sv):
    ff = FreeField(sv, gamma_derivative=-1)
    bad = [(i, j) for i in (1, 2, 3) for j in (1, 2, 3) if ff.gamma_consistency_defect(i, j)]
    assert bad


def test_screenings_are_odd_of_weight_one_half(sv_free):
    for Q in sv_free.screenings.values():
        assert Q.parity() == 1
        assert Q.weight() == Fraction(1, 2)


def test_screening_on_vacuum(sv_free):
    for i in (1, 2, 3):
        assert sv_free.zero_mode(i, sv_free.ambient.one()).is_zero()


def test_screening_on_cartan_currents_follows_the_cartan_matrix(sv_free):
    amb = sv_free.ambient
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            r = sv_free.zero_mode(i, amb.gen(f"hb{j}"))
            assert bool(r) == bool(sv_free.cartan[i - 1][j - 1]), (i, j)
    r = sv_free.zero_mode(2, amb.gen("hb1"))
    assert r == amb.word(amb.letter("Phi2"), amb.letter("Gamma2")) * (sv_free.momentum * -1)


def test_projection_of_G_matches_display(sv, sv_free):
    want = sv_free.project(sv.parse(reference_fields("sv-free")["G"]))
    got = sv_free.project(sv.generators.G)
    assert got == want
    assert got


def test_projection_of_Phi_matches_display(sv, sv_free):
    want = sv_free.project(sv.parse(reference_fields("sv-free")["Phi"]))
    assert sv_free.project(sv_fields(sv)["Phi"]) == want


def test_projection_drops_f_currents(sv, sv_free):
    amb = sv.red
    assert sv_free.project(amb.gen("f1")).is_zero()
    assert sv_free.project(normal_product(amb.gen("h1"), amb.gen("f12"))).is_zero()


def test_projection_rescales_cartan_currents(sv, sv_free):
    F = sv_free.project(sv.red.gen("h2"))
    assert F == sv_free.ambient.gen("hb2") * sv_free.sqrt_k


def _random_g0_word(red: Reduction, rng: random.Random) -> FieldExpr:
    amb = red.red
    names = ["h1", "h2", "h3", "Phi1", "Phi2", "Phi3"]
    F = amb.one()
    for _ in range(rng.randint(1, 2)):
        F = normal_product(derive(amb.gen(rng.choice(names)), rng.randint(0, 1)), F)
    return F * rng.randint(1, 4)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_projection_is_a_homomorphism_on_g0_and_fermions(num_free, seed):
    red, ff = num_free.red, num_free
    rng = random.Random(seed)
    a, b = _random_g0_word(red, rng), _random_g0_word(red, rng)
    P = ff.project
    assert P(derive(a)) == derive(P(a))
    assert P(normal_product(a, b)) == normal_product(P(a), P(b))
    lhs = lambda_bracket(a, b)
    rhs = lambda_bracket(P(a), P(b))
    assert set(lhs.coeffs) == set(rhs.coeffs)
    for j in lhs.coeffs:
        assert P(lhs.coeff(j)) == rhs.coeff(j)


def test_generators_are_annihilated_at_random_points():
    rep = screenings_suite(random_points(3, 0), include_sv=False)
    assert rep.ok, rep.to_text()


def test_sv_fields_are_annihilated(sv, sv_free):
    for n, F in sv_fields(sv).items():
        assert sv_free.annihilated(sv_free.project(F)), n


def test_ordinary_field_is_not_annihilated(sv, sv_free):
    X = sv_free.project(normal_product(sv.red.gen("h1"), sv.red.gen("h1")))
    assert not sv_free.annihilated(X)


def test_kernel_low_weights(generic):
    assert generic.kernel_dimension(0) == (1, 1)
    space, ker = generic.kernel_dimension(Fraction(1, 2))
    assert space == 3 and ker == 0


def test_kernel_matches_generated_span():
    a, k = random_points(1, 5)[0]
    rows = kernel_intersection_dims(a, k, Fraction(3))
    table = {r.weight: (r.space, r.kernel, r.generated) for r in rows}
    assert table[Fraction(3, 2)][1:] == (2, 2)
    assert table[Fraction(2)][1:] == (3, 3)
    for r in rows:
        assert r.kernel == r.generated, r


def test_kernel_suite_reports_rows():
    a, k = random_points(1, 2)[0]
    rep = kernel_suite(a, k, Fraction(2))
    assert rep.ok, rep.to_text()
    assert [r["weight"] for r in rep.info["rows"]] == ["0", "1/2", "1", "3/2", "2"]


def test_random_generic_points_avoid_the_sv_points():
    rng = random.Random(0)
    for _ in range(5):
        a, k = random_generic_point(rng)
        assert a not in (1, -2, Fraction(-1, 2))
        assert Reduction(a, k).c * 2 != 27


def test_free_parse_knows_dual_fermions(sv_free):
    F = sv_free.parse("PhiU1")
    assert F.parity() == 1
    assert F.coeff((sv_free.ambient.letter("Phi2"),)) == ONE * Fraction(-1, 2)


@pytest.mark.parametrize("k", [Fraction(1), Fraction(2, 3), Fraction(-5, 3)])
def test_kernel_jumps_at_exceptional_levels(k):
    # alpha = 2/3: the levels 1, alpha, -1-alpha carry extra kernel at weight 5/2
    rep = kernel_suite(Fraction(2, 3), k, Fraction(5, 2))
    assert rep.info["generic"] is False
    assert rep.ok
    row = rep.info["rows"][-1]
    assert (row["kernel"], row["generated"]) == (4, 3)
    assert rep.checks[-1].status == NONGENERIC


def test_exceptional_levels_are_never_sampled():
    for a, k in random_points(20, 3):
        assert not kernel_jump_level(a, k)
