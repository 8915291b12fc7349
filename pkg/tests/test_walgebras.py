from fractions import Fraction
from importlib import resources

import pytest

from qhred.errors import ConsistencyError, ParseError, PoleAtC
from qhred.lcaengine import derive, lambda_bracket, normal_product, render_field, render_lambda
from qhred.report import FAIL, PASS, REDUCED
from qhred.scalars import C, MU, Scalar
from qhred.suites import sv_fields, sw_points_suite
from qhred.walgebras import (
    IdealReducer,
    IdealSpec,
    Realisation,
    ideal_image,
    parse_table,
    sv_table,
    sw_table,
    verify_homomorphism,
)


@pytest.fixture(scope="module")
def SW():
    return sw_table()


@pytest.fixture(scope="module")
def SV():
    return sv_table()


@pytest.fixture(scope="module")
def shown(sv):
    return sv_fields(sv)


@pytest.fixture(scope="module")
def reducer(sv, shown):
    g = sv.generators
    seed = ideal_image(IdealSpec(), sw_table(g.c, g.eps, g.mu), g.as_dict())
    return IdealReducer(seed, shown, Fraction(7, 2))


# -- tables -------------------------------------------------------------------------


def test_sw_entry_H_W(SW):
    P = SW.bracket("H", "W")
    H = SW.parse("H")
    assert P.coeff(1) == H * MU
    assert P.coeff(0) == SW.parse("eps/2*U + MU/3*d(H)")


def test_sw_UU_quartic_term(SW):
    assert SW.bracket("U", "U").coeff(4).coeff(()) == -C / 12


def test_sw_skew_entry_is_derived(SW):
    # [G _ L] is not listed; it follows from [L _ G] by skew-symmetry
    P = SW.bracket("G", "L")
    assert P.coeff(1) == SW.parse("3/2*G")
    assert P.coeff(0) == SW.parse("1/2*d(G)")


def test_sv_table_entries(SV):
    assert SV.bracket("X", "X").coeff(3).coeff(()) == Fraction(35, 24)
    assert SV.bracket("G", "Phi").degree() == 0
    assert SV.bracket("G", "Phi").coeff(0) == SV.parse("K")
    assert SV.bracket("L", "X").coeff(3).coeff(()) == Fraction(-7, 24)


def test_sw_table_pole():
    with pytest.raises(PoleAtC):
        sw_table(Fraction(27, 2), 0)


def test_sw_table_specialises_to_sv_central_charge():
    mu = Fraction(3, 2) * Scalar("SQRT2*SQRT7")
    T = sw_table(Fraction(21, 2), 0, mu)
    assert T.bracket("G", "G").coeff(2).coeff(()) == Fraction(7, 2)
    assert T.bracket("H", "H").coeff(0) == T.parse("2*L + 2*SQRT2*SQRT7*W")


def test_round_trip(SW, SV):
    for T in (SW, SV):
        assert parse_table(T.render(), T.name) == T


def test_empty_table():
    T = parse_table("")
    assert T.names == []
    assert T.pairs() == []


def _sw_text() -> str:
    return resources.files("qhred.data").joinpath("sw_table.txt").read_text()


def test_consistent_redundant_entry_is_accepted():
    T = parse_table(_sw_text() + "[G _ L] = 3/2*lambda*G + 1/2*d(G)\n")
    assert T.bracket("G", "L").coeff(1) == T.parse("3/2*G")


def test_perturbed_entry_names_the_pair():
    with pytest.raises(ConsistencyError, match=r"\[G _ L\]"):
        parse_table(_sw_text() + "[G _ L] = 3/2*lambda*G\n")


@pytest.mark.parametrize(
    "text, where",
    [
        ("generator G odd\n", "line 1, column 1"),
        ("generator G odd 3/2\n[G G] = 1\n", "line 2, column 2"),
        ("generator G odd 3/2\n  + 1\n", "line 2, column 1"),
        ("generator G odd 3/2\nhello\n", "line 2, column 1"),
    ],
)
def test_parse_errors_carry_position(text, where):
    with pytest.raises(ParseError, match=where):
        parse_table(text)


def test_undeclared_generator():
    with pytest.raises(ParseError):
        parse_table("generator G odd 3/2\n[G _ Q] = 0\n")


# -- realisations -------------------------------------------------------------------


def test_zero_assignment_leaves_central_terms(sv, SV):
    zero = {n: sv.red.zero() for n in SV.names}
    rep = verify_homomorphism(SV, zero, pairs=[("G", "G"), ("L", "L")])
    assert [ch.status for ch in rep.checks] == [FAIL, FAIL]
    assert "lambda^2" in rep.checks[0].residual
    assert "lambda^3" in rep.checks[1].residual


def test_superconformal_subalgebra_symbolic(sym):
    g = sym.generators
    T = sw_table(g.c, g.eps, g.mu)
    rep = verify_homomorphism(T, g.as_dict(), pairs=[("L", "L"), ("L", "G"), ("G", "G")])
    assert rep.ok, rep.to_text()


def test_sw_at_a_random_point():
    rep = sw_points_suite(1, seed=7)
    assert rep.ok, rep.to_text()


def test_realisation_maps_words(sv, SV, shown):
    real = Realisation(SV, shown)
    F = SV.parse(":G L: + d(X)")
    assert real.field(F) == normal_product(shown["G"], shown["L"]) + derive(shown["X"])


def test_realisation_requires_every_generator(SV, shown):
    with pytest.raises(KeyError):
        Realisation(SV, {"G": shown["G"]})


# -- the ideal at the SV point -------------------------------------------------------


def test_ideal_seed_is_a_weight_7_2_odd_field(reducer):
    assert reducer.seed
    assert reducer.seed.weight() == Fraction(7, 2)
    assert reducer.seed.parity() == 1


def test_ideal_components(reducer):
    assert len(reducer.component(Fraction(7, 2))) == 1
    assert reducer.component(3) == []


def test_reduction_modulo_the_ideal(reducer, shown):
    res, combo = reducer.reduce(reducer.seed * 5)
    assert res.is_zero() and combo
    res, combo = reducer.reduce(shown["L"])
    assert res == shown["L"] and not combo


def test_sv_brackets_below_cutoff_hold_exactly(SV, shown):
    pairs = [p for p in SV.pairs() if "M" not in p]
    rep = verify_homomorphism(SV, shown, pairs=pairs)
    assert rep.ok, rep.to_text()


def test_XM_holds_modulo_the_ideal(SV, shown, reducer):
    rep = verify_homomorphism(SV, shown, pairs=[("X", "M")])
    assert rep.checks[0].status == FAIL
    rep = verify_homomorphism(SV, shown, reducer=reducer, pairs=[("X", "M")])
    assert rep.checks[0].status == REDUCED


def test_XM_residual_is_a_multiple_of_the_seed(SV, shown, reducer):
    real = Realisation(SV, shown)
    diff = lambda_bracket(shown["X"], shown["M"]) - real.poly(SV.bracket("X", "M"))
    assert diff.degree() == 0
    assert diff.coeff(0) == reducer.seed * Fraction(-1, 3)


def test_KM_as_shipped_holds_exactly(SV, shown):
    rep = verify_homomorphism(SV, shown, pairs=[("K", "M")])
    assert rep.checks[0].status == PASS


def test_KM_with_opposite_sign_leaves_L_Phi(SV, shown):
    lines = [ln for ln in SV.render().splitlines() if ln.startswith("[K _ M]")]
    assert lines, "K-M entry missing from render"
    # 3*(:G K: - 2*:L Phi:) becomes 3*(:G K: + 2*:L Phi:)
    flipped = SV.bracket("K", "M") + SV.parse(":L Phi:") * 12
    text = SV.render().replace(lines[0], f"[K _ M] = {render_lambda(flipped)}")
    T = parse_table(text, "sv-variant", check=False)
    real = Realisation(T, shown)
    diff = lambda_bracket(shown["K"], shown["M"]) - real.poly(T.bracket("K", "M"))
    assert diff.degree() == 0
    assert diff.coeff(0) == normal_product(shown["L"], shown["Phi"]) * -12


def test_sv_display_renders_are_stable(shown):
    for F in shown.values():
        assert render_field(F) == F.render()
