from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhred.errors import DegenerateParameter, SingularGram
from qhred.scalars import ONE, Scalar
from qhred.suites import structure_suite
from qhred.superalg import (
    BASIS,
    build_superalgebra,
    centralizer_f,
    dual_basis,
    dual_pairing,
    grading_of,
    in_centralizer,
)


@pytest.fixture(scope="module")
def L():
    return build_superalgebra()


@pytest.fixture(scope="module")
def G(L):
    return grading_of(L)


def test_chevalley_bracket(L):
    assert L.bracket_basis("e1", "f1") == {"h1": ONE}


def test_form_on_composite_root_vectors(L):
    assert L.form_basis("e13", "f13") == -L.alpha
    assert L.form_basis("e123", "f123") == (1 + L.alpha) ** 2


def test_cartan_action(L):
    assert L.bracket_basis("h1", "e3") == {"e3": L.alpha}


def test_cartan_matrix_is_symmetric(L):
    a = L.alpha
    assert L.cartan == [[0, 1, a], [1, 0, -1 - a], [a, -1 - a, 0]]
    for i in range(3):
        for j in range(3):
            assert L.form_basis(f"h{i + 1}", f"h{j + 1}") == L.cartan[i][j]


def test_grading_table(G):
    expected = {
        "h": 0,
        "e1": Fraction(1, 2), "e2": Fraction(1, 2), "e3": Fraction(1, 2),
        "f1": Fraction(-1, 2), "f2": Fraction(-1, 2), "f3": Fraction(-1, 2),
        "e12": 1, "e13": 1, "e23": 1, "f12": -1, "f13": -1, "f23": -1,
        "e123": Fraction(3, 2), "f123": Fraction(-3, 2),
    }
    for b in BASIS:
        assert G.degree[b] == expected["h" if b[0] == "h" else b]


def test_sl2_triple(L):
    assert L.bracket(L.x, L.f) == {k: -v for k, v in L.f.items()}
    assert L.bracket(L.x, L.e) == L.e
    assert L.bracket(L.e, L.f) == L.x


def test_centralizer_dimensions(L, G):
    dims = {m: len(v) for m, v in centralizer_f(L, G).items()}
    assert dims == {Fraction(-3, 2): 1, Fraction(-1): 3, Fraction(-1, 2): 2}


def test_centralizer_at_half_is_the_expected_plane(L, G):
    a = L.alpha
    plane = centralizer_f(L, G)[Fraction(-1, 2)]
    for v in plane:
        assert in_centralizer(L, v)
    assert in_centralizer(L, {"f1": a / (a + 1), "f2": ONE})
    assert in_centralizer(L, {"f1": 1 / (a + 1), "f3": ONE})
    assert not in_centralizer(L, {"f1": ONE})


@settings(max_examples=40, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_centralizer_membership_condition(c1, c2, c3):
    # at alpha = 2, [f, sum c_i f_i] = 0 iff c1 = 2/3 c2 + 1/3 c3
    L = build_superalgebra(2)
    v = {n: Scalar(c) for n, c in (("f1", c1), ("f2", c2), ("f3", c3)) if c}
    assert in_centralizer(L, v) == (3 * c1 == 2 * c2 + c3)


def test_dual_basis_of_cartan_is_inverse_matrix(L):
    duals = dual_basis(L, ["h1", "h2", "h3"])
    for i in range(3):
        for j in range(3):
            pair = L.form({f"h{i + 1}": ONE}, duals[f"h{j + 1}"])
            assert pair == (1 if i == j else 0)


def test_dual_pairing_sends_e_to_f(L):
    d = dual_pairing(L, ["e1", "e2", "e3"], ["f1", "f2", "f3"])
    assert d["e1"] == {"f1": ONE}


def test_full_gram_is_nondegenerate(L):
    duals = dual_basis(L, list(BASIS))
    for x in BASIS:
        for y in BASIS:
            assert L.form({x: ONE}, duals[y]) == (1 if x == y else 0)


def test_singular_gram(L):
    with pytest.raises(SingularGram):
        dual_basis(L, ["e1", "e2"])


@pytest.mark.parametrize("alpha", [0, -1])
def test_degenerate_alpha(alpha):
    with pytest.raises(DegenerateParameter):
        build_superalgebra(alpha)


def test_structure_suite_symbolic():
    rep = structure_suite()
    assert rep.ok, rep.to_text()


@pytest.mark.parametrize("alpha", [1, Fraction(-1, 2), Fraction(7, 3)])
def test_structure_suite_numeric(alpha):
    rep = structure_suite(alpha)
    assert rep.ok, rep.to_text()


def test_json_export_is_deterministic():
    assert build_superalgebra().to_json() == build_superalgebra().to_json()
    assert '"schema": "qhred.superalgebra/1"' in build_superalgebra(2).to_json()
