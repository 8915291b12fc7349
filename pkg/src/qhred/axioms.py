"""Property checks of the lambda-bracket engine.

Every identity is assembled from independent engine calls on simpler
pieces and compared with the engine's direct answer:

- sesquilinearity in both arguments;
- skew-symmetry against :func:`skew_bracket`;
- Jacobi with two formal variables (lambda, mu);
- the right Wick formula, with its integral term;
- quasi-commutativity and quasi-associativity of the normal product;
- the weight grading of bracket coefficients and normal products.

Defects are raw dictionaries; an empty one means the identity holds.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from math import comb
from typing import Callable, Iterable

from .lcaengine import (
    MAXDER,
    SHIFT,
    Ambient,
    FieldExpr,
    LambdaPoly,
    _add,
    derive,
    lambda_bracket,
    normal_product,
    skew_bracket,
)
from .report import FAIL, PASS, Check, Report
from .scalars import as_scalar

Raw2 = dict[tuple[int, int], dict]


def _sign(a: FieldExpr, b: FieldExpr) -> int:
    return -1 if (a.parity() and b.parity()) else 1


def _acc(out: Raw2, key: tuple[int, int], F: FieldExpr, c=1) -> None:
    if not F.terms:
        return
    slot = out.setdefault(key, {})
    _add(slot, F.terms, as_scalar(c))
    if not slot:
        del out[key]


def sesquilinearity_defect(a: FieldExpr, b: FieldExpr) -> LambdaPoly:
    """([da _l b] + l[a_l b]) + ([a _l db] - (l + d)[a_l b])."""
    amb = a.ambient
    P = lambda_bracket(a, b)
    lam = LambdaPoly.lam(amb)
    left = lambda_bracket(derive(a), b) + lam * P
    shifted = LambdaPoly(amb, {n: derive(P.coeff(n)).terms for n in P.coeffs})
    right = lambda_bracket(a, derive(b)) - lam * P - shifted
    return left + right


def skew_defect(a: FieldExpr, b: FieldExpr) -> LambdaPoly:
    """[a_l b] + (-1)^{ab}[b_{-l-d} a]."""
    return lambda_bracket(a, b) - skew_bracket(a, b)


def jacobi_defect(a: FieldExpr, b: FieldExpr, c: FieldExpr) -> Raw2:
    """[a_l[b_m c]] - (-1)^{ab}[b_m[a_l c]] - [[a_l b]_{l+m} c], keyed by (l, m) powers."""
    out: Raw2 = {}
    s = _sign(a, b)
    inner = lambda_bracket(b, c)
    for j in inner.coeffs:
        outer = lambda_bracket(a, inner.coeff(j))
        for i in outer.coeffs:
            _acc(out, (i, j), outer.coeff(i))
    inner = lambda_bracket(a, c)
    for i in inner.coeffs:
        outer = lambda_bracket(b, inner.coeff(i))
        for j in outer.coeffs:
            _acc(out, (i, j), outer.coeff(j), -s)
    ab = lambda_bracket(a, b)
    for n in ab.coeffs:
        outer = lambda_bracket(ab.coeff(n), c)
        for m in outer.coeffs:
            X = outer.coeff(m)
            for r in range(m + 1):
                _acc(out, (n + r, m - r), X, -comb(m, r))
    return out


def wick_defect(a: FieldExpr, b: FieldExpr, c: FieldExpr) -> LambdaPoly:
    """[a_l :bc:] - :[a_l b]c: - (-1)^{ab}:b[a_l c]: - int_0^l [[a_l b]_m c] dm."""
    amb = a.ambient
    s = _sign(a, b)
    out = lambda_bracket(a, normal_product(b, c))
    ab = lambda_bracket(a, b)
    ac = lambda_bracket(a, c)
    terms: dict[int, dict] = {}
    for n in ab.coeffs:
        _add(terms.setdefault(n, {}), normal_product(ab.coeff(n), c).terms)
        inner = lambda_bracket(ab.coeff(n), c)
        for m in inner.coeffs:
            _add(terms.setdefault(n + m + 1, {}), inner.coeff(m).terms, as_scalar(Fraction(1, m + 1)))
    for n in ac.coeffs:
        _add(terms.setdefault(n, {}), normal_product(b, ac.coeff(n)).terms, as_scalar(s))
    return out - LambdaPoly(amb, terms)


def quasi_commutativity_defect(a: FieldExpr, b: FieldExpr) -> FieldExpr:
    """:ab: - (-1)^{ab}:ba: - int_{-d}^0 [a_l b] dl."""
    s = _sign(a, b)
    out = normal_product(a, b) - normal_product(b, a) * s
    P = lambda_bracket(a, b)
    for n in P.coeffs:
        out = out - derive(P.coeff(n), n + 1) * Fraction((-1) ** n, n + 1)
    return out


def quasi_associativity_defect(a: FieldExpr, b: FieldExpr, c: FieldExpr) -> FieldExpr:
    """::ab:c: - :a:bc:: - :(int_0^d a)[b_l c]: - (-1)^{ab}:(int_0^d b)[a_l c]:."""
    s = _sign(a, b)
    out = normal_product(normal_product(a, b), c) - normal_product(a, normal_product(b, c))
    for x, y, sign in ((a, b, 1), (b, a, s)):
        P = lambda_bracket(y, c)
        for n in P.coeffs:
            out = out - normal_product(derive(x, n + 1), P.coeff(n)) * Fraction(sign, n + 1)
    return out


def grading_defect(a: FieldExpr, b: FieldExpr) -> list[str]:
    """Bracket coefficients or the normal product sitting at the wrong weight."""
    wa, wb = a.weight(), b.weight()
    bad = []
    P = lambda_bracket(a, b)
    for n in P.coeffs:
        ws = P.coeff(n).weights()
        if ws != {wa + wb - n - 1}:
            bad.append(f"lambda^{n}: {sorted(ws)}")
    N = normal_product(a, b)
    if N and N.weights() != {wa + wb}:
        bad.append(f"normal product: {sorted(N.weights())}")
    return bad


# ---------------------------------------------------------------------------
# sampling


def letters(amb: Ambient, max_weight: Fraction) -> list[int]:
    """Non-marker letters of positive weight up to max_weight."""
    out = []
    for i, g in enumerate(amb.gens):
        if g.kind == "marker" or g.weight <= 0:
            continue
        n = 0
        while g.weight + n <= max_weight and n <= MAXDER:
            out.append(i << SHIFT | n)
            n += 1
    return out


def random_word(amb: Ambient, rng: random.Random, max_weight=Fraction(5, 2), max_len: int = 3) -> FieldExpr:
    """A random nonzero normally ordered word of weight at most max_weight."""
    pool = letters(amb, Fraction(max_weight))
    while True:
        picked = []
        budget = Fraction(max_weight)
        for _ in range(rng.randint(1, max_len)):
            fits = [x for x in pool if amb.gens[x >> SHIFT].weight + (x & MAXDER) <= budget]
            if not fits:
                break
            x = rng.choice(fits)
            picked.append(x)
            budget -= amb.gens[x >> SHIFT].weight + (x & MAXDER)
        F = amb.word(*picked)
        if F:
            return F * Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))


def generator_fields(amb: Ambient) -> list[FieldExpr]:
    return [amb.gen(g.name) for g in amb.gens if g.kind != "marker"]


# ---------------------------------------------------------------------------
# suite


def _is_zero(d) -> bool:
    if isinstance(d, (FieldExpr, LambdaPoly)):
        return d.is_zero()
    return not d


def _render(d, amb: Ambient) -> str:
    if isinstance(d, (FieldExpr, LambdaPoly)):
        return d.render()
    if isinstance(d, list):
        return "; ".join(d)
    return "; ".join(f"l^{i} m^{j}: {FieldExpr(amb, F).render()}" for (i, j), F in sorted(d.items()))


def _check(
    ident: str, cases: Iterable[tuple], fn: Callable, detail: dict | None = None
) -> Check:
    t0 = time.perf_counter()
    count = 0
    for args in cases:
        count += 1
        d = fn(*args)
        if not _is_zero(d):
            where = " , ".join(x.render() for x in args)
            info = dict(detail or {}, cases=count, failing_input=where)
            return Check(ident, FAIL, _render(d, args[0].ambient), time.perf_counter() - t0, info)
    return Check(ident, PASS, "", time.perf_counter() - t0, dict(detail or {}, cases=count))


def check_ambient(
    amb: Ambient,
    rng: random.Random,
    n_random: int = 100,
    max_weight=Fraction(5, 2),
    triples: bool = True,
) -> list[Check]:
    """All engine identities on generator pairs/triples and random words of amb."""
    gens = generator_fields(amb)
    pairs = [(a, b) for a in gens for b in gens]
    tag = amb.name
    checks = [
        _check(f"sesquilinearity/{tag}/generators", pairs, sesquilinearity_defect),
        _check(f"skew-symmetry/{tag}/generators", pairs, skew_defect),
        _check(f"quasi-commutativity/{tag}/generators", pairs, quasi_commutativity_defect),
        _check(f"grading/{tag}/generators", pairs, grading_defect),
    ]
    if triples:
        tri = [(a, b, c) for a in gens for b in gens for c in gens]
        checks += [
            _check(f"jacobi/{tag}/generators", tri, jacobi_defect),
            _check(f"wick/{tag}/generators", tri, wick_defect),
            _check(f"quasi-associativity/{tag}/generators", tri, quasi_associativity_defect),
        ]
    words = [random_word(amb, rng, max_weight) for _ in range(3 * n_random)]
    rp = [(words[i], words[i + 1]) for i in range(0, 2 * n_random, 2)]
    rt = [(words[i], words[i + n_random], words[i + 2 * n_random]) for i in range(n_random)]
    detail = {"max_weight": str(max_weight)}
    checks += [
        _check(f"sesquilinearity/{tag}/random", rp, sesquilinearity_defect, detail),
        _check(f"skew-symmetry/{tag}/random", rp, skew_defect, detail),
        _check(f"quasi-commutativity/{tag}/random", rp, quasi_commutativity_defect, detail),
        _check(f"grading/{tag}/random", rp, grading_defect, detail),
        _check(f"jacobi/{tag}/random", rt, jacobi_defect, detail),
        _check(f"wick/{tag}/random", rt, wick_defect, detail),
        _check(f"quasi-associativity/{tag}/random", rt, quasi_associativity_defect, detail),
    ]
    return checks


def engine_ambients(alpha=Fraction(3, 2), k=Fraction(-5, 7)) -> list[tuple[Ambient, bool]]:
    """Test ambients: (ambient, run all generator triples)."""
    from .freefield import FreeField
    from .reduction import Reduction

    red = Reduction(alpha, k)
    free = FreeField(red).ambient
    return [(free, True), (red.red, True), (red.complex, True)]


def run_axioms(seed: int = 0, n_random: int = 100, max_weight=Fraction(5, 2), alpha=Fraction(3, 2), k=Fraction(-5, 7)) -> Report:
    rng = random.Random(seed)
    rep = Report("axioms", info={"seed": seed, "random_cases": n_random, "alpha": str(alpha), "k": str(k)})
    for amb, triples in engine_ambients(alpha, k):
        for c in check_ambient(amb, rng, n_random, max_weight, triples):
            rep.add(c)
    return rep


__all__ = [
    "sesquilinearity_defect",
    "skew_defect",
    "jacobi_defect",
    "wick_defect",
    "quasi_commutativity_defect",
    "quasi_associativity_defect",
    "grading_defect",
    "random_word",
    "check_ambient",
    "run_axioms",
]
