"""Named verification suites, each returning a :class:`Report`.

The command line and the acceptance tests both run these; a suite never
raises on a failed identity, it records the failure in its report.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Iterable, Sequence

from .freefield import FreeField, kernel_intersection_dims, kernel_jump_level, random_generic_point
from .lcaengine import FieldExpr, lambda_bracket
from .reduction import (
    PARITIES,
    SV_POINT,
    SV_POINTS,
    WEIGHTS,
    Reduction,
    central_charge_closed,
    mu_squared,
    reference_fields,
)
from .report import FAIL, NONGENERIC, PASS, Check, Report, digest
from .scalars import Scalar, as_scalar, render_scalar, sqrt_rational
from .superalg import BASIS, build_superalgebra, centralizer_f, grading_of
from .walgebras import (
    BracketTable,
    IdealReducer,
    IdealSpec,
    ideal_image,
    sv_table,
    sw_table,
    verify_homomorphism,
)

SIGNS = ((1, 1), (-1, 1), (1, -1), (-1, -1))


def _timed(rep: Report, ident: str, ok: bool, t0: float, residual: str = "", **detail) -> None:
    rep.add(Check(ident, PASS if ok else FAIL, "" if ok else residual, time.perf_counter() - t0, detail))


def _pt(alpha, k) -> dict:
    return {"alpha": "symbolic" if alpha is None else str(alpha), "k": "symbolic" if k is None else str(k)}


# ---------------------------------------------------------------------------
# central charge


def central_charge_suite(alpha=None, k=None, points: Sequence = SV_POINTS) -> Report:
    """Closed form, term-by-term formula and the lambda^3 term of [L_l L]."""
    rep = Report("central-charge", info=_pt(alpha, k))
    red = Reduction(alpha, k)
    t0 = time.perf_counter()
    closed = central_charge_closed(red.alpha, red.k)
    formula = red.central_charge_formula()
    _timed(rep, "formula = closed form", formula == closed, t0, render_scalar(formula - closed))
    t0 = time.perf_counter()
    LL = lambda_bracket(red.L_complex, red.L_complex)
    c3 = LL.coeff(3).coeff(()) * 12
    _timed(rep, "[L _ L] lambda^3 = c/12", c3 == closed, t0, render_scalar(c3 - closed))
    rep.info["c"] = render_scalar(closed)
    if alpha is None and k is None:
        for a, kk in points:
            t0 = time.perf_counter()
            r = Reduction(a, kk)
            c = r.central_charge_formula()
            eps = r.eps
            ok = c == Fraction(21, 2) and not eps
            _timed(rep, f"(alpha, k) = ({a}, {kk}): c = 21/2, eps = 0", ok, t0, f"c = {render_scalar(c)}, eps = {render_scalar(eps)}")
    else:
        rep.info["eps"] = render_scalar(red.eps)
    return rep


# ---------------------------------------------------------------------------
# superalgebra structure


def structure_suite(alpha=None) -> Report:
    rep = Report("structure", info={"alpha": "symbolic" if alpha is None else str(alpha)})
    L = build_superalgebra(alpha)
    t0 = time.perf_counter()
    bad = [(x, y, z) for x in BASIS for y in BASIS for z in BASIS if L.jacobi_defect(x, y, z)]
    _timed(rep, "super Jacobi on all basis triples", not bad, t0, str(bad[:3]), triples=len(BASIS) ** 3)
    t0 = time.perf_counter()
    bad = [(x, y) for x in BASIS for y in BASIS if L.antisymmetry_defect(x, y)]
    _timed(rep, "super antisymmetry", not bad, t0, str(bad[:3]))
    t0 = time.perf_counter()
    bad = [(x, y, z) for x in BASIS for y in BASIS for z in BASIS if L.invariance_defect(x, y, z)]
    _timed(rep, "form invariance on all basis triples", not bad, t0, str(bad[:3]))
    t0 = time.perf_counter()
    bad = [(x, y) for x in BASIS for y in BASIS if L.killing(x, y)]
    _timed(rep, "Killing form vanishes", not bad, t0, str(bad[:3]))
    t0 = time.perf_counter()
    bad = [
        (x, y)
        for x in BASIS
        for y in BASIS
        if L.form_basis(x, y) != (-1 if L.parity[x] and L.parity[y] else 1) * L.form_basis(y, x)
    ]
    odd_even = [(x, y) for x in BASIS for y in BASIS if L.form_basis(x, y) and L.parity[x] != L.parity[y]]
    _timed(rep, "form is even and supersymmetric", not bad and not odd_even, t0, str((bad + odd_even)[:3]))
    t0 = time.perf_counter()
    n_odd = sum(L.parity[b] for b in BASIS)
    _timed(rep, "dimension 17 = 9 + 8", len(BASIS) == 17 and n_odd == 8, t0, f"odd part {n_odd}")
    t0 = time.perf_counter()
    G = grading_of(L)
    bad = [
        (x, y)
        for x in BASIS
        for y in BASIS
        if any(G.degree[z] != G.degree[x] + G.degree[y] for z in L.bracket_basis(x, y))
    ]
    _timed(rep, "ad x eigenvalues are additive", not bad, t0, str(bad[:3]))
    t0 = time.perf_counter()
    dims = {str(m): len(v) for m, v in centralizer_f(L, G).items()}
    want = {"-3/2": 1, "-1": 3, "-1/2": 2}
    _timed(rep, "centralizer of f has dimensions 2, 3, 1", dims == want, t0, str(dims))
    return rep


# ---------------------------------------------------------------------------
# closedness


def closedness_suite(alpha=None, k=None, max_weight=Fraction(5, 2)) -> Report:
    """d_(0)^2 on the graded families and d_(0) of the six generators."""
    rep = Report("closedness", info=dict(_pt(alpha, k), max_weight=str(max_weight)))
    red = Reduction(alpha, k)
    for name, fields in red.graded_basis(max_weight).items():
        t0 = time.perf_counter()
        bad = [X for X in fields if red.d0(red.d0(X))]
        _timed(rep, f"d0^2 = 0 on {name}", not bad, t0, bad[0].render() if bad else "", size=len(fields))
    t0 = time.perf_counter()
    bad = [X for X in red.J.values() if red.d0(red.d0(X))]
    _timed(rep, "d0^2 = 0 on the currents J^(v)", not bad, t0, bad[0].render() if bad else "")
    gens = red.generators.as_dict()
    for n, F in gens.items():
        t0 = time.perf_counter()
        d = red.d0_red(F)
        shape = F.weight() == WEIGHTS[n] and F.parity() == PARITIES[n]
        _timed(rep, f"d0({n}) = 0", d.is_zero() and shape, t0, d.render() if d else "weight or parity", weight=str(F.weight()))
    return rep


# ---------------------------------------------------------------------------
# SW(3/2,3/2,2)


def _sw_target(table: BracketTable | None, c, eps, mu) -> BracketTable:
    if table is None:
        return sw_table(c, eps, mu)
    return table.specialize({"c": as_scalar(c), "eps": as_scalar(eps)}, {"MU": mu})


def _mu_for(c: Scalar, eps: Scalar) -> Scalar:
    sq = mu_squared(c, eps)
    if not sq.is_rational():
        raise ValueError("with --c/--epsilon the values must be rational")
    return sqrt_rational(sq.to_fraction())


def sw_suite(
    alpha=None,
    k=None,
    signs: Iterable[tuple[int, int]] = SIGNS,
    table: BracketTable | None = None,
    c=None,
    eps=None,
) -> Report:
    """All SW brackets for the reduction generators, for each branch of (rho, mu)."""
    rep = Report("verify-sw", info=_pt(alpha, k))
    for rs, ms in signs:
        red = Reduction(alpha, k, rs, ms)
        g = red.generators
        cc = g.c if c is None else as_scalar(c)
        ee = g.eps if eps is None else as_scalar(eps)
        mu = g.mu if c is None and eps is None else _mu_for(cc, ee)
        T = _sw_target(table, cc, ee, mu)
        tag = f"rho{'+' if rs > 0 else '-'} mu{'+' if ms > 0 else '-'}"
        sub = verify_homomorphism(T, g.as_dict())
        for ch in sub.checks:
            ch.ident = f"{tag} {ch.ident}"
            rep.add(ch)
    return rep


def sw_points_suite(n: int = 5, seed: int = 0, table: BracketTable | None = None) -> Report:
    """The SW verification at n random generic rational points."""
    rng = random.Random(seed)
    rep = Report("verify-sw", info={"points": [], "seed": seed})
    for _ in range(n):
        a, k = random_generic_point(rng)
        rep.info["points"].append(f"({a}, {k})")
        sub = sw_suite(a, k, signs=((1, 1),), table=table)
        for ch in sub.checks:
            ch.ident = f"({a}, {k}) {ch.ident}"
            rep.add(ch)
    return rep


# ---------------------------------------------------------------------------
# Shatashvili-Vafa point


def sv_fields(red: Reduction | None = None) -> dict[str, FieldExpr]:
    """The displayed G, L, Phi, K, X, M at the SV point, parsed."""
    red = red or Reduction(*SV_POINT)
    return {n: red.parse(s) for n, s in reference_fields("sv").items()}


def sv_suite(cutoff=Fraction(4), table: BracketTable | None = None) -> Report:
    rep = Report("verify-sv", info={"alpha": "1", "k": "-2/3", "cutoff": str(cutoff)})
    red = Reduction(*SV_POINT)
    ff = FreeField(red)
    shown = sv_fields(red)
    built = red.sv_change_of_basis()
    for n in shown:
        t0 = time.perf_counter()
        d = shown[n] - built[n]
        _timed(rep, f"change of basis reproduces {n}", d.is_zero(), t0, d.render())
    g = red.generators
    t0 = time.perf_counter()
    seed = ideal_image(IdealSpec(cutoff=Fraction(cutoff)), sw_table(g.c, g.eps, g.mu), g.as_dict())
    proj = ff.project(seed)
    ok = bool(seed) and bool(proj) and seed.weight() == Fraction(7, 2) and seed.parity() == 1
    _timed(rep, "ideal generator is nonzero, odd, weight 7/2 (also after projection)", ok, t0, "zero")
    t0 = time.perf_counter()
    closed = red.d0_red(seed)
    _timed(rep, "ideal generator is d0-closed", closed.is_zero(), t0, closed.render())
    reducer = IdealReducer(seed, shown, cutoff)
    t0 = time.perf_counter()
    reducer.build()
    rep.info["ideal_dims"] = {str(w): len(b) for w, b in sorted(reducer.basis.items())}
    sub = verify_homomorphism(table or sv_table(), shown, reducer=reducer)
    for ch in sub.checks:
        rep.add(ch)
    return rep


# ---------------------------------------------------------------------------
# screenings and kernels


def screenings_suite(points: Sequence[tuple], include_sv: bool = True) -> Report:
    rep = Report("screenings", info={"points": [f"({a}, {k})" for a, k in points]})
    for a, k in points:
        red = Reduction(a, k)
        ff = FreeField(red)
        tag = f"({a}, {k})"
        t0 = time.perf_counter()
        bad = [(i, j) for i in (1, 2, 3) for j in (1, 2, 3) if ff.gamma_consistency_defect(i, j)]
        _timed(rep, f"{tag} marker rules are sesquilinear", not bad, t0, str(bad))
        fields = red.generators.as_dict()
        if include_sv and (Fraction(a), Fraction(k)) == SV_POINT:
            fields.update({f"SV {n}": F for n, F in sv_fields(red).items()})
        for n, F in fields.items():
            t0 = time.perf_counter()
            P = ff.project(F)
            res = {i: ff.zero_mode(i, P) for i in (1, 2, 3)}
            bad = [f"Q{i}: {r.render()}" for i, r in res.items() if r]
            _timed(rep, f"{tag} Q_i(0) {n} = 0", bool(P) and not bad, t0, "; ".join(bad) or "projection vanishes")
    return rep


def random_points(n: int, seed: int) -> list[tuple[Fraction, Fraction]]:
    rng = random.Random(seed)
    return [random_generic_point(rng) for _ in range(n)]


def is_generic(alpha, k) -> bool:
    return (Fraction(alpha), Fraction(k)) not in SV_POINTS and not kernel_jump_level(alpha, k)


def kernel_suite(alpha, k, cutoff=Fraction(3)) -> Report:
    """Joint screening kernel against the span of generator words, per weight."""
    rep = Report("kernel-dims", info=dict(_pt(alpha, k), cutoff=str(cutoff), rows=[]))
    generic = is_generic(alpha, k)
    rep.info["generic"] = generic
    t0 = time.perf_counter()
    for row in kernel_intersection_dims(alpha, k, Fraction(cutoff)):
        rep.info["rows"].append({"weight": str(row.weight), "space": row.space, "kernel": row.kernel, "generated": row.generated})
        ident = f"weight {row.weight}: kernel {row.kernel}, generated {row.generated}"
        residual = f"kernel {row.kernel} != generated {row.generated}"
        if row.kernel != row.generated and not generic:
            rep.add(Check(ident, NONGENERIC, residual, time.perf_counter() - t0, {"space": row.space}))
        else:
            _timed(rep, ident, row.kernel == row.generated, t0, residual, space=row.space)
        t0 = time.perf_counter()
    return rep


# ---------------------------------------------------------------------------
# golden transcriptions


def golden_suite(symbolic: bool = True) -> Report:
    """Canonical renderings of computed fields against transcribed displays."""
    rep = Report("golden")
    if symbolic:
        red = Reduction()
        ref = reference_fields("symbolic")
        computed = dict(red.generators.as_dict())
        computed.update({f"J_f{i}": red.J_f(i) for i in (1, 2, 3)})
        for n, text in ref.items():
            t0 = time.perf_counter()
            want = red.parse(text).render()
            got = computed[n].render()
            _timed(rep, f"symbolic {n}", want == got, t0, f"computed {got}")
    red = Reduction(*SV_POINT)
    built = red.sv_change_of_basis()
    for n, text in reference_fields("sv").items():
        t0 = time.perf_counter()
        want = red.parse(text).render()
        got = built[n].render()
        _timed(rep, f"SV point {n}", want == got, t0, f"computed {got}")
    ff = FreeField(red)
    for n, text in reference_fields("sv-free").items():
        t0 = time.perf_counter()
        want = ff.project(red.parse(text)).render()
        got = ff.project(built[n]).render()
        _timed(rep, f"SV point free-field {n}", want == got, t0, f"computed {got}")
    return rep


def finish(rep: Report, *parts: str) -> Report:
    rep.input_digest = digest(rep.suite, *parts)
    return rep


__all__ = [
    "central_charge_suite",
    "structure_suite",
    "closedness_suite",
    "sw_suite",
    "sw_points_suite",
    "sv_suite",
    "sv_fields",
    "screenings_suite",
    "kernel_suite",
    "golden_suite",
    "random_points",
]
