"""The exceptional Lie superalgebra D(2,1;a) as a contragredient superalgebra.

Only the Chevalley relations, the Cartan matrix (all simple roots odd) and
the definitions of the composite root vectors are put in by hand.  Every
other structure constant is derived by the super Jacobi identity, and the
invariant form is derived from ``(h_i|h_j) = a_ij``, ``(e_i|f_j) = delta_ij``
by invariance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .errors import DegenerateParameter, NotDiagonalizable, SingularGram
from .linalg import inverse, kernel
from .scalars import ONE, ZERO, Scalar, as_scalar, render_scalar

BASIS = (
    "h1", "h2", "h3", "e1", "e2", "e3", "f1", "f2", "f3",
    "e12", "e13", "e23", "e123", "f12", "f13", "f23", "f123",
)

# composite = [first, second]
DEFINITIONS = {
    "e12": ("e1", "e2"), "e13": ("e1", "e3"), "e23": ("e2", "e3"), "e123": ("e1", "e23"),
    "f12": ("f1", "f2"), "f13": ("f1", "f3"), "f23": ("f2", "f3"), "f123": ("f1", "f23"),
}

Vec = dict  # basis name -> Scalar


def _root(name: str) -> tuple[int, int, int]:
    if name[0] == "h":
        return (0, 0, 0)
    sign = 1 if name[0] == "e" else -1
    idx = [int(ch) for ch in name[1:]]
    return tuple(sign * (i in idx) for i in (1, 2, 3))


def _vadd(acc: Vec, v: Mapping, c: Scalar | int = 1) -> None:
    for key, x in v.items():
        t = x * c if not (isinstance(c, int) and c == 1) else x
        s = acc.get(key, ZERO) + t
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)


def _scale(v: Mapping, c) -> Vec:
    return {key: x * c for key, x in v.items() if x * c}


class LieSuperAlgebra:
    """D(2,1;a) with structure constants, invariant form and sl2 data."""

    def __init__(self, alpha=None):
        a = Scalar.var("a") if alpha is None else as_scalar(alpha)
        if not a or not (a + 1):
            raise DegenerateParameter("alpha must avoid 0 and -1")
        self.alpha = a
        self.basis = BASIS
        self.cartan = [[ZERO, ONE, a], [ONE, ZERO, -1 - a], [a, -1 - a, ZERO]]
        self.parity = {b: (len(b) - 1) % 2 if b[0] != "h" else 0 for b in BASIS}
        self.root = {b: _root(b) for b in BASIS}
        self._by_root = {self.root[b]: b for b in BASIS if b[0] != "h"}
        self._br: dict[tuple[str, str], Vec] = {}
        self._form: dict[tuple[str, str], Scalar] = {}
        self._build()

    # -- brackets ------------------------------------------------------------

    def _sign(self, x: str, y: str) -> int:
        return -1 if (self.parity[x] and self.parity[y]) else 1

    def _height(self, b: str) -> int:
        return sum(abs(t) for t in self.root[b])

    def _root_on_h(self, b: str, i: int) -> Scalar:
        """alpha_b(h_i) = sum_l n_l a_{il}."""
        out = ZERO
        for l, n in enumerate(self.root[b]):
            if n:
                out = out + self.cartan[i][l] * n
        return out

    def bracket_basis(self, x: str, y: str) -> Vec:
        key = (x, y)
        got = self._br.get(key)
        if got is None:
            got = self._compute(x, y)
            self._br[key] = got
        return got

    def _compute(self, x: str, y: str) -> Vec:
        if x[0] == "h":
            c = self._root_on_h(y, int(x[1]) - 1) if y[0] != "h" else ZERO
            return {y: c} if c else {}
        if y[0] == "h":
            c = self._root_on_h(x, int(y[1]) - 1)
            return {x: -c} if c else {}
        if x in DEFINITIONS:
            # [[g,X'],y] = [g,[X',y]] - (-1)^{g X'} [X',[g,y]]
            g, xp = DEFINITIONS[x]
            out: Vec = {}
            _vadd(out, self.bracket_gv(g, self.bracket_basis(xp, y)))
            _vadd(out, self.bracket_bv(xp, self.bracket_basis(g, y)), -self._sign(g, xp))
            return out
        # x is a simple generator e_i or f_i
        i = int(x[1])
        if len(y) == 2 and y[0] in "ef" and y[0] != x[0]:
            return {f"h{i}": ONE} if int(y[1]) == i else {}
        if y[0] != x[0]:
            # y composite of the opposite sign: y = [g, Y']
            g, yp = DEFINITIONS[y]
            out = {}
            _vadd(out, self.bracket_vb(self.bracket_basis(x, g), yp))
            _vadd(out, self.bracket_gv(g, self.bracket_basis(x, yp)), self._sign(x, g))
            return out
        # same sign: result lies in a one-dimensional root space
        target = tuple(s + t for s, t in zip(self.root[x], self.root[y]))
        b = self._by_root.get(target)
        if b is None:
            return {}
        return self._identify(x, y, b)

    def _identify(self, x: str, y: str, b: str) -> Vec:
        """Coordinate t in [x,y] = t b, fixed by brackets with the opposite generators."""
        opp = "f" if x[0] == "e" else "e"
        t = None
        for j in (1, 2, 3):
            g = f"{opp}{j}"
            # [g,[x,y]] = [[g,x],y] + (-1)^{gx} [x,[g,y]]
            lhs: Vec = {}
            _vadd(lhs, self.bracket_vb(self.bracket_basis(g, x), y))
            _vadd(lhs, self.bracket_gv(x, self.bracket_basis(g, y)), self._sign(g, x))
            ref = self.bracket_basis(g, b)
            if not ref:
                if lhs:
                    raise AssertionError(f"inconsistent Jacobi closure for [{x},{y}]")
                continue
            key = next(iter(ref))
            cand = lhs.get(key, ZERO) / ref[key]
            if t is None:
                t = cand
            elif t != cand:
                raise AssertionError(f"inconsistent coordinates for [{x},{y}]")
            diff = dict(lhs)
            _vadd(diff, ref, -cand)
            if diff:
                raise AssertionError(f"[{x},{y}] is not proportional to {b}")
        return {b: t} if t else {}

    def bracket_gv(self, g: str, v: Mapping) -> Vec:
        out: Vec = {}
        for key, c in v.items():
            _vadd(out, self.bracket_basis(g, key), c)
        return out

    def bracket_bv(self, x: str, v: Mapping) -> Vec:
        return self.bracket_gv(x, v)

    def bracket_vb(self, v: Mapping, y: str) -> Vec:
        out: Vec = {}
        for key, c in v.items():
            _vadd(out, self.bracket_basis(key, y), c)
        return out

    def bracket(self, u: Mapping, v: Mapping) -> Vec:
        out: Vec = {}
        for x, c in u.items():
            for y, d in v.items():
                _vadd(out, self.bracket_basis(x, y), c * d)
        return out

    # -- the invariant form ---------------------------------------------------

    def form_basis(self, x: str, y: str) -> Scalar:
        key = (x, y)
        got = self._form.get(key)
        if got is None:
            got = self._compute_form(x, y)
            self._form[key] = got
        return got

    def _compute_form(self, x: str, y: str) -> Scalar:
        if x[0] == "h":
            if y[0] != "h":
                return ZERO
            return self.cartan[int(x[1]) - 1][int(y[1]) - 1]
        if any(s + t for s, t in zip(self.root[x], self.root[y])):
            return ZERO
        if x in DEFINITIONS:
            g, xp = DEFINITIONS[x]
            # ([g,x']|y) = (g|[x',y])
            return self.form_gv(g, self.bracket_basis(xp, y))
        # generator against composite of the opposite sign via supersymmetry
        if y in DEFINITIONS:
            s = self._sign(x, y)
            return self.form_basis(y, x) * s
        if x[0] == "e":
            return ONE if y == f"f{x[1]}" else ZERO
        return -ONE if y == f"e{x[1]}" else ZERO

    def form_gv(self, g: str, v: Mapping) -> Scalar:
        out = ZERO
        for key, c in v.items():
            out = out + self.form_basis(g, key) * c
        return out

    def form(self, u: Mapping, v: Mapping) -> Scalar:
        out = ZERO
        for x, c in u.items():
            for y, d in v.items():
                f = self.form_basis(x, y)
                if f:
                    out = out + f * c * d
        return out

    # -- construction and checks ----------------------------------------------

    def _build(self) -> None:
        for x in BASIS:
            for y in BASIS:
                self.bracket_basis(x, y)
                self.form_basis(x, y)
        for comp in DEFINITIONS:
            if not self.bracket_basis(*DEFINITIONS[comp]) == {comp: ONE}:
                raise AssertionError(f"definition of {comp} not reproduced")

    def jacobi_defect(self, x: str, y: str, z: str) -> Vec:
        """[x,[y,z]] - [[x,y],z] - (-1)^{xy}[y,[x,z]]."""
        out: Vec = {}
        _vadd(out, self.bracket_gv(x, self.bracket_basis(y, z)))
        _vadd(out, self.bracket_vb(self.bracket_basis(x, y), z), -1)
        _vadd(out, self.bracket_gv(y, self.bracket_basis(x, z)), -self._sign(x, y))
        return out

    def antisymmetry_defect(self, x: str, y: str) -> Vec:
        out = dict(self.bracket_basis(x, y))
        _vadd(out, self.bracket_basis(y, x), self._sign(x, y))
        return out

    def invariance_defect(self, x: str, y: str, z: str) -> Scalar:
        return self.form(self.bracket_basis(x, y), {z: ONE}) - self.form({x: ONE}, self.bracket_basis(y, z))

    def killing(self, x: str, y: str) -> Scalar:
        """Supertrace of ad x ad y."""
        out = ZERO
        for z in BASIS:
            c = self.bracket_gv(x, self.bracket_basis(y, z)).get(z, ZERO)
            if c:
                out = out + (-c if self.parity[z] else c)
        return out

    # -- distinguished elements ----------------------------------------------

    @cached_property
    def x(self) -> Vec:
        a = self.alpha
        return {
            "h1": (a + 1) / (2 * a),
            "h2": a / (2 * (a + 1)),
            "h3": ONE / (2 * a * (a + 1)),
        }

    @cached_property
    def f(self) -> Vec:
        return {"f12": ONE, "f13": ONE, "f23": ONE}

    @cached_property
    def e(self) -> Vec:
        a = self.alpha
        return {
            "e12": Scalar(Fraction(-1, 2)),
            "e13": -ONE / (2 * a * a),
            "e23": -ONE / (2 * (a + 1) ** 2),
        }

    def as_vec(self, name_or_vec) -> Vec:
        if isinstance(name_or_vec, str):
            return {name_or_vec: ONE}
        return dict(name_or_vec)

    # -- export ----------------------------------------------------------------

    def to_json(self) -> str:
        brackets = {}
        for x in BASIS:
            for y in BASIS:
                v = self.bracket_basis(x, y)
                if v:
                    brackets[f"{x},{y}"] = {k: render_scalar(c) for k, c in sorted(v.items())}
        form = {
            f"{x},{y}": render_scalar(self.form_basis(x, y))
            for x in BASIS
            for y in BASIS
            if self.form_basis(x, y)
        }
        doc = {
            "schema": "qhred.superalgebra/1",
            "alpha": render_scalar(self.alpha),
            "basis": list(BASIS),
            "parity": {b: self.parity[b] for b in BASIS},
            "brackets": brackets,
            "form": form,
        }
        return json.dumps(doc, indent=1, sort_keys=True)


def build_superalgebra(alpha=None) -> LieSuperAlgebra:
    return LieSuperAlgebra(alpha)


@dataclass
class Grading:
    degree: dict[str, Fraction]

    def part(self, m: Fraction) -> list[str]:
        return [b for b in BASIS if self.degree[b] == m]

    @property
    def positive(self) -> list[str]:
        return [b for b in BASIS if self.degree[b] > 0]

    @property
    def negative(self) -> list[str]:
        return [b for b in BASIS if self.degree[b] < 0]

    @property
    def le_zero(self) -> list[str]:
        return [b for b in BASIS if self.degree[b] <= 0]

    @property
    def half(self) -> list[str]:
        return self.part(Fraction(1, 2))


def grading_of(L: LieSuperAlgebra) -> Grading:
    deg = {}
    for b in BASIS:
        v = L.bracket(L.x, {b: ONE})
        if not v:
            deg[b] = Fraction(0)
            continue
        if set(v) != {b} or not v[b].is_rational():
            raise NotDiagonalizable(f"{b} is not an eigenvector of ad x")
        deg[b] = v[b].to_fraction()
    return Grading(deg)


def centralizer_f(L: LieSuperAlgebra, G: Grading) -> dict[Fraction, list[Vec]]:
    """Basis of the kernel of ad f, per ad x degree."""
    out: dict[Fraction, list[Vec]] = {}
    for m in sorted(set(G.degree.values())):
        names = G.part(m)
        cols = [L.bracket(L.f, {b: ONE}) for b in names]
        rels = kernel(cols)
        if rels:
            out[m] = [{names[j]: c for j, c in rel.items()} for rel in rels]
    return out


def in_centralizer(L: LieSuperAlgebra, v: Mapping) -> bool:
    return not L.bracket(L.f, v)


def dual_basis(L: LieSuperAlgebra, names: Sequence[str]) -> dict[str, Vec]:
    """u^b with (u_a | u^b) = delta_ab, inside the span of ``names``.

    The span of ``names`` pairs with itself only for self-dual subspaces; for
    a subspace paired with another use :func:`dual_pairing`.
    """
    gram = [[L.form_basis(x, y) for y in names] for x in names]
    try:
        inv = inverse(gram)
    except ZeroDivisionError:
        raise SingularGram("form is degenerate on the subspace") from None
    # (u_a | sum_c M_cb u_c) = sum_c gram[a][c] M_cb = delta_ab
    return {
        b: {names[c]: inv[c][j] for c in range(len(names)) if inv[c][j]}
        for j, b in enumerate(names)
    }


def dual_pairing(L: LieSuperAlgebra, names: Sequence[str], partners: Sequence[str]) -> dict[str, Vec]:
    """u^a in the span of ``partners`` with (u_a | u^b) = delta_ab."""
    gram = [[L.form_basis(x, y) for y in partners] for x in names]
    try:
        inv = inverse(gram)
    except ZeroDivisionError:
        raise SingularGram("pairing is degenerate") from None
    return {
        b: {partners[c]: inv[c][j] for c in range(len(partners)) if inv[c][j]}
        for j, b in enumerate(names)
    }
