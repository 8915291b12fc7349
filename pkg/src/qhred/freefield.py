"""Free-field realisation inside V_k(h) (x) F(g_{1/2}) and its screenings.

The free ambient has rescaled Cartan currents ``hb1..3`` (hb = h/sqrt(k)),
the neutral fermions ``Phi1..3`` and three markers ``Gamma1..3`` standing
for the intertwiners.  A marker only ever appears as the last letter of a
word.  Its rules are

    [hb_i _lambda Gamma_j] = m a_ij Gamma_j,     d(Gamma_j) = t :hb_j Gamma_j:

with a_ij the Cartan matrix and m = -1/sqrt(k).  Sesquilinearity forces
t = m; :func:`gamma_consistency_defect` measures the failure for any t.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .errors import PoleAtPoint, RadicandZero, DegenerateParameter
from .lcaengine import (
    MAXDER,
    SHIFT,
    Ambient,
    FieldExpr,
    GeneratorSymbol,
    LambdaPoly,
    _add,
    derive,
    lambda_bracket,
    normal_product,
    skew_bracket,
)
from .linalg import Echelon
from .reduction import Reduction
from .scalars import ONE, Scalar, as_scalar


class FreeField:
    """Free ambient attached to a :class:`Reduction` (same alpha, k)."""

    def __init__(self, red: Reduction, gamma_derivative: Scalar | None = None):
        self.red = red
        self.alg = red.alg
        self.k = red.k
        self.sqrt_k = red.sqrt_k
        self.momentum = -1 / self.sqrt_k
        self.t = self.momentum if gamma_derivative is None else as_scalar(gamma_derivative)
        self._proj: dict = {}

    @cached_property
    def cartan(self) -> list[list[Scalar]]:
        return self.alg.cartan

    @cached_property
    def ambient(self) -> Ambient:
        amb = Ambient("free")
        for i in (1, 2, 3):
            amb.add_generator(GeneratorSymbol(f"hb{i}", 0, Fraction(1), "current"))
        for i in (1, 2, 3):
            amb.add_generator(GeneratorSymbol(f"Phi{i}", 1, Fraction(1, 2), "neutral"))
        for i in (1, 2, 3):
            amb.add_generator(GeneratorSymbol(f"Gamma{i}", 0, Fraction(0), "marker"))
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                v = self.alg.form_basis(f"h{i}", f"h{j}")
                if v:
                    amb.set_bracket(f"hb{i}", f"hb{j}", {1: v})
                a = self.cartan[i - 1][j - 1]
                if a:
                    g = FieldExpr(amb, {(amb.letter(f"Gamma{j}"),): self.momentum * a})
                    amb.set_bracket(f"hb{i}", f"Gamma{j}", {0: g})
        self.red._set_neutral(amb)
        for j in (1, 2, 3):
            w = (amb.letter(f"hb{j}"), amb.letter(f"Gamma{j}"))
            amb.set_marker_derivative(f"Gamma{j}", {w: self.t})
        return amb

    def parse(self, text: str) -> FieldExpr:
        extra = {f"PhiU{i}": self.red.phi_upper(i, self.ambient) for i in (1, 2, 3)}
        return self.ambient.parse(text, extra)

    # -- projection -------------------------------------------------------------

    def _letter(self, x: int) -> dict | None:
        src = self.red.red
        name = src.gens[x >> SHIFT].name
        n = x & MAXDER
        amb = self.ambient
        if name.startswith("h"):
            return {(amb.letter("hb" + name[1:], n),): self.sqrt_k}
        if name.startswith("Phi"):
            return {(amb.letter(name, n),): ONE}
        return None

    def _word(self, w: tuple) -> dict:
        got = self._proj.get(w)
        if got is None:
            amb = self.ambient
            got = {(): ONE}
            for x in reversed(w):
                lx = self._letter(x)
                if lx is None:
                    got = {}
                    break
                got = amb._nprod_ff(lx, got)
            self._proj[w] = got
        return got

    def project(self, F: FieldExpr) -> FieldExpr:
        """Drop words containing currents outside g_0; h -> sqrt(k) hb."""
        assert F.ambient is self.red.red
        amb = self.ambient
        out: dict = {}
        with amb._lock:
            for w, c in F.terms.items():
                _add(out, self._word(w), c)
        return FieldExpr(amb, out)

    # -- screenings -------------------------------------------------------------

    @cached_property
    def screenings(self) -> dict[int, FieldExpr]:
        amb = self.ambient
        return {i: amb.word(amb.letter(f"Phi{i}"), amb.letter(f"Gamma{i}")) for i in (1, 2, 3)}

    def zero_mode(self, i: int, X: FieldExpr) -> FieldExpr:
        """Q_i(0) X, the lambda^0 coefficient of [Q_i _lambda X]."""
        return skew_bracket(self.screenings[i], X).coeff(0)

    def annihilated(self, X: FieldExpr) -> bool:
        return all(self.zero_mode(i, X).is_zero() for i in (1, 2, 3))

    def gamma_consistency_defect(self, i: int, j: int) -> LambdaPoly:
        """[hb_i _l d Gamma_j] - (l + d)[hb_i _l Gamma_j]."""
        amb = self.ambient
        h = amb.gen(f"hb{i}")
        g = amb.gen(f"Gamma{j}")
        lhs = lambda_bracket(h, derive(g))
        P = lambda_bracket(h, g)
        rhs = P * LambdaPoly.lam(amb) + LambdaPoly(amb, {n: derive(P.coeff(n)).terms for n in P.coeffs})
        return lhs - rhs

    # -- graded spaces ------------------------------------------------------------

    def basis(self, weight: Fraction) -> list[tuple]:
        """Canonical words of the given weight in hb, Phi and their derivatives."""
        amb = self.ambient
        letters = []
        for name in ["hb1", "hb2", "hb3", "Phi1", "Phi2", "Phi3"]:
            g = amb.index[name]
            w0 = amb.gens[g].weight
            n = 0
            while w0 + n <= weight:
                letters.append((g << SHIFT | n, w0 + n, amb._par[g]))
                n += 1
        letters.sort()
        out: list[tuple] = []

        def rec(start, remaining, acc):
            if remaining == 0:
                out.append(tuple(acc))
                return
            for idx in range(start, len(letters)):
                code, wt, p = letters[idx]
                if wt > remaining:
                    continue
                acc.append(code)
                rec(idx + 1 if p else idx, remaining - wt, acc)
                acc.pop()

        rec(0, Fraction(weight), [])
        return out

    def kernel_dimension(self, weight: Fraction) -> tuple[int, int]:
        """(dimension of the graded piece, dimension of the joint screening kernel)."""
        words = self.basis(Fraction(weight))
        amb = self.ambient
        e = Echelon()
        for idx, w in enumerate(words):
            X = FieldExpr(amb, {w: ONE})
            col: dict = {}
            for i in (1, 2, 3):
                for ww, c in self.zero_mode(i, X).terms.items():
                    col[(i, ww)] = c
            # kernel dimension = number of words - rank of the screening map
            e.add(col)
        return len(words), len(words) - len(e)


def generator_word_span(gens: Mapping[str, FieldExpr], weight: Fraction) -> int:
    """Dimension of the span of normally ordered words in the fields and derivatives."""
    names = sorted(gens)
    F0 = next(iter(gens.values()))
    amb = F0.ambient
    letters = []
    for idx, n in enumerate(names):
        w0 = gens[n].weight()
        par = gens[n].parity()
        d = 0
        while w0 + d <= weight:
            letters.append(((idx, d), w0 + d, par))
            d += 1
    letters.sort()
    words: list[tuple] = []

    def rec(start, remaining, acc):
        if remaining == 0:
            words.append(tuple(acc))
            return
        for i in range(start, len(letters)):
            code, wt, p = letters[i]
            if wt > remaining:
                continue
            acc.append(code)
            rec(i + 1 if p else i, remaining - wt, acc)
            acc.pop()

    rec(0, Fraction(weight), [])
    cache: dict = {}

    def value(w):
        if not w:
            return amb.one()
        got = cache.get(w)
        if got is None:
            idx, d = w[0]
            got = normal_product(derive(gens[names[idx]], d), value(w[1:]))
            cache[w] = got
        return got

    e = Echelon()
    for w in words:
        e.add(value(w).terms)
    return len(e)


GENERIC_AVOID_ALPHA = {Fraction(0), Fraction(-1), Fraction(1), Fraction(-2), Fraction(-1, 2)}
GENERIC_AVOID_K = {Fraction(0), Fraction(1, 2)}


def kernel_jump_level(alpha, k) -> bool:
    """k in {1, alpha, -1-alpha}: the joint screening kernel grows at weight 5/2."""
    a, k = Fraction(alpha), Fraction(k)
    return k in (1, a, -1 - a)


def random_generic_point(rng: random.Random) -> tuple[Fraction, Fraction]:
    """A rational (alpha, k) away from the loci where the construction degenerates."""
    while True:
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        k = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if a in GENERIC_AVOID_ALPHA or k in GENERIC_AVOID_K or kernel_jump_level(a, k):
            continue
        try:
            red = Reduction(a, k)
            red.rho, red.mu
            if not (red.c * (27 - 2 * red.c)):
                continue
            d = -3 * red.alpha * (1 + red.alpha) + 4 * red.k * (1 + red.alpha + red.alpha**2)
            if not d:
                continue
        except (RadicandZero, PoleAtPoint, DegenerateParameter, ZeroDivisionError):
            continue
        return a, k


@dataclass
class KernelRow:
    weight: Fraction
    space: int
    kernel: int
    generated: int


def kernel_intersection_dims(alpha, k, cutoff=Fraction(3)) -> list[KernelRow]:
    red = Reduction(alpha, k)
    ff = FreeField(red)
    gens = {n: ff.project(F) for n, F in red.generators.as_dict().items()}
    rows = []
    w = Fraction(0)
    while w <= cutoff:
        space, ker = ff.kernel_dimension(w)
        gen = generator_word_span(gens, w)
        rows.append(KernelRow(w, space, ker, gen))
        w += Fraction(1, 2)
    return rows
