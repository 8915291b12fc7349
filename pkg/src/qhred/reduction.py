"""Quantum Hamiltonian reduction of D(2,1;a) for the pair (x, f).

Two ambients are built:

* ``complex``: the full complex C(g, x, f, k), with affine currents for all
  of g, charged fermions ``phi_<u>`` (for u in g_+) and their duals
  ``phiU_<u>``, and neutral fermions ``Phi1..3``;
* ``red``: the subalgebra generated by the fields J^(v), v in g_<=, written
  simply as ``v``, together with the neutral fermions.  Its brackets are
  [v_l v'] = [v, v'] + l k (v|v').

Fields of ``red`` are mapped into ``complex`` by :meth:`Reduction.embed`,
which is where d_(0) is evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from importlib import resources
from typing import Mapping

from .errors import CriticalLevel, DegenerateParameter, NoSolution, NotInCentralizer, RadicandZero, AmbiguousSolution
from .lcaengine import (
    Ambient,
    FieldExpr,
    GeneratorSymbol,
    SHIFT,
    MAXDER,
    _add,
    derive,
    lambda_bracket,
    normal_product,
)
from .linalg import Echelon
from .scalars import (
    I,
    ONE,
    RHO,
    ZERO,
    Scalar,
    as_scalar,
    register_radical,
    sqrt_rational,
    substitute,
)
from .superalg import BASIS, build_superalgebra, dual_basis, grading_of

A_VAR = Scalar.var("a")
K_VAR = Scalar.var("k")


def central_charge_closed(alpha, k) -> Scalar:
    """9/2 - 6k(1+a+a^2)/(a(1+a))."""
    a = as_scalar(alpha)
    k = as_scalar(k)
    return Fraction(9, 2) - 6 * k * (1 + a + a * a) / (a * (1 + a))


def rho_squared(alpha, k) -> Scalar:
    a = as_scalar(alpha)
    k = as_scalar(k)
    return Fraction(-3, 2) * (2 * k - 1) * a**2 * (1 + a) ** 2 * (2 * k + 4 * k**2 - a * (1 + a))


def epsilon_of(alpha, k, rho: Scalar, sqrt_k: Scalar) -> Scalar:
    """The coupling constant, written with rho = sqrt(rho_squared)."""
    a = as_scalar(alpha)
    k = as_scalar(k)
    return -4 * I * k * sqrt_k * (1 + 2 * a) * (a * a + a - 2) / (3 * rho)


def mu_squared(c: Scalar, eps: Scalar) -> Scalar:
    return Fraction(9, 2) * c * (4 + eps * eps) / (27 - 2 * c)


# Square root of mu^2 expressed in (a, k); its radicand is a rational function
# because eps^2 is.
_SYM_EPS = epsilon_of(A_VAR, K_VAR, RHO, Scalar.rad("SQRTK"))
register_radical("MU_AK", mu_squared(central_charge_closed(A_VAR, K_VAR), _SYM_EPS))
MU_AK = Scalar.rad("MU_AK")


@dataclass
class GeneratorSet:
    G: FieldExpr
    L: FieldExpr
    H: FieldExpr
    Mt: FieldExpr
    W: FieldExpr
    U: FieldExpr
    c: Scalar
    eps: Scalar
    mu: Scalar

    def as_dict(self) -> dict[str, FieldExpr]:
        return {"G": self.G, "L": self.L, "H": self.H, "Mt": self.Mt, "W": self.W, "U": self.U}


WEIGHTS = {"G": Fraction(3, 2), "L": Fraction(2), "H": Fraction(3, 2), "Mt": Fraction(2), "W": Fraction(2), "U": Fraction(5, 2)}
PARITIES = {"G": 1, "L": 0, "H": 1, "Mt": 0, "W": 0, "U": 1}


class Reduction:
    """All data of the reduction at parameters (alpha, k).

    ``alpha`` and ``k`` default to the symbolic variables.  ``rho_sign`` and
    ``mu_sign`` select the branches of the two square roots normalising H and
    W; for symbolic parameters they multiply the formal radicals.
    """

    def __init__(self, alpha=None, k=None, rho_sign: int = 1, mu_sign: int = 1):
        self.alpha = A_VAR if alpha is None else as_scalar(alpha)
        self.k = K_VAR if k is None else as_scalar(k)
        if not self.alpha or not (self.alpha + 1):
            raise DegenerateParameter("alpha must avoid 0 and -1")
        if not self.k:
            raise DegenerateParameter("k must be nonzero")
        self.rho_sign = rho_sign
        self.mu_sign = mu_sign
        self.alg = build_superalgebra(self.alpha)
        self.grading = grading_of(self.alg)
        self.splus = self.grading.positive
        self.shalf = self.grading.half
        self.gle = self.grading.le_zero
        self._emb: dict = {}
        self._d0w: dict = {}
        self._d0l: dict = {}

    # -- parameters and radicals ---------------------------------------------

    @property
    def symbolic(self) -> bool:
        return not (self.alpha.is_rational() and self.k.is_rational())

    @cached_property
    def sqrt_k(self) -> Scalar:
        if self.k == K_VAR:
            return Scalar.rad("SQRTK")
        if self.k.is_rational():
            return sqrt_rational(self.k.to_fraction())
        return substitute(Scalar.rad("SQRTK"), {"k": self.k})

    def _values(self) -> dict:
        out = {}
        if self.alpha != A_VAR:
            out["a"] = self.alpha
        if self.k != K_VAR:
            out["k"] = self.k
        return out

    @cached_property
    def rho(self) -> Scalar:
        sq = rho_squared(self.alpha, self.k)
        if not sq:
            raise RadicandZero("rho vanishes at these parameters")
        if sq.is_rational():
            return sqrt_rational(sq.to_fraction()) * self.rho_sign
        if self.alpha == A_VAR and self.k == K_VAR:
            return RHO * self.rho_sign
        raise DegenerateParameter("mixed symbolic/numeric parameters are not supported for rho")

    @cached_property
    def c(self) -> Scalar:
        return central_charge_closed(self.alpha, self.k)

    @cached_property
    def eps(self) -> Scalar:
        return epsilon_of(self.alpha, self.k, self.rho, self.sqrt_k)

    @cached_property
    def mu(self) -> Scalar:
        sq = mu_squared(self.c, self.eps)
        if not sq:
            raise RadicandZero("mu vanishes at these parameters")
        if sq.is_rational():
            return sqrt_rational(sq.to_fraction()) * self.mu_sign
        if self.alpha == A_VAR and self.k == K_VAR:
            return MU_AK * self.mu_sign
        raise DegenerateParameter("mixed symbolic/numeric parameters are not supported for mu")

    # -- the complex ----------------------------------------------------------

    def degree(self, b: str) -> Fraction:
        return self.grading.degree[b]

    @cached_property
    def complex(self) -> Ambient:
        alg = self.alg
        amb = Ambient("complex")
        for b in BASIS:
            amb.add_generator(GeneratorSymbol(b, alg.parity[b], 1 - self.degree(b), "current"))
        for b in self.splus:
            p = (alg.parity[b] + 1) % 2
            amb.add_generator(GeneratorSymbol(f"phi_{b}", p, 1 - self.degree(b), "charged", 1))
        for b in self.splus:
            p = (alg.parity[b] + 1) % 2
            amb.add_generator(GeneratorSymbol(f"phiU_{b}", p, self.degree(b), "charged", -1))
        for i, b in enumerate(self.shalf, 1):
            amb.add_generator(GeneratorSymbol(f"Phi{i}", 1, Fraction(1, 2), "neutral"))
        for x in BASIS:
            for y in BASIS:
                br = alg.bracket_basis(x, y)
                form = alg.form_basis(x, y)
                val = {}
                if br:
                    val[0] = FieldExpr(amb, {(amb.letter(z),): cz for z, cz in br.items()})
                if form:
                    val[1] = FieldExpr(amb, {(): self.k * form})
                if val:
                    amb.set_bracket(x, y, val)
        for b in self.splus:
            amb.set_bracket(f"phi_{b}", f"phiU_{b}", {0: ONE})
        self._set_neutral(amb)
        return amb

    def _set_neutral(self, amb: Ambient) -> None:
        for i, x in enumerate(self.shalf, 1):
            for j, y in enumerate(self.shalf, 1):
                v = self.ne_form(x, y)
                if v:
                    amb.set_bracket(f"Phi{i}", f"Phi{j}", {0: v})

    def ne_form(self, x: str, y: str) -> Scalar:
        """<Phi_x | Phi_y> = (f | [x, y])."""
        return self.alg.form(self.alg.f, self.alg.bracket_basis(x, y))

    @cached_property
    def neutral_dual(self) -> dict[int, dict[int, Scalar]]:
        """Phi^i = sum_j M[i][j] Phi_j with <Phi_a|Phi^b> = delta."""
        from .linalg import inverse

        n = len(self.shalf)
        B = [[self.ne_form(x, y) for y in self.shalf] for x in self.shalf]
        inv = inverse(B)
        return {b + 1: {c + 1: inv[c][b] for c in range(n) if inv[c][b]} for b in range(n)}

    def _coords_plus(self, v: Mapping) -> dict[str, Scalar]:
        return {b: c for b, c in v.items() if b in self.splus}

    @cached_property
    def J(self) -> dict[str, FieldExpr]:
        """J^(v) in the complex for every basis vector v of g_<=."""
        amb = self.complex
        alg = self.alg
        out = {}
        for v in self.gle:
            terms = {(amb.letter(v),): ONE}
            for beta in self.splus:
                img = self._coords_plus(alg.bracket_basis(v, beta))
                for alpha_, c in img.items():
                    s = -1 if alg.parity[alpha_] else 1
                    w = amb.word(amb.letter(f"phi_{alpha_}"), amb.letter(f"phiU_{beta}"))
                    _add(terms, w.terms, c * s)
            out[v] = FieldExpr(amb, terms)
        return out

    @cached_property
    def d(self) -> FieldExpr:
        amb = self.complex
        alg = self.alg
        acc: dict = {}
        for a in self.splus:
            s = -1 if alg.parity[a] else 1
            _add(acc, amb.word(amb.letter(a), amb.letter(f"phiU_{a}")).terms, s)
        for a in self.splus:
            for b in self.splus:
                br = alg.bracket_basis(a, b)
                for g, cg in br.items():
                    if g not in self.splus:
                        continue
                    s = -1 if (alg.parity[a] and alg.parity[g]) else 1
                    w = amb.word(amb.letter(f"phi_{g}"), amb.letter(f"phiU_{a}"), amb.letter(f"phiU_{b}"))
                    _add(acc, w.terms, cg * Fraction(-s, 2))
        for a in self.splus:
            fa = alg.form(alg.f, {a: ONE})
            if fa:
                _add(acc, {(amb.letter(f"phiU_{a}"),): fa})
        for i, a in enumerate(self.shalf, 1):
            _add(acc, amb.word(amb.letter(f"phiU_{a}"), amb.letter(f"Phi{i}")).terms)
        return FieldExpr(amb, acc)

    def d0(self, F: FieldExpr) -> FieldExpr:
        """d_(0) on a field of the complex, as an odd derivation."""
        amb = self.complex
        assert F.ambient is amb
        out: dict = {}
        with amb._lock:
            for w, c in F.terms.items():
                _add(out, self._d0_word(w), c)
        return FieldExpr(amb, out)

    def _d0_gen(self, g: int) -> dict:
        got = self._d0l.get(g)
        if got is None:
            amb = self.complex
            x = FieldExpr(amb, {(g << SHIFT,): ONE})
            got = lambda_bracket(self.d, x).coeffs.get(0, {})
            self._d0l[g] = got
        return got

    def _d0_letter(self, x: int) -> dict:
        base = self._d0_gen(x >> SHIFT)
        return self.complex._derive_fn(base, x & MAXDER)

    def _d0_word(self, W: tuple) -> dict:
        if not W:
            return {}
        got = self._d0w.get(W)
        if got is not None:
            return got
        amb = self.complex
        x = W[0]
        rest = W[1:]
        res = dict(amb._nprod_fw(self._d0_letter(x), rest)) if rest else dict(self._d0_letter(x))
        if rest:
            s = -1 if amb._par[x >> SHIFT] else 1
            _add(res, amb._insert_f(x, self._d0_word(rest)), s)
        self._d0w[W] = res
        return res

    def d0_direct(self, F: FieldExpr) -> FieldExpr:
        """d_(0) via the full lambda-bracket (independent of the derivation rule)."""
        return lambda_bracket(self.d, F).coeff(0)

    # -- the reduction ambient ------------------------------------------------

    @cached_property
    def red(self) -> Ambient:
        alg = self.alg
        amb = Ambient("reduction")
        for b in self.gle:
            amb.add_generator(GeneratorSymbol(b, alg.parity[b], 1 - self.degree(b), "current"))
        for i, _ in enumerate(self.shalf, 1):
            amb.add_generator(GeneratorSymbol(f"Phi{i}", 1, Fraction(1, 2), "neutral"))
        for x in self.gle:
            for y in self.gle:
                br = alg.bracket_basis(x, y)
                form = alg.form_basis(x, y)
                val = {}
                if br:
                    val[0] = FieldExpr(amb, {(amb.letter(z),): cz for z, cz in br.items()})
                if form:
                    val[1] = FieldExpr(amb, {(): self.k * form})
                if val:
                    amb.set_bracket(x, y, val)
        self._set_neutral(amb)
        return amb

    def phi_upper(self, i: int, amb: Ambient | None = None) -> FieldExpr:
        amb = amb or self.red
        return FieldExpr(amb, {(amb.letter(f"Phi{j}"),): c for j, c in self.neutral_dual[i].items()})

    def namespace_extra(self, amb: Ambient | None = None) -> dict:
        return {f"PhiU{i}": self.phi_upper(i, amb) for i in (1, 2, 3)}

    def parse(self, text: str) -> FieldExpr:
        """Parse a field of the reduction ambient; ``PhiU<i>`` is the dual fermion."""
        return self.red.parse(text, self.namespace_extra())

    def embed(self, F: FieldExpr) -> FieldExpr:
        """Image of a reduction-ambient field in the complex."""
        assert F.ambient is self.red
        cx = self.complex
        out: dict = {}
        with cx._lock:
            for w, c in F.terms.items():
                _add(out, self._embed_word(w), c)
        return FieldExpr(cx, out)

    def _embed_letter(self, x: int) -> dict:
        key = ("l", x)
        got = self._emb.get(key)
        if got is None:
            name = self.red.gens[x >> SHIFT].name
            base = self.J[name].terms if name in self.J else {(self.complex.letter(name),): ONE}
            got = self.complex._derive_fn(base, x & MAXDER)
            self._emb[key] = got
        return got

    def _embed_word(self, W: tuple) -> dict:
        if not W:
            return {(): ONE}
        got = self._emb.get(W)
        if got is None:
            if len(W) == 1:
                got = self._embed_letter(W[0])
            else:
                got = self.complex._nprod_ff(self._embed_letter(W[0]), self._embed_word(W[1:]))
            self._emb[W] = got
        return got

    def d0_red(self, F: FieldExpr) -> FieldExpr:
        return self.d0(self.embed(F))

    def graded_basis(self, max_weight=Fraction(5, 2)) -> dict[str, list[FieldExpr]]:
        """Finite families of complex fields of weight at most max_weight.

        The complex has letters of weight <= 0, so its graded pieces are not
        finite; the families are the reduction-ambient words (embedded), every
        generator with its derivatives, and every canonical pair and triple of
        generators.
        """
        max_weight = Fraction(max_weight)
        cx = self.complex
        words = []
        w = Fraction(1, 2)
        names = list(self.gle) + ["Phi1", "Phi2", "Phi3"]
        while w <= max_weight:
            for p in (0, 1):
                words += [self.embed(FieldExpr(self.red, {x: ONE})) for x in self.ansatz_words(w, p, names)]
            w += Fraction(1, 2)
        letters = []
        for g in cx.gens:
            n = 0
            while g.weight + n <= max_weight:
                letters.append(cx.word(cx.letter(g.name, n)))
                n += 1
        pairs = []
        for i, g in enumerate(cx.gens):
            for h in cx.gens[i:]:
                if g.weight + h.weight <= max_weight:
                    F = cx.word(cx.letter(g.name), cx.letter(h.name))
                    if F:
                        pairs.append(F)
        triples = []
        for i, g in enumerate(cx.gens):
            for j in range(i, len(cx.gens)):
                for h in cx.gens[j:]:
                    e = cx.gens[j]
                    if g.weight + e.weight + h.weight <= max_weight:
                        F = cx.word(cx.letter(g.name), cx.letter(e.name), cx.letter(h.name))
                        if F:
                            triples.append(F)
        return {"reduction-words": words, "letters": letters, "pairs": pairs, "triples": triples}

    # -- Virasoro field of the complex and the central charge ----------------

    @cached_property
    def L_complex(self) -> FieldExpr:
        if not self.k:
            raise CriticalLevel("k + h^vee = 0")
        amb = self.complex
        alg = self.alg
        acc: dict = {}
        dual = dual_basis(alg, list(BASIS))
        for a in BASIS:
            s = -1 if alg.parity[a] else 1
            for b, cb in dual[a].items():
                _add(acc, amb.word(amb.letter(a), amb.letter(b)).terms, cb * s / (2 * self.k))
        for h, ch in alg.x.items():
            _add(acc, {(amb.letter(h, 1),): ch})
        for a in self.splus:
            m = self.degree(a)
            _add(acc, amb.word(amb.letter(f"phiU_{a}"), amb.letter(f"phi_{a}", 1)).terms, Scalar(-m))
            _add(acc, amb.word(amb.letter(f"phiU_{a}", 1), amb.letter(f"phi_{a}")).terms, Scalar(1 - m))
        for i in (1, 2, 3):
            up = {(amb.letter(f"Phi{j}", 1),): c for j, c in self.neutral_dual[i].items()}
            _add(acc, normal_product(FieldExpr(amb, up), amb.gen(f"Phi{i}")).terms, Fraction(1, 2))
        return FieldExpr(amb, acc)

    def central_charge_formula(self) -> Scalar:
        """The general formula evaluated term by term from the algebra data."""
        alg = self.alg
        if not self.k:
            raise CriticalLevel("k + h^vee = 0")
        sdim = sum(-1 if alg.parity[b] else 1 for b in BASIS)
        # h^vee from the Killing form: kappa = 2 h^vee (.|.)
        hv = alg.killing("h1", "h2") / (2 * alg.form_basis("h1", "h2"))
        xx = alg.form(alg.x, alg.x)
        tot = Scalar(sdim) * self.k / (self.k + hv) - 12 * self.k * xx
        for b in self.splus:
            m = self.degree(b)
            s = -1 if alg.parity[b] else 1
            tot = tot - s * (12 * m * m - 12 * m + 2)
        sdim_half = sum(-1 if alg.parity[b] else 1 for b in self.shalf)
        return tot - Fraction(sdim_half, 2)

    # -- weight 3/2 fields ----------------------------------------------------

    def j_field(self, v: Mapping[str, Scalar]) -> FieldExpr:
        amb = self.red
        return FieldExpr(amb, {(amb.letter(b),): c for b, c in v.items() if c})

    def g_formula(self, v: Mapping[str, Scalar]) -> FieldExpr:
        """Four-term reconstruction formula for v in g_{-1/2} (no centraliser check)."""
        alg = self.alg
        amb = self.red
        for b in v:
            if self.degree(b) != Fraction(-1, 2):
                raise ValueError("v must lie in g_{-1/2}")
        pv = 1  # g_{-1/2} is odd
        acc = dict(self.j_field(v).terms)
        ups = {i: self.phi_upper(i) for i in (1, 2, 3)}
        for i, ub in enumerate(self.shalf, 1):
            br = alg.bracket(v, {ub: ONE})
            if br:
                _add(acc, normal_product(self.j_field(br), ups[i]).terms)
        coef = Fraction((-1) ** (pv + 1), 3)
        for ia, ua in enumerate(self.shalf, 1):
            for ib, ub in enumerate(self.shalf, 1):
                inner = alg.bracket({ub: ONE}, alg.bracket({ua: ONE}, v))
                phi_u = {(amb.letter(f"Phi{j}"),): inner[b] for j, b in enumerate(self.shalf, 1) if b in inner}
                if not phi_u:
                    continue
                t = normal_product(ups[ia], normal_product(ups[ib], FieldExpr(amb, phi_u)))
                _add(acc, t.terms, coef)
        for ib, ub in enumerate(self.shalf, 1):
            s = self.k * alg.form(v, {ub: ONE}) + self.str_plus(v, ub)
            if s:
                _add(acc, derive(ups[ib]).terms, -s)
        return FieldExpr(amb, acc)

    def str_plus(self, v: Mapping, u: str) -> Scalar:
        """Supertrace over g_+ of (ad v)(ad u)."""
        alg = self.alg
        out = ZERO
        for g in self.splus:
            img = alg.bracket(v, alg.bracket_basis(u, g))
            cg = img.get(g, ZERO)
            if cg:
                out = out + (-cg if alg.parity[g] else cg)
        return out

    def reconstruct_weight_3_2(self, v: Mapping[str, Scalar]) -> FieldExpr:
        if alg_bracket_nonzero(self.alg, self.alg.f, v):
            raise NotInCentralizer("[f, v] != 0")
        return self.g_formula(v)

    def J_f(self, i: int) -> FieldExpr:
        return self.g_formula({f"f{i}": ONE})

    # -- ansatz solver --------------------------------------------------------

    def ansatz_words(self, weight: Fraction, parity: int, allowed: list[str]) -> list[tuple]:
        amb = self.red
        letters = []
        for name in allowed:
            g = amb.index[name]
            w0 = amb.gens[g].weight
            n = 0
            while w0 + n <= weight:
                letters.append((g << SHIFT | n, w0 + n, amb._par[g]))
                n += 1
        letters.sort()
        out = []

        def rec(start: int, remaining: Fraction, par: int, acc: list):
            if remaining == 0:
                if par == parity and acc:
                    out.append(tuple(acc))
                return
            for idx in range(start, len(letters)):
                code, wt, p = letters[idx]
                if wt > remaining:
                    continue
                acc.append(code)
                rec(idx + 1 if p else idx, remaining - wt, par ^ p, acc)
                acc.pop()

        rec(0, weight, 0, [])
        return out

    def solve_closed(self, leading: Mapping[str, Scalar], unique: bool = False) -> tuple[FieldExpr, int]:
        """A d_(0)-closed field J^{a} = J^(a) + lower terms, and the nullity."""
        degs = {self.degree(b) for b in leading}
        if len(degs) != 1:
            raise ValueError("leading term must be homogeneous")
        j = -degs.pop()
        parities = {self.alg.parity[b] for b in leading}
        parity = parities.pop()
        allowed = [b for b in self.gle if -self.degree(b) < j] + ["Phi1", "Phi2", "Phi3"]
        words = self.ansatz_words(1 + j, parity, allowed)
        lead = self.j_field(leading)
        rhs = self.d0_red(lead).terms
        cols = [self.d0(self.embed(FieldExpr(self.red, {w: ONE}))).terms for w in words]
        e = Echelon(track=True)
        for idx, col in enumerate(cols):
            e.add(col, idx)
        sol = e.express({key: -x for key, x in rhs.items()})
        if sol is None:
            raise NoSolution("no closed field with this leading term")
        nullity = len(e.kernel)
        if unique and nullity:
            raise AmbiguousSolution(f"solution space has dimension {nullity}", nullity)
        acc = dict(lead.terms)
        for idx, c in sol.items():
            _add(acc, {words[idx]: c})
        return FieldExpr(self.red, acc), nullity

    # -- the six generators -----------------------------------------------------

    def a_prime(self) -> tuple[Scalar, Scalar, Scalar]:
        a, k = self.alpha, self.k
        return (
            a * (a - 1) * (1 + 2 * k + a),
            -(2 * k - a) * (2 + a) * (1 + a),
            a * (2 * k - 1) * (1 + 2 * a) * (1 + a),
        )

    @cached_property
    def generators(self) -> GeneratorSet:
        Jf = [self.J_f(i) for i in (1, 2, 3)]
        coef = I / self.sqrt_k
        G = (Jf[0] + Jf[1] + Jf[2]) * coef
        GG = lambda_bracket(G, G)
        L = GG.coeff(0) * Fraction(1, 2)
        ap = self.a_prime()
        H = (Jf[0] * ap[0] + Jf[1] * ap[1] + Jf[2] * ap[2]) / self.rho
        Mt = lambda_bracket(G, H).coeff(0)
        HH = lambda_bracket(H, H)
        W = (HH.coeff(0) - Mt * self.eps - L * 2) * (Fraction(3, 4) / self.mu)
        U = lambda_bracket(G, W).coeff(0)
        return GeneratorSet(G, L, H, Mt, W, U, self.c, self.eps, self.mu)

    def sv_change_of_basis(self) -> dict[str, FieldExpr]:
        g = self.generators
        s14 = sqrt_rational(14)
        return {
            "G": g.G,
            "L": g.L,
            "Phi": g.H * I,
            "K": g.Mt * I,
            "X": (g.L + g.W * s14) * Fraction(-1, 3),
            "M": (derive(g.G) + g.U * (2 * s14)) * Fraction(-1, 6),
        }


def read_sections(text: str) -> dict[str, dict[str, str]]:
    """Parse ``[section]`` blocks of ``name = expr`` entries with indented continuations."""
    out: dict[str, dict[str, str]] = {}
    cur = None
    last = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.startswith("["):
            cur = out.setdefault(line.strip()[1:-1], {})
            last = None
        elif line[0].isspace():
            if last is None:
                raise ValueError(f"continuation without entry: {raw!r}")
            cur[last] += " " + line.strip()
        else:
            name, _, body = line.partition("=")
            last = name.strip()
            cur[last] = body.strip()
    return out


def reference_fields(section: str) -> dict[str, str]:
    text = resources.files("qhred.data").joinpath("reference_fields.txt").read_text()
    return read_sections(text)[section]


def alg_bracket_nonzero(alg, u, v) -> bool:
    return bool(alg.bracket(u, v))


SV_POINT = (Fraction(1), Fraction(-2, 3))
SV_POINTS = [(Fraction(1), Fraction(-2, 3)), (Fraction(-2), Fraction(-2, 3)), (Fraction(-1, 2), Fraction(1, 3))]


def central_charge(alpha, k) -> Scalar:
    k = as_scalar(k)
    if not k:
        raise CriticalLevel("k + h^vee = 0")
    return Reduction(alpha, k).central_charge_formula()


def build_generators(alpha=None, k=None, rho_sign: int = 1, mu_sign: int = 1) -> GeneratorSet:
    return Reduction(alpha, k, rho_sign, mu_sign).generators
