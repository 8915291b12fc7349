"""Abstract bracket tables, verification of concrete realisations, and ideals.

A :class:`BracketTable` lists generators (name, parity, weight) and the
lambda-brackets between them as text in the field grammar, with ``lambda``
for the formal variable.  The table is turned into a formal
:class:`~qhred.lcaengine.Ambient` whose generator brackets are the table
itself; right-hand sides are normal-ordered in that ambient.  Normal ordering
can need other table entries, so the entries are re-parsed until they stop
changing.

Text format::

    # comment
    generator G odd 3/2
    generator L even 2
    [G _ G] = 2*L + c/3*lambda^2

An entry may continue on following lines that start with whitespace.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import comb
from typing import Callable, Mapping

from .errors import ConsistencyError, ParseError, PoleAtC
from .lcaengine import (
    MAXDER,
    SHIFT,
    Ambient,
    FieldExpr,
    GeneratorSymbol,
    LambdaPoly,
    _add,
    _addp,
    derive,
    lambda_bracket,
    normal_product,
    parse_lambda,
    render_lambda,
)
from .linalg import Echelon
from .report import FAIL, PASS, REDUCED, Check, Report
from .scalars import Scalar, as_scalar, substitute
from .textio import parse_fraction

MAX_FIXPOINT = 12


def _skew(amb: Ambient, P: Mapping[int, Mapping], pa: int, pb: int) -> dict:
    """Coefficients of -(-1)^{ab} sum_n (-lambda - d)^n P_n."""
    s = -1 if (pa and pb) else 1
    out: dict = {}
    with amb._lock:
        for n, X in P.items():
            D = X
            for r in range(n + 1):
                if r:
                    D = amb._derive_f(D)
                _addp(out, n - r, D, -s * (-1) ** n * comb(n, r))
    return out


@dataclass
class BracketTable:
    generators: list[GeneratorSymbol]
    texts: dict[tuple[str, str], str]
    name: str = "table"
    ambient: Ambient = field(init=False)
    entries: dict[tuple[str, str], LambdaPoly] = field(init=False)

    def __post_init__(self):
        self.ambient = Ambient(self.name, self.generators)
        names = {g.name for g in self.generators}
        for a, b in self.texts:
            if a not in names or b not in names:
                raise ParseError(f"entry [{a} _ {b}] uses an undeclared generator")
        self.entries = {}
        self._fixpoint()
        self._check_shape()

    # -- construction -------------------------------------------------------

    def _fixpoint(self) -> None:
        amb = self.ambient
        prev = None
        for _ in range(MAX_FIXPOINT):
            cur = {}
            for pair, text in self.texts.items():
                try:
                    cur[pair] = parse_lambda(text, amb)
                except ParseError as e:
                    raise ParseError(f"in entry [{pair[0]} _ {pair[1]}]: {e}") from None
            if prev is not None and all(cur[p] == prev[p] for p in cur):
                self.entries = cur
                return
            for (a, b), v in cur.items():
                amb._table[(amb.index[a], amb.index[b])] = {j: dict(F) for j, F in v.coeffs.items()}
                amb._given.add((amb.index[a], amb.index[b]))
            amb.clear_cache()
            prev = cur
        raise ConsistencyError("table entries did not stabilise under normal ordering")

    def _gen(self, name: str) -> GeneratorSymbol:
        return self.generators[self.ambient.index[name]]

    def _check_shape(self) -> None:
        amb = self.ambient
        for (a, b), P in self.entries.items():
            ga, gb = self._gen(a), self._gen(b)
            for j, F in P.coeffs.items():
                want = ga.weight + gb.weight - j - 1
                for w in F:
                    if amb.weight_of_word(w) != want:
                        raise ConsistencyError(f"[{a} _ {b}]: lambda^{j} term {amb.render_word(w)} has wrong weight")
                    if amb.parity_of_word(w) != (ga.parity + gb.parity) % 2:
                        raise ConsistencyError(f"[{a} _ {b}]: lambda^{j} term {amb.render_word(w)} has wrong parity")

    # -- queries --------------------------------------------------------------

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def bracket(self, a: str, b: str) -> LambdaPoly:
        amb = self.ambient
        with amb._lock:
            raw = amb._gen_bracket(amb.index[a], amb.index[b])
        return LambdaPoly(amb, raw)

    def pairs(self) -> list[tuple[str, str]]:
        """One ordered pair per unordered pair, in the declared direction when given."""
        out = []
        names = self.names
        for i, a in enumerate(names):
            for b in names[i:]:
                if (a, b) in self.texts or (b, a) not in self.texts:
                    out.append((a, b))
                else:
                    out.append((b, a))
        return out

    def check_consistency(self) -> None:
        """Declared [b_l a] must equal the skew transform of declared [a_l b].

        Diagonal entries are compared with their own transform.
        """
        amb = self.ambient
        for (a, b), P in sorted(self.entries.items()):
            if (b, a) not in self.entries:
                continue
            if a > b:
                continue
            sk = LambdaPoly(amb, _skew(amb, P.coeffs, self._gen(a).parity, self._gen(b).parity))
            if sk != self.entries[(b, a)]:
                raise ConsistencyError(f"pair [{a} _ {b}] is not skew-symmetric")

    def parse(self, text: str) -> FieldExpr:
        return self.ambient.parse(text)

    def map_scalars(self, f: Callable[[Scalar], Scalar], name: str | None = None) -> "BracketTable":
        """A new table with every coefficient mapped by ``f``."""
        texts = {}
        for pair, P in self.entries.items():
            texts[pair] = render_lambda(P.map_coeffs(f))
        return BracketTable(list(self.generators), texts, name or self.name)

    def specialize(self, values: Mapping, radicals: Mapping | None = None) -> "BracketTable":
        return self.map_scalars(lambda x: substitute(x, values, radicals))

    # -- text -----------------------------------------------------------------

    def render(self) -> str:
        lines = []
        for g in self.generators:
            par = "odd" if g.parity else "even"
            lines.append(f"generator {g.name} {par} {g.weight}")
        for (a, b) in sorted(self.entries, key=lambda p: (self.ambient.index[p[0]], self.ambient.index[p[1]])):
            lines.append(f"[{a} _ {b}] = {render_lambda(self.entries[(a, b)])}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        if not isinstance(other, BracketTable):
            return NotImplemented
        if [(g.name, g.parity, g.weight) for g in self.generators] != [
            (g.name, g.parity, g.weight) for g in other.generators
        ]:
            return False
        if set(self.entries) != set(other.entries):
            return False
        return all(
            render_lambda(self.entries[p]) == render_lambda(other.entries[p]) for p in self.entries
        )


def parse_table(text: str, name: str = "table", check: bool = True) -> BracketTable:
    gens: list[GeneratorSymbol] = []
    texts: dict[tuple[str, str], str] = {}
    last = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0].isspace():
            if last is None:
                raise ParseError(f"line {lineno}, column 1: continuation without an entry")
            texts[last] += " " + line.strip()
            continue
        if line.startswith("generator"):
            parts = line.split()
            if len(parts) != 4 or parts[2] not in ("odd", "even"):
                raise ParseError(f"line {lineno}, column 1: expected 'generator NAME odd|even WEIGHT'")
            gens.append(GeneratorSymbol(parts[1], 1 if parts[2] == "odd" else 0, parse_fraction(parts[3])))
            last = None
            continue
        if line.startswith("["):
            close = line.find("]")
            eq = line.find("=", close)
            if close < 0 or eq < 0:
                raise ParseError(f"line {lineno}, column {len(line)}: expected '[A _ B] = poly'")
            inside = [t.strip() for t in line[1:close].split("_")]
            if len(inside) != 2 or not all(inside):
                raise ParseError(f"line {lineno}, column 2: expected 'A _ B' inside brackets")
            pair = (inside[0], inside[1])
            if pair in texts:
                raise ParseError(f"line {lineno}, column 1: duplicate entry [{pair[0]} _ {pair[1]}]")
            texts[pair] = line[eq + 1 :].strip()
            last = pair
            continue
        raise ParseError(f"line {lineno}, column 1: unrecognised line {raw!r}")
    table = BracketTable(gens, texts, name)
    if check:
        table.check_consistency()
    return table


def load_table(filename: str, name: str | None = None) -> BracketTable:
    text = resources.files("qhred.data").joinpath(filename).read_text()
    return parse_table(text, name or filename)


def sw_table(c=None, eps=None, mu=None) -> BracketTable:
    """SW(3/2,3/2,2) with parameters (c, eps); symbolic when omitted.

    ``mu`` overrides the value of the radical MU; it must square to
    9c(4+eps^2)/(2(27-2c)).
    """
    base = load_table("sw_table.txt", "sw")
    if c is not None and as_scalar(c) == Fraction(27, 2):
        raise PoleAtC("c = 27/2 is a pole of mu")
    if c is None and eps is None and mu is None:
        return base
    values = {}
    if c is not None:
        values["c"] = as_scalar(c)
    if eps is not None:
        values["eps"] = as_scalar(eps)
    rad = {"MU": mu} if mu is not None else None
    return base.specialize(values, rad)


def sv_table() -> BracketTable:
    return load_table("sv_table.txt", "sv")


# ---------------------------------------------------------------------------
# realisations


class Realisation:
    """Images of table generators in a concrete ambient; maps formal fields."""

    def __init__(self, table: BracketTable, assignment: Mapping[str, FieldExpr]):
        missing = set(table.names) - set(assignment)
        if missing:
            raise KeyError(f"assignment misses {sorted(missing)}")
        self.table = table
        self.images = {n: assignment[n] for n in table.names}
        self.target = next(iter(self.images.values())).ambient
        self._letters: dict[int, FieldExpr] = {}
        self._words: dict[tuple, FieldExpr] = {}

    def letter(self, x: int) -> FieldExpr:
        got = self._letters.get(x)
        if got is None:
            name = self.table.generators[x >> SHIFT].name
            got = derive(self.images[name], x & MAXDER)
            self._letters[x] = got
        return got

    def word(self, w: tuple) -> FieldExpr:
        if not w:
            return self.target.one()
        got = self._words.get(w)
        if got is None:
            if len(w) == 1:
                got = self.letter(w[0])
            else:
                got = normal_product(self.letter(w[0]), self.word(w[1:]))
            self._words[w] = got
        return got

    def field(self, F: FieldExpr) -> FieldExpr:
        acc: dict = {}
        for w, c in F.terms.items():
            _add(acc, self.word(w).terms, c)
        return FieldExpr(self.target, acc)

    def poly(self, P: LambdaPoly) -> LambdaPoly:
        return LambdaPoly(self.target, {j: self.field(P.coeff(j)).terms for j in P.coeffs})


def verify_homomorphism(
    table: BracketTable,
    assignment: Mapping[str, FieldExpr],
    ambient: Ambient | None = None,
    reducer: "IdealReducer | None" = None,
    pairs: list[tuple[str, str]] | None = None,
    suite: str = "homomorphism",
) -> Report:
    """Compare [a_l b] of the images with the table entry mapped to the images."""
    real = Realisation(table, assignment)
    if ambient is not None and real.target is not ambient:
        raise ValueError("assignment lives in a different ambient")
    rep = Report(suite)
    for a, b in pairs or table.pairs():
        t0 = time.perf_counter()
        lhs = lambda_bracket(real.images[a], real.images[b])
        rhs = real.poly(table.bracket(a, b))
        diff = lhs - rhs
        ident = f"[{a} _ {b}]"
        if diff.is_zero():
            rep.add(Check(ident, PASS, seconds=time.perf_counter() - t0))
            continue
        status = FAIL
        detail = {"weights": sorted(str(w) for j in diff.coeffs for w in diff.coeff(j).weights())}
        if reducer is not None:
            cert = {}
            ok = True
            for j in sorted(diff.coeffs):
                res, combo = reducer.reduce(diff.coeff(j))
                cert[f"lambda^{j}"] = len(combo)
                if res:
                    ok = False
            detail["ideal_terms"] = cert
            if ok:
                status = REDUCED
        rep.add(Check(ident, status, render_lambda(diff), time.perf_counter() - t0, detail))
    return rep


# ---------------------------------------------------------------------------
# ideals


SW_IDEAL = "2*sqrt(14)*:G W: - 3*:H Mt: + 2*:L G: - 2*sqrt(14)*d(U)"


@dataclass
class IdealSpec:
    generator: str = SW_IDEAL
    cutoff: Fraction = Fraction(4)
    table: str = "sw"


class IdealReducer:
    """Graded components of the ideal generated by one field.

    Elements are closed under derivatives, left normal products with the
    assigned generators (and therefore, through the bracket coefficients, all
    products) and the coefficients of lambda-brackets with the generators, as
    long as the weight stays within the cutoff.
    """

    def __init__(self, seed: FieldExpr, generators: Mapping[str, FieldExpr], cutoff=Fraction(4)):
        self.seed = seed
        self.gens = dict(generators)
        self.cutoff = Fraction(cutoff)
        self.amb = seed.ambient
        self.components: dict[Fraction, Echelon] = {}
        self.basis: dict[Fraction, list[FieldExpr]] = {}
        self._built = False

    def _insert(self, F: FieldExpr) -> bool:
        if F.is_zero():
            return False
        w = F.weight()
        e = self.components.setdefault(w, Echelon(track=True))
        tag = (w, len(self.basis.get(w, [])))
        if e.add(F.terms, tag):
            self.basis.setdefault(w, []).append(F)
            return True
        return False

    def build(self) -> None:
        if self._built:
            return
        queue = []
        if self._insert(self.seed):
            queue.append(self.seed)
        gw = {n: g.weight() for n, g in self.gens.items()}
        while queue:
            X = queue.pop(0)
            wx = X.weight()
            new = []
            if wx + 1 <= self.cutoff:
                new.append(derive(X))
            for n, g in self.gens.items():
                if wx + gw[n] <= self.cutoff:
                    new.append(normal_product(g, X))
                P = lambda_bracket(g, X)
                for j in P.coeffs:
                    if gw[n] + wx - j - 1 <= self.cutoff:
                        new.append(P.coeff(j))
            for Y in new:
                if self._insert(Y):
                    queue.append(Y)
        self._built = True

    def component(self, w) -> list[FieldExpr]:
        self.build()
        return list(self.basis.get(Fraction(w), []))

    def reduce(self, F: FieldExpr) -> tuple[FieldExpr, dict]:
        """Residue of F after removing ideal pivots, and the combination used."""
        self.build()
        if F.is_zero():
            return F, {}
        res: dict = {}
        combo: dict = {}
        by_weight: dict[Fraction, dict] = {}
        for w, c in F.terms.items():
            by_weight.setdefault(self.amb.weight_of_word(w), {})[w] = c
        for wt, part in by_weight.items():
            e = self.components.get(wt)
            if e is None:
                _add(res, part)
                continue
            r, cmb = e.reduce(part, {})
            _add(res, r)
            for k, v in (cmb or {}).items():
                combo[k] = -v
        return FieldExpr(self.amb, res), combo


def ideal_image(spec: IdealSpec, table: BracketTable, assignment: Mapping[str, FieldExpr]) -> FieldExpr:
    return Realisation(table, assignment).field(table.parse(spec.generator))


def ideal_component_basis(spec: IdealSpec, assignment: Mapping[str, FieldExpr], table: BracketTable, w) -> list[FieldExpr]:
    seed = ideal_image(spec, table, assignment)
    red = IdealReducer(seed, assignment, spec.cutoff)
    return red.component(w)


def reduce_modulo_ideal(
    e: FieldExpr, spec: IdealSpec, assignment: Mapping[str, FieldExpr], table: BracketTable
) -> tuple[FieldExpr, dict]:
    seed = ideal_image(spec, table, assignment)
    return IdealReducer(seed, assignment, spec.cutoff).reduce(e)
