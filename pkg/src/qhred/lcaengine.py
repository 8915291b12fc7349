"""Lambda-bracket engine for freely generated vertex superalgebras.

An :class:`Ambient` is given by generators and the lambda-brackets between
them.  Elements are :class:`FieldExpr` objects: linear combinations of
canonical words, i.e. right-nested normal products of letters ``d^n(g)``
sorted by letter code, with no repeated odd letter.  Letters are encoded as
``generator_index << 6 | n``.

Normal products are brought to canonical form with quasi-commutativity and
quasi-associativity; lambda-brackets use the left product formula on the
left argument and the right Wick formula on the right argument.

Module markers (kind ``"marker"``) may only occur as the rightmost letter of
a word; their derivative is given by a rewriting rule and they never appear
on the left of a bracket.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping

from .errors import ParityMismatch, ParseError, UndefinedBracket
from .scalars import ONE, ZERO, Scalar, as_scalar, render_scalar, specialize, substitute
from .textio import Namespace, Parser, needs_parens

SHIFT = 6
MAXDER = (1 << SHIFT) - 1

Word = tuple
Raw = dict  # Word -> Scalar
RawPoly = dict  # int -> Raw


@dataclass(frozen=True)
class GeneratorSymbol:
    name: str
    parity: int
    weight: Fraction
    kind: str = "current"
    charge: int = 0


def _add(acc: Raw, F: Mapping, c=None) -> None:
    for w, x in F.items():
        if c is not None:
            x = x * c
        old = acc.get(w)
        if old is None:
            if x:
                acc[w] = x
        else:
            s = old + x
            if s:
                acc[w] = s
            else:
                del acc[w]


def _addp(acc: RawPoly, j: int, F: Mapping, c=None) -> None:
    if not F:
        return
    slot = acc.get(j)
    if slot is None:
        slot = acc[j] = {}
    _add(slot, F, c)
    if not slot:
        del acc[j]


class Ambient:
    """Generators, their brackets, and the memoised normal-ordering engine."""

    def __init__(self, name: str, generators: Iterable[GeneratorSymbol] = ()):
        self.name = name
        self.gens: list[GeneratorSymbol] = []
        self.index: dict[str, int] = {}
        self._par: list[int] = []
        self._marker: list[bool] = []
        self._table: dict[tuple[int, int], RawPoly] = {}
        self._given: set[tuple[int, int]] = set()
        self._marker_rule: dict[int, Raw] = {}
        self._lock = threading.RLock()
        for g in generators:
            self.add_generator(g)
        self.clear_cache()

    # -- construction -------------------------------------------------------

    def add_generator(self, g: GeneratorSymbol) -> int:
        if g.name in self.index:
            raise ValueError(f"duplicate generator {g.name}")
        if g.name == "d" or g.name in ("lambda", "sqrt"):
            raise ValueError(f"reserved name {g.name}")
        if g.kind != "marker" and any(self._marker):
            raise ValueError("markers must be added after all ordinary generators")
        i = len(self.gens)
        self.gens.append(g)
        self.index[g.name] = i
        self._par.append(g.parity & 1)
        self._marker.append(g.kind == "marker")
        return i

    def letter(self, name: str, n: int = 0) -> int:
        return self.index[name] << SHIFT | n

    def set_bracket(self, a: str, b: str, value) -> None:
        """Set [a_lambda b].  ``value`` is a LambdaPoly, a FieldExpr, a
        mapping ``power -> FieldExpr|scalar`` or a string in the grammar."""
        ia, ib = self.index[a], self.index[b]
        if self._marker[ia]:
            raise ValueError("markers cannot appear on the left of a bracket")
        poly = self._to_rawpoly(value)
        self._table[(ia, ib)] = poly
        self._given.add((ia, ib))
        self.clear_cache()

    def set_marker_derivative(self, name: str, value) -> None:
        i = self.index[name]
        if not self._marker[i]:
            raise ValueError(f"{name} is not a marker")
        if isinstance(value, str):
            value = self.parse(value)
        self._marker_rule[i] = dict(value.terms) if isinstance(value, FieldExpr) else dict(value)
        self.clear_cache()

    def _to_rawpoly(self, value) -> RawPoly:
        if isinstance(value, str):
            value = self.parse(value)
        if isinstance(value, LambdaPoly):
            return {j: dict(F) for j, F in value.coeffs.items() if F}
        if isinstance(value, FieldExpr):
            return {0: dict(value.terms)} if value.terms else {}
        out: RawPoly = {}
        for j, v in dict(value).items():
            if isinstance(v, FieldExpr):
                raw = dict(v.terms)
            else:
                s = as_scalar(v)
                raw = {(): s} if s else {}
            if raw:
                out[int(j)] = raw
        return out

    def clear_cache(self) -> None:
        self._ins: dict = {}
        self._np: dict = {}
        self._blw: dict = {}
        self._bww: dict = {}
        self._der: dict = {}
        self._skewed: dict = {}

    # -- basic data -----------------------------------------------------------

    def parity_of_word(self, w: Word) -> int:
        p = 0
        for x in w:
            p ^= self._par[x >> SHIFT]
        return p

    def weight_of_word(self, w: Word) -> Fraction:
        return sum((self.gens[x >> SHIFT].weight + (x & MAXDER) for x in w), Fraction(0))

    def charge_of_word(self, w: Word) -> int:
        return sum(self.gens[x >> SHIFT].charge for x in w)

    def is_canonical(self, w: Word) -> bool:
        for i in range(len(w) - 1):
            x, y = w[i], w[i + 1]
            if x > y or (x == y and self._par[x >> SHIFT]):
                return False
        for i, x in enumerate(w):
            if self._marker[x >> SHIFT] and (i != len(w) - 1 or x & MAXDER):
                return False
        return True

    # -- generator brackets ---------------------------------------------------

    def _gen_bracket(self, a: int, b: int) -> RawPoly:
        key = (a, b)
        got = self._table.get(key)
        if got is not None:
            return got
        got = self._skewed.get(key)
        if got is not None:
            return got
        rev = self._table.get((b, a))
        if rev is None or (b, a) not in self._given:
            if self._marker[a]:
                raise UndefinedBracket(f"marker {self.gens[a].name} on the left of a bracket")
            self._skewed[key] = {}
            return {}
        # [a_l b] = -(-1)^{ab} sum_n (-l - d)^n X_n
        s = -1 if (self._par[a] and self._par[b]) else 1
        out: RawPoly = {}
        for n, X in rev.items():
            D = X
            for r in range(n + 1):
                if r:
                    D = self._derive_f(D)
                c = -s * (-1) ** n * comb(n, r)
                _addp(out, n - r, D, c)
        self._skewed[key] = out
        return out

    # -- normal ordering ------------------------------------------------------

    def _insert_f(self, x: int, F: Mapping) -> Raw:
        out: Raw = {}
        for V, c in F.items():
            _add(out, self._insert(x, V), c)
        return out

    def _insert(self, x: int, W: Word) -> Raw:
        """Canonical form of :x W: for a letter x and a canonical word W."""
        if not W:
            return {(x,): ONE}
        w1 = W[0]
        if x < w1:
            return {(x,) + W: ONE}
        gx = x >> SHIFT
        if self._marker[gx]:
            raise UndefinedBracket("a marker must be the rightmost letter of a word")
        px = self._par[gx]
        if x == w1 and not px:
            return {(x,) + W: ONE}
        key = (x, W)
        got = self._ins.get(key)
        if got is not None:
            return got
        res: Raw = {}
        rest = W[1:]
        if x == w1:
            # :x:x W'': = ::xx:W': with :xx: = 1/2 sum_j (-1)^j d^(j+1)(x_(j) x)
            for j, Cj in self._bracket_ll(x, x).items():
                D = self._derive_fn(Cj, j + 1)
                _add(res, self._nprod_fw(D, rest), Fraction((-1) ** j, 2 * (j + 1)))
        else:
            pw = self._par[w1 >> SHIFT]
            sign = -1 if (px and pw) else 1
            for V, c in self._insert(x, rest).items():
                _add(res, self._insert(w1, V), c * sign if sign < 0 else c)
            for j, Cj in self._bracket_ll(x, w1).items():
                D = self._derive_fn(Cj, j + 1)
                _add(res, self._nprod_fw(D, rest), Fraction((-1) ** j, j + 1))
        self._ins[key] = res
        return res

    def _nprod_fw(self, F: Mapping, W: Word) -> Raw:
        out: Raw = {}
        for U, c in F.items():
            _add(out, self._nprod(U, W), c)
        return out

    def _nprod_ff(self, F: Mapping, G: Mapping) -> Raw:
        out: Raw = {}
        for U, c in F.items():
            for V, d in G.items():
                _add(out, self._nprod(U, V), c * d)
        return out

    def _nprod(self, U: Word, W: Word) -> Raw:
        if not U:
            return {W: ONE}
        if not W:
            return {U: ONE}
        if len(U) == 1:
            return self._insert(U[0], W)
        key = (U, W)
        got = self._np.get(key)
        if got is not None:
            return got
        a = U[0]
        Up = U[1:]
        res: Raw = {}
        for V, c in self._nprod(Up, W).items():
            _add(res, self._insert(a, V), c)
        # sum_j :(d^(j+1) a)(Up_(j) W):
        for j, Cj in self._bracket_ww(Up, W).items():
            if (a & MAXDER) + j + 1 > MAXDER:
                raise OverflowError("derivative order too large")
            _add(res, self._insert_f(a + j + 1, Cj), Fraction(1, j + 1))
        # (-1)^{a Up} sum_j :(d^(j+1) Up)(a_(j) W):
        s = -1 if (self._par[a >> SHIFT] and self.parity_of_word(Up)) else 1
        for j, Dj in self._bracket_lw(a, W).items():
            E = self._derive_fn({Up: ONE}, j + 1)
            _add(res, self._nprod_ff(E, Dj), Fraction(s, j + 1))
        self._np[key] = res
        return res

    # -- derivative -----------------------------------------------------------

    def _derive_word(self, W: Word) -> Raw:
        got = self._der.get(W)
        if got is not None:
            return got
        res: Raw = {}
        n = len(W)
        for i, x in enumerate(W):
            g = x >> SHIFT
            if self._marker[g]:
                R = self._marker_rule.get(g, {})
                for z in reversed(W[:i]):
                    R = self._insert_f(z, R)
                _add(res, R)
                continue
            if x & MAXDER == MAXDER:
                raise OverflowError("derivative order too large")
            y = x + 1
            if i + 1 == n or y < W[i + 1] or (y == W[i + 1] and not self._par[g]):
                _add(res, {W[:i] + (y,) + W[i + 1:]: ONE})
            else:
                R = self._insert(y, W[i + 1:])
                for z in reversed(W[:i]):
                    R = self._insert_f(z, R)
                _add(res, R)
        self._der[W] = res
        return res

    def _derive_f(self, F: Mapping) -> Raw:
        out: Raw = {}
        for W, c in F.items():
            if W:
                _add(out, self._derive_word(W), c)
        return out

    def _derive_fn(self, F: Mapping, n: int) -> Raw:
        for _ in range(n):
            if not F:
                break
            F = self._derive_f(F)
        return dict(F)

    # -- brackets -------------------------------------------------------------

    def _bracket_ll(self, x: int, y: int) -> RawPoly:
        a, m = x >> SHIFT, x & MAXDER
        b, n = y >> SHIFT, y & MAXDER
        base = self._gen_bracket(a, b)
        if not base:
            return {}
        if m == 0 and n == 0:
            return base
        res: RawPoly = {}
        sm = (-1) ** m
        for j, C in base.items():
            D = C
            for r in range(n + 1):
                if r:
                    D = self._derive_f(D)
                    if not D:
                        break
                _addp(res, j + m + n - r, D, sm * comb(n, r))
        return res

    def _bracket_lw(self, x: int, W: Word) -> RawPoly:
        if not W:
            return {}
        if len(W) == 1:
            return self._bracket_ll(x, W[0])
        key = (x, W)
        got = self._blw.get(key)
        if got is not None:
            return got
        b = W[0]
        Wp = W[1:]
        res: RawPoly = {}
        xb = self._bracket_ll(x, b)
        for j, Cj in xb.items():
            _addp(res, j, self._nprod_fw(Cj, Wp))
        s = -1 if (self._par[x >> SHIFT] and self._par[b >> SHIFT]) else 1
        for j, Cj in self._bracket_lw(x, Wp).items():
            _addp(res, j, self._insert_f(b, Cj), s if s < 0 else None)
        for j, Cj in xb.items():
            for m, E in self._bracket_fw(Cj, Wp).items():
                _addp(res, j + m + 1, E, Fraction(1, m + 1))
        self._blw[key] = res
        return res

    def _bracket_fw(self, F: Mapping, W: Word) -> RawPoly:
        out: RawPoly = {}
        for U, c in F.items():
            if U:
                for j, E in self._bracket_ww(U, W).items():
                    _addp(out, j, E, c)
        return out

    def _bracket_wf(self, U: Word, G: Mapping) -> RawPoly:
        out: RawPoly = {}
        for V, c in G.items():
            if V:
                for j, E in self._bracket_ww(U, V).items():
                    _addp(out, j, E, c)
        return out

    def _bracket_ww(self, U: Word, W: Word) -> RawPoly:
        if not U or not W:
            return {}
        if len(U) == 1:
            return self._bracket_lw(U[0], W)
        key = (U, W)
        got = self._bww.get(key)
        if got is not None:
            return got
        a = U[0]
        Up = U[1:]
        s = -1 if (self._par[a >> SHIFT] and self.parity_of_word(Up)) else 1
        res: RawPoly = {}
        # :(e^{d d_l} a) [Up_l W]:
        for j, Cj in self._bracket_ww(Up, W).items():
            for r in range(j + 1):
                _addp(res, j - r, self._insert_f(a + r, Cj), comb(j, r))
        # (-1)^{a Up} :(e^{d d_l} Up) [a_l W]:  and the integral term
        for j, Dj in self._bracket_lw(a, W).items():
            E = {Up: ONE}
            for r in range(j + 1):
                if r:
                    E = self._derive_f(E)
                    if not E:
                        break
                _addp(res, j - r, self._nprod_ff(E, Dj), s * comb(j, r))
            for m, Em in self._bracket_wf(Up, Dj).items():
                c = Fraction(s * factorial(j) * factorial(m), factorial(j + m + 1))
                _addp(res, j + m + 1, Em, c)
        self._bww[key] = res
        return res

    # -- public entry points --------------------------------------------------

    def gen(self, name: str) -> "FieldExpr":
        return FieldExpr(self, {(self.letter(name),): ONE})

    def word(self, *letters: int) -> "FieldExpr":
        """Normal product of the given letters, canonicalised."""
        R: Raw = {(): ONE}
        for x in reversed(letters):
            R = self._insert_f(x, R)
        return FieldExpr(self, R)

    def one(self) -> "FieldExpr":
        return FieldExpr(self, {(): ONE})

    def zero(self) -> "FieldExpr":
        return FieldExpr(self, {})

    def scalar(self, s) -> "FieldExpr":
        s = as_scalar(s)
        return FieldExpr(self, {(): s} if s else {})

    def namespace(self, extra: Mapping[str, object] | None = None) -> "FieldNamespace":
        return FieldNamespace(self, extra)

    def parse(self, text: str, extra: Mapping[str, object] | None = None):
        v = Parser(text, self.namespace(extra)).parse()
        if isinstance(v, Scalar):
            return self.scalar(v)
        return v

    def render_letter(self, x: int) -> str:
        name = self.gens[x >> SHIFT].name
        n = x & MAXDER
        if n == 0:
            return name
        if n == 1:
            return f"d({name})"
        return f"d^{n}({name})"

    def render_word(self, w: Word) -> str:
        if not w:
            return "1"
        if len(w) == 1:
            return self.render_letter(w[0])
        return ":" + " ".join(self.render_letter(x) for x in w) + ":"

    def __repr__(self) -> str:
        return f"Ambient({self.name!r}, {len(self.gens)} generators)"


class FieldExpr:
    """Immutable linear combination of canonical words of an ambient."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: Ambient, terms: Mapping):
        self.ambient = ambient
        self.terms = {w: c for w, c in terms.items() if c}

    def _check(self, other: "FieldExpr") -> None:
        if other.ambient is not self.ambient:
            raise ValueError("fields live in different ambients")

    def __add__(self, other):
        if isinstance(other, Scalar) or isinstance(other, (int, Fraction)):
            other = self.ambient.scalar(other)
        if not isinstance(other, FieldExpr):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        _add(out, other.terms)
        return FieldExpr(self.ambient, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return FieldExpr(self.ambient, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, Scalar) or isinstance(other, (int, Fraction)):
            other = self.ambient.scalar(other)
        if not isinstance(other, FieldExpr):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            s = as_scalar(other)
            if not s:
                return FieldExpr(self.ambient, {})
            return FieldExpr(self.ambient, {w: c * s for w, c in self.terms.items()})
        if isinstance(other, LambdaPoly):
            return other.__rmul__(self)
        raise ParseError("use a normal product :A B: to multiply fields")

    def __rmul__(self, other):
        if isinstance(other, LambdaPoly):
            return other * self
        return self.__mul__(other)

    def __truediv__(self, other):
        return self * as_scalar(other).inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Scalar)):
            other = self.ambient.scalar(other)
        if not isinstance(other, FieldExpr):
            return NotImplemented
        return other.ambient is self.ambient and (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, word) -> Scalar:
        if isinstance(word, str):
            parsed = self.ambient.parse(word)
            (word,) = parsed.terms
        return self.terms.get(word, ZERO)

    def parity(self) -> int:
        ps = {self.ambient.parity_of_word(w) for w in self.terms}
        if len(ps) > 1:
            raise ParityMismatch("field is not homogeneous in parity")
        return ps.pop() if ps else 0

    def weights(self) -> set[Fraction]:
        return {self.ambient.weight_of_word(w) for w in self.terms}

    def weight(self) -> Fraction:
        ws = self.weights()
        if len(ws) != 1:
            raise ValueError(f"field is not homogeneous in weight: {sorted(ws)}")
        return ws.pop()

    def map_coeffs(self, f) -> "FieldExpr":
        return FieldExpr(self.ambient, {w: f(c) for w, c in self.terms.items()})

    def specialize(self, point) -> "FieldExpr":
        return self.map_coeffs(lambda c: specialize(c, point))

    def substitute(self, values, radicals=None) -> "FieldExpr":
        return self.map_coeffs(lambda c: substitute(c, values, radicals))

    def render(self) -> str:
        return render_field(self)

    def __str__(self) -> str:
        return render_field(self)

    def __repr__(self) -> str:
        return f"FieldExpr({render_field(self)!r})"


class LambdaPoly:
    """Polynomial in lambda with FieldExpr coefficients."""

    __slots__ = ("ambient", "coeffs")

    def __init__(self, ambient: Ambient, coeffs: Mapping[int, Mapping]):
        self.ambient = ambient
        out = {}
        for j, F in coeffs.items():
            F = F.terms if isinstance(F, FieldExpr) else F
            F = {w: c for w, c in F.items() if c}
            if F:
                out[int(j)] = F
        self.coeffs = out

    @classmethod
    def lam(cls, ambient: Ambient, n: int = 1) -> "LambdaPoly":
        return cls(ambient, {n: {(): ONE}})

    def coeff(self, n: int) -> FieldExpr:
        return FieldExpr(self.ambient, self.coeffs.get(n, {}))

    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _lift(self, other):
        if isinstance(other, LambdaPoly):
            return other
        if isinstance(other, FieldExpr):
            return LambdaPoly(self.ambient, {0: other.terms})
        if isinstance(other, (Scalar, int, Fraction)):
            s = as_scalar(other)
            return LambdaPoly(self.ambient, {0: {(): s}} if s else {})
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: RawPoly = {j: dict(F) for j, F in self.coeffs.items()}
        for j, F in o.coeffs.items():
            _addp(out, j, F)
        return LambdaPoly(self.ambient, out)

    __radd__ = __add__

    def __neg__(self):
        return LambdaPoly(self.ambient, {j: {w: -c for w, c in F.items()} for j, F in self.coeffs.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            s = as_scalar(other)
            return LambdaPoly(self.ambient, {j: {w: c * s for w, c in F.items()} for j, F in self.coeffs.items()})
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: RawPoly = {}
        for i, F in self.coeffs.items():
            for j, G in o.coeffs.items():
                if F.keys() == {()}:
                    _addp(out, i + j, G, F[()])
                elif G.keys() == {()}:
                    _addp(out, i + j, F, G[()])
                else:
                    raise ParseError("cannot multiply two non-scalar lambda coefficients")
        return LambdaPoly(self.ambient, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * as_scalar(other).inverse()

    def __pow__(self, n: int):
        out = LambdaPoly(self.ambient, {0: {(): ONE}})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def map_coeffs(self, f) -> "LambdaPoly":
        return LambdaPoly(self.ambient, {j: {w: f(c) for w, c in F.items()} for j, F in self.coeffs.items()})

    def specialize(self, point) -> "LambdaPoly":
        return self.map_coeffs(lambda c: specialize(c, point))

    def render(self) -> str:
        return render_lambda(self)

    def __str__(self) -> str:
        return render_lambda(self)

    def __repr__(self) -> str:
        return f"LambdaPoly({render_lambda(self)!r})"


class FieldNamespace(Namespace):
    def __init__(self, ambient: Ambient, extra: Mapping[str, object] | None = None):
        self.ambient = ambient
        self.extra = dict(extra or {})

    def lookup(self, name: str):
        if name in self.extra:
            return self.extra[name]
        if name in self.ambient.index:
            return self.ambient.gen(name)
        if name == "lambda":
            return LambdaPoly.lam(self.ambient)
        return super().lookup(name)

    def _field(self, v) -> FieldExpr:
        if isinstance(v, FieldExpr):
            return v
        if isinstance(v, (Scalar, int, Fraction)):
            return self.ambient.scalar(v)
        raise ParseError(f"expected a field, got {v!r}")

    def nprod(self, a, b):
        return normal_product(self._field(a), self._field(b))

    def derive(self, a, n):
        return derive(self._field(a), n)


# ---------------------------------------------------------------------------
# public operations


def normal_product(a: FieldExpr, b: FieldExpr) -> FieldExpr:
    a._check(b)
    amb = a.ambient
    with amb._lock:
        return FieldExpr(amb, amb._nprod_ff(a.terms, b.terms))


def derive(a: FieldExpr, n: int = 1) -> FieldExpr:
    amb = a.ambient
    with amb._lock:
        return FieldExpr(amb, amb._derive_fn(a.terms, n))


def lambda_bracket(a: FieldExpr, b: FieldExpr) -> LambdaPoly:
    a._check(b)
    amb = a.ambient
    out: RawPoly = {}
    with amb._lock:
        for U, c in a.terms.items():
            if not U:
                continue
            for V, d in b.terms.items():
                if not V:
                    continue
                for j, E in amb._bracket_ww(U, V).items():
                    _addp(out, j, E, c * d)
    return LambdaPoly(amb, out)


def nth_product(a: FieldExpr, b: FieldExpr, n: int) -> FieldExpr:
    """a_(n) b for n >= -1."""
    if n == -1:
        return normal_product(a, b)
    if n < -1:
        return normal_product(derive(a, -n - 1) / factorial(-n - 1), b)
    return lambda_bracket(a, b).coeff(n) * factorial(n)


def zero_mode(a: FieldExpr, b: FieldExpr) -> FieldExpr:
    return lambda_bracket(a, b).coeff(0)


def skew_bracket(a: FieldExpr, b: FieldExpr) -> LambdaPoly:
    """[a_lambda b] computed as -(-1)^{ab} [b_{-lambda-d} a]."""
    a._check(b)
    amb = a.ambient
    out: RawPoly = {}
    with amb._lock:
        for U, c in a.terms.items():
            for V, d in b.terms.items():
                s = -1 if (amb.parity_of_word(U) and amb.parity_of_word(V)) else 1
                for n, X in amb._bracket_ww(V, U).items():
                    D = X
                    for r in range(n + 1):
                        if r:
                            D = amb._derive_f(D)
                        _addp(out, n - r, D, c * d * (-s * (-1) ** n * comb(n, r)))
    return LambdaPoly(amb, out)


def equal(a: FieldExpr, b: FieldExpr) -> bool:
    return (a - b).is_zero()


# ---------------------------------------------------------------------------
# rendering


def _coeff_times(cs: str, body: str) -> str:
    if body == "1":
        return cs
    if cs == "1":
        return body
    if cs == "-1":
        return "-" + body
    if needs_parens(cs):
        return f"({cs})*{body}"
    return f"{cs}*{body}"


def _join(pieces: list[str]) -> str:
    if not pieces:
        return "0"
    out = pieces[0]
    for p in pieces[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def render_field(F: FieldExpr) -> str:
    amb = F.ambient
    keys = sorted(F.terms, key=lambda w: (amb.weight_of_word(w), len(w), w))
    return _join([_coeff_times(render_scalar(F.terms[w]), amb.render_word(w)) for w in keys])


def render_lambda(P: LambdaPoly) -> str:
    pieces = []
    for j in sorted(P.coeffs, reverse=True):
        body = render_field(P.coeff(j))
        if j == 0:
            pieces.append(body)
            continue
        lam = "lambda" if j == 1 else f"lambda^{j}"
        if body == "1":
            pieces.append(lam)
        elif body == "-1":
            pieces.append("-" + lam)
        else:
            pieces.append(f"{lam}*({body})")
    return _join(pieces)


def parse_field(text: str, ambient: Ambient) -> FieldExpr:
    v = ambient.parse(text)
    if isinstance(v, LambdaPoly):
        raise ParseError(f"{text!r} is a lambda polynomial, not a field")
    return v


def parse_lambda(text: str, ambient: Ambient) -> LambdaPoly:
    v = ambient.parse(text)
    if isinstance(v, FieldExpr):
        return LambdaPoly(ambient, {0: v.terms})
    return v
