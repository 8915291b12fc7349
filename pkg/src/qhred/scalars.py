"""Exact scalars.

A :class:`Scalar` is an element of a multiquadratic extension of the field of
rational functions Q(a, k, c, eps).  Every adjoined square root (a *radical*)
has a radicand in the base field, so a scalar has the canonical form

    sum over radical monomials m of  p_m(a, k, c, eps) * m  /  q(a, k, c, eps)

with a monic common denominator q coprime to all p_m.  Equality is structural
equality of this form and zero-testing is exact.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

import flint

from .errors import InconsistentRadical, PoleAtPoint, ZeroDenominator

VARIABLES = ("a", "k", "c", "eps")

# deglex with eps > c > k > a gives a fixed, documented term order
_CTX = flint.fmpq_mpoly_ctx.get(("eps", "c", "k", "a"), "deglex")
_CTX_NAMES = _CTX.names()
_RENDER_ORDER = [(_CTX_NAMES.index(v), v) for v in VARIABLES]
_ZERO_POLY = _CTX.constant(0)
_ONE_POLY = _CTX.constant(1)

Number = Union[int, Fraction, "flint.fmpq"]


def _fmpq(q) -> flint.fmpq:
    if isinstance(q, flint.fmpq):
        return q
    if isinstance(q, int):
        return flint.fmpq(q)
    if isinstance(q, Fraction):
        return flint.fmpq(q.numerator, q.denominator)
    raise TypeError(f"not a rational number: {q!r}")


def _const(q) -> flint.fmpq_mpoly:
    return _CTX.constant(_fmpq(q))


# ---------------------------------------------------------------------------
# radical registry


@dataclass(frozen=True)
class Radical:
    name: str
    bit: int
    square: "Scalar" = field(compare=False)


_LOCK = threading.RLock()
_RADICALS: dict[str, Radical] = {}
_BY_BIT: list[Radical] = []


def register_radical(name: str, square: "Scalar | Number") -> Radical:
    """Adjoin a new square root ``name`` with ``name**2 == square``.

    Registering an existing name with the same square is a no-op; a different
    square raises :class:`InconsistentRadical`.
    """
    sq = square if isinstance(square, Scalar) else Scalar(square)
    if sq._mask_union():
        raise InconsistentRadical(f"radicand of {name} must be radical-free")
    if sq.is_zero():
        raise InconsistentRadical(f"radicand of {name} is zero")
    with _LOCK:
        old = _RADICALS.get(name)
        if old is not None:
            if old.square != sq:
                raise InconsistentRadical(f"{name} already registered with square {old.square}")
            return old
        rad = Radical(name, len(_BY_BIT), sq)
        _RADICALS[name] = rad
        _BY_BIT.append(rad)
        return rad


def radical(name: str) -> Radical:
    try:
        return _RADICALS[name]
    except KeyError:
        if name.startswith("SQRT") and name[4:].isdigit():
            return _prime_radical(int(name[4:]))
        raise KeyError(f"unknown radical {name!r}") from None


def radical_names() -> list[str]:
    return [r.name for r in _BY_BIT]


# ---------------------------------------------------------------------------
# the scalar type


class Scalar:
    """Immutable exact scalar."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, value: Number | str = 0):
        if isinstance(value, str):
            from .textio import parse_scalar

            other = parse_scalar(value)
            self._num, self._den = other._num, other._den
        elif isinstance(value, Scalar):
            self._num, self._den = value._num, value._den
        else:
            q = _fmpq(value)
            self._num = {0: _const(q)} if q != 0 else {}
            self._den = _ONE_POLY
        self._hash = None

    # construction helpers ------------------------------------------------

    @classmethod
    def _raw(cls, num: dict, den) -> "Scalar":
        s = object.__new__(cls)
        s._num = num
        s._den = den
        s._hash = None
        return s

    @classmethod
    def _make(cls, num: dict, den) -> "Scalar":
        num = {m: p for m, p in num.items() if p != 0}
        if not num:
            return ZERO
        if den.is_constant():
            c = den.leading_coefficient()
            if c != 1:
                inv = 1 / c
                num = {m: p * inv for m, p in num.items()}
            return cls._raw(num, _ONE_POLY)
        g = den
        for p in num.values():
            g = g.gcd(p)
            if g.is_constant():
                break
        if not g.is_constant():
            den = den / g
            num = {m: p / g for m, p in num.items()}
        c = den.leading_coefficient()
        if c != 1:
            inv = 1 / c
            den = den * inv
            num = {m: p * inv for m, p in num.items()}
        return cls._raw(num, den)

    @classmethod
    def var(cls, name: str) -> "Scalar":
        if name not in VARIABLES:
            raise KeyError(f"unknown variable {name!r}")
        return cls._raw({0: _CTX.gens()[_CTX_NAMES.index(name)]}, _ONE_POLY)

    @classmethod
    def rad(cls, name: str) -> "Scalar":
        r = radical(name)
        return cls._raw({1 << r.bit: _ONE_POLY}, _ONE_POLY)

    # predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._num

    def __bool__(self) -> bool:
        return bool(self._num)

    def is_one(self) -> bool:
        return self._den == 1 and len(self._num) == 1 and self._num.get(0) == 1

    def is_rational(self) -> bool:
        if not self._num:
            return True
        return self._den.is_constant() and list(self._num) == [0] and self._num[0].is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        if not self._num:
            return Fraction(0)
        q = self._num[0].leading_coefficient()
        return Fraction(int(q.p), int(q.q))

    def is_radical_free(self) -> bool:
        return all(m == 0 for m in self._num)

    def _mask_union(self) -> int:
        u = 0
        for m in self._num:
            u |= m
        return u

    def radicals(self) -> list[str]:
        u = self._mask_union()
        return [r.name for r in _BY_BIT if u >> r.bit & 1]

    def variables(self) -> set[str]:
        out = set()
        for p in list(self._num.values()) + [self._den]:
            for name, d in zip(_CTX_NAMES, p.degrees()):
                if d > 0:
                    out.add(name)
        return out

    # arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Scalar | None":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return Scalar(other)
        return None

    def __neg__(self) -> "Scalar":
        return Scalar._raw({m: -p for m, p in self._num.items()}, self._den)

    def __pos__(self) -> "Scalar":
        return self

    def __add__(self, other) -> "Scalar":
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        if not o._num:
            return self
        if not self._num:
            return o
        if self._den == o._den:
            num = dict(self._num)
            for m, p in o._num.items():
                num[m] = num[m] + p if m in num else p
            if self._den.is_constant():
                return Scalar._raw({m: p for m, p in num.items() if p != 0}, _ONE_POLY) if any(
                    p != 0 for p in num.values()) else ZERO
            return Scalar._make(num, self._den)
        g = self._den.gcd(o._den)
        fa = o._den / g
        fb = self._den / g
        num = {m: p * fa for m, p in self._num.items()}
        for m, p in o._num.items():
            t = p * fb
            num[m] = num[m] + t if m in num else t
        return Scalar._make(num, self._den * fa)

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Scalar":
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def _scale(self, q) -> "Scalar":
        q = _fmpq(q)
        if q == 0 or not self._num:
            return ZERO
        if q == 1:
            return self
        return Scalar._raw({m: p * q for m, p in self._num.items()}, self._den)

    def __mul__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self._scale(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self._num or not other._num:
            return ZERO
        common = 0
        for m1 in self._num:
            for m2 in other._num:
                common |= m1 & m2
        extra_den = _ONE_POLY
        sq_num: dict[int, flint.fmpq_mpoly] = {}
        if common:
            for r in _BY_BIT:
                if common >> r.bit & 1:
                    extra_den = extra_den * r.square._den
        num: dict[int, flint.fmpq_mpoly] = {}
        for m1, p1 in self._num.items():
            for m2, p2 in other._num.items():
                t = p1 * p2
                c = m1 & m2
                if c:
                    f = sq_num.get(c)
                    if f is None:
                        f = _ONE_POLY
                        d = _ONE_POLY
                        for r in _BY_BIT:
                            if c >> r.bit & 1:
                                f = f * r.square._num[0]
                                d = d * r.square._den
                        f = f * (extra_den / d)
                        sq_num[c] = f
                    t = t * f
                elif common:
                    t = t * extra_den
                m = m1 ^ m2
                num[m] = num[m] + t if m in num else t
        den = self._den * other._den * extra_den
        if den.is_constant() and den == 1:
            num = {m: p for m, p in num.items() if p != 0}
            return Scalar._raw(num, _ONE_POLY) if num else ZERO
        return Scalar._make(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self._num:
            raise ZeroDenominator("division by zero scalar")
        numer = Scalar._raw(dict(self._num), _ONE_POLY)
        acc = ONE
        u = numer._mask_union()
        for r in _BY_BIT:
            if u >> r.bit & 1:
                conj = Scalar._raw(
                    {m: (-p if m >> r.bit & 1 else p) for m, p in numer._num.items()}, numer._den
                )
                numer = numer * conj
                acc = acc * conj
        # numer is now radical free: p/q
        p = numer._num[0]
        q = numer._den
        return acc * Scalar._make({0: q * self._den}, p)

    def __truediv__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction, flint.fmpq)):
            if other == 0:
                raise ZeroDenominator("division by zero")
            return self._scale(1 / _fmpq(other))
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.is_radical_free():
            if not other._num:
                raise ZeroDenominator("division by zero scalar")
            p = other._num[0]
            return Scalar._make({m: q * other._den for m, q in self._num.items()}, self._den * p)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Scalar":
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        if self._num.keys() != o._num.keys():
            return False
        if self._den != o._den:
            return False
        return all(self._num[m] == o._num[m] for m in self._num)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(render_scalar(self))
        return self._hash

    def __repr__(self) -> str:
        return f"Scalar({render_scalar(self)!r})"

    def __str__(self) -> str:
        return render_scalar(self)

    # automorphisms -------------------------------------------------------

    def flip(self, name: str) -> "Scalar":
        """Apply the automorphism sending radical ``name`` to its negative."""
        bit = radical(name).bit
        return Scalar._raw(
            {m: (-p if m >> bit & 1 else p) for m, p in self._num.items()}, self._den
        )

    def numerator_parts(self) -> dict[tuple[str, ...], "Scalar"]:
        out = {}
        for m, p in self._num.items():
            names = tuple(r.name for r in _BY_BIT if m >> r.bit & 1)
            out[names] = Scalar._raw({0: p}, _ONE_POLY)
        return out

    def denominator(self) -> "Scalar":
        return Scalar._raw({0: self._den}, _ONE_POLY)


ZERO = Scalar._raw({}, _ONE_POLY)
ONE = Scalar._raw({0: _ONE_POLY}, _ONE_POLY)


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return Scalar(x)
    return Scalar(x)


A = Scalar.var("a")
K = Scalar.var("k")
C = Scalar.var("c")
EPS = Scalar.var("eps")

# square root of -1
register_radical("I", -1)
# square root of the level
register_radical("SQRTK", K)
# normalisation of the weight-two primary in the (c, eps) presentation
register_radical("MU", Fraction(9, 2) * C * (4 + EPS * EPS) / (27 - 2 * C))
# normalisation appearing in the weight-two field H
register_radical(
    "RHO",
    Fraction(-3, 2) * (2 * K - 1) * A**2 * (1 + A) ** 2 * (2 * K + 4 * K**2 - A * (1 + A)),
)

I = Scalar.rad("I")
SQRTK = Scalar.rad("SQRTK")
MU = Scalar.rad("MU")
RHO = Scalar.rad("RHO")


def _prime_radical(p: int) -> Radical:
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise KeyError(f"SQRT{p}: {p} is not prime")
    return register_radical(f"SQRT{p}", p)


def sqrt_rational(q: Number) -> Scalar:
    """Canonical square root of a rational number.

    The positive real root of |q| is returned, times ``I`` when q < 0.  Prime
    square roots are adjoined on demand as radicals named ``SQRT<p>``.
    """
    q = Fraction(int(_fmpq(q).p), int(_fmpq(q).q)) if not isinstance(q, Fraction) else q
    if q == 0:
        return ZERO
    n = abs(q.numerator) * q.denominator
    out = Scalar(Fraction(1, q.denominator))
    for p, e in flint.fmpz(n).factor():
        p, e = int(p), int(e)
        if e // 2:
            out = out * p ** (e // 2)
        if e % 2:
            out = out * Scalar.rad(_prime_radical(p).name)
    if q < 0:
        out = out * I
    return out


# ---------------------------------------------------------------------------
# substitution and specialisation


def _poly_subs(p, values: Mapping[str, Scalar], rational: dict[str, flint.fmpq]) -> Scalar:
    if rational:
        p = p.subs(rational)
    if not values:
        return Scalar._raw({0: p}, _ONE_POLY) if p != 0 else ZERO
    out = ZERO
    powers: dict[tuple[str, int], Scalar] = {}
    for exps, coeff in zip(p.monoms(), p.coeffs()):
        term = Scalar._raw({0: _CTX.constant(coeff)}, _ONE_POLY)
        rest = [0] * len(_CTX_NAMES)
        for idx, e in enumerate(exps):
            e = int(e)
            if not e:
                continue
            name = _CTX_NAMES[idx]
            if name in values:
                key = (name, e)
                pw = powers.get(key)
                if pw is None:
                    pw = values[name] ** e
                    powers[key] = pw
                term = term * pw
            else:
                rest[idx] = e
        if any(rest):
            term = term * Scalar._raw({0: _CTX.from_dict({tuple(rest): 1})}, _ONE_POLY)
        out = out + term
    return out


def substitute(
    x: Scalar,
    values: Mapping[str, Scalar | Number],
    radicals: Mapping[str, Scalar] | None = None,
) -> Scalar:
    """Ring homomorphism substituting variables and radical values.

    A radical whose radicand is moved by the substitution must either be given
    an explicit value in ``radicals`` (checked against its radicand) or have a
    radicand that becomes a rational number, in which case the canonical root
    from :func:`sqrt_rational` is used.
    """
    radicals = dict(radicals or {})
    svalues: dict[str, Scalar] = {}
    rational: dict[str, flint.fmpq] = {}
    for name, v in values.items():
        if name not in VARIABLES:
            raise KeyError(f"unknown variable {name!r}")
        v = as_scalar(v)
        if v.is_rational():
            fr = v.to_fraction()
            rational[name] = flint.fmpq(fr.numerator, fr.denominator)
        else:
            svalues[name] = v

    def sub_poly(p):
        return _poly_subs(p, svalues, rational)

    den = sub_poly(x._den)
    if den.is_zero():
        raise PoleAtPoint(f"denominator of {x} vanishes")
    mask = x._mask_union()
    rad_val: dict[int, Scalar] = {}
    for r in _BY_BIT:
        if not mask >> r.bit & 1:
            continue
        new_sq = substitute(r.square, values) if r.square.variables() & set(values) else r.square
        if r.name in radicals:
            v = as_scalar(radicals[r.name])
            if v * v != new_sq:
                raise InconsistentRadical(f"value {v} for {r.name} does not square to {new_sq}")
        elif new_sq == r.square:
            v = Scalar.rad(r.name)
        elif new_sq.is_rational():
            v = sqrt_rational(new_sq.to_fraction())
        else:
            raise InconsistentRadical(f"no value supplied for radical {r.name} with radicand {new_sq}")
        rad_val[r.bit] = v
    out = ZERO
    for m, p in x._num.items():
        term = sub_poly(p)
        for bit, v in rad_val.items():
            if m >> bit & 1:
                term = term * v
        out = out + term
    return out / den


@dataclass(frozen=True)
class ParamPoint:
    """Values for the parameters, plus optional explicit radical values."""

    values: Mapping[str, Scalar | Number]
    radicals: Mapping[str, Scalar] = field(default_factory=dict)

    def __hash__(self):
        return hash((tuple(sorted((k, str(v)) for k, v in self.values.items())),
                     tuple(sorted((k, str(v)) for k, v in self.radicals.items()))))


def specialize(x: Scalar, point: ParamPoint) -> Scalar:
    return substitute(x, point.values, point.radicals)


# ---------------------------------------------------------------------------
# rendering


def _render_poly(p) -> str:
    if p == 0:
        return "0"
    pieces: list[str] = []
    for exps, coeff in zip(p.monoms(), p.coeffs()):
        mono = []
        for idx, name in _RENDER_ORDER:
            e = exps[idx]
            if e == 1:
                mono.append(name)
            elif e > 1:
                mono.append(f"{name}^{e}")
        neg = coeff < 0
        mag = -coeff if neg else coeff
        if mono:
            body = "*".join(mono) if mag == 1 else f"{mag}*" + "*".join(mono)
        else:
            body = str(mag)
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


def _is_single_term(s: str) -> bool:
    return " + " not in s and " - " not in s


def render_scalar(x: Scalar) -> str:
    """Deterministic ASCII rendering, parseable by :func:`textio.parse_scalar`."""
    if not x._num:
        return "0"
    parts = []
    for m in sorted(x._num, key=lambda m: (bin(m).count("1"), [r.bit for r in _BY_BIT if m >> r.bit & 1])):
        p = x._num[m]
        ps = _render_poly(p)
        if m == 0:
            parts.append(ps)
            continue
        rads = "*".join(r.name for r in _BY_BIT if m >> r.bit & 1)
        if ps == "1":
            parts.append(rads)
        elif ps == "-1":
            parts.append("-" + rads)
        elif _is_single_term(ps):
            parts.append(f"{ps}*{rads}")
        else:
            parts.append(f"({ps})*{rads}")
    num = parts[0]
    for s in parts[1:]:
        num += " - " + s[1:] if s.startswith("-") else " + " + s
    if x._den == 1:
        return num
    den = _render_poly(x._den)
    if _is_single_term(num) and "/" not in num:
        return f"{num}/({den})"
    return f"({num})/({den})"


def render_factored(x: Scalar) -> str:
    """Human oriented rendering with numerator and denominator factored."""
    if not x._num or not x.is_radical_free():
        return render_scalar(x)

    def fac(p):
        content, factors = p.factor()
        items = [] if content == 1 else [str(content)]
        for f, e in factors:
            s = _render_poly(f)
            s = s if _is_single_term(s) else f"({s})"
            items.append(s if e == 1 else f"{s}^{e}")
        return "*".join(items) or "1"

    num = fac(x._num[0])
    if x._den == 1:
        return num
    return f"{num}/({fac(x._den)})"
