"""Exact scalar expressions over a coordinate chart.

A :class:`ScalarExpr` is a quotient of two polynomials with Gaussian
rational coefficients.  The polynomial variables are the chart coordinates
plus, for every angle coordinate ``psi``, two extra variables standing for
``sin(psi)`` and ``cos(psi)``.  Polynomials are kept reduced modulo
``sin^2 + cos^2 - 1`` by rewriting ``sin^2`` as ``1 - cos^2``, so that a
numerator is zero exactly when the expression is.

Expression grammar accepted by :func:`parse`::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' exponent)?
    exponent:= ['-'] INTEGER | '(' ['-'] INTEGER ')'
    atom    := NUMBER | 'i' | IDENT | ('sin' | 'cos') '(' IDENT ')' | '(' expr ')'

``NUMBER`` is a decimal rational such as ``3`` or ``1.25``; ``IDENT`` matches
``[a-zA-Z][a-zA-Z0-9_]*`` and must be a coordinate of the chart; ``i`` is the
imaginary unit.  ``sin`` and ``cos`` only accept angle coordinates.
Whitespace is ignored.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from sympy import Symbol
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from .errors import ChartMismatchError, ParseError, UnknownIdentifierError

_IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")
_RESERVED = {"i", "sin", "cos"}


@dataclass(frozen=True)
class Chart:
    """Ordered real coordinates; ``angles`` are circle half-angle coordinates."""

    coords: tuple[str, ...]
    angles: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "angles", tuple(self.angles))
        if len(set(self.coords)) != len(self.coords):
            raise ValueError(f"duplicate coordinate names in {self.coords}")
        for name in self.coords:
            if not _IDENT.match(name) or name in _RESERVED:
                raise ValueError(f"invalid coordinate name {name!r}")
        for a in self.angles:
            if a not in self.coords:
                raise ValueError(f"angle coordinate {a!r} is not a chart coordinate")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, name: str) -> int:
        try:
            return self.coords.index(name)
        except ValueError:
            raise UnknownIdentifierError(f"unknown coordinate {name!r}") from None

    def extend(self, *names: str, angles=()) -> "Chart":
        return Chart(self.coords + tuple(names), self.angles + tuple(angles))

    def drop(self, *names: str) -> "Chart":
        for n in names:
            self.index(n)
        return Chart(tuple(c for c in self.coords if c not in names),
                     tuple(c for c in self.angles if c not in names))

    def is_subchart_of(self, other: "Chart") -> bool:
        return set(self.coords) <= set(other.coords) and set(self.angles) <= set(other.angles)

    # constructors for scalars on this chart
    def var(self, name: str) -> "ScalarExpr":
        idx = self.index(name)
        R = _ring(self)
        return ScalarExpr._raw(self, R.gens[idx], R.one)

    def vars(self) -> list["ScalarExpr"]:
        return [self.var(c) for c in self.coords]

    def const(self, value) -> "ScalarExpr":
        return ScalarExpr.constant(self, value)

    @property
    def zero(self) -> "ScalarExpr":
        return ScalarExpr.constant(self, 0)

    @property
    def one(self) -> "ScalarExpr":
        return ScalarExpr.constant(self, 1)

    @property
    def i(self) -> "ScalarExpr":
        return ScalarExpr.constant(self, QQ_I(0, 1))

    def sin(self, name: str) -> "ScalarExpr":
        s, _ = _trig_index(self, name)
        R = _ring(self)
        return ScalarExpr._raw(self, R.gens[s], R.one)

    def cos(self, name: str) -> "ScalarExpr":
        _, c = _trig_index(self, name)
        R = _ring(self)
        return ScalarExpr._raw(self, R.gens[c], R.one)

    def parse(self, text: str) -> "ScalarExpr":
        return parse(text, self)

    def __str__(self):
        extra = f"; angles {', '.join(self.angles)}" if self.angles else ""
        return f"({', '.join(self.coords)}{extra})"


def _trig_names(angle: str) -> tuple[str, str]:
    # leading underscore keeps these disjoint from user coordinate names
    return f"_sin_{angle}", f"_cos_{angle}"


@lru_cache(maxsize=None)
def _ring_for(coords: tuple[str, ...], angles: tuple[str, ...]) -> PolyRing:
    names = list(coords)
    for a in angles:
        names.extend(_trig_names(a))
    return PolyRing([Symbol(n) for n in names], QQ_I, lex)


@lru_cache(maxsize=None)
def _real_ring_for(coords, angles) -> PolyRing:
    R = _ring_for(coords, angles)
    return PolyRing(R.symbols, QQ, lex)


def _ring(chart: Chart) -> PolyRing:
    return _ring_for(chart.coords, chart.angles)


def _trig_index(chart: Chart, angle: str) -> tuple[int, int]:
    if angle not in chart.angles:
        raise UnknownIdentifierError(f"{angle!r} is not an angle coordinate")
    k = chart.angles.index(angle)
    base = chart.dim + 2 * k
    return base, base + 1


def _trig_pairs(chart: Chart):
    return [(chart.dim + 2 * k, chart.dim + 2 * k + 1) for k in range(len(chart.angles))]


def _to_domain(value):
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return QQ_I(value, 0)
    if isinstance(value, Fraction):
        return QQ_I(QQ(value.numerator, value.denominator), 0)
    if isinstance(value, complex):
        re_, im_ = Fraction(value.real), Fraction(value.imag)
        if re_ != value.real or im_ != value.imag or not (re_.denominator == 1 and im_.denominator == 1):
            raise TypeError("only integer-valued complex literals are accepted")
        return QQ_I(int(re_), int(im_))
    if QQ_I.of_type(value):
        return value
    raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")


def _reduce_trig(p, pairs):
    """Rewrite sin^2 -> 1 - cos^2 for each (sin, cos) variable pair."""
    if not pairs or not any(m[s] >= 2 for m in p for s, _ in pairs):
        return p
    dom = p.ring.domain
    acc: dict = {}
    for mono, coeff in p.items():
        terms = {mono: coeff}
        for s, c in pairs:
            nxt: dict = {}
            for m, co in terms.items():
                e = m[s]
                if e < 2:
                    nxt[m] = nxt.get(m, dom.zero) + co
                    continue
                a, r = divmod(e, 2)
                for k in range(a + 1):
                    mm = list(m)
                    mm[s] = r
                    mm[c] += 2 * k
                    mm = tuple(mm)
                    nxt[mm] = nxt.get(mm, dom.zero) + co * (comb(a, k) * (-1) ** k)
            terms = nxt
        for m, co in terms.items():
            acc[m] = acc.get(m, dom.zero) + co
    return p.ring.from_dict({m: c for m, c in acc.items() if c})


def _is_real_poly(p) -> bool:
    return all(c.y == 0 for c in p.values())


def _real_part_poly(p, RR):
    return RR.from_dict({m: c.x for m, c in p.items() if c.x})


def _imag_part_poly(p, RR):
    return RR.from_dict({m: c.y for m, c in p.items() if c.y})


def _gcd(num, den, chart):
    """A common divisor of num and den; exact over QQ_I when den is complex."""
    if _is_real_poly(den):
        RR = _real_ring_for(chart.coords, chart.angles)
        d = _real_part_poly(den, RR)
        g = d.gcd(_real_part_poly(num, RR))
        if not _is_real_poly(num) and not g.is_ground:
            g = g.gcd(_imag_part_poly(num, RR))
        R = num.ring
        return R.from_dict({m: QQ_I(c, 0) for m, c in g.items()})
    return num.gcd(den)


def _normalize(chart, num, den):
    pairs = _trig_pairs(chart)
    num = _reduce_trig(num, pairs)
    den = _reduce_trig(den, pairs)
    if not den:
        raise ZeroDivisionError("denominator is identically zero")
    R = num.ring
    if not num:
        return R.zero, R.one
    if den.is_ground:
        c = den.LC
        if c != R.domain.one:
            num = num.quo_ground(c)
        return num, R.one
    if len(den) == 1:
        # monomial denominator: cancel the common monomial factor
        (dm, dc), = den.items()
        common = list(dm)
        for m in num:
            common = [min(a, b) for a, b in zip(common, m)]
            if not any(common):
                break
        if any(common):
            num = R.from_dict({tuple(a - b for a, b in zip(m, common)): c for m, c in num.items()})
            dm = tuple(a - b for a, b in zip(dm, common))
        num = num.quo_ground(dc)
        return num, R.from_dict({dm: R.domain.one})
    g = _gcd(num, den, chart)
    if not g.is_ground:
        num = num.exquo(g)
        den = den.exquo(g)
        if den.is_ground:
            return num.quo_ground(den.LC), R.one
    lc = den.LC
    if lc != R.domain.one:
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return num, den


class ScalarExpr:
    """Immutable exact rational function on a chart."""

    __slots__ = ("chart", "num", "den")

    def __init__(self, chart: Chart, num, den=None):
        R = _ring(chart)
        if den is None:
            den = R.one
        num, den = _normalize(chart, num, den)
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def _raw(cls, chart, num, den):
        obj = cls.__new__(cls)
        object.__setattr__(obj, "chart", chart)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", den)
        return obj

    def __setattr__(self, *_):
        raise AttributeError("ScalarExpr is immutable")

    @classmethod
    def constant(cls, chart: Chart, value) -> "ScalarExpr":
        R = _ring(chart)
        return cls._raw(chart, R.ground_new(_to_domain(value)), R.one)

    # coercion -------------------------------------------------------------
    def _coerce(self, other) -> "ScalarExpr":
        if isinstance(other, ScalarExpr):
            if other.chart != self.chart:
                raise ChartMismatchError(f"chart mismatch: {self.chart} vs {other.chart}")
            return other
        return ScalarExpr.constant(self.chart, other)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.den == self.den:
            if self.den.is_ground:
                return ScalarExpr._raw(self.chart, self.num + o.num, self.den)
            return ScalarExpr(self.chart, self.num + o.num, self.den)
        return ScalarExpr(self.chart, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarExpr._raw(self.chart, -self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num or not o.num:
            return self.chart.zero
        if self.den.is_ground and o.den.is_ground:
            pairs = _trig_pairs(self.chart)
            return ScalarExpr._raw(self.chart, _reduce_trig(self.num * o.num, pairs), self.den)
        return ScalarExpr(self.chart, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by an identically zero expression")
        return ScalarExpr(self.chart, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return self.chart.one / (self ** (-n))
        return ScalarExpr(self.chart, self.num ** n, self.den ** n)

    # predicates -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def is_real(self) -> bool:
        """True when every coefficient of the normalized form is real."""
        return _is_real_poly(self.num) and _is_real_poly(self.den)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return self.num == o.num
        return (self - o).is_zero()

    def __hash__(self):
        return hash((self.chart, str(self)))

    def __bool__(self):
        return not self.is_zero()

    # calculus -------------------------------------------------------------
    def diff(self, coord) -> "ScalarExpr":
        """Exact partial derivative along a chart coordinate (name or index)."""
        idx = coord if isinstance(coord, int) else self.chart.index(coord)
        if not 0 <= idx < self.chart.dim:
            raise UnknownIdentifierError(f"coordinate index {idx} out of range")
        dn = _poly_diff(self.chart, self.num, idx)
        if self.den.is_ground:
            return ScalarExpr._raw(self.chart, _reduce_trig(dn, _trig_pairs(self.chart)), self.den)
        dd = _poly_diff(self.chart, self.den, idx)
        return ScalarExpr(self.chart, dn * self.den - self.num * dd, self.den ** 2)

    def conj(self) -> "ScalarExpr":
        """Complex conjugate; coordinates and sin/cos are real."""
        R = _ring(self.chart)
        return ScalarExpr(self.chart, _conj_poly(self.num, R), _conj_poly(self.den, R))

    def re(self) -> "ScalarExpr":
        return (self + self.conj()) * Fraction(1, 2)

    def im(self) -> "ScalarExpr":
        return (self - self.conj()) * QQ_I(0, -1) * Fraction(1, 2)

    def depends_on(self, coord: str) -> bool:
        return not self.diff(coord).is_zero()

    # chart changes ---------------------------------------------------------
    def on(self, chart: Chart) -> "ScalarExpr":
        """Re-embed on a chart whose coordinates include this one's."""
        if chart == self.chart:
            return self
        if not self.chart.is_subchart_of(chart):
            raise ChartMismatchError(f"cannot move {self.chart} onto {chart}")
        R = _ring(chart)
        return ScalarExpr._raw(chart, self.num.set_ring(R), self.den.set_ring(R))

    def restrict(self, chart: Chart) -> "ScalarExpr":
        """Move onto a chart with fewer coordinates; dropped ones must not occur."""
        if chart == self.chart:
            return self
        R = _ring(chart)
        keep = set(R.symbols)
        used = [Symbol(n) in keep for n in map(str, _ring(self.chart).symbols)]
        for p in (self.num, self.den):
            for mono in p.itermonoms():
                if any(e and not k for e, k in zip(mono, used)):
                    raise ChartMismatchError(f"{self} involves coordinates outside {chart}")
        return ScalarExpr._raw(chart, self.num.set_ring(R), self.den.set_ring(R))

    def substitute(self, images: dict, chart: Chart) -> "ScalarExpr":
        """Replace each coordinate name by an expression on ``chart``.

        Coordinates missing from ``images`` are mapped to the same-named
        coordinate of ``chart``.  Expressions with angle coordinates cannot
        be substituted.
        """
        if self.chart.angles:
            raise ValueError("substitution of charts with angle coordinates is not supported")
        gens = []
        for name in self.chart.coords:
            img = images.get(name)
            if img is None:
                img = chart.var(name)
            elif not isinstance(img, ScalarExpr):
                img = chart.const(img)
            gens.append(img)
        num = _eval_poly(self.num, gens, chart)
        den = _eval_poly(self.den, gens, chart)
        return num / den

    # printing -------------------------------------------------------------
    def __str__(self):
        return format_expr(self)

    def __repr__(self):
        return f"ScalarExpr({format_expr(self)!r})"


def _poly_diff(chart, p, idx):
    if not p:
        return p
    R = p.ring
    out = p.diff(R.gens[idx])
    if chart.coords[idx] in chart.angles:
        s, c = _trig_index(chart, chart.coords[idx])
        out = out + R.gens[c] * p.diff(R.gens[s]) - R.gens[s] * p.diff(R.gens[c])
    return out


def _conj_poly(p, R):
    return R.from_dict({m: QQ_I(c.x, -c.y) for m, c in p.items()})


def _eval_poly(p, gens, chart):
    out = chart.zero
    cache: dict = {}
    for mono, coeff in p.items():
        term = ScalarExpr.constant(chart, coeff)
        for k, e in enumerate(mono):
            if e:
                key = (k, e)
                if key not in cache:
                    cache[key] = gens[k] ** e
                term = term * cache[key]
        out = out + term
    return out


# ----------------------------------------------------------------------------
# canonical printing


def _fmt_rational(q) -> str:
    n, d = int(q.numerator), int(q.denominator)
    return str(n) if d == 1 else f"{n}/{d}"


def _fmt_monomial(chart, mono) -> str:
    names = list(chart.coords)
    for a in chart.angles:
        names += [f"sin({a})", f"cos({a})"]
    parts = []
    for name, e in zip(names, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _fmt_poly(chart, p) -> tuple[str, int]:
    """Return (text, number of terms)."""
    if not p:
        return "0", 1
    out = []
    for mono, c in p.terms():
        mon = _fmt_monomial(chart, mono)
        re_, im_ = c.x, c.y
        neg = False
        if im_ == 0:
            neg = re_ < 0
            mag = -re_ if neg else re_
            coef = "" if (mag == 1 and mon) else _fmt_rational(mag)
        elif re_ == 0:
            neg = im_ < 0
            mag = -im_ if neg else im_
            coef = "i" if mag == 1 else f"{_fmt_rational(mag)}*i"
        else:
            sign = "+" if im_ > 0 else "-"
            mag = im_ if im_ > 0 else -im_
            imag = "i" if mag == 1 else f"{_fmt_rational(mag)}*i"
            coef = f"({_fmt_rational(re_)} {sign} {imag})"
        if coef and mon:
            body = f"{coef}*{mon}"
        else:
            body = coef or mon
        out.append((neg, body))
    text = ("-" if out[0][0] else "") + out[0][1]
    for neg, body in out[1:]:
        text += (" - " if neg else " + ") + body
    return text, len(out)


def format_expr(e: ScalarExpr) -> str:
    """Canonical text form; parses back to the same expression."""
    num, nterms = _fmt_poly(e.chart, e.num)
    if e.den.is_ground:
        return num
    den, dterms = _fmt_poly(e.chart, e.den)
    if nterms > 1 or "(" in num or "/" in num:
        num = f"({num})"
    if dterms > 1 or "*" in den or "/" in den or "(" in den:
        den = f"({den})"
    return f"{num}/{den}"


# ----------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text, chart):
        self.text = text
        self.chart = chart
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value or kind == "end":
            what = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {value!r}, found {what}", pos, self.text)

    def fail(self, message):
        raise ParseError(message, self.peek()[2], self.text)

    def parse(self):
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos, self.text)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            kind, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                e = e * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero", pos, self.text)
                e = e / rhs
        return e

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.unary()
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            _, _, pos = self.take()
            n = self.exponent()
            if n < 0 and base.is_zero():
                raise ParseError("negative power of zero", pos, self.text)
            return base ** n
        return base

    def exponent(self) -> int:
        paren = False
        if self.peek()[1] == "(" and self.peek()[0] == "op":
            self.take()
            paren = True
        sign = 1
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "num" or "." in val:
            raise ParseError("exponent must be an integer literal", pos, self.text)
        if paren:
            self.expect(")")
        return sign * int(val)

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return self.chart.const(Fraction(val))
        if kind == "ident":
            if val == "i":
                return self.chart.i
            if val in ("sin", "cos"):
                self.expect("(")
                k2, name, p2 = self.take()
                if k2 != "ident":
                    raise ParseError(f"{val} expects an angle coordinate", p2, self.text)
                if name not in self.chart.angles:
                    raise UnknownIdentifierError(
                        f"{val} is only defined for angle coordinates, not {name!r}", p2, self.text
                    )
                self.expect(")")
                return self.chart.sin(name) if val == "sin" else self.chart.cos(name)
            if val not in self.chart.coords:
                raise UnknownIdentifierError(f"unknown identifier {val!r}", pos, self.text)
            return self.chart.var(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what}", pos, self.text)


def parse(text: str, chart: Chart) -> ScalarExpr:
    """Parse ``text`` into a normalized expression on ``chart``."""
    return _Parser(text, chart).parse()


def diff(e: ScalarExpr, coord) -> ScalarExpr:
    return e.diff(coord)


def is_zero(e: ScalarExpr) -> bool:
    return e.is_zero()


def as_scalar(value, chart: Chart) -> ScalarExpr:
    if isinstance(value, ScalarExpr):
        if value.chart != chart:
            return value.on(chart)
        return value
    if isinstance(value, str):
        return parse(value, chart)
    return ScalarExpr.constant(chart, value)
