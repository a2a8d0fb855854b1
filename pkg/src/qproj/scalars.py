"""Exact coefficients: rational functions in v = q^(1/D), plus q-integers.

A :class:`Scalar` stores ``num(v)/den(v)`` with ``q = v**root``.  The pair is
kept coprime with a monic denominator, and ``root`` is lowered whenever the
value is already a function of a coarser power of ``v``, so two scalars are
equal exactly when their stored triples are equal.

Polynomials are python-flint ``fmpq_poly`` objects (exact rational coefficients).
"""

import math
import re
from fractions import Fraction
from functools import lru_cache, reduce

from flint import fmpq, fmpq_poly

from .errors import DivisionByZero, OutOfRange, ParseError

_ONE_POLY = fmpq_poly([1])
_ZERO_POLY = fmpq_poly([])


def _inflate(p, k):
    """Substitute v -> v**k."""
    if k == 1 or p.degree() <= 0:
        return p
    coeffs = p.coeffs()
    out = [0] * (k * (len(coeffs) - 1) + 1)
    for i, c in enumerate(coeffs):
        out[i * k] = c
    return fmpq_poly(out)


def _deflate(p, k):
    if k == 1:
        return p
    return fmpq_poly(p.coeffs()[::k])


def _exponent_gcd(p):
    g = 0
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            g = math.gcd(g, i)
    return g


def _reverse(p):
    return fmpq_poly(p.coeffs()[::-1])


def _low_degree(p):
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    return 0


def _to_fmpq(x):
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    return fmpq(x)


class Scalar:
    """An element of Q(q^(1/D)); immutable."""

    __slots__ = ("num", "den", "root", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self.num, self.den, self.root = value.num, value.den, value.root
        else:
            self.num = fmpq_poly([_to_fmpq(value)]) if value else _ZERO_POLY
            self.den = _ONE_POLY
            self.root = 1
        self._hash = None

    @classmethod
    def _raw(cls, num, den, root):
        s = object.__new__(cls)
        s.num, s.den, s.root, s._hash = num, den, root, None
        return s

    @classmethod
    def from_polys(cls, num, den=None, root=1):
        """Build and normalize ``num(v)/den(v)`` with ``q = v**root``."""
        if den is None:
            den = _ONE_POLY
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            return ZERO
        if den.degree() == 0:
            c = den.coeffs()[0]
            if c != 1:
                num = num / c
            den = _ONE_POLY
        else:
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        if root > 1:
            g = math.gcd(root, math.gcd(_exponent_gcd(num), _exponent_gcd(den)))
            if g > 1:
                num, den, root = _deflate(num, g), _deflate(den, g), root // g
        return cls._raw(num, den, root)

    @classmethod
    def q_power(cls, exponent, coeff=1):
        """``coeff * q**exponent`` for an integer or rational exponent."""
        e = Fraction(exponent)
        root = e.denominator
        k = e.numerator
        c = _to_fmpq(coeff)
        if c == 0:
            return ZERO
        if k >= 0:
            return cls._raw(fmpq_poly([0] * k + [c]), _ONE_POLY, root)
        return cls._raw(fmpq_poly([c]), fmpq_poly([0] * (-k) + [1]), root)

    @classmethod
    def from_laurent(cls, terms):
        """Build from a mapping {q-exponent: coefficient}."""
        total = ZERO
        for e, c in terms.items():
            total = total + cls.q_power(e, c)
        return total

    def _lift(self, other):
        if self.root == other.root:
            return self.num, self.den, other.num, other.den, self.root
        r = self.root * other.root // math.gcd(self.root, other.root)
        a, b = r // self.root, r // other.root
        return (_inflate(self.num, a), _inflate(self.den, a),
                _inflate(other.num, b), _inflate(other.den, b), r)

    @staticmethod
    def _coerce(x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        an, ad, bn, bd, r = self._lift(other)
        if ad == bd:
            if ad.is_one():
                n = an + bn
                return Scalar.from_polys(n, None, r) if r > 1 or n.is_zero() else Scalar._raw(n, _ONE_POLY, r)
            return Scalar.from_polys(an + bn, ad, r)
        return Scalar.from_polys(an * bd + bn * ad, ad * bd, r)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.num, self.den, self.root) if self else self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        an, ad, bn, bd, r = self._lift(other)
        if ad.is_one() and bd.is_one():
            n = an * bn
            return Scalar.from_polys(n, None, r) if r > 1 else Scalar._raw(n, _ONE_POLY, r)
        return Scalar.from_polys(an * bn, ad * bd, r)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return Scalar.from_polys(self.den, self.num, self.root)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise DivisionByZero("division by zero scalar")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            other = self._coerce(other)
            if other is NotImplemented:
                return False
        return self.root == other.root and self.num == other.num and self.den == other.den

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(str(c) for c in self.num.coeffs()),
                               tuple(str(c) for c in self.den.coeffs()), self.root))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.root == 1 and self.den.is_one() and self.num.is_one()

    def bar(self):
        """The involution q -> q^-1."""
        if self.num.is_zero():
            return self
        shift = self.den.degree() - self.num.degree()
        num = _reverse(self.num)
        den = _reverse(self.den)
        if shift >= 0:
            num = num * fmpq_poly([0] * shift + [1])
        else:
            den = den * fmpq_poly([0] * (-shift) + [1])
        return Scalar.from_polys(num, den, self.root)

    def is_laurent(self):
        """True when the denominator is a power of v."""
        return _low_degree(self.den) == self.den.degree()

    def laurent_terms(self):
        """Return {q-exponent (Fraction): coefficient (Fraction)}; requires a Laurent value."""
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        shift = self.den.degree()
        out = {}
        for i, c in enumerate(self.num.coeffs()):
            if c != 0:
                out[Fraction(i - shift, self.root)] = Fraction(int(c.p), int(c.q))
        return out

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __str__(self):
        return render_scalar(self)

    @classmethod
    def parse(cls, text):
        return parse_scalar(text)


ZERO = Scalar._raw(_ZERO_POLY, _ONE_POLY, 1)
ONE = Scalar._raw(_ONE_POLY, _ONE_POLY, 1)


def q(exponent=1):
    return Scalar.q_power(exponent)


# --- q-combinatorics ---------------------------------------------------------

@lru_cache(maxsize=None)
def q_integer(n, d=1):
    """[n]_d = (q^(dn) - q^(-dn)) / (q^d - q^(-d))."""
    if n < 0:
        return -q_integer(-n, d)
    return Scalar.from_laurent({d * (n - 1 - 2 * k): 1 for k in range(n)})


@lru_cache(maxsize=None)
def q_factorial(n, d=1):
    if n < 0:
        raise OutOfRange(f"factorial of negative {n}")
    return reduce(lambda acc, k: acc * q_integer(k, d), range(1, n + 1), ONE)


@lru_cache(maxsize=None)
def q_binomial(m, k, d=1, strict=True):
    """Gaussian binomial [m choose k]_d.

    Out-of-range ``k`` raises OUT_OF_RANGE unless ``strict`` is False, in
    which case the conventional value 0 is returned.
    """
    if k < 0 or k > m:
        if strict:
            raise OutOfRange(f"q_binomial({m}, {k}) needs 0 <= k <= m")
        return ZERO
    return q_factorial(m, d) / (q_factorial(k, d) * q_factorial(m - k, d))


# --- text ----------------------------------------------------------------------

def _fmt_exp(e):
    e = Fraction(e)
    if e.denominator == 1:
        return "q" if e == 1 else f"q^{e.numerator}"
    return f"q^({e.numerator}/{e.denominator})"


def _fmt_coeff(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_laurent(terms, ascending=False):
    items = sorted(((e, c) for e, c in terms.items() if c), reverse=not ascending)
    if not items:
        return "0"
    parts = []
    for idx, (e, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = _fmt_exp(e)
        else:
            body = f"{_fmt_coeff(mag)} {_fmt_exp(e)}"
        if idx == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


def _shifted_terms(poly, shift, root):
    return {Fraction(i - shift, root): Fraction(int(c.p), int(c.q))
            for i, c in enumerate(poly.coeffs()) if c != 0}


def render_scalar(s):
    """Render in q.  Laurent values print descending; true fractions print as
    ``num/(den)`` with the denominator centred on q^0, listed ascending, and
    starting with a positive coefficient."""
    if s.is_laurent():
        return render_laurent(s.laurent_terms())
    num, den = s.num, s.den
    lo, hi = _low_degree(den), den.degree()
    shift = (lo + hi) // 2
    # integer, primitive denominator coefficients
    scale = Fraction(1)
    dcoeffs = [Fraction(int(c.p), int(c.q)) for c in den.coeffs() if c != 0]
    lcm_den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in dcoeffs), 1)
    scale *= lcm_den
    g = reduce(math.gcd, (int(c * lcm_den) for c in dcoeffs))
    scale /= g
    nterms = {e: c * scale for e, c in _shifted_terms(num, shift, s.root).items()}
    dterms = {e: c * scale for e, c in _shifted_terms(den, shift, s.root).items()}
    if dterms[min(dterms)] < 0:
        nterms = {e: -c for e, c in nterms.items()}
        dterms = {e: -c for e, c in dterms.items()}
    ntext = render_laurent(nterms)
    if len(nterms) > 1:
        ntext = f"({ntext})"
    return f"{ntext}/({render_laurent(dterms, ascending=True)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|([-+*/^()]))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("INT", int(m.group(1)), start))
        elif m.group(2):
            out.append(("Q", "q", start))
        else:
            out.append((m.group(3), m.group(3), start))
        pos = m.end()
    out.append(("END", None, len(text)))
    return out


class _ScalarParser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        value = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while True:
            k = self.peek()
            if k == "*":
                self.take()
                value = value * self.factor()
            elif k == "/":
                self.take()
                value = value / self.factor()
            elif k in ("INT", "Q", "("):
                value = value * self.factor()
            else:
                return value

    def exponent(self):
        if self.peek() == "(":
            self.take()
            sign = -1 if self.peek() == "-" and self.take() else 1
            num = self.take("INT")[1]
            den = 1
            if self.peek() == "/":
                self.take()
                den = self.take("INT")[1]
            self.take(")")
            return Fraction(sign * num, den)
        sign = -1 if self.peek() == "-" and self.take() else 1
        return Fraction(sign * self.take("INT")[1])

    def factor(self):
        kind, val, pos = self.toks[self.i]
        if kind == "INT":
            self.take()
            return Scalar(val)
        if kind == "Q":
            self.take()
            e = Fraction(1)
            if self.peek() == "^":
                self.take()
                e = self.exponent()
            return Scalar.q_power(e)
        if kind == "(":
            self.take()
            value = self.expr()
            self.take(")")
            if self.peek() == "^":
                self.take()
                e = self.exponent()
                if e.denominator != 1:
                    raise ParseError("fractional power of a compound scalar", pos)
                value = value ** int(e)
            return value
        raise ParseError(f"unexpected {val!r}", pos)


def parse_scalar(text):
    """Parse text such as ``q^2 + 1 + q^-2``, ``(q^2+1)/(q^-1 - q)`` or ``3/2 q^(1/2)``."""
    p = _ScalarParser(_tokenize(text))
    value = p.expr()
    if p.peek() != "END":
        raise ParseError(f"trailing input {p.toks[p.i][1]!r}", p.toks[p.i][2])
    return value
