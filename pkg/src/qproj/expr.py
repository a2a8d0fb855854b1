"""Text expressions for algebra elements.

Grammar (whitespace between tokens is free)::

    expr   := ['-'] term (('+' | '-') term)*
    term   := coeff? factor* (at least one of the two)
    coeff  := '(' scalar ')' | number ('/' number)? | 'q' ('^' exponent)?  (juxtaposed pieces multiply)
    factor := gen ('^' int | '^(' int ')')?
    gen    := ('e' | 'edd' | 'f' | 'fd') index | 'K' '[' int (',' int)* ']'

``x^(n)`` is the divided power x^n / [n]_i!.  Indices are 1-based.  The
flavour is inferred from the letters used (edd -> B, fd -> Bbar, e with f ->
U) unless given explicitly.
"""

import re

from .algebra.element import AlgebraElement, Flavor, NormalWord, render
from .errors import FlavorMismatch, ParseError, UnknownIndex
from .scalars import ONE, Scalar, parse_scalar

_GEN = re.compile(r"(edd|fd|e|f)(\d+)")
_INT = re.compile(r"-?\d+")
_NUM = re.compile(r"\d+(?:/\d+)?")
_QPOW = re.compile(r"q(?:\^(\(-?\d+(?:/\d+)?\)|-?\d+))?")

_KIND = {"e": "E", "edd": "EDD", "f": "F", "fd": "FD"}


class _Parser:
    def __init__(self, text, datum):
        self.text = text
        self.pos = 0
        self.datum = datum

    def error(self, msg, pos=None):
        raise ParseError(msg, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def match(self, regex):
        self.skip()
        m = regex.match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return m

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self):
        terms = []
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        elif self.peek() == "+":
            self.pos += 1
        terms.append((sign, self.term()))
        while self.peek() in ("+", "-"):
            sign = 1 if self.text[self.pos] == "+" else -1
            self.pos += 1
            terms.append((sign, self.term()))
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return terms

    def term(self):
        start = self.pos
        coeff, seen = ONE, False
        while True:
            c = self.coefficient()
            if c is None:
                break
            coeff, seen = coeff * c, True
        factors = []
        while True:
            fac = self.factor()
            if fac is None:
                break
            factors.append(fac)
        if not seen and not factors:
            self.error("expected a term", start if self.pos == start else None)
        return coeff, factors

    def coefficient(self):
        ch = self.peek()
        if ch == "(":
            start = self.pos
            depth = 0
            for k in range(self.pos, len(self.text)):
                if self.text[k] == "(":
                    depth += 1
                elif self.text[k] == ")":
                    depth -= 1
                    if depth == 0:
                        inner = self.text[self.pos + 1:k]
                        try:
                            value = parse_scalar(inner)
                        except ParseError as exc:
                            raise ParseError(str(exc.args[0]) if exc.args else "bad scalar",
                                             start + 1 + getattr(exc, "position", 0)) from None
                        self.pos = k + 1
                        return value
            self.error("unbalanced '('", start)
        m = self.match(_NUM)
        if m:
            return Scalar(m.group(0)) if "/" not in m.group(0) else parse_scalar(m.group(0))
        if ch == "q":
            m = self.match(_QPOW)
            if m:
                return parse_scalar(m.group(0))
        return None

    def factor(self):
        ch = self.peek()
        start = self.pos
        if ch == "K":
            self.pos += 1
            self.expect("[")
            coords = []
            while True:
                m = self.match(_INT)
                if not m:
                    self.error("expected an integer in K[...]")
                coords.append(int(m.group(0)))
                if self.peek() == ",":
                    self.pos += 1
                    continue
                self.expect("]")
                break
            if len(coords) != self.datum.rank:
                self.error(f"K[...] needs {self.datum.rank} entries", start)
            power, divided = self.exponent()
            if divided:
                self.error("divided powers apply to generators, not K", start)
            return ("K", tuple(c * power for c in coords), 1, False)
        m = self.match(_GEN)
        if not m:
            return None
        idx = int(m.group(2))
        if not 1 <= idx <= self.datum.rank:
            raise UnknownIndex(f"index {idx} out of range 1..{self.datum.rank} at position {start}")
        power, divided = self.exponent()
        return (_KIND[m.group(1)], idx - 1, power, divided)

    def exponent(self):
        if self.peek() != "^":
            return 1, False
        self.pos += 1
        if self.peek() == "(":
            self.pos += 1
            m = self.match(_INT)
            if not m:
                self.error("expected an integer divided-power exponent")
            self.expect(")")
            n = int(m.group(0))
            divided = True
        else:
            m = self.match(_INT)
            if not m:
                self.error("expected an integer exponent")
            n = int(m.group(0))
            divided = False
        if n < 0:
            self.error("negative powers are only allowed inside K[...]")
        return n, divided


def infer_flavor(kinds):
    kinds = set(kinds)
    if "EDD" in kinds and ("FD" in kinds or "E" in kinds):
        raise FlavorMismatch("edd cannot be combined with e or fd")
    if "FD" in kinds and "F" in kinds:
        raise FlavorMismatch("fd cannot be combined with f")
    if "EDD" in kinds:
        return Flavor.B
    if "FD" in kinds:
        return Flavor.BBAR
    return Flavor.U


def parse_expression(text, datum, flavor=None):
    """Parse and normalize an expression into an AlgebraElement."""
    terms = _Parser(text, datum).parse()
    kinds = [f[0] for _, (_, facs) in terms for f in facs if f[0] != "K"]
    inferred = infer_flavor(kinds)
    if flavor is None:
        flavor = inferred
    else:
        flavor = Flavor(flavor)
        probe = {"E": flavor.upper == "E", "EDD": flavor.upper == "EDD",
                 "F": flavor.lower == "F", "FD": flavor.lower == "FD"}
        bad = sorted({k for k in kinds if not probe[k]})
        if bad:
            raise FlavorMismatch(f"letters {bad} are not in {flavor.value}")
    total = AlgebraElement.zero(datum, flavor)
    for sign, (coeff, facs) in terms:
        x = AlgebraElement.one(datum, flavor, coeff if sign > 0 else -coeff)
        for kind, data, power, divided in facs:
            if kind == "K":
                piece = AlgebraElement(datum, flavor, {NormalWord((), data, ()): ONE})
            else:
                gen = AlgebraElement.generator(datum, kind, data, flavor)
                piece = gen ** power
                if divided:
                    piece = piece.scale(ONE / datum.q_fact(power, data))
            x = x * piece
        total = total + x
    return total


__all__ = ["parse_expression", "render", "infer_flavor"]
