"""Coproducts, antipode and the anti-isomorphism phi.

All maps are defined on generators and extended letter by letter; each leg is
kept in normal form after every step.
"""

from . import memo
from .algebra.element import (
    AlgebraElement,
    Flavor,
    NormalWord,
    multiply,
    multiply_words,
    render_terms,
)
from .errors import FlavorMismatch
from .scalars import ONE, ZERO

VARIANTS = {
    # name: (domain, left leg, right leg)
    "delta": (Flavor.U, Flavor.U, Flavor.U),
    "r": (Flavor.B, Flavor.B, Flavor.U),
    "l": (Flavor.BBAR, Flavor.U, Flavor.BBAR),
    "b": (Flavor.U, Flavor.BBAR, Flavor.B),
}

_ALIASES = {"delta": "delta", "d": "delta", "Δ": "delta", "r": "r", "Δr": "r", "l": "l", "Δl": "l",
            "b": "b", "Δb": "b"}


def variant_name(variant):
    try:
        return _ALIASES[variant]
    except KeyError:
        raise ValueError(f"unknown coproduct variant {variant!r}; use delta, r, l or b") from None


class TensorElement:
    """Finite combination of pairs of normal words, one flavour per leg."""

    __slots__ = ("datum", "flavors", "terms")

    def __init__(self, datum, flavors, terms=None):
        self.datum = datum
        self.flavors = (Flavor(flavors[0]), Flavor(flavors[1]))
        clean = {}
        for (a, b), c in (terms or {}).items():
            if c:
                clean[(NormalWord(*a), NormalWord(*b))] = c
        self.terms = clean

    @classmethod
    def zero(cls, datum, flavors):
        return cls(datum, flavors, {})

    @classmethod
    def one(cls, datum, flavors):
        z = NormalWord((), (0,) * datum.rank, ())
        return cls(datum, flavors, {(z, z): ONE})

    @classmethod
    def pure(cls, x, y):
        """x (tensor) y for two AlgebraElements."""
        out = {}
        for a, ca in x.terms.items():
            for b, cb in y.terms.items():
                out[(a, b)] = ca * cb
        return cls(x.datum, (x.flavor, y.flavor), out)

    def leg(self, side):
        """The element of one leg spanned by its words (coefficients dropped)."""
        return AlgebraElement(self.datum, self.flavors[side], {k[side]: ONE for k in self.terms})

    def _merge_flavors(self, other):
        flavors = []
        for side in (0, 1):
            a, b = self.flavors[side], other.flavors[side]
            if a is b or other.leg(side).compatible_with(a):
                flavors.append(a)
            elif self.leg(side).compatible_with(b):
                flavors.append(b)
            else:
                raise FlavorMismatch(f"leg {side}: cannot combine {a.value} and {b.value}")
        return tuple(flavors)

    def __add__(self, other):
        flavors = self._merge_flavors(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            val = out.get(k, ZERO) + c
            if val:
                out[k] = val
            else:
                out.pop(k, None)
        return TensorElement(self.datum, flavors, out)

    def __neg__(self):
        return TensorElement(self.datum, self.flavors, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return TensorElement(self.datum, self.flavors, {k: c * s for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return tensor_multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.datum == other.datum and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def filter(self, predicate):
        return TensorElement(self.datum, self.flavors,
                             {k: c for k, c in self.terms.items() if predicate(k[0], k[1])})

    def truncate(self, max_e, side=0):
        """Drop pairs whose chosen leg has e-part longer than ``max_e``."""
        return self.filter(lambda a, b: len((a, b)[side].e) <= max_e)

    def weight_component(self, gamma):
        """Pairs whose left-leg weight is ``gamma``."""
        rank = self.datum.rank
        gamma = tuple(gamma)
        return self.filter(lambda a, b: a.weight(rank) == gamma)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in self.sorted_terms():
            left = render_terms([(a, ONE)], self.datum, self.flavors[0])
            right = render_terms([(b, ONE)], self.datum, self.flavors[1])
            coeff = render_terms([(NormalWord((), (0,) * self.datum.rank, ()), c)], self.datum, Flavor.U)
            if coeff == "1":
                body = f"{left} (x) {right}"
            elif coeff == "-1":
                body = f"-{left} (x) {right}"
            else:
                body = f"{coeff if coeff.startswith('-') or coeff.startswith('(') else coeff} * {left} (x) {right}"
            parts.append(body)
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def __repr__(self):
        return f"TensorElement({self.flavors[0].value}x{self.flavors[1].value}, {self!s})"


def tensor_multiply(x, y, max_e=None):
    """Legwise product; ``max_e`` (pair (left, right) of limits or None) prunes early."""
    flavors = x._merge_flavors(y)
    datum = x.datum
    lim = max_e if max_e is not None else (None, None)
    out = {}
    for (a1, b1), c1 in x.terms.items():
        for (a2, b2), c2 in y.terms.items():
            left = multiply_words(datum, flavors[0], a1, a2, lim[0])
            if not left:
                continue
            right = multiply_words(datum, flavors[1], b1, b2, lim[1])
            c12 = c1 * c2
            for a, ca in left.items():
                for b, cb in right.items():
                    key = (a, b)
                    val = out.get(key, ZERO) + c12 * ca * cb
                    if val:
                        out[key] = val
                    else:
                        out.pop(key, None)
    return TensorElement(datum, flavors, out)


def _el(datum, flavor, f=(), torus=None, e=(), coeff=ONE):
    """Normal form of coeff * f-word . q^torus . e-word (raw words allowed)."""
    torus = tuple(torus) if torus is not None else (0,) * datum.rank
    terms = multiply_words(datum, flavor, NormalWord(f, torus, ()), NormalWord((), (0,) * datum.rank, e))
    return AlgebraElement(datum, flavor, terms).scale(coeff)


# --- coproducts ------------------------------------------------------------------------


def _generator_image(datum, variant, kind, i):
    _, lf, rf = VARIANTS[variant]
    d = datum
    z = (0,) * d.rank
    t, tinv = d.t(i), d.t(i, -1)
    qq = d.q_i(i) - d.q_i(i).inverse()

    def pair(lw, rw, c=ONE):
        return TensorElement.pure(_el(d, lf, *lw), _el(d, rf, *rw)).scale(c)

    if variant in ("delta", "l") and kind == "E":
        return pair(((), z, (i,)), ((), z, ())) + pair(((), t, ()), ((), z, (i,)))
    if variant in ("delta", "r") and kind == "F":
        return pair(((i,), z, ()), ((), tinv, ())) + pair(((), z, ()), ((i,), z, ()))
    if variant == "r" and kind == "EDD":
        return pair(((), z, ()), ((), tinv, (i,)), qq) + pair(((), z, (i,)), ((), tinv, ()))
    if variant == "l" and kind == "FD":
        tf = _el(d, lf, (), t) * _el(d, lf, (i,))
        return TensorElement.pure(tf, _el(d, rf)).scale(qq) + pair(((), t, ()), ((i,), z, ()))
    if variant == "b" and kind == "E":
        return pair(((), t, ()), ((), t, (i,)), ONE / qq) + pair(((), z, (i,)), ((), z, ()))
    if variant == "b" and kind == "F":
        tf = _el(d, lf, (), tinv) * _el(d, lf, (i,))
        return pair(((), z, ()), ((i,), z, ())) + TensorElement.pure(tf, _el(d, rf, (), tinv)).scale(ONE / qq)
    raise FlavorMismatch(f"{kind} is not in the domain of coproduct {variant}")


def _coproduct_word(datum, variant, kind, word):
    table = memo.table(datum, ("coproduct_word", variant, kind))

    def compute():
        _, lf, rf = VARIANTS[variant]
        if not word:
            return TensorElement.one(datum, (lf, rf))
        head = _coproduct_word(datum, variant, kind, word[:-1])
        return tensor_multiply(head, _generator_image(datum, variant, kind, word[-1]))

    return table.get(tuple(word), compute)


def coproduct(variant, x):
    """Image of ``x`` under one of the coproducts delta, r, l, b."""
    variant = variant_name(variant)
    domain, lf, rf = VARIANTS[variant]
    if not x.compatible_with(domain):
        raise FlavorMismatch(f"coproduct {variant} expects a {domain.value} element, got {x.flavor.value}")
    datum = x.datum
    out = TensorElement.zero(datum, (lf, rf))
    for w, c in x.terms.items():
        fpart = _coproduct_word(datum, variant, domain.lower, w.f)
        k = NormalWord((), w.torus, ())
        kk = TensorElement(datum, (lf, rf), {(k, k): ONE})
        epart = _coproduct_word(datum, variant, domain.upper, w.e)
        out = out + tensor_multiply(tensor_multiply(fpart, kk), epart).scale(c)
    return out


# --- antipode and phi -----------------------------------------------------------------


def _letter_map(datum, which, kind, i, target):
    """Image of one letter under S, S^-1 or phi (an AlgebraElement of ``target``)."""
    d = datum
    qq = d.q_i(i) - d.q_i(i).inverse()
    if which == "S":
        if kind == "E":
            return _el(d, target, (), d.t(i, -1), (i,), -ONE)
        return _el(d, target, (i,), d.t(i), (), -ONE)
    if which == "S_inv":
        if kind == "E":
            return _el(d, target, (), None, (i,), -ONE) * _el(d, target, (), d.t(i, -1))
        return _el(d, target, (), d.t(i)) * _el(d, target, (i,), None, (), -ONE)
    if kind == "E":
        return _el(d, target, (), None, (i,), -ONE / qq)
    return _el(d, target, (i,), None, (), -qq)


def _anti_word(datum, which, kind, word, target):
    table = memo.table(datum, ("anti_word", which, kind, target))

    def compute():
        if not word:
            return AlgebraElement.one(datum, target)
        return multiply(_anti_word(datum, which, kind, word[1:], target),
                        _letter_map(datum, which, kind, word[0], target))

    return table.get(tuple(word), compute)


def _anti_apply(x, which, target, fkind, ekind):
    datum = x.datum
    out = AlgebraElement.zero(datum, target)
    for w, c in x.terms.items():
        ep = _anti_word(datum, which, ekind, w.e, target)
        k = AlgebraElement.torus(datum, target, tuple(-a for a in w.torus))
        fp = _anti_word(datum, which, fkind, w.f, target)
        out = out + (ep * k * fp).scale(c)
    return out


def antipode(x, direction="S"):
    """S or S^-1 on U; elements using only f and torus letters may come from B,
    elements using only e and torus letters may come from Bbar."""
    if direction not in ("S", "S_inv"):
        raise ValueError("direction must be 'S' or 'S_inv'")
    if not x.compatible_with(Flavor.U):
        raise FlavorMismatch(f"antipode is defined on U, got letters of {x.flavor.value}")
    return _anti_apply(x, direction, x.flavor if x.flavor is not Flavor.BBAR else Flavor.U, "F", "E")


def phi(x):
    """The anti-isomorphism Bbar -> B (restricting to U>= -> B>=)."""
    if not x.compatible_with(Flavor.BBAR):
        raise FlavorMismatch(f"phi is defined on Bbar, got letters of {x.flavor.value}")
    return _anti_apply(x.as_flavor(Flavor.BBAR) if x.flavor is not Flavor.BBAR else x, "phi", Flavor.B, "FD", "E")


def tensor_map(t, fn_left=None, fn_right=None):
    """Apply linear maps to the legs of a TensorElement."""
    datum = t.datum
    result = None
    cache_l, cache_r = {}, {}
    for (a, b), c in t.terms.items():
        if a not in cache_l:
            ea = AlgebraElement(datum, t.flavors[0], {a: ONE})
            cache_l[a] = fn_left(ea) if fn_left else ea
        if b not in cache_r:
            eb = AlgebraElement(datum, t.flavors[1], {b: ONE})
            cache_r[b] = fn_right(eb) if fn_right else eb
        piece = TensorElement.pure(cache_l[a], cache_r[b]).scale(c)
        result = piece if result is None else result + piece
    if result is None:
        fl = fn_left(AlgebraElement.zero(datum, t.flavors[0])).flavor if fn_left else t.flavors[0]
        fr = fn_right(AlgebraElement.zero(datum, t.flavors[1])).flavor if fn_right else t.flavors[1]
        return TensorElement.zero(datum, (fl, fr))
    return result
