"""Normal-form arithmetic in U_q(g), B_q(g) and Bbar_q(g).

Every element is a finite combination of normal words ``f-part . q^h . e-part``
with both halves stored as basis words of their weight space.  Products are
computed in two layers: letters are straightened into triangular order using
the commutation rule of the flavour, then each half is rewritten in the
weight-space basis.

Flavour letters:

======  ===========  ===========  ============================================
flavor  lower (f)    upper (e)    upper_u . lower_l
======  ===========  ===========  ============================================
U       f_i   "f"    e_i   "e"    l u + d_ul (t_u - t_u^-1)/(q_u - q_u^-1)
B       f_i   "f"    e''_i "edd"  q^(a_u,a_l) l u + d_ul
Bbar    f'_i  "fd"   e_i   "e"    q^-(a_u,a_l) l u - d_ul q_u^-2
======  ===========  ===========  ============================================

The Bbar row is the relation f'_i e_j = q_i^<h_i,a_j> e_j f'_i + d_ij solved
for e_j f'_i.  Torus letters move by q^h x q^-h = q^<h,wt x> x in all flavours.
"""

from enum import Enum

from .. import memo
from ..errors import FlavorMismatch, NotHomogeneous, UnknownIndex
from ..scalars import ONE, ZERO, Scalar
from .basis import word_coords


class Flavor(Enum):
    U = "U"
    B = "B"
    BBAR = "Bbar"

    @property
    def lower(self):
        return "FD" if self is Flavor.BBAR else "F"

    @property
    def upper(self):
        return "EDD" if self is Flavor.B else "E"

    @property
    def sign(self):
        """Exponent multiplier s in c(u, l) = q^(s (a_u, a_l))."""
        return {Flavor.U: 0, Flavor.B: 1, Flavor.BBAR: -1}[self]


LETTER_NAMES = {"E": "e", "EDD": "edd", "F": "f", "FD": "fd"}


def flavors_for(kind):
    """Flavours that contain generators of ``kind``."""
    return {
        "E": (Flavor.U, Flavor.BBAR),
        "EDD": (Flavor.B,),
        "F": (Flavor.U, Flavor.B),
        "FD": (Flavor.BBAR,),
    }[kind]


def _zero_torus(n):
    return (0,) * n


def torus_add(h, k):
    return tuple(a + b for a, b in zip(h, k))


def torus_neg(h):
    return tuple(-a for a in h)


class NormalWord(tuple):
    """(f_word, torus, e_word): f-letters, coroot vector, e-letters."""

    __slots__ = ()

    def __new__(cls, f=(), torus=(), e=()):
        return tuple.__new__(cls, (tuple(f), tuple(torus), tuple(e)))

    @property
    def f(self):
        return self[0]

    @property
    def torus(self):
        return self[1]

    @property
    def e(self):
        return self[2]

    def weight(self, rank):
        v = [0] * rank
        for i in self[2]:
            v[i] += 1
        for i in self[0]:
            v[i] -= 1
        return tuple(v)

    def sort_key(self):
        return (len(self[0]), self[0], self[1], len(self[2]), self[2])


# --- straightening -------------------------------------------------------------


def _qpow(n):
    return Scalar.q_power(n) if n else ONE


def _commutator_torus(datum, flavor, u):
    """Torus part produced by upper_u . lower_u, as {torus: coeff}."""
    n = datum.rank
    if flavor is Flavor.U:
        c = ONE / (datum.q_i(u) - datum.q_i(u).inverse())
        return {datum.t(u): c, datum.t(u, -1): -c}
    if flavor is Flavor.B:
        return {_zero_torus(n): ONE}
    return {_zero_torus(n): -Scalar.q_power(-2 * datum.symmetrizers[u])}


def _push(datum, flavor, u, fword):
    """upper_u . fword as {(f', torus, e'): coeff}; e' is () or (u,)."""
    table = memo.table(datum, ("push", flavor))
    return table.get((u, fword), lambda: _compute_push(datum, flavor, u, fword))


def _compute_push(datum, flavor, u, fword):
    s = flavor.sign
    rank = datum.rank
    out = {}
    exp = 0
    tails = None
    for p, j in enumerate(fword):
        if j == u:
            rest = fword[p + 1:]
            rest_wt = [0] * rank
            for x in rest:
                rest_wt[x] += 1
            if tails is None:
                tails = _commutator_torus(datum, flavor, u)
            for k, c in tails.items():
                # K . rest = q^-<K, wt rest> rest . K
                shift = -datum.torus_pairing(k, rest_wt)
                key = (fword[:p] + rest, k, ())
                out[key] = out.get(key, ZERO) + c * _qpow(exp + shift)
        exp += s * datum.root_form(datum.simple_root(u), datum.simple_root(j))
    key = (fword, _zero_torus(rank), (u,))
    out[key] = out.get(key, ZERO) + _qpow(exp)
    return {k: v for k, v in out.items() if v}


def straighten(datum, flavor, eword, fword):
    """eword . fword in triangular order, halves left as raw words."""
    if not eword or not fword:
        return {(fword, _zero_torus(datum.rank), eword): ONE}
    table = memo.table(datum, ("straighten", flavor))
    return table.get((eword, fword), lambda: _compute_straighten(datum, flavor, eword, fword))


def _compute_straighten(datum, flavor, eword, fword):
    rank = datum.rank
    u = eword[-1]
    head = eword[:-1]
    out = {}
    for (f2, k2, e2), c2 in _push(datum, flavor, u, fword).items():
        for (f3, k3, e3), c3 in straighten(datum, flavor, head, f2).items():
            # f3 k3 e3 . k2 e2 = q^-<k2, wt e3> f3 (k3 + k2) e3 e2
            shift = 0
            if e3 and any(k2):
                shift = -datum.torus_pairing(k2, _wt(e3, rank))
            key = (f3, torus_add(k3, k2), e3 + e2)
            val = out.get(key, ZERO) + c2 * c3 * _qpow(shift)
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def _wt(word, rank):
    v = [0] * rank
    for i in word:
        v[i] += 1
    return v


def multiply_words(datum, flavor, w1, w2, max_e=None):
    """Normal form of the product of two normal words, as {NormalWord: coeff}.

    With ``max_e`` set, terms whose e-part is longer than ``max_e`` are
    dropped before reduction (the projection pi_{<=max_e} applied early).
    """
    table = memo.table(datum, ("mulw", flavor))
    return table.get((w1, w2, max_e), lambda: _compute_multiply_words(datum, flavor, w1, w2, max_e))


def _compute_multiply_words(datum, flavor, w1, w2, max_e):
    rank = datum.rank
    f1, k1, e1 = w1
    f2, k2, e2 = w2
    raw = {}
    for (fp, kp, ep), c in straighten(datum, flavor, e1, f2).items():
        if max_e is not None and len(ep) + len(e2) > max_e:
            continue
        shift = 0
        if fp and any(k1):
            shift -= datum.torus_pairing(k1, _wt(fp, rank))
        if ep and any(k2):
            shift -= datum.torus_pairing(k2, _wt(ep, rank))
        key = (f1 + fp, torus_add(torus_add(k1, kp), k2), ep + e2)
        val = raw.get(key, ZERO) + c * _qpow(shift)
        if val:
            raw[key] = val
        else:
            raw.pop(key, None)
    out = {}
    for (fw, k, ew), c in raw.items():
        for fb, cf in word_coords(datum, fw):
            for eb, ce in word_coords(datum, ew):
                key = NormalWord(fb, k, eb)
                val = out.get(key, ZERO) + c * cf * ce
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
    return out


# --- elements --------------------------------------------------------------------


class AlgebraElement:
    """Immutable finite combination of normal words in one flavour."""

    __slots__ = ("datum", "flavor", "terms")

    def __init__(self, datum, flavor, terms=None):
        self.datum = datum
        self.flavor = Flavor(flavor)
        clean = {}
        for w, c in (terms or {}).items():
            if not isinstance(c, Scalar):
                c = Scalar(c)
            if c:
                clean[w if isinstance(w, NormalWord) else NormalWord(*w)] = c
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls, datum, flavor):
        return cls(datum, flavor, {})

    @classmethod
    def one(cls, datum, flavor, coeff=ONE):
        return cls(datum, flavor, {NormalWord((), _zero_torus(datum.rank), ()): coeff})

    @classmethod
    def torus(cls, datum, flavor, h, coeff=ONE):
        return cls(datum, flavor, {NormalWord((), tuple(h), ()): coeff})

    @classmethod
    def generator(cls, datum, kind, i, flavor=None):
        """A single generator of the given kind (E, EDD, F, FD)."""
        if not isinstance(i, int) or not 0 <= i < datum.rank:
            raise UnknownIndex(f"index {i} out of range for {datum.name}")
        allowed = flavors_for(kind)
        flavor = allowed[0] if flavor is None else Flavor(flavor)
        if flavor not in allowed:
            raise FlavorMismatch(f"{kind} is not a generator of {flavor.value}")
        zero = _zero_torus(datum.rank)
        if kind in ("F", "FD"):
            w = NormalWord((i,), zero, ())
        else:
            w = NormalWord((), zero, (i,))
        return cls(datum, flavor, {w: ONE})

    @classmethod
    def from_halves(cls, datum, flavor, f_comb=None, torus=None, e_comb=None):
        """Product f_comb . q^torus . e_comb of raw word combinations."""
        f_comb = f_comb if f_comb is not None else {(): ONE}
        e_comb = e_comb if e_comb is not None else {(): ONE}
        torus = tuple(torus) if torus is not None else _zero_torus(datum.rank)
        out = {}
        for fw, cf in f_comb.items():
            for fb, xf in word_coords(datum, tuple(fw)):
                for ew, ce in e_comb.items():
                    for eb, xe in word_coords(datum, tuple(ew)):
                        key = NormalWord(fb, torus, eb)
                        out[key] = out.get(key, ZERO) + cf * xf * ce * xe
        return cls(datum, flavor, out)

    # flavour handling
    def uses(self):
        """Which halves are nonempty: (has f letters, has e letters)."""
        return (any(w.f for w in self.terms), any(w.e for w in self.terms))

    def compatible_with(self, flavor):
        flavor = Flavor(flavor)
        has_f, has_e = self.uses()
        return ((not has_f or flavor.lower == self.flavor.lower)
                and (not has_e or flavor.upper == self.flavor.upper))

    def as_flavor(self, flavor):
        """Reinterpret in another flavour sharing the letters actually used
        (e.g. an f/torus element of U viewed in B)."""
        flavor = Flavor(flavor)
        if flavor is self.flavor:
            return self
        if not self.compatible_with(flavor):
            raise FlavorMismatch(f"element uses letters not in {flavor.value}")
        return AlgebraElement(self.datum, flavor, self.terms)

    def _common_flavor(self, other):
        if other.datum != self.datum:
            raise FlavorMismatch("elements belong to different Cartan data")
        if other.flavor is self.flavor:
            return self.flavor
        if other.compatible_with(self.flavor):
            return self.flavor
        if self.compatible_with(other.flavor):
            return other.flavor
        raise FlavorMismatch(f"cannot combine {self.flavor.value} and {other.flavor.value} elements")

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            if isinstance(other, (int, Scalar)):
                other = AlgebraElement.one(self.datum, self.flavor, Scalar(other))
            else:
                return NotImplemented
        flavor = self._common_flavor(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            val = out.get(w, ZERO) + c
            if val:
                out[w] = val
            else:
                out.pop(w, None)
        return AlgebraElement(self.datum, flavor, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.datum, self.flavor, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        s = Scalar(s)
        if not s:
            return AlgebraElement.zero(self.datum, self.flavor)
        return AlgebraElement(self.datum, self.flavor, {w: c * s for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        result = AlgebraElement.one(self.datum, self.flavor)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Scalar)):
            other = AlgebraElement.one(self.datum, self.flavor, Scalar(other))
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.datum == other.datum and self.terms == other.terms and (
            self.flavor is other.flavor or not self.terms
            or self.compatible_with(other.flavor))

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    # inspection
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, word):
        return self.terms.get(NormalWord(*word), ZERO)

    def weights(self):
        return {w.weight(self.datum.rank) for w in self.terms}

    def weight(self):
        ws = self.weights()
        if len(ws) != 1:
            raise NotHomogeneous(f"element has weights {sorted(ws)}")
        return ws.pop()

    def is_homogeneous(self):
        return len(self.weights()) <= 1

    def truncate(self, max_e):
        """pi_{<=max_e}: drop normal words whose e-part height exceeds max_e."""
        return AlgebraElement(self.datum, self.flavor,
                              {w: c for w, c in self.terms.items() if len(w.e) <= max_e})

    def e_height_component(self, h):
        return AlgebraElement(self.datum, self.flavor,
                              {w: c for w, c in self.terms.items() if len(w.e) == h})

    def min_e_height(self):
        return min((len(w.e) for w in self.terms), default=None)

    def map_terms(self, fn):
        return AlgebraElement(self.datum, self.flavor, {w: fn(w, c) for w, c in self.terms.items()})

    def __repr__(self):
        return f"AlgebraElement({self.flavor.value}, {render(self)!r})"

    def __str__(self):
        return render(self)


def multiply(a, b, max_e=None):
    """Normal form of a . b (optionally truncated to e-height <= max_e)."""
    flavor = a._common_flavor(b)
    datum = a.datum
    out = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            c12 = c1 * c2
            for w, c in multiply_words(datum, flavor, w1, w2, max_e).items():
                val = out.get(w, ZERO) + c12 * c
                if val:
                    out[w] = val
                else:
                    out.pop(w, None)
    return AlgebraElement(datum, flavor, out)


def product(elements, max_e=None):
    it = iter(elements)
    result = next(it)
    for x in it:
        result = multiply(result, x, max_e)
    return result


def word_element(datum, flavor, kind, word):
    """Raw product of generators of ``kind`` along ``word`` (normalized)."""
    zero = _zero_torus(datum.rank)
    if kind in ("F", "FD"):
        return AlgebraElement.from_halves(datum, flavor, {tuple(word): ONE}, zero, None)
    return AlgebraElement.from_halves(datum, flavor, None, zero, {tuple(word): ONE})


def commute_edd_power(datum, i, n, j, m):
    """Normal form of e''_i^n . f_j^(m) in B, by repeated use of the e''f rule."""
    fpow = word_element(datum, Flavor.B, "F", (j,) * m).scale(ONE / datum.q_fact(m, j))
    epow = word_element(datum, Flavor.B, "EDD", (i,) * n)
    return multiply(epow, fpow)


# --- text ----------------------------------------------------------------------

def _render_word(letters, kind, divided=False, datum=None):
    """Group equal neighbours into powers; returns (text pieces, extra scalar factor)."""
    name = LETTER_NAMES[kind]
    pieces = []
    factor = ONE
    run = 0
    for idx, i in enumerate(letters):
        run += 1
        if idx + 1 < len(letters) and letters[idx + 1] == i:
            continue
        if run == 1:
            pieces.append(f"{name}{i + 1}")
        elif divided:
            pieces.append(f"{name}{i + 1}^({run})")
            factor = factor * datum.q_fact(run, i)
        else:
            pieces.append(f"{name}{i + 1}^{run}")
        run = 0
    return pieces, factor


def _render_torus(h):
    if not any(h):
        return []
    return ["K[" + ",".join(str(x) for x in h) + "]"]


def render_coefficient(c, has_factors):
    """Return (sign, text) for a coefficient; text is '' for a bare unit."""
    sign = "+"
    s = str(c)
    if s.startswith("-"):
        sign, c = "-", -c
        s = str(c)
    if c.is_laurent() and len(c.laurent_terms()) == 1:
        return sign, "" if s == "1" and has_factors else s
    return sign, f"({s})"


def render_terms(items, datum, flavor, divided_f=False):
    flavor = Flavor(flavor)
    out = []
    for w, c in items:
        fpieces, ffac = _render_word(w.f, flavor.lower, divided_f, datum)
        epieces, _ = _render_word(w.e, flavor.upper)
        pieces = fpieces + _render_torus(w.torus) + epieces
        if divided_f and ffac != ONE:
            c = c * ffac
        sign, body = render_coefficient(c, bool(pieces))
        text = " ".join(x for x in [body] + pieces if x)
        if not out:
            out.append(("-" if sign == "-" else "") + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out) if out else "0"


def render(x, divided_f=False):
    """Text form, terms ordered by (f-height, f-word, torus, e-word)."""
    return render_terms(x.sorted_terms(), x.datum, x.flavor, divided_f)
