"""The Drinfeld-Killing pairing U>= x U<=, Gram matrices, dual bases and
canonical elements C_beta.

On raw words the pairing is computed by peeling the leftmost f-letter:

    <E, f_j F> = sum over positions p with E[p] = j of
                 q^((alpha_j, wt E[:p])) / (q_j^-1 - q_j) * <E without p, F>

which is <x, y1 y2> = <Delta(x), y1 (x) y2> with Delta(e) = e (x) 1 + t (x) e.
Torus letters contribute q^<K, wt E> q^-(K|K') for x = q^K E and y = F q^K'.
"""

from dataclasses import dataclass, field

from . import linalg, memo
from .algebra.basis import weight_basis, word_weight
from .algebra.element import AlgebraElement, Flavor, NormalWord
from .errors import DegenerateGram, FlavorMismatch
from .hopf import TensorElement
from .scalars import ONE, ZERO, Scalar


def pair_words(datum, eword, fword):
    """<E, F> for raw words of e- and f-letters (no torus)."""
    eword, fword = tuple(eword), tuple(fword)
    if len(eword) != len(fword):
        return ZERO
    if sorted(eword) != sorted(fword):
        return ZERO
    if not eword:
        return ONE
    table = memo.table(datum, "pair_words")
    return table.get((eword, fword), lambda: _pair_words(datum, eword, fword))


def _pair_words(datum, eword, fword):
    j = fword[0]
    rest = fword[1:]
    base = ONE / (datum.q_i(j).inverse() - datum.q_i(j))
    aj = datum.simple_root(j)
    total = ZERO
    prefix = [0] * datum.rank
    for p, i in enumerate(eword):
        if i == j:
            sub = pair_words(datum, eword[:p] + eword[p + 1:], rest)
            if sub:
                total = total + base * Scalar.q_power(datum.root_form(aj, prefix)) * sub
        prefix[i] += 1
    return total


def pair_normal_words(datum, x, y):
    """<q^K E, F q^K'> for normal words x = ((), K, E), y = (F, K', ())."""
    if x.f or y.e:
        raise FlavorMismatch("pair expects x in U>= (e, torus) and y in U<= (f, torus)")
    core = pair_words(datum, x.e, y.f)
    if not core:
        return ZERO
    exp = datum.torus_pairing(x.torus, word_weight(x.e, datum.rank)) - datum.torus_form(x.torus, y.torus)
    return core * Scalar.q_power(exp) if exp else core


def pair(x, y):
    """Bilinear extension of :func:`pair_normal_words` to AlgebraElements."""
    if x.datum != y.datum:
        raise FlavorMismatch("elements belong to different Cartan data")
    if not x.compatible_with(Flavor.U) or not y.compatible_with(Flavor.U):
        raise FlavorMismatch("pair is defined on U>= x U<=")
    total = ZERO
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            v = pair_normal_words(x.datum, a, b)
            if v:
                total = total + ca * cb * v
    return total


@dataclass
class GramData:
    datum: object
    weight: tuple
    plus_basis: list
    minus_basis: list
    matrix: list
    determinant: Scalar
    _inverse: list = field(default=None, repr=False)

    @property
    def inverse(self):
        if self._inverse is None:
            self._inverse = linalg.inverse(self.matrix) if self.matrix else []
        return self._inverse


def gram(datum, beta):
    """Gram matrix of the pairing on U+_beta x U-_-beta in the word bases."""
    beta = tuple(beta)
    return memo.table(datum, "gram").get(beta, lambda: _gram(datum, beta))


def _gram(datum, beta):
    words = weight_basis(datum, beta)
    matrix = [[pair_words(datum, x, y) for y in words] for x in words]
    det = linalg.determinant(matrix)
    if not det:
        raise DegenerateGram(f"Gram matrix at weight {beta} is singular")
    return GramData(datum, beta, list(words), list(words), matrix, det)


def dual_basis(datum, beta, flavor=Flavor.U):
    """(plus basis words, [y_s]) with <x_r, y_s> = delta_rs."""
    g = gram(datum, beta)
    key = (tuple(beta), Flavor(flavor))
    return memo.table(datum, "dual_basis").get(key, lambda: _dual_basis(datum, g, Flavor(flavor)))


def _dual_basis(datum, g, flavor):
    inv = g.inverse
    zero = (0,) * datum.rank
    ys = []
    for s in range(len(g.plus_basis)):
        terms = {NormalWord(w, zero, ()): inv[t][s] for t, w in enumerate(g.minus_basis) if inv[t][s]}
        ys.append(AlgebraElement(datum, flavor, terms))
    return list(g.plus_basis), ys


def canonical_element(datum, beta):
    """C_beta = sum_r x_r (x) y_r in U+_beta (x) U-_-beta."""
    beta = tuple(beta)
    return memo.table(datum, "canonical").get(beta, lambda: _canonical(datum, beta))


def _canonical(datum, beta):
    xs, ys = dual_basis(datum, beta)
    zero = (0,) * datum.rank
    out = TensorElement.zero(datum, (Flavor.U, Flavor.U))
    for x, y in zip(xs, ys):
        out = out + TensorElement.pure(AlgebraElement(datum, Flavor.U, {NormalWord((), zero, x): ONE}), y)
    return out
