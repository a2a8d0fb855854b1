"""Weight-space bases of the Serre quotients U^+_beta (= U^-, B^+, Bbar^- by relabelling).

Words are tuples of 0-based generator indices.  The basis at ``beta`` is a set
of coset representatives of the free words of weight ``beta`` modulo the
two-sided ideal generated by the q-Serre elements, found by exact row
reduction.  Preferred representatives are words with few letter changes,
then lexicographically smallest; the remaining words are rewritten in terms
of them.
"""

from dataclasses import dataclass, field

from .. import memo
from ..config import check_height
from ..errors import SameIndex, WeightMixed
from ..scalars import ONE, ZERO

KINDS = ("E", "EDD", "F", "FD")


def word_weight(word, rank):
    v = [0] * rank
    for i in word:
        v[i] += 1
    return tuple(v)


def words_of_weight(beta):
    """All words with letter multiplicities ``beta``, lexicographically sorted."""
    out = []
    counts = list(beta)
    total = sum(counts)
    cur = []

    def rec():
        if len(cur) == total:
            out.append(tuple(cur))
            return
        for i, c in enumerate(counts):
            if c:
                counts[i] -= 1
                cur.append(i)
                rec()
                cur.pop()
                counts[i] += 1

    rec()
    return out


def letter_changes(word):
    return sum(1 for a, b in zip(word, word[1:]) if a != b)


def basis_key(word):
    return (letter_changes(word), word)


@dataclass(frozen=True)
class SerreElement:
    """The raw Serre sum for (i, j): ``terms`` maps words to coefficients."""

    i: int
    j: int
    kind: str
    terms: dict = field(hash=False, compare=False)
    weight: tuple = ()

    def items(self):
        return self.terms.items()


def serre_element(datum, i, j, kind="E"):
    """sum_k (-1)^k X_i^(k) X_j X_i^(N-k) with N = 1 - a_ij, divided powers expanded."""
    datum.check_index(i)
    datum.check_index(j)
    if i == j:
        raise SameIndex(f"Serre relation needs i != j (got {i + 1})")
    if kind not in KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    n = 1 - datum.cartan_matrix[i][j]
    terms = {}
    for k in range(n + 1):
        coeff = datum.q_fact(k, i) * datum.q_fact(n - k, i)
        c = ONE / coeff
        terms[(i,) * k + (j,) + (i,) * (n - k)] = c if k % 2 == 0 else -c
    weight = [0] * datum.rank
    weight[i] += n
    weight[j] += 1
    return SerreElement(i, j, kind, terms, tuple(weight))


class WeightSpace:
    """Basis and rewriting table for one weight ``beta``."""

    def __init__(self, datum, beta):
        self.datum = datum
        self.beta = tuple(beta)
        self.words = words_of_weight(self.beta)
        order = sorted(self.words, key=basis_key)
        # eliminate the latest-preferred words first
        columns = order[::-1]
        col_of = {w: c for c, w in enumerate(columns)}
        rows = self._relations(col_of)
        pivot_rows = _rref_sparse(rows)
        pivot_cols = set(pivot_rows)
        self.basis = [w for w in order if col_of[w] not in pivot_cols]
        self.index = {w: r for r, w in enumerate(self.basis)}
        self._rewrite = {}
        for pc, row in pivot_rows.items():
            word = columns[pc]
            self._rewrite[word] = {self.index[columns[c]]: -v for c, v in row.items() if c != pc}

    @property
    def dim(self):
        return len(self.basis)

    def _relations(self, col_of):
        datum = self.datum
        rows = []
        for i in datum.indices:
            for j in datum.indices:
                if i == j:
                    continue
                s = serre_element(datum, i, j)
                rest = tuple(b - w for b, w in zip(self.beta, s.weight))
                if min(rest) < 0:
                    continue
                for w in words_of_weight(rest):
                    for p in range(len(w) + 1):
                        u, v = w[:p], w[p:]
                        row = {}
                        for sw, c in s.items():
                            col = col_of[u + sw + v]
                            row[col] = row.get(col, ZERO) + c
                        row = {k: x for k, x in row.items() if x}
                        if row:
                            rows.append(row)
        return rows

    def coords(self, word):
        """Coordinates of a word of this weight as {basis position: Scalar}."""
        pos = self.index.get(word)
        if pos is not None:
            return {pos: ONE}
        try:
            return self._rewrite[word]
        except KeyError:
            raise WeightMixed(f"word {word} does not have weight {self.beta}") from None

    def reduce(self, combination):
        """Reduce {word: coeff} (all of weight beta) to {basis position: coeff}."""
        out = {}
        for word, c in combination.items():
            if not c:
                continue
            for pos, x in self.coords(word).items():
                val = out.get(pos, ZERO) + c * x
                if val:
                    out[pos] = val
                else:
                    out.pop(pos, None)
        return out


def _rref_sparse(rows):
    """Sparse Gauss-Jordan; rows are {column: Scalar}.  Returns {pivot column: row}
    with unit pivots, every pivot column cleared from the other rows."""
    pivots = {}
    for row in rows:
        row = dict(row)
        for pc in sorted(pivots):
            if pc in row:
                f = row[pc]
                for c, v in pivots[pc].items():
                    val = row.get(c, ZERO) - f * v
                    if val:
                        row[c] = val
                    else:
                        row.pop(c, None)
        if not row:
            continue
        pc = min(row)
        inv = row[pc].inverse()
        row = {c: v * inv for c, v in row.items()}
        pivots[pc] = row
    # back substitution, highest pivots first
    for pc in sorted(pivots, reverse=True):
        prow = pivots[pc]
        for other in pivots:
            if other == pc:
                continue
            orow = pivots[other]
            if pc in orow:
                f = orow[pc]
                for c, v in prow.items():
                    val = orow.get(c, ZERO) - f * v
                    if val:
                        orow[c] = val
                    else:
                        orow.pop(c, None)
    return pivots


def weight_space(datum, beta):
    beta = tuple(beta)
    check_height(sum(beta), "weight height")
    return memo.table(datum, "weight_space").get(beta, lambda: WeightSpace(datum, beta))


def weight_basis(datum, beta):
    """Ordered basis words of U^+_beta (shared by U^-, B^+, Bbar^-)."""
    return list(weight_space(datum, beta).basis)


def reduce_to_basis(datum, combination, beta=None):
    """Coordinates of a raw word combination in :func:`weight_basis`.

    Returns {basis word: coefficient}.  All words must share one weight.
    """
    combination = dict(combination.items())
    weights = {word_weight(w, datum.rank) for w, c in combination.items() if c}
    if beta is not None:
        weights.add(tuple(beta))
    if len(weights) > 1:
        raise WeightMixed(f"combination spans weights {sorted(weights)}")
    if not weights:
        return {}
    space = weight_space(datum, weights.pop())
    return {space.basis[pos]: c for pos, c in sorted(space.reduce(combination).items())}


def word_coords(datum, word):
    """Cached {basis word: coefficient} for one raw word."""
    return memo.table(datum, "word_coords").get(word, lambda: _word_coords(datum, word))


def _word_coords(datum, word):
    space = weight_space(datum, word_weight(word, datum.rank))
    return tuple((space.basis[pos], c) for pos, c in space.coords(word).items())
