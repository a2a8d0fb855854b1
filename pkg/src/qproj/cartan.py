"""Symmetrizable Cartan data, root-lattice bookkeeping and presets.

Indices are 0-based internally; text output numbers them from 1.
Weights of modules are recorded by their pairings with the coroots h_i; for a
singular Cartan matrix extra "derivation" coordinates are appended so that the
simple roots stay linearly independent (see :attr:`CartanDatum.weight_matrix`).
"""

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from pathlib import Path

from . import scalars
from .errors import CartanError, UnknownIndex


@dataclass(frozen=True)
class CartanDatum:
    name: str
    cartan_matrix: tuple
    symmetrizers: tuple
    coroot_form: tuple = None

    def __post_init__(self):
        a = tuple(tuple(int(x) for x in row) for row in self.cartan_matrix)
        object.__setattr__(self, "cartan_matrix", a)
        object.__setattr__(self, "symmetrizers", tuple(int(d) for d in self.symmetrizers))
        if self.coroot_form is None:
            d = self.symmetrizers
            form = tuple(tuple(Fraction(a[i][j], d[j]) if j < len(d) and d[j] else Fraction(0)
                               for j in range(len(a))) for i in range(len(a)))
        else:
            form = tuple(tuple(Fraction(x) for x in row) for row in self.coroot_form)
        object.__setattr__(self, "coroot_form", form)

    @property
    def rank(self):
        return len(self.cartan_matrix)

    @property
    def indices(self):
        return range(self.rank)

    def check_index(self, i):
        if not isinstance(i, int) or not 0 <= i < self.rank:
            raise UnknownIndex(f"index {i} not in 0..{self.rank - 1} for {self.name}")
        return i

    # --- forms -------------------------------------------------------------

    def root_form(self, beta, gamma):
        """(beta, gamma) = sum m_i d_i a_ij n_j."""
        a, d = self.cartan_matrix, self.symmetrizers
        return sum(beta[i] * d[i] * a[i][j] * gamma[j]
                   for i in self.indices for j in self.indices if beta[i] and gamma[j])

    def coroot_pairing(self, i, beta):
        """<h_i, beta> = sum_j a_ij n_j."""
        return sum(self.cartan_matrix[i][j] * beta[j] for j in self.indices)

    def torus_pairing(self, h, beta):
        """<h, beta> for h = sum c_i h_i."""
        a = self.cartan_matrix
        return sum(h[i] * a[i][j] * beta[j] for i in self.indices if h[i] for j in self.indices)

    def torus_form(self, h, k):
        """(h|k) on the coroot span, a rational number."""
        f = self.coroot_form
        return sum((h[i] * f[i][j] * k[j] for i in self.indices if h[i]
                    for j in self.indices if k[j]), Fraction(0))

    @cached_property
    def exponent_denominator(self):
        """D such that every (h|h') is a multiple of 1/D."""
        return math.lcm(1, *(x.denominator for row in self.coroot_form for x in row))

    def q_i(self, i):
        return scalars.q(self.symmetrizers[i])

    def q_int(self, n, i):
        return scalars.q_integer(n, self.symmetrizers[i])

    def q_fact(self, n, i):
        return scalars.q_factorial(n, self.symmetrizers[i])

    def q_binom(self, m, k, i):
        return scalars.q_binomial(m, k, self.symmetrizers[i])

    def t(self, i, power=1):
        """Torus vector of t_i^power = q^(power d_i h_i)."""
        v = [0] * self.rank
        v[i] = power * self.symmetrizers[i]
        return tuple(v)

    def k(self, beta, power=1):
        """Torus vector of k_beta^power = prod t_i^(power m_i)."""
        return tuple(power * self.symmetrizers[i] * beta[i] for i in self.indices)

    # --- lattice -----------------------------------------------------------

    def simple_root(self, i):
        v = [0] * self.rank
        v[i] = 1
        return tuple(v)

    def enumerate_qplus(self, max_height):
        return enumerate_qplus(self, max_height)

    @cached_property
    def weight_matrix(self):
        """Rows: pairings <h_1..h_n, alpha_j> followed by unit rows for any
        extra derivation coordinates needed to make the map Q -> weights injective."""
        rows = [list(r) for r in self.cartan_matrix]
        current = _rank(rows)
        for j in self.indices:
            if current == self.rank:
                break
            unit = [1 if k == j else 0 for k in self.indices]
            if _rank(rows + [unit]) > current:
                rows.append(unit)
                current += 1
        return tuple(tuple(r) for r in rows)

    @property
    def weight_dim(self):
        return len(self.weight_matrix)

    def root_to_weight(self, beta):
        """Weight coordinates of the root-lattice element beta."""
        return tuple(sum(row[j] * beta[j] for j in self.indices) for row in self.weight_matrix)

    def weight_to_root(self, mu):
        """Inverse of :meth:`root_to_weight`; None when mu is not in the root lattice."""
        w = self.weight_matrix
        n = self.rank
        rows = [[Fraction(w[r][c]) for c in range(n)] + [Fraction(mu[r])] for r in range(len(w))]
        piv_row = 0
        pivots = []
        for c in range(n):
            p = next((r for r in range(piv_row, len(rows)) if rows[r][c] != 0), None)
            if p is None:
                continue
            rows[piv_row], rows[p] = rows[p], rows[piv_row]
            pv = rows[piv_row][c]
            rows[piv_row] = [x / pv for x in rows[piv_row]]
            for r in range(len(rows)):
                if r != piv_row and rows[r][c] != 0:
                    f = rows[r][c]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[piv_row])]
            pivots.append(c)
            piv_row += 1
        if any(rows[r][n] != 0 for r in range(piv_row, len(rows))):
            return None
        beta = [Fraction(0)] * n
        for r, c in enumerate(pivots):
            beta[c] = rows[r][n]
        if any(b.denominator != 1 for b in beta):
            return None
        return tuple(int(b) for b in beta)

    # --- serialization -----------------------------------------------------

    def to_json(self):
        return {
            "name": self.name,
            "cartan_matrix": [list(r) for r in self.cartan_matrix],
            "symmetrizers": list(self.symmetrizers),
            "coroot_form": [[str(x) for x in r] for r in self.coroot_form],
        }

    def __str__(self):
        return self.name


def _rank(rows):
    rows = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        p = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def height(beta):
    return sum(beta)


def validate_cartan(datum):
    """Return ``datum`` unchanged if it is a valid symmetrizable datum, else raise CartanError."""
    a, d, form = datum.cartan_matrix, datum.symmetrizers, datum.coroot_form
    n = len(a)
    if n == 0:
        raise CartanError("EMPTY", "rank must be positive")
    if any(len(row) != n for row in a):
        raise CartanError("BAD_SHAPE", "cartan_matrix must be square")
    if len(d) != n:
        raise CartanError("BAD_SHAPE", "need one symmetrizer per index")
    if len(form) != n or any(len(row) != n for row in form):
        raise CartanError("BAD_SHAPE", "coroot_form must be rank x rank")
    for i in range(n):
        if a[i][i] != 2:
            raise CartanError("DIAGONAL", f"a_{i + 1}{i + 1} = {a[i][i]} != 2", (i, i))
        if d[i] < 1:
            raise CartanError("NONPOSITIVE_SYMMETRIZER", f"d_{i + 1} = {d[i]} < 1", (i, i))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if a[i][j] > 0:
                raise CartanError("POSITIVE_OFF_DIAGONAL", f"a_{i + 1}{j + 1} = {a[i][j]} > 0", (i, j))
            if (a[i][j] == 0) != (a[j][i] == 0):
                raise CartanError("ZERO_PATTERN", f"a_{i + 1}{j + 1} and a_{j + 1}{i + 1} disagree on zero",
                                  (i, j))
            if d[i] * a[i][j] != d[j] * a[j][i]:
                raise CartanError(
                    "NON_SYMMETRIZABLE",
                    f"d_{i + 1} a_{i + 1}{j + 1} = {d[i] * a[i][j]} != d_{j + 1} a_{j + 1}{i + 1} = {d[j] * a[j][i]}",
                    (i, j))
    for i in range(n):
        for j in range(n):
            if form[i][j] != form[j][i]:
                raise CartanError("ASYMMETRIC_COROOT_FORM", f"(h_{i + 1}|h_{j + 1}) != (h_{j + 1}|h_{i + 1})",
                                  (i, j))
            # invariance: (h_i | t_j) = <h_i, alpha_j>, otherwise the pairing axioms clash
            if form[i][j] * d[j] != a[i][j]:
                raise CartanError("INCONSISTENT_COROOT_FORM",
                                  f"(h_{i + 1}|h_{j + 1}) d_{j + 1} != a_{i + 1}{j + 1}", (i, j))
    return datum


def enumerate_qplus(datum, max_height):
    """All beta in Q_+ with |beta| <= max_height, sorted by (height, coords)."""
    n = datum.rank
    out = []
    for h in range(max_height + 1):
        level = set()
        for combo in combinations_with_replacement(range(n), h):
            v = [0] * n
            for i in combo:
                v[i] += 1
            level.add(tuple(v))
        out.extend(sorted(level))
    return out


PRESETS = {
    "A1": dict(cartan_matrix=[[2]], symmetrizers=[1]),
    "A2": dict(cartan_matrix=[[2, -1], [-1, 2]], symmetrizers=[1, 1]),
    "B2": dict(cartan_matrix=[[2, -1], [-2, 2]], symmetrizers=[2, 1]),
    "G2": dict(cartan_matrix=[[2, -1], [-3, 2]], symmetrizers=[3, 1]),
    "A1_affine": dict(cartan_matrix=[[2, -2], [-2, 2]], symmetrizers=[1, 1]),
}


def preset(name):
    try:
        entry = PRESETS[name]
    except KeyError:
        raise CartanError("UNKNOWN_PRESET", f"no preset {name!r}; choose from {sorted(PRESETS)}") from None
    return validate_cartan(CartanDatum(name=name, **entry))


def from_json(data):
    return validate_cartan(CartanDatum(
        name=data.get("name", "custom"),
        cartan_matrix=data["cartan_matrix"],
        symmetrizers=data["symmetrizers"],
        coroot_form=data.get("coroot_form"),
    ))


def load(path):
    return from_json(json.loads(Path(path).read_text()))
