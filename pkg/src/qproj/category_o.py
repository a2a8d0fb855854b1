"""Finite truncations of modules in O(B): H(lambda), direct sums, basis changes,
the joint e''-kernel, Gamma as an operator, and the semisimple decomposition.

A module stores a finite set of weights, each with a dimension, and for every
index i the matrices of f_i (mu -> mu - alpha_i) and e''_i (mu -> mu + alpha_i).
Weights are integer vectors in ``datum.weight_matrix`` coordinates; the first
``rank`` entries are the pairings <h_i, mu>, so q^h acts on M_mu by
q^(sum c_i mu_i).

Truncation is described by a ``horizon``: a list of (lambda, N) pairs, one per
generating highest weight.  A weight nu is *complete* when every lambda above
it satisfies |lambda - nu| <= N; every action landing on a complete weight is
exact.  Complete weights are closed under going up, and f_i out of nu is
exact exactly when nu - alpha_i is complete.
"""

import json
import random
from dataclasses import dataclass, field

from . import linalg
from .algebra.basis import weight_basis, weight_space, word_coords
from .algebra.element import AlgebraElement, Flavor, NormalWord, multiply
from .config import check_height
from .errors import IdentityViolation, InconsistentModule, NotASubmodule, UnsafeRegion
from .projector import build_gamma
from .scalars import ONE, ZERO, Scalar

SCHEMA_VERSION = 1


def _zeros(rows, cols):
    return [[ZERO] * cols for _ in range(rows)]


def _matmul(a, b, rows, inner, cols):
    if not rows or not cols or not inner:
        return _zeros(rows, cols)
    return linalg.matmul(a, b)


def _is_zero(m):
    return all(not x for row in m for x in row)


def _columns(m, rows, cols):
    return [[m[r][c] for r in range(rows)] for c in range(cols)]


def _from_columns(cols, rows):
    return [[v[r] for v in cols] for r in range(rows)]


@dataclass
class GradedModule:
    datum: object
    dims: dict
    f: list
    e: list
    horizon: list = field(default_factory=list)
    labels: dict = field(default_factory=dict)

    # --- weights ------------------------------------------------------------------

    def shift(self, mu, i, sign):
        """mu + sign * alpha_i in weight coordinates."""
        col = [row[i] for row in self.datum.weight_matrix]
        return tuple(m + sign * c for m, c in zip(mu, col))

    def dim(self, mu):
        return self.dims.get(tuple(mu), 0)

    @property
    def weights(self):
        return sorted(self.dims, key=lambda mu: (self.depth(mu), [-x for x in mu]))

    def root_gap(self, upper, lower):
        """beta with upper - lower = beta in Q_+, else None."""
        beta = self.datum.weight_to_root(tuple(a - b for a, b in zip(upper, lower)))
        if beta is None or min(beta) < 0:
            return None
        return beta

    def depth(self, mu):
        gaps = [self.root_gap(lam, mu) for lam, _ in self.horizon]
        return min((sum(g) for g in gaps if g is not None), default=0)

    def is_complete(self, nu):
        for lam, n in self.horizon:
            gap = self.root_gap(lam, nu)
            if gap is not None and sum(gap) > n:
                return False
        return True

    def complete_weights(self):
        return [mu for mu in self.weights if self.is_complete(mu)]

    # --- actions ------------------------------------------------------------------

    def action(self, kind, i, mu):
        """Matrix of f_i or e''_i on M_mu (rows: target weight)."""
        mu = tuple(mu)
        target = self.shift(mu, i, -1 if kind == "F" else 1)
        table = self.f[i] if kind == "F" else self.e[i]
        m = table.get(mu)
        if m is None:
            return _zeros(self.dim(target), self.dim(mu)), target
        return m, target

    def word_action(self, kind, word, mu):
        """Matrix of a letter word (applied right to left) on M_mu and its target."""
        m = linalg.identity(self.dim(mu))
        cur = tuple(mu)
        for i in reversed(word):
            a, nxt = self.action(kind, i, cur)
            m = _matmul(a, m, self.dim(nxt), self.dim(cur), self.dim(mu))
            cur = nxt
        return m, cur

    def torus_scalar(self, h, mu):
        return Scalar.q_power(sum(c * m for c, m in zip(h, mu)))

    def check_relations(self):
        """e''_i f_j - q_i^<h_i,alpha_j> f_j e''_i = delta_ij on complete weights."""
        d = self.datum
        for mu in self.weights:
            n = self.dim(mu)
            for i in d.indices:
                for j in d.indices:
                    if not self.is_complete(self.shift(mu, j, -1)):
                        continue
                    fj, lo = self.action("F", j, mu)
                    ei, back = self.action("E", i, lo)
                    ab = _matmul(ei, fj, self.dim(back), self.dim(lo), n)
                    ej, up = self.action("E", i, mu)
                    if not self.is_complete(self.shift(up, j, -1)):
                        continue
                    fjup, back2 = self.action("F", j, up)
                    ba = _matmul(fjup, ej, self.dim(back2), self.dim(up), n)
                    c = Scalar.q_power(d.symmetrizers[i] * d.cartan_matrix[i][j])
                    for r in range(self.dim(back)):
                        for s in range(n):
                            val = ab[r][s] - c * ba[r][s] - (ONE if i == j and r == s else ZERO)
                            if val:
                                raise InconsistentModule(
                                    f"e''{i + 1} f{j + 1} relation fails at weight {list(mu)}")
        return True

    # --- serialization ------------------------------------------------------------

    def to_json(self):
        def mats(tables):
            return [[{"weight": list(mu), "matrix": [[str(x) for x in row] for row in m]}
                     for mu, m in sorted(t.items())] for t in tables]

        return {
            "schema_version": SCHEMA_VERSION,
            "datum": self.datum.to_json(),
            "horizon": [{"weight": list(lam), "cutoff": n} for lam, n in self.horizon],
            "weights": [{"weight": list(mu), "dim": self.dims[mu]} for mu in self.weights],
            "f": mats(self.f),
            "edd": mats(self.e),
        }

    def __eq__(self, other):
        if not isinstance(other, GradedModule):
            return NotImplemented
        return (self.datum == other.datum and self.dims == other.dims
                and _norm_tables(self.f) == _norm_tables(other.f)
                and _norm_tables(self.e) == _norm_tables(other.e)
                and sorted(self.horizon) == sorted(other.horizon))


def _norm_tables(tables):
    return [{mu: m for mu, m in t.items() if not _is_zero(m)} for t in tables]


def module_from_json(data):
    from .cartan import from_json as datum_from_json

    if data.get("schema_version") != SCHEMA_VERSION:
        raise InconsistentModule(f"unsupported module schema_version {data.get('schema_version')!r}")
    datum = datum_from_json(data["datum"])
    dims = {tuple(w["weight"]): int(w["dim"]) for w in data["weights"]}
    wd = datum.weight_dim
    if any(len(mu) != wd for mu in dims):
        raise InconsistentModule(f"weights must have {wd} coordinates")

    def tables(raw, sign):
        if len(raw) != datum.rank:
            raise InconsistentModule("need one action table per index")
        out = []
        for i, entries in enumerate(raw):
            t = {}
            for ent in entries:
                mu = tuple(ent["weight"])
                m = [[Scalar.parse(x) for x in row] for row in ent["matrix"]]
                t[mu] = m
            out.append(t)
        return out

    mod = GradedModule(datum, dims, tables(data["f"], -1), tables(data["edd"], 1),
                       [(tuple(h["weight"]), int(h["cutoff"])) for h in data.get("horizon", [])])
    for kind, tabs in (("F", mod.f), ("E", mod.e)):
        for i, t in enumerate(tabs):
            for mu, m in t.items():
                target = mod.shift(mu, i, -1 if kind == "F" else 1)
                if len(m) != mod.dim(target) or any(len(row) != mod.dim(mu) for row in m):
                    raise InconsistentModule(f"matrix shape mismatch for {kind}{i + 1} at {list(mu)}")
    return mod


def load_module(path):
    with open(path) as fh:
        return module_from_json(json.load(fh))


def dump_module(module, path):
    with open(path, "w") as fh:
        json.dump(module.to_json(), fh, indent=1)


# --- construction ------------------------------------------------------------------


def highest_weight(datum, lam):
    """Normalize a highest weight: rank pairings, padded with zeros for extra coordinates."""
    lam = tuple(int(x) for x in lam)
    wd = datum.weight_dim
    if len(lam) == datum.rank and wd > datum.rank:
        lam = lam + (0,) * (wd - datum.rank)
    if len(lam) != wd:
        raise ValueError(f"weight needs {wd} coordinates for {datum.name}")
    return lam


def build_H(datum, lam, N):
    """Truncation of H(lambda) to f-heights <= N, basis f-words . u_lambda."""
    check_height(N, "module cutoff")
    lam = highest_weight(datum, lam)
    rank = datum.rank
    dims, labels = {}, {}
    betas = datum.enumerate_qplus(N)
    weight_of = {}
    for beta in betas:
        mu = tuple(l - w for l, w in zip(lam, datum.root_to_weight(beta)))
        words = weight_basis(datum, beta)
        dims[mu] = len(words)
        labels[mu] = words
        weight_of[beta] = mu
    f = [dict() for _ in range(rank)]
    e = [dict() for _ in range(rank)]
    for beta in betas:
        mu = weight_of[beta]
        words = labels[mu]
        for i in range(rank):
            up = tuple(b + (1 if k == i else 0) for k, b in enumerate(beta))
            if sum(up) <= N:
                target = labels[weight_of[up]]
                pos = {w: r for r, w in enumerate(target)}
                m = _zeros(len(target), len(words))
                for c, w in enumerate(words):
                    for b, x in word_coords(datum, (i,) + w):
                        m[pos[b]][c] = m[pos[b]][c] + x
                f[i][mu] = m
            if beta[i] > 0:
                down = tuple(b - (1 if k == i else 0) for k, b in enumerate(beta))
                target = labels[weight_of[down]]
                pos = {w: r for r, w in enumerate(target)}
                m = _zeros(len(target), len(words))
                edd = AlgebraElement.generator(datum, "EDD", i)
                for c, w in enumerate(words):
                    fw = AlgebraElement(datum, Flavor.B, {NormalWord(w, (0,) * rank, ()): ONE})
                    for nw, x in multiply(edd, fw).terms.items():
                        if nw.e:
                            continue
                        # q^h u_lambda = q^<h, lambda> u_lambda
                        s = x * Scalar.q_power(sum(c_ * l_ for c_, l_ in zip(nw.torus, lam)))
                        m[pos[nw.f]][c] = m[pos[nw.f]][c] + s
                e[i][mu] = m
    return GradedModule(datum, dims, f, e, [(lam, N)], labels)


def direct_sum(*modules):
    if not modules:
        raise ValueError("direct_sum needs at least one module")
    datum = modules[0].datum
    dims = {}
    for m in modules:
        if m.datum != datum:
            raise InconsistentModule("summands use different Cartan data")
        for mu, n in m.dims.items():
            dims[mu] = dims.get(mu, 0) + n
    offsets = []
    for k, m in enumerate(modules):
        off = {}
        for mu in dims:
            off[mu] = sum(prev.dim(mu) for prev in modules[:k])
        offsets.append(off)

    def assemble(kind):
        out = []
        for i in range(datum.rank):
            t = {}
            for mu in dims:
                target = modules[0].shift(mu, i, -1 if kind == "F" else 1)
                if target not in dims:
                    continue
                big = _zeros(dims[target], dims[mu])
                for k, m in enumerate(modules):
                    if m.dim(mu) == 0 or m.dim(target) == 0:
                        continue
                    a, _ = m.action(kind, i, mu)
                    ro, co = offsets[k][target], offsets[k][mu]
                    for r, row in enumerate(a):
                        for c, x in enumerate(row):
                            big[ro + r][co + c] = x
                t[mu] = big
            out.append(t)
        return out

    horizon = [h for m in modules for h in m.horizon]
    return GradedModule(datum, dims, assemble("F"), assemble("E"), horizon)


def _random_invertible(n, rng):
    while True:
        m = [[Scalar(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        det, _ = linalg.fraction_free_solve(m, [[] for _ in range(n)]) if n else (ONE, None)
        if det:
            return m


def conjugate(module, seed=None, rng=None):
    """Same module in a random weight-preserving basis: A -> P_target A P_source^-1."""
    rng = rng or random.Random(seed)
    change = {mu: _random_invertible(n, rng) for mu, n in sorted(module.dims.items())}
    inv = {mu: linalg.inverse(p) if p else [] for mu, p in change.items()}

    def transform(kind):
        out = []
        for i in range(module.datum.rank):
            t = {}
            for mu, a in (module.f if kind == "F" else module.e)[i].items():
                target = module.shift(mu, i, -1 if kind == "F" else 1)
                nt, ns = module.dim(target), module.dim(mu)
                pa = _matmul(change[target], a, nt, nt, ns) if nt else []
                t[mu] = _matmul(pa, inv[mu], nt, ns, ns)
            out.append(t)
        return out

    return GradedModule(module.datum, dict(module.dims), transform("F"), transform("E"), list(module.horizon))


# --- kernels, Gamma, decomposition ------------------------------------------------------


def kernel_K(module):
    """Joint kernel of all e''_i, as {weight: [basis column vectors]} (empty weights omitted)."""
    out = {}
    for mu in module.weights:
        n = module.dim(mu)
        rows = []
        for i in module.datum.indices:
            a, _ = module.action("E", i, mu)
            rows.extend(a)
        basis = linalg.nullspace(rows, n) if rows else [
            [ONE if r == c else ZERO for r in range(n)] for c in range(n)]
        if basis:
            out[mu] = basis
    return out


def f_image(module, mu):
    """Spanning columns of sum_i Im(f_i) inside M_mu."""
    cols = []
    for i in module.datum.indices:
        src = module.shift(mu, i, 1)
        if module.dim(src) == 0:
            continue
        a, _ = module.action("F", i, src)
        cols.extend(_columns(a, module.dim(mu), module.dim(src)))
    return cols


def gamma_on_module(module, weights=None):
    """{weight: matrix of Gamma on M_mu} for complete weights (default: all of them)."""
    if weights is None:
        weights = module.complete_weights()
    else:
        weights = [tuple(w) for w in weights]
        for mu in weights:
            if not module.is_complete(mu):
                raise UnsafeRegion(f"weight {list(mu)} is at the truncation boundary")
    cutoff = max((n for _, n in module.horizon), default=0)
    gamma = build_gamma(module.datum, cutoff)
    out = {}
    for mu in weights:
        n = module.dim(mu)
        acc = _zeros(n, n)
        for beta, g in gamma.components.items():
            for w, c in g.terms.items():
                em, top = module.word_action("E", w.e, mu)
                if module.dim(top) == 0 or _is_zero(em):
                    continue
                fm, back = module.word_action("F", w.f, top)
                prod = _matmul(fm, em, n, module.dim(top), n)
                s = c * module.torus_scalar(w.torus, top) if any(w.torus) else c
                for r in range(n):
                    for k in range(n):
                        if prod[r][k]:
                            acc[r][k] = acc[r][k] + s * prod[r][k]
        out[mu] = acc
    return out


def check_gamma_on_module(module):
    """Image = K(M), idempotent, kills Im(f_i), and e''_i Gamma = 0, on complete weights."""
    gam = gamma_on_module(module)
    kern = kernel_K(module)
    for mu, g in gam.items():
        n = module.dim(mu)
        if _matmul(g, g, n, n, n) != g:
            raise IdentityViolation(f"Gamma is not idempotent at {list(mu)}", component=mu)
        img = linalg.column_space(_columns(g, n, n), n)
        k = kern.get(mu, [])
        if len(img) != len(k) or linalg.rank([list(v) for v in img + k], n) != len(k):
            raise IdentityViolation(f"Gamma image differs from K(M) at {list(mu)}", component=mu)
        for v in f_image(module, mu):
            gv = [sum((g[r][c] * v[c] for c in range(n)), ZERO) for r in range(n)]
            if any(gv):
                raise IdentityViolation(f"Gamma does not kill Im(f) at {list(mu)}", component=mu)
        for i in module.datum.indices:
            a, up = module.action("E", i, mu)
            if not _is_zero(_matmul(a, g, module.dim(up), n, n)):
                raise IdentityViolation(f"e''{i + 1} Gamma != 0 at {list(mu)}", component=mu)
    return True


@dataclass
class DirectSumReport:
    passed: bool
    kernel_dims: dict
    failures: list

    def to_json(self):
        return {"passed": self.passed,
                "kernel_dims": [{"weight": list(mu), "dim": d} for mu, d in sorted(self.kernel_dims.items())],
                "failures": [list(mu) for mu in self.failures]}


def verify_direct_sum(module, raise_on_failure=True):
    """M_mu = K(M)_mu (+) sum_i Im(f_i) and M = B^- K(M) on complete weights."""
    kern = kernel_K(module)
    failures = []
    for mu in module.complete_weights():
        n = module.dim(mu)
        k = kern.get(mu, [])
        im = f_image(module, mu)
        r_im = linalg.rank(im, n) if im else 0
        r_all = linalg.rank(k + im, n) if (k or im) else 0
        if r_all != n or len(k) + r_im != n:
            failures.append(mu)
            continue
        if n and linalg.rank(_generated(module, kern, mu), n) != n:
            failures.append(mu)
    report = DirectSumReport(not failures, {mu: len(v) for mu, v in kern.items()}, failures)
    if failures and raise_on_failure:
        raise IdentityViolation(f"direct sum decomposition fails at {list(failures[0])}", component=failures[0])
    return report


def _generated(module, spaces, mu):
    """Columns of B^- applied to ``spaces`` (weight -> columns) landing in M_mu."""
    cols = []
    for nu, vecs in spaces.items():
        beta = module.root_gap(nu, mu)
        if beta is None or not vecs:
            continue
        for w in weight_space(module.datum, beta).basis:
            m, _ = module.word_action("F", w, nu)
            for v in vecs:
                cols.append([sum((m[r][c] * v[c] for c in range(len(v))), ZERO) for r in range(module.dim(mu))])
    return cols


def decompose(module):
    """[(lambda, multiplicity)] with multiplicity = dim K(M)_lambda, certified by
    counting dimensions of complete weights against free B^- modules."""
    kern = kernel_K(module)
    mult = {mu: len(v) for mu, v in kern.items() if v}
    for nu in module.complete_weights():
        expected = 0
        for lam, m in mult.items():
            beta = module.root_gap(lam, nu)
            if beta is not None:
                expected += m * len(weight_basis(module.datum, beta))
        if expected != module.dim(nu):
            raise InconsistentModule(
                f"weight {list(nu)}: dim {module.dim(nu)} but free generation predicts {expected}")
    return sorted(mult.items(), key=lambda kv: (module.depth(kv[0]), [-x for x in kv[0]]))


def _check_submodule(module, sub):
    for mu, vecs in sub.items():
        for kind in ("E", "F"):
            for i in module.datum.indices:
                a, target = module.action(kind, i, mu)
                if kind == "F" and not module.is_complete(target):
                    continue
                nt = module.dim(target)
                if nt == 0:
                    continue
                have = sub.get(target, [])
                images = [[sum((a[r][c] * v[c] for c in range(len(v))), ZERO) for r in range(nt)] for v in vecs]
                base = linalg.rank(have, nt) if have else 0
                if images and linalg.rank(have + images, nt) != base:
                    raise NotASubmodule(f"{'f' if kind == 'F' else 'edd'}{i + 1} leaves the subspace at {list(mu)}")


def _intersect(a, b, n):
    """Basis of span(a) & span(b) inside an n-dimensional space."""
    if not a or not b:
        return []
    # solve sum x_k a_k = sum y_k b_k
    cols = [list(v) for v in a] + [[-x for x in v] for v in b]
    null = linalg.nullspace(_from_columns(cols, n), len(cols))
    out = []
    for z in null:
        v = [sum((z[k] * a[k][r] for k in range(len(a))), ZERO) for r in range(n)]
        out.append(v)
    return linalg.column_space(out, n)


def _complement(sub, whole, n):
    """Vectors from ``whole`` extending a basis of span(sub) to span(whole)."""
    chosen = []
    basis = [list(v) for v in sub]
    for v in whole:
        if linalg.rank(basis + [list(v)], n) > len(basis):
            basis.append(list(v))
            chosen.append(list(v))
    return chosen


def split_complement(module, sub):
    """For a graded submodule L (weight -> spanning columns) return (N, B.N) with
    K(M) = K(L) (+) N weightwise and M = L (+) B.N on complete weights."""
    sub = {tuple(mu): [list(v) for v in vecs] for mu, vecs in sub.items()}
    _check_submodule(module, sub)
    kern = kernel_K(module)
    N = {}
    for mu, k in kern.items():
        n = module.dim(mu)
        kl = _intersect(k, sub.get(mu, []), n)
        comp = _complement(kl, k, n)
        if comp:
            N[mu] = comp
    generated = {}
    for mu in module.weights:
        cols = _generated(module, N, mu)
        if cols:
            generated[mu] = linalg.column_space(cols, module.dim(mu))
    for mu in module.complete_weights():
        n = module.dim(mu)
        lb = sub.get(mu, [])
        gb = generated.get(mu, [])
        rl = linalg.rank(lb, n) if lb else 0
        rg = len(gb)
        total = linalg.rank(lb + gb, n) if (lb or gb) else 0
        if rl + rg != n or total != n:
            raise IdentityViolation(f"M != L (+) B.N at weight {list(mu)}", component=mu)
    return N, generated
