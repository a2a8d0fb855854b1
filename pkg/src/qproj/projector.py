"""The element C, its inverse, the extremal projector Gamma, and exact checks of
their defining identities modulo the e''-height filtration.

The completion is never formed: a series is kept as its graded pieces of
height <= l, and pi_{<=m} drops normal words whose e-part is longer than m.
Each check below only compares components that are complete at the chosen
cutoff, so every comparison is an exact equality.
"""

import time
from dataclasses import dataclass, field

from . import memo
from .algebra.element import AlgebraElement, Flavor, NormalWord, multiply, render
from .config import check_height
from .errors import IdentityViolation, NotHomogeneous, WrongDatum
from .hopf import TensorElement, antipode, coproduct, phi, tensor_map, tensor_multiply
from .pairing import canonical_element, dual_basis
from .scalars import ONE, ZERO, Scalar


@dataclass
class TruncatedSeries:
    """Graded pieces ``components[beta]`` of a series, for |beta| <= cutoff."""

    datum: object
    cutoff: int
    components: dict
    grading: str = "edd"

    @property
    def element(self):
        items = [self.components[b] for b in sorted(self.components, key=lambda b: (sum(b), b))]
        total = items[0]
        for x in items[1:]:
            total = total + x
        return total

    def truncate(self, m):
        """pi_{<=m} of the summed series."""
        x = self.element
        if isinstance(x, TensorElement):
            return x.truncate(m, side=0)
        return x.truncate(m)

    def __str__(self):
        x = self.element
        return render(x, divided_f=True) if isinstance(x, AlgebraElement) else str(x)


def _betas(datum, l):
    check_height(l, "cutoff")
    return datum.enumerate_qplus(l)


def _torus_el(datum, flavor, h):
    return AlgebraElement.torus(datum, flavor, h)


def c_prime_term(datum, beta):
    """(1 (x) k_beta^-1)(1 (x) S^-1)(C_beta), legs in U (x) B."""
    beta = tuple(beta)

    def compute():
        kinv = _torus_el(datum, Flavor.B, datum.k(beta, -1))
        return tensor_map(canonical_element(datum, beta), None,
                          lambda y: kinv * antipode(y, "S_inv").as_flavor(Flavor.B))

    return memo.table(datum, "C_term").get(beta, compute)


def c_inverse_term(datum, beta):
    """q^-(beta,beta) (k_beta (x) k_beta^-1)(S^-1 (x) S^-1)(C_beta)."""
    beta = tuple(beta)

    def compute():
        k = _torus_el(datum, Flavor.U, datum.k(beta))
        kinv = _torus_el(datum, Flavor.B, datum.k(beta, -1))
        t = tensor_map(canonical_element(datum, beta),
                       lambda x: k * antipode(x, "S_inv"),
                       lambda y: kinv * antipode(y, "S_inv").as_flavor(Flavor.B))
        return t.scale(Scalar.q_power(-datum.root_form(beta, beta)))

    return memo.table(datum, "C_inv_term").get(beta, compute)


def gamma_term(datum, beta):
    """sum_r k_beta^-1 S^-1(y_r) phi(x_r) in B."""
    beta = tuple(beta)

    def compute():
        xs, ys = dual_basis(datum, beta)
        kinv = _torus_el(datum, Flavor.B, datum.k(beta, -1))
        zero = (0,) * datum.rank
        out = AlgebraElement.zero(datum, Flavor.B)
        for x, y in zip(xs, ys):
            px = phi(AlgebraElement(datum, Flavor.BBAR, {NormalWord((), zero, x): ONE}))
            out = out + kinv * antipode(y, "S_inv").as_flavor(Flavor.B) * px
        return out

    return memo.table(datum, "gamma_term").get(beta, compute)


def build_C(datum, l):
    return TruncatedSeries(datum, l, {b: c_prime_term(datum, b) for b in _betas(datum, l)}, "left-e")


def build_C_inverse(datum, l):
    return TruncatedSeries(datum, l, {b: c_inverse_term(datum, b) for b in _betas(datum, l)}, "left-e")


def build_gamma(datum, l):
    comps = {}
    for b in _betas(datum, l):
        g = gamma_term(datum, b)
        _check_gamma_term(datum, b, g)
        comps[b] = g
    return TruncatedSeries(datum, l, comps, "edd")


def _check_gamma_term(datum, beta, g):
    h = sum(beta)
    for w in g.terms:
        if len(w.f) != h or len(w.e) != h:
            raise IdentityViolation(f"Gamma term at {beta} has a word of heights ({len(w.f)}, {len(w.e)})",
                                    component=beta)
        if any(w.torus):
            # torus factors cancel in every term (k_beta^-1 against S^-1 of y)
            raise IdentityViolation(f"Gamma term at {beta} carries torus {w.torus}", component=beta)


def gamma_closed_form_sl2(datum, l):
    """sum_{n<=l} q^(n(n-1)/2) (-1)^n f^(n) e''^n for a rank-one datum."""
    if datum.rank != 1:
        raise WrongDatum(f"closed form needs a rank-one datum, got {datum.name}")
    check_height(l, "cutoff")
    comps = {}
    for n in range(l + 1):
        c = Scalar.q_power(datum.symmetrizers[0] * n * (n - 1) // 2, (-1) ** n) / datum.q_fact(n, 0)
        comps[(n,)] = AlgebraElement(datum, Flavor.B, {NormalWord((0,) * n, (0,), (0,) * n): c})
    return TruncatedSeries(datum, l, comps, "edd")


def extract_v(z, i):
    """v with Delta(z) = 1 (x) z + f_i (x) v t_i^-1 + (other first legs)."""
    datum = z.datum
    if not z.is_homogeneous():
        raise NotHomogeneous("extract_v needs a weight-homogeneous element")
    datum.check_index(i)
    z = z.as_flavor(Flavor.U)
    target = NormalWord((i,), (0,) * datum.rank, ())
    t = _torus_el(datum, Flavor.U, datum.t(i))
    out = AlgebraElement.zero(datum, Flavor.U)
    for (a, b), c in coproduct("delta", z).terms.items():
        if a == target:
            out = out + (AlgebraElement(datum, Flavor.U, {b: c}) * t)
    return out


# --- reports ---------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    residual_height: int = None
    component: object = None
    seconds: float = 0.0
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "passed": self.passed, "residual_height": self.residual_height,
                "component": None if self.component is None else list(self.component)
                if isinstance(self.component, tuple) else self.component,
                "seconds": round(self.seconds, 3), "detail": self.detail}


@dataclass
class Report:
    datum: str
    cutoff: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_json(self):
        return {"datum": self.datum, "cutoff": self.cutoff, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}

    def __str__(self):
        lines = [f"{self.datum} cutoff {self.cutoff}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            extra = "" if c.passed else f" (residual at height {c.residual_height}: {c.detail})"
            lines.append(f"  {'ok  ' if c.passed else 'FAIL'} {c.name}{extra}")
        return "\n".join(lines)

    def raise_if_failed(self):
        bad = self.failures()
        if bad:
            c = bad[0]
            raise IdentityViolation(f"{c.name} fails at height {c.residual_height}: {c.detail}",
                                    component=c.component)
        return self


def _min_height(x, side=0):
    if isinstance(x, TensorElement):
        return min((len(k[side].e) for k in x.terms), default=None)
    return x.min_e_height()


def _lowest(x, side=0):
    h = _min_height(x, side)
    if isinstance(x, TensorElement):
        low = x.filter(lambda a, b: len((a, b)[side].e) == h)
    else:
        low = x.e_height_component(h)
    text = str(low)
    return h, text if len(text) < 300 else text[:297] + "..."


def _record(report, name, residual, component=None, started=None, side=0):
    started = started if started is not None else time.perf_counter()
    if residual:
        h, text = _lowest(residual, side)
        report.checks.append(Check(name, False, h, component, time.perf_counter() - started, text))
    else:
        report.checks.append(Check(name, True, None, component, time.perf_counter() - started))


def _gen(datum, flavor, kind, i):
    return AlgebraElement.generator(datum, kind, i, flavor)


def verify_gamma(datum, l, raise_on_failure=True):
    """The truncated forms of e''_i Gamma = 0, Gamma f_i = 0, Gamma^2 = Gamma
    and sum_k a_k Gamma phi(b'_k) = 1."""
    report = Report(datum.name, l)
    g = build_gamma(datum, l).element
    for i in datum.indices:
        t0 = time.perf_counter()
        edd = _gen(datum, Flavor.B, "EDD", i)
        _record(report, f"edd{i + 1} Gamma", multiply(edd, g, max_e=l), i + 1, t0)
        t0 = time.perf_counter()
        f = _gen(datum, Flavor.B, "F", i)
        _record(report, f"Gamma f{i + 1}", multiply(g, f, max_e=l - 1), i + 1, t0)
    t0 = time.perf_counter()
    _record(report, "Gamma^2 - Gamma", multiply(g, g, max_e=l) - g, None, t0)
    t0 = time.perf_counter()
    total = AlgebraElement.zero(datum, Flavor.B)
    cinv = build_C_inverse(datum, l).element
    for (b1, a), c in cinv.terms.items():
        ak = AlgebraElement(datum, Flavor.B, {a: c})
        bk = _phi_word(datum, b1)
        total = total + multiply(ak, multiply(g, bk, max_e=l), max_e=l)
    _record(report, "sum a_k Gamma b_k - 1", total - AlgebraElement.one(datum, Flavor.B), None, t0)
    if raise_on_failure:
        report.raise_if_failed()
    return report


def _phi_word(datum, w):
    return memo.table(datum, "phi_word").get(
        w, lambda: phi(AlgebraElement(datum, Flavor.BBAR, {w: ONE})))


def _phi_left(t):
    """(phi (x) 1) on a U (x) B tensor whose left leg uses e and torus letters."""
    datum = t.datum
    out = {}
    for (a, b), c in t.terms.items():
        for w, x in _phi_word(datum, a).terms.items():
            key = (w, b)
            val = out.get(key, ZERO) + c * x
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return TensorElement(datum, (Flavor.B, t.flavors[1]), out)


def _pure(datum, flavors, left, right, coeff=ONE):
    return TensorElement(datum, flavors, {(NormalWord(*left), NormalWord(*right)): coeff})


def check_ecc(datum, beta, i):
    """Residual of [t_i^-1 (x) e''_i, C'_{beta+alpha_i}] - C'_beta (t_i^-1 e_i (x) (q_i - q_i^-1))."""
    z = (0,) * datum.rank
    up = tuple(b + (1 if k == i else 0) for k, b in enumerate(beta))
    x = _pure(datum, (Flavor.U, Flavor.B), ((), datum.t(i, -1), ()), ((), z, (i,)))
    big = c_prime_term(datum, up)
    lhs = tensor_multiply(x, big) - tensor_multiply(big, x)
    qq = datum.q_i(i) - datum.q_i(i).inverse()
    y = _pure(datum, (Flavor.U, Flavor.B), ((), datum.t(i, -1), (i,)), ((), z, ()), qq)
    rhs = tensor_multiply(c_prime_term(datum, beta), y)
    return lhs - rhs


def check_zv(z, i):
    """Residual of e''_i S^-1(z) - S^-1(z) e''_i + q_i^-2 t_i S^-1(v)."""
    datum = z.datum
    v = extract_v(z, i)
    sz = antipode(z.as_flavor(Flavor.U), "S_inv").as_flavor(Flavor.B)
    sv = antipode(v, "S_inv").as_flavor(Flavor.B)
    edd = _gen(datum, Flavor.B, "EDD", i)
    t = _torus_el(datum, Flavor.B, datum.t(i)).scale(Scalar.q_power(-2 * datum.symmetrizers[i]))
    return edd * sz - sz * edd + t * sv


def check_ecec(datum, l, i, C=None):
    """(t_i^-1 (x) e''_i) C - C (t_i^-1 (x) e''_i + (q_i - q_i^-1) t_i^-1 e_i (x) 1), left e-height <= l."""
    C = C if C is not None else build_C(datum, l).element
    z = (0,) * datum.rank
    fl = (Flavor.U, Flavor.B)
    x = _pure(datum, fl, ((), datum.t(i, -1), ()), ((), z, (i,)))
    qq = datum.q_i(i) - datum.q_i(i).inverse()
    y = x + _pure(datum, fl, ((), datum.t(i, -1), (i,)), ((), z, ()), qq)
    lim = (l, None)
    return tensor_multiply(x, C, lim) - tensor_multiply(C, y, lim)


def check_fcfc(datum, l, i, C=None, form="printed"):
    """Residual of the f-side intertwining relation for P = (phi (x) 1)(C), left e''-height <= l.

    ``form="printed"``: (f_i (x) t_i^-1 + 1 (x) f_i) P - P (f_i (x) t_i^-1).
    ``form="corrected"``: (f_i (x) t_i^-1) P - P (f_i (x) t_i^-1) - q_i^-2 (1 (x) t_i^-1) P (1 (x) f_i).
    The printed form already fails at height 0; the corrected one holds exactly.
    C must be available to height l + 1 since P (f_i (x) .) lowers e''-height by one.
    """
    C = C if C is not None else build_C(datum, l + 1).element
    P = _phi_left(C)
    z = (0,) * datum.rank
    fl = (Flavor.B, Flavor.B)
    a = _pure(datum, fl, ((i,), z, ()), ((), datum.t(i, -1), ()))
    lim = (l, None)
    if form == "printed":
        b = _pure(datum, fl, ((), z, ()), ((i,), z, ()))
        return tensor_multiply(a + b, P, lim) - tensor_multiply(P, a, lim)
    if form != "corrected":
        raise ValueError("form must be 'printed' or 'corrected'")
    t = _pure(datum, fl, ((), z, ()), ((), datum.t(i, -1), ()), Scalar.q_power(-2 * datum.symmetrizers[i]))
    f = _pure(datum, fl, ((), z, ()), ((i,), z, ()))
    return (tensor_multiply(a, P, lim) - tensor_multiply(P, a, lim)
            - tensor_multiply(tensor_multiply(t, P, lim), f, lim))


def check_c_inverse(datum, l, side="right"):
    """C C^-1 - 1 (x) 1 (or C^-1 C - 1 (x) 1) on left-leg weights of height <= l."""
    C = build_C(datum, l).element
    Ci = build_C_inverse(datum, l).element
    prod = tensor_multiply(C, Ci) if side == "right" else tensor_multiply(Ci, C)
    prod = prod.filter(lambda a, b: len(a.e) <= l)
    return prod - TensorElement.one(datum, prod.flavors)


def verify_C_identities(datum, l, raise_on_failure=True, zv_height=None, include_fcfc=True):
    """(ecc) per beta with |beta| + 1 <= l, (ecec) and (fcfc) up to height l,
    C C^-1 = C^-1 C = 1 (x) 1 up to weight height l, and (zv) on basis f-words."""
    from .algebra.basis import weight_basis

    report = Report(datum.name, l)
    for beta in datum.enumerate_qplus(l - 1):
        for i in datum.indices:
            t0 = time.perf_counter()
            _record(report, f"ecc beta={list(beta)} i={i + 1}", check_ecc(datum, beta, i), beta, t0)
    C = build_C(datum, l).element
    for i in datum.indices:
        t0 = time.perf_counter()
        _record(report, f"ecec i={i + 1}", check_ecec(datum, l, i, C), i + 1, t0)
    if include_fcfc:
        C1 = build_C(datum, l + 1).element
        for i in datum.indices:
            t0 = time.perf_counter()
            _record(report, f"fcfc i={i + 1}", check_fcfc(datum, l, i, C1), i + 1, t0)
            t0 = time.perf_counter()
            _record(report, f"fcfc corrected i={i + 1}", check_fcfc(datum, l, i, C1, "corrected"), i + 1, t0)
    for side in ("right", "left"):
        t0 = time.perf_counter()
        name = "C C^-1 - 1" if side == "right" else "C^-1 C - 1"
        _record(report, name, check_c_inverse(datum, l, side), None, t0)
    zv_height = l if zv_height is None else zv_height
    zero = (0,) * datum.rank
    for beta in datum.enumerate_qplus(zv_height):
        if not any(beta):
            continue
        for w in weight_basis(datum, beta):
            z = AlgebraElement(datum, Flavor.U, {NormalWord(w, zero, ()): ONE})
            for i in datum.indices:
                t0 = time.perf_counter()
                _record(report, f"zv z={w} i={i + 1}", check_zv(z, i), (w, i), t0)
    if raise_on_failure:
        report.raise_if_failed()
    return report
