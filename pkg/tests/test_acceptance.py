"""Acceptance criteria 1-8, each checked at exact equality.

Every criterion prints one ``criterion N: PASS|FAIL`` line (also collected in
the pytest terminal summary).  Caches are cleared before each criterion so the
recorded time is a cold run.  Run directly with ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from pathlib import Path


sys.path.insert(0, str(Path(__file__).parent))

from qproj import cartan, config, memo  # noqa: E402
from qproj.algebra.basis import weight_basis, words_of_weight  # noqa: E402
from qproj.algebra.element import AlgebraElement, Flavor, NormalWord, commute_edd_power, multiply, word_element  # noqa: E402
from qproj.category_o import (build_H, check_gamma_on_module, conjugate, decompose, direct_sum,  # noqa: E402
                              gamma_on_module, kernel_K, split_complement, verify_direct_sum)
from qproj.hopf import antipode, coproduct, phi  # noqa: E402
from qproj.linalg import rank  # noqa: E402
from qproj.pairing import gram, pair_words  # noqa: E402
from qproj.projector import (build_gamma, check_c_inverse, check_ecc, check_ecec, check_fcfc, check_zv,  # noqa: E402
                             verify_gamma)
from qproj.scalars import ONE, ZERO, q  # noqa: E402

import oracles  # noqa: E402

RESULTS = {}


class Outcome:
    """Collects named sub-checks of one criterion."""

    def __init__(self):
        self.failed = []

    def check(self, ok, label):
        if not ok:
            self.failed.append(label)


def run_criterion(n, limit, body):
    memo.clear_all()
    out = Outcome()
    started = time.perf_counter()
    with config.limit_heights(12):
        body(out)
    seconds = time.perf_counter() - started
    out.check(seconds < limit, f"took {seconds:.1f} s, limit {limit} s")
    ok = not out.failed
    note = "" if ok else "failed: " + "; ".join(out.failed[:5]) + (" ..." if len(out.failed) > 5 else "")
    RESULTS[n] = (ok, seconds, note)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({seconds:.1f} s){'  ' + note if note else ''}")
    assert ok, f"criterion {n}: {note}"


def B(d, f, e, c, torus=None):
    return AlgebraElement(d, Flavor.B, {NormalWord(tuple(f), torus or (0,) * d.rank, tuple(e)): c})


# 1 ---------------------------------------------------------------------------------------

def body_1(out):
    d = cartan.preset("A1")
    g = build_gamma(d, 8)
    for n in range(9):
        c = oracles._scalar((-1) ** n * oracles.q ** (n * (n - 1) // 2) / oracles.q_fact(n))
        out.check(g.components[(n,)] == B(d, (0,) * n, (0,) * n, c), f"n={n}")
    out.check(len(g.components) == 9, "component count")


def test_criterion_1():
    run_criterion(1, 5, body_1)


# 2 ---------------------------------------------------------------------------------------

def body_2(out):
    for name, l in [("A1", 8), ("A2", 5), ("B2", 4), ("G2", 3)]:
        report = verify_gamma(cartan.preset(name), l, raise_on_failure=False)
        for c in report.failures():
            out.check(False, f"{name} l={l} {c.name}")


def test_criterion_2():
    run_criterion(2, 600, body_2)


# 3 ---------------------------------------------------------------------------------------

def body_3(out):
    d = cartan.preset("A1")
    g = build_gamma(d, 2).element
    edd = AlgebraElement.generator(d, "EDD", 0)
    f = AlgebraElement.generator(d, "F", 0, Flavor.B)
    two = d.q_fact(2, 0)
    out.check(multiply(edd, g) == B(d, (0, 0), (0, 0, 0), q(5) / two), "e'' Gamma")
    out.check(multiply(g, f) == B(d, (0, 0, 0), (0, 0), q(5) / two), "Gamma f")


def test_criterion_3():
    run_criterion(3, 60, body_3)


# 4 ---------------------------------------------------------------------------------------

def body_4(out):
    for name in ("A1", "A2"):
        d = cartan.preset(name)
        betas = d.enumerate_qplus(5)
        for beta in betas:
            out.check(gram(d, beta).determinant != ZERO, f"{name} det at {beta}")
        small = [b for b in betas if sum(b) <= 4]
        for b1 in small:
            for b2 in small:
                if b1 == b2:
                    continue
                for x in weight_basis(d, b1):
                    for y in weight_basis(d, b2):
                        out.check(pair_words(d, x, y) == ZERO, f"{name} <{x},{y}>")


def test_criterion_4():
    run_criterion(4, 120, body_4)


# 5 ---------------------------------------------------------------------------------------

def body_5(out):
    a2, a1 = cartan.preset("A2"), cartan.preset("A1")
    for beta in a2.enumerate_qplus(4):
        for i in a2.indices:
            out.check(not check_ecc(a2, beta, i), f"ecc A2 beta={beta} i={i + 1}")
    for i in a2.indices:
        out.check(not check_ecec(a2, 4, i), f"ecec A2 i={i + 1}")
        residual = check_fcfc(a2, 4, i)
        if residual:
            low = min(len(a.e) for a, _ in residual.terms)
            out.check(False, f"fcfc A2 i={i + 1} as stated (residual from height {low})")
            # diagnostic only: the corrected relation, reported but not counted
            fixed = "holds" if not check_fcfc(a2, 4, i, form="corrected") else "fails"
            print(f"  note: corrected fcfc A2 i={i + 1} {fixed}")
    for side in ("right", "left"):
        out.check(not check_c_inverse(a1, 5, side), f"C C^-1 A1 ({side})")
    for d, h in ((a1, 5), (a2, 4)):
        for beta in d.enumerate_qplus(h):
            if not any(beta):
                continue
            for w in words_of_weight(beta):
                z = word_element(d, Flavor.U, "F", w)
                for i in d.indices:
                    out.check(not check_zv(z, i), f"zv {d.name} z={w} i={i + 1}")


def test_criterion_5():
    run_criterion(5, 300, body_5)


# 6 ---------------------------------------------------------------------------------------

MAPS = [
    ("delta", Flavor.U, lambda x: coproduct("delta", x), False),
    ("r", Flavor.B, lambda x: coproduct("r", x), False),
    ("l", Flavor.BBAR, lambda x: coproduct("l", x), False),
    ("b", Flavor.U, lambda x: coproduct("b", x), False),
    ("S", Flavor.U, lambda x: antipode(x, "S"), True),
    ("S_inv", Flavor.U, lambda x: antipode(x, "S_inv"), True),
    ("phi", Flavor.BBAR, phi, True),
]


def body_6(out):
    for name in ("A1", "A2", "B2"):
        d = cartan.preset(name)
        for label, domain, fn, anti in MAPS:
            for k, rel in enumerate(oracles.relations(d, domain)):
                out.check(not oracles.evaluate_relation(d, domain, rel, fn, anti), f"{label} on {name} relation {k}")


def test_criterion_6():
    run_criterion(6, 60, body_6)


# 7 ---------------------------------------------------------------------------------------

N = 5
WEIGHTS = {"A1": [(0,), (1,), (2,), (-1,), (3,)], "A2": [(0, 0), (1, 0), (0, 1), (1, 1), (2, -1), (-1, 1)]}


def _gamma_rank(module):
    return sum(rank([list(r) for r in m], len(m)) if m else 0 for m in gamma_on_module(module).values())


def _identity_columns(total, first):
    return {mu: [[ONE if r == c else ZERO for r in range(total[mu])] for c in range(n)] for mu, n in first.items() if n}


def body_7(out):
    for name in ("A1", "A2"):
        d = cartan.preset(name)
        rng = random.Random(2024)
        weights = WEIGHTS[name]
        lam, mu = weights[1], weights[2]
        h, hm = build_H(d, lam, N), build_H(d, mu, N)
        out.check({k: len(v) for k, v in kernel_K(h).items()} == {lam: 1}, f"{name} dim K(H)")
        out.check(check_gamma_on_module(h) and _gamma_rank(h) == 1, f"{name} Gamma rank/idempotent")
        out.check(verify_direct_sum(h, raise_on_failure=False).passed, f"{name} direct sum H")
        hh = direct_sum(h, hm)
        out.check(verify_direct_sum(hh, raise_on_failure=False).passed, f"{name} direct sum H+H'")
        cache = {}
        for trial in range(10):
            k = rng.randint(1, 3)
            chosen = [rng.choice(weights) for _ in range(k)]
            parts = [cache.setdefault(w, build_H(d, w, N)) for w in chosen]
            m = conjugate(direct_sum(*parts), rng=rng)
            out.check(verify_direct_sum(m, raise_on_failure=False).passed, f"{name} trial {trial} direct sum")
            planted = {}
            for w in chosen:
                planted[w] = planted.get(w, 0) + 1
            out.check(dict(decompose(m)) == planted, f"{name} trial {trial} decompose")
        # split off the first summand of H(lam) + H(mu) and recover the second
        try:
            Nsp, generated = split_complement(hh, _identity_columns(hh.dims, h.dims))
            out.check(list(Nsp) == [mu], f"{name} split complement N")
        except Exception as exc:  # an IdentityViolation here is a failed certificate
            out.check(False, f"{name} split complement: {exc}")


def test_criterion_7():
    run_criterion(7, 300, body_7)


# 8 ---------------------------------------------------------------------------------------

def body_8(out):
    d = cartan.preset("A1")
    for n in range(5):
        for m in range(5):
            brute = oracles.rewrite_edd_f(d, [("E", 0)] * n + [("F", 0)] * m)
            expected = {k: v / oracles.q_fact(m) for k, v in brute.items()}
            got = oracles.engine_terms(commute_edd_power(d, 0, n, 0, m))
            out.check(set(got) == set(expected) and all(oracles.same(got[k], expected[k]) for k in got),
                      f"(n,m)=({n},{m})")
    # the closed exponent 2nm + (n+m)k - k(k+1)/2 predicts q^6 on the f^(1) term at (1,2)
    got = oracles.engine_terms(commute_edd_power(d, 0, 1, 0, 2))
    out.check(oracles.same(got[((0,), ())], oracles.q), "(1,2) lower term is q f")


def test_criterion_8():
    run_criterion(8, 60, body_8)


if __name__ == "__main__":
    for n, fn in sorted((int(k.rsplit("_", 1)[1]), v) for k, v in list(globals().items())
                        if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            pass
    sys.exit(0 if all(ok for ok, _, _ in RESULTS.values()) else 1)
