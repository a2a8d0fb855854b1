import pytest
from hypothesis import given
from hypothesis import strategies as st

from qproj import cartan
from qproj.algebra.element import AlgebraElement, Flavor
from qproj.errors import FlavorMismatch
from qproj.expr import parse_expression
from qproj.hopf import TensorElement, antipode, coproduct, phi, variant_name
from qproj.scalars import ONE, q

import oracles
from test_algebra import evaluate, word_strategy

MAPS = {
    "delta": (Flavor.U, lambda x: coproduct("delta", x), False),
    "r": (Flavor.B, lambda x: coproduct("r", x), False),
    "l": (Flavor.BBAR, lambda x: coproduct("l", x), False),
    "b": (Flavor.U, lambda x: coproduct("b", x), False),
    "S": (Flavor.U, lambda x: antipode(x, "S"), True),
    "S_inv": (Flavor.U, lambda x: antipode(x, "S_inv"), True),
    "phi": (Flavor.BBAR, phi, True),
}


def P(text, d, flavor=None):
    return parse_expression(text, d, flavor)


def T(*pairs):
    total = None
    for c, x, y in pairs:
        t = TensorElement.pure(x, y).scale(c)
        total = t if total is None else total + t
    return total


def test_delta_generators(A1):
    f, e = P("f1", A1), P("e1", A1)
    K, Ki, one = P("K[1]", A1, "U"), P("K[-1]", A1, "U"), P("1", A1, "U")
    assert coproduct("delta", f) == T((ONE, f, Ki), (ONE, one, f))
    assert coproduct("delta", e) == T((ONE, e, one), (ONE, K, e))
    assert coproduct("delta", K) == T((ONE, K, K))


def test_r_edd(A2):
    x = coproduct("r", P("edd2", A2))
    qq = q(1) - q(-1)
    one_b = AlgebraElement.one(A2, Flavor.B)
    expected = T((qq, one_b, P("K[0,-1] e2", A2)), (ONE, P("edd2", A2), P("K[0,-1]", A2, "U")))
    assert x == expected


def test_l_and_b_generators(A1):
    qq = q(1) - q(-1)
    t = P("K[1]", A1, "U")
    tf = t * P("f1", A1)
    assert coproduct("l", P("fd1", A1)) == T((qq, tf, AlgebraElement.one(A1, Flavor.BBAR)),
                                             (ONE, t, P("fd1", A1)))
    tinv_fd = P("K[-1]", A1, "Bbar") * P("fd1", A1)
    assert coproduct("b", P("f1", A1)) == T((ONE, AlgebraElement.one(A1, Flavor.BBAR), P("f1", A1, "B")),
                                            (ONE / qq, tinv_fd, P("K[-1]", A1, "B")))
    t_edd = P("K[1]", A1, "B") * P("edd1", A1)
    assert coproduct("b", P("e1", A1)) == T((ONE / qq, P("K[1]", A1, "Bbar"), t_edd),
                                            (ONE, P("e1", A1, "Bbar"), AlgebraElement.one(A1, Flavor.B)))


def test_delta_f_squared(A1):
    f = P("f1", A1)
    got = coproduct("delta", f * f)
    expected = T((ONE, f * f, P("K[-2]", A1, "U")),
                 (1 + q(2), f, P("f1 K[-1]", A1)),
                 (ONE, AlgebraElement.one(A1, Flavor.U), f * f))
    assert got == expected


def test_coproduct_domain(A1):
    with pytest.raises(FlavorMismatch):
        coproduct("r", P("e1", A1))
    with pytest.raises(FlavorMismatch):
        coproduct("l", P("edd1", A1))
    assert variant_name("Δ") == "delta"


def test_antipode_examples(A2):
    x = antipode(P("e1 f2", A2), "S")
    expected = P("f2 K[0,1] K[-1,0] e1", A2)
    assert x == expected
    assert antipode(P("f1", A2), "S_inv") == -(P("K[1,0]", A2, "U") * P("f1", A2))
    assert antipode(P("K[2,-1]", A2, "U"), "S") == P("K[-2,1]", A2, "U")


def test_phi_examples(B2):
    for i in B2.indices:
        qi = q(B2.symmetrizers[i])
        qq = qi - ONE / qi
        e = AlgebraElement.generator(B2, "E", i, Flavor.BBAR)
        fd = AlgebraElement.generator(B2, "FD", i)
        assert phi(e) == AlgebraElement.generator(B2, "EDD", i).scale(-ONE / qq)
        assert phi(fd) == AlgebraElement.generator(B2, "F", i, Flavor.B).scale(-qq)
    e1, e2 = (AlgebraElement.generator(B2, "E", i, Flavor.BBAR) for i in (0, 1))
    edd1, edd2 = (AlgebraElement.generator(B2, "EDD", i) for i in (0, 1))
    scale = ONE / ((q(2) - q(-2)) * (q(1) - q(-1)))
    assert phi(e1 * e2) == (edd2 * edd1).scale(scale)
    assert phi(P("K[1,1]", B2, "Bbar")) == P("K[-1,-1]", B2, "B")


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2"])
@pytest.mark.parametrize("which", sorted(MAPS))
def test_homomorphism_safety(name, which):
    d = cartan.preset(name)
    domain, fn, anti = MAPS[which]
    for rel in oracles.relations(d, domain):
        assert not oracles.evaluate_relation(d, domain, rel, fn, anti), rel


@given(st.sampled_from(["A1", "A2", "B2"]), st.data())
def test_antipode_inverse_pair(name, data):
    d = cartan.preset(name)
    x = evaluate(d, Flavor.U, data.draw(word_strategy(d.rank, Flavor.U)))
    assert antipode(antipode(x, "S_inv"), "S") == x
    assert antipode(antipode(x, "S"), "S_inv") == x


@given(st.sampled_from(["A2", "B2"]), st.sampled_from(["delta", "r", "l", "b"]), st.data())
def test_total_weight_preserved(name, variant, data):
    d = cartan.preset(name)
    domain = MAPS[variant][0]
    x = evaluate(d, domain, data.draw(word_strategy(2, domain, 3)))
    if not x:
        return
    wt = x.weight()
    for (a, b), _ in coproduct(variant, x).terms.items():
        total = tuple(u + v for u, v in zip(a.weight(2), b.weight(2)))
        assert total == wt


@given(st.sampled_from(["A2", "B2"]), st.data())
def test_phi_negates_torus(name, data):
    d = cartan.preset(name)
    h = data.draw(st.lists(st.integers(-3, 3), min_size=2, max_size=2).map(tuple))
    k = AlgebraElement.torus(d, Flavor.BBAR, h)
    assert phi(k) == AlgebraElement.torus(d, Flavor.B, tuple(-a for a in h))
    assert antipode(AlgebraElement.torus(d, Flavor.U, h)) == AlgebraElement.torus(d, Flavor.U, tuple(-a for a in h))
