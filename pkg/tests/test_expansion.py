import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhp.arrangement import Arrangement, Component, SingularPoint
from qhp.expansion import (ExpansionCenter, ExpansionError, contract_expansion, expand, expand_many, find_bubbles,
                           is_expansion, parse_weight)
from qhp.graph import discriminant, is_isomorphic
from qhp.lattice import pair
from qhp.resolution import minimal_log_resolution

coprime = st.tuples(st.integers(1, 40), st.integers(1, 40)).filter(lambda t: math.gcd(*t) == 1)


def partial_quotients(u, w):
    out = []
    while w:
        out.append(u // w)
        u, w = w, u % w
    return out


def triangle():
    L = [Component(f"L{i}", 1) for i in range(3)]
    arr = Arrangement(L, [SingularPoint("p01", ("L0", "L1")), SingularPoint("p02", ("L0", "L2")),
                          SingularPoint("p12", ("L1", "L2"))])
    return minimal_log_resolution(arr)


def consistent(g, lat, classes):
    ids = g.ids
    for i, a in enumerate(ids):
        if pair(lat, classes[a], classes[a]) != g.w(a):
            return False
        for b in ids[i + 1:]:
            if pair(lat, classes[a], classes[b]) != g.multiplicity(a, b):
                return False
    return True


@given(coprime)
@settings(max_examples=120, deadline=None)
def test_expansion_with_classes(uw):
    u, w = uw
    res = triangle()
    c = ExpansionCenter("L0", "L1", Fraction(u, w), "p01")
    D, lat, cl, rec = expand(res.graph, res.lattice, res.classes, c)
    assert consistent(D, lat, cl)
    A = cl[rec.bubble]
    assert pair(lat, A, A) == -1
    assert pair(lat, lat.canonical_class, A) == -1
    assert find_bubbles(D, lat, cl, [rec.bubble]) == [rec.bubble]
    # total transforms: H = L0 + sum m_U(c) c and H = L1 + sum m_W(c) c over the new curves
    assert rec.multiplicities[rec.bubble] == (u, w)
    H = lat.hyperplane()
    for side, comp in ((0, "L0"), (1, "L1")):
        total = cl[comp]
        for e, m in rec.multiplicities.items():
            total = total + m[side] * cl[e]
        assert total == H
    assert rec.blowups == sum(partial_quotients(u, w))
    assert is_expansion(res.graph, D, [rec])
    assert contract_expansion(D, rec) == res.graph


@given(coprime)
@settings(max_examples=120, deadline=None)
def test_sides_and_swap(uw):
    u, w = uw
    res = triangle()
    c = ExpansionCenter("L0", "L1", Fraction(u, w), "p01")
    D, _, _, rec = expand(res.graph, None, None, c)
    w_side, u_side = rec.side_chains()
    assert discriminant(D, w_side) == w and discriminant(D, u_side) == u
    D2, _, _, rec2 = expand(res.graph, None, None, c.swapped())
    assert is_isomorphic(D, D2)
    assert rec2.multiplicities[rec2.bubble] == (w, u)


@given(coprime, coprime)
@settings(max_examples=60, deadline=None)
def test_expansions_commute(a, b):
    res = triangle()
    c1 = ExpansionCenter("L0", "L1", Fraction(*a), "p01")
    c2 = ExpansionCenter("L1", "L2", Fraction(*b), "p12")
    D1, lat1, cl1, recs1 = expand_many(res.graph, res.lattice, res.classes, [c1, c2])
    D2, _, _, recs2 = expand_many(res.graph, res.lattice, res.classes, [c2, c1])
    assert is_isomorphic(D1, D2)
    assert consistent(D1, lat1, cl1)
    assert is_expansion(res.graph, D1, recs1)
    assert is_expansion(res.graph, D2, recs2)


@pytest.mark.parametrize("v", range(1, 12))
def test_integer_weight_chain(v):
    res = triangle()
    D, lat, cl, rec = expand(res.graph, res.lattice, res.classes, ExpansionCenter("L0", "L1", v))
    assert rec.inserted_chain[0] == rec.bubble
    _, u_side = rec.side_chains()
    assert [D.w(x) for x in u_side] == [-2] * (v - 1)
    A = cl[rec.bubble]
    assert pair(lat, A, cl["L0"]) == 1
    assert pair(lat, A, cl["L1"]) == (1 if v == 1 else 0)


def test_is_expansion_rejects_tampering():
    res = triangle()
    D, _, _, rec = expand(res.graph, None, None, ExpansionCenter("L0", "L1", "5/3"))
    assert is_expansion(res.graph, D, [rec])
    bent = D.with_weights({rec.side_chains()[0][0]: -7})
    assert not is_expansion(res.graph, bent, [rec])
    assert not is_expansion(res.graph.with_weights({"L2": 5}), D, [rec])


def test_errors():
    res = triangle()
    with pytest.raises(ExpansionError):
        expand(res.graph, None, None, ExpansionCenter("L0", "Q", 1))
    with pytest.raises(ExpansionError):
        expand(res.graph, None, None, ExpansionCenter("L0", "L1", 1, "p12"))
    with pytest.raises(ExpansionError):
        expand_many(res.graph, None, None, [ExpansionCenter("L0", "L1", 1), ExpansionCenter("L1", "L0", 2)])
    with pytest.raises(ValueError):
        ExpansionCenter("L0", "L1", 0)
    with pytest.raises(ValueError):
        ExpansionCenter("L0", "L0", 1)
    with pytest.raises(ValueError):
        parse_weight("0.5")
    assert parse_weight("6/4") == Fraction(3, 2)
