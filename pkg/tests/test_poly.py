from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qhp.poly import Constraint, ExpressionError, Poly

v, w = Poly.var("v"), Poly.var("w")
small = st.integers(-4, 4)


def polys(names=("x", "y"), max_terms=4, max_exp=2):
    mono = st.tuples(*[st.integers(0, max_exp) for _ in names]).map(
        lambda es: tuple((n, e) for n, e in zip(names, es) if e))
    return st.dictionaries(mono, small.filter(bool), max_size=max_terms).map(Poly)


@given(polys(), polys())
def test_divmod_identity(p, d):
    if d.is_zero():
        with pytest.raises(ZeroDivisionError):
            p.divmod(d)
        return
    q, r = p.divmod(d)
    assert q * d + r == p


@given(polys(), polys())
def test_exact_division_recovers_factor(a, b):
    if b.is_zero():
        return
    q, r = (a * b).divmod(b)
    assert r.is_zero() and q == a


@given(polys(), st.fractions(min_value=-5, max_value=5), st.fractions(min_value=-5, max_value=5))
def test_arithmetic_matches_evaluation(p, x, y):
    env = {"x": x, "y": y}
    q = p * p - p + 3
    assert q.evaluate(env) == p.evaluate(env) ** 2 - p.evaluate(env) + 3


@given(polys())
def test_normalization(p):
    n, s = p.normalized()
    assert n * s == p
    if not p.is_zero():
        assert all(c.denominator == 1 for c in n.terms.values())
        assert n.content() == 1


def test_substitute_ratio():
    p = v * w + 4 * v + 2 - 2 * w
    h = p.substitute_ratio("v", "u1", "w1").substitute_ratio("w", "u2", "w2")
    u1, w1, u2, w2 = (Poly.var(s) for s in ("u1", "w1", "u2", "w2"))
    assert h == u1 * u2 + 4 * u1 * w2 + 2 * w1 * w2 - 2 * w1 * u2
    assert h.evaluate({"u1": 3, "w1": 2, "u2": 5, "w2": 7}) == p.evaluate({"v": Fraction(3, 2), "w": Fraction(5, 7)}) * 14


def test_sign_definite():
    assert (v + 2 * w).sign_definite()
    assert (-v - w).sign_definite()
    assert not (v - 6 * w).sign_definite()
    assert not Poly().sign_definite()


def test_constraints_evaluate():
    c = Constraint("v*w + 4*v + 2 != 2*w")
    assert c.variables == {"v", "w"}
    assert c.holds({"v": 1, "w": 1})
    assert not c.holds({"v": 1, "w": 6})
    assert not Constraint("v != 6").holds({"v": 6})
    assert Constraint("(v, w) != (1, 1)").holds({"v": 1, "w": 2})
    assert not Constraint("(v, w) != (1, 1)").holds({"v": 1, "w": 1})
    assert Constraint("v != 1 and w != 1").holds({"v": 2, "w": 3})


def test_constraint_polynomial():
    assert Constraint("v != 6").polynomial() == v - 6
    assert Constraint("3*v*w + 2*w + 1 != 2*v").polynomial() == 3 * v * w + 2 * w + 1 - 2 * v
    p = Constraint("v != 4/5").polynomial()
    assert p.normalized()[0] == 5 * v - 4
    assert Constraint("v != 1 and w != 2").polynomial() is None
    assert Constraint("(v, w) != (1, 1)").polynomial() is None


@pytest.mark.parametrize("text", ["v + 1", "__import__('os')", "v.real != 1", "v != 1.5", "lambda: 1"])
def test_constraint_rejects(text):
    with pytest.raises(ExpressionError):
        Constraint(text)


def test_unbound_variable():
    with pytest.raises(ExpressionError):
        Constraint("x != 1").holds({"v": 1})
