import math
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qhp import catalog
from qhp.graph import discriminant
from qhp.homology import (Prepared, detm_symbolic, homogenize, linear_form, locus_matches, m_matrix,
                          qhp_check_direct, qhp_check_expansion, restriction_matrix, weight_variables, zhp_weights)
from qhp.poly import Poly

ROWS = [r for r in catalog.list_rows() if r.n_centers > 0]
u1, w1, u2, w2 = (Poly.var(s) for s in ("u1", "w1", "u2", "w2"))
weights = st.tuples(st.integers(1, 15), st.integers(1, 15)).filter(lambda t: math.gcd(*t) == 1).map(
    lambda t: Fraction(*t))


def test_kernel_relations_vanish(built_rows):
    for r in ROWS:
        b = built_rows[r.label]
        rm = restriction_matrix(b.graph, b.classes, b.lattice)
        assert len(b.kernel) == r.n_centers
        for vec in b.kernel.vectors:
            assert rm.apply(vec) == (0,) * rm.rows


@given(st.data())
@settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_symbolic_det_matches_numeric(built_rows, data):
    row = data.draw(st.sampled_from(ROWS))
    combo = data.draw(st.sampled_from(row.combos))
    ws = [data.draw(weights) for _ in combo.centers]
    b = built_rows[row.label]
    centers = b.centers(combo, ws)
    p, s = detm_symbolic(b.kernel, centers)
    env = {}
    for i, c in enumerate(centers):
        x, y = weight_variables(i)
        env[x], env[y] = c.u, c.w
    assert s * p.evaluate(env) == m_matrix(b.kernel, centers).det()


@given(st.data())
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_h1_formula_against_discriminant(built_rows, data):
    row = data.draw(st.sampled_from(ROWS))
    combo = data.draw(st.sampled_from(row.combos))
    ws = [data.draw(weights) for _ in combo.centers]
    b = built_rows[row.label]
    v, D = b.check(combo, ws)
    if v.is_qhp:
        assert v.h1_order ** 2 == abs(discriminant(D))
        assert v.h1_order == abs(v.detm) * b.coker
    else:
        assert v.reasons and v.h1_order is None


def test_expansion_check_matches_prepared(built_rows):
    b = built_rows["F2_n1-cusp"]
    combo = b.row.find_combo(["C1,C2"])
    centers = b.centers(combo, [Fraction(7, 2)])
    v1 = qhp_check_expansion(b.graph, b.lattice, b.classes, centers)
    v2 = Prepared(b.graph, b.lattice, b.classes).check(centers)[0]
    assert v1.to_dict() == v2.to_dict()
    assert v1.is_qhp and v1.h1_order == abs(7 - 6 * 2)


def test_direct_check_rejects_expansion_candidates(built_rows):
    b = built_rows["F2_n1-cusp"]
    v = qhp_check_direct(b.graph, b.lattice, b.classes)
    assert not v.is_qhp
    assert any("tree" in r for r in v.reasons) or any("rank" in r for r in v.reasons)


def test_wrong_number_of_centers(built_rows):
    b = built_rows["F2n2-nodal"]
    one = b.row.combos[0].centers[0].at(1)
    v, _ = b.prepared.check([one])
    assert not v.is_qhp and any(r.startswith("(3)") for r in v.reasons)
    with pytest.raises(ValueError):
        detm_symbolic(b.kernel, [one])


def test_detm_zero_is_not_qhp(built_rows):
    b = built_rows["F2_n1-cusp"]
    combo = b.row.find_combo(["C1,C2"])
    v, _ = b.check(combo, [6])
    assert not v.is_qhp and v.detm == 0


def test_locus_matching():
    v, w = Poly.var("v"), Poly.var("w")
    assert homogenize(v - 6, ["v"]) == u1 - 6 * w1
    assert locus_matches(u1 - 6 * w1, v - 6, ["v"])
    assert locus_matches((6 * w1 - u1) * (u2 + 3 * w2), v - 6, ["v", "w"])
    assert not locus_matches(u1 - 5 * w1, v - 6, ["v"])
    assert not locus_matches((u1 - 6 * w1) * (u2 - w2), v - 6, ["v", "w"])
    assert locus_matches(u1 * u2 + 4 * u1 * w2 + 2 * w1 * w2 - 2 * w1 * u2, v * w + 4 * v + 2 - 2 * w, ["v", "w"])


@given(st.integers(-15, 15), st.integers(-15, 15), st.integers(1, 3))
@settings(max_examples=150, deadline=None)
def test_zhp_weights_against_brute_force(a, b, k):
    z = zhp_weights((a, b), k, count=5, bound=200)
    brute = sorted(((u, h - u) for h in range(2, 120) for u in range(1, h)
                    if math.gcd(u, h - u) == 1 and abs(a * u + b * (h - u)) == k),
                   key=lambda p: (p[0] + p[1], p[0]))
    for u, w in z.pairs:
        assert u > 0 and w > 0 and math.gcd(u, w) == 1 and abs(a * u + b * w) == k
    low = [p for p in z.pairs if p[0] + p[1] < 120]
    assert low == brute[:len(low)]
    if brute and brute[0][0] + brute[0][1] <= 100:
        assert z.found
    if not z.found:
        assert z.pairs == []


def test_zhp_examples():
    z = zhp_weights((1, -6), 1, count=4)
    assert z.found and z.pairs == [(5, 1), (7, 1), (11, 2), (13, 2)]
    z = zhp_weights((-6, -10), 1)
    assert not z.found and "16" in z.reason
    assert linear_form(u1 - 6 * w1) == (1, -6)
    with pytest.raises(ValueError):
        linear_form(u1 * w1)
    with pytest.raises(ValueError):
        zhp_weights((1, 1), 0)
