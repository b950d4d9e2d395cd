from fractions import Fraction

import pytest

from qhp import catalog
from qhp.graph import is_rational_tree
from qhp.poly import Constraint

ROWS = catalog.list_rows()


def test_row_lookup_forms():
    r = catalog.get_row("F2_n1-cusp")
    assert catalog.get_row(r.index) is r
    assert catalog.get_row(str(r.index)) is r
    assert catalog.get_row(f"<{r.index}>") is r
    assert r.id == f"<{r.index}>"
    for bad in ("nope", 0, 40, "<99>"):
        with pytest.raises(catalog.UnknownRow):
            catalog.get_row(bad)


def test_indices_and_tables():
    assert [r.index for r in ROWS] == list(range(1, 40))
    assert len({r.label for r in ROWS}) == 39
    assert [r.n_centers for r in ROWS[:5]] == [0] * 5
    assert sum(r.cstst for r in ROWS) == 4
    assert all(r.n_centers >= 1 for r in ROWS[5:])


@pytest.mark.parametrize("row", ROWS, ids=lambda r: r.label)
def test_row_structure(row, built_rows):
    b = built_rows[row.label]
    assert b.n == row.n_centers
    assert b.coker != float("inf")
    for cb in row.combos:
        assert len(cb.centers) == row.n_centers
        assert len(set(cb.variables)) == len(cb.variables)
        for c in cb.centers:
            assert c.U in b.graph and c.W in b.graph
            b.graph.edge_at(c.U, c.W, c.node)
        cut = b.graph.remove_edges([b.graph.edge_at(c.U, c.W, c.node) for c in cb.centers])
        assert is_rational_tree(cut), str(cb)
        for con in cb.constraints():
            assert con.variables <= set(cb.variables)


@pytest.mark.parametrize("row", [r for r in ROWS if r.n_centers], ids=lambda r: r.label)
def test_some_weight_gives_qhp(row, built_rows):
    b = built_rows[row.label]
    found = any(True for _ in catalog.enumerate(row, 5, built=b))
    assert found


def test_exclusions():
    r = catalog.get_row("C**_1a")
    cb = r.combos[0]
    assert not cb.admissible([2, 2, 2])[0]
    assert not cb.admissible([3, 2, Fraction(1, 2)])[0]
    assert cb.admissible([4, 3, 2])[0]
    r = catalog.get_row("A1A2_C2C3-cusp-41")
    cb = r.find_combo(["C3,C1"])
    ok, failed = cb.admissible([1])
    assert not ok and failed == ["v != 1"]
    assert not cb.admissible([Fraction(5, 6)])[0]


def test_printed_zhp_column(built_rows):
    b = built_rows["F2_n1-cusp"]
    assert [cb.z for cb in b.row.combos] == [True, True, False]


def test_constraint_locus(built_rows):
    b = built_rows["F2_n1-cusp"]
    detm, printed, ok = catalog.constraint_locus(b, b.row.find_combo(["C1,C2"]))
    assert ok and printed == Constraint("v != 6").polynomial()
    detm, printed, ok = catalog.constraint_locus(b, b.row.find_combo(["C2,E_q"]))
    assert printed is None and ok and detm.sign_definite()


def test_printed_locus_agreement_count(built_rows):
    # 58 of the 70 printed polynomial cells agree with det m; the others are recorded as data discrepancies
    cells = [(r, cb) for r in ROWS for cb in r.combos if cb.poly]
    agree = sum(catalog.constraint_locus(built_rows[r.label], cb)[2] for r, cb in cells)
    assert len(cells) == 70 and agree == 58


def test_coprime_weights():
    ws = catalog.coprime_weights(5)
    assert ws[0] == 1
    assert len(ws) == len(set(ws)) == sum(1 for h in range(2, 6) for u in range(1, h)
                                          if __import__("math").gcd(u, h - u) == 1)
    assert catalog.coprime_weights(1) == []


def test_enumerate_filters(built_rows):
    b = built_rows["F2_n1-cusp"]
    res = list(catalog.enumerate(b.row, 8, built=b))
    assert res and all(r.verdict.is_qhp for r in res)
    z = list(catalog.enumerate(b.row, 8, zhp=True, built=b))
    assert z and all(r.verdict.h1_order == 1 for r in z)
    assert {(r.combo, r.weights) for r in z} <= {(r.combo, r.weights) for r in res}
    five = list(catalog.enumerate(b.row, 8, h1=5, combos=[0], built=b))
    assert (0, (Fraction(1),)) in {(r.combo, r.weights) for r in five}


def test_enumerate_deterministic(built_rows):
    b = built_rows["F2_n1-cusp"]
    a = [(r.combo, r.weights, r.verdict.h1_order) for r in catalog.enumerate(b.row, 7, built=b)]
    c = [(r.combo, r.weights, r.verdict.h1_order) for r in catalog.enumerate(b.row, 7, built=b)]
    assert a == c


def test_xi_choice():
    r = [r for r in ROWS if len(r.xi_choices) > 1][0]
    for xi in range(len(r.xi_choices)):
        catalog.build_row(r, xi)
    with pytest.raises(ValueError):
        r.load_arrangement(len(r.xi_choices))


def test_unknown_center():
    with pytest.raises(catalog.UnknownCenter):
        catalog.get_row("F2_n1-cusp").find_combo(["C1,L9"])
