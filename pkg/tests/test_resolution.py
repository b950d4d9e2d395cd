import pytest

from qhp import catalog
from qhp.arrangement import Arrangement, Component, SingularPoint
from qhp.graph import is_rational_tree
from qhp.lattice import pair
from qhp.resolution import InvalidArrangement, blowup_count, minimal_log_resolution, resolve_point


def test_node_untouched_unless_forced():
    arr = Arrangement([Component("L", 1), Component("M", 1)], [SingularPoint("x", ("L", "M"))])
    res = minimal_log_resolution(arr)
    assert blowup_count(res, "x") == 0 and res.graph.multiplicity("L", "M") == 1
    res = minimal_log_resolution(arr, ["x"])
    assert blowup_count(res, "x") == 1
    assert res.graph.w("L") == 0 and res.graph.w("E_x") == -1
    assert res.graph.multiplicity("L", "M") == 0
    assert res.check() == []


def test_tangent_line_to_conic():
    arr = Arrangement([Component("L", 1), Component("C", 2)], [SingularPoint("x", ("L", "C"), {"L|C": 2})])
    res = minimal_log_resolution(arr)
    g = res.graph
    assert res.exceptional_order["x"] == ["E_x.1", "E_x"]
    assert (g.w("L"), g.w("C"), g.w("E_x.1"), g.w("E_x")) == (-1, 2, -2, -1)
    assert sorted(g.neighbors("E_x")) == ["C", "E_x.1", "L"]
    assert res.check() == []


def test_ordinary_triple_point():
    L = [Component(f"L{i}", 1) for i in range(3)]
    arr = Arrangement(L, [SingularPoint("x", ("L0", "L1", "L2"))])
    res = minimal_log_resolution(arr)
    assert blowup_count(res, "x") == 1
    assert sorted(res.graph.neighbors("E_x")) == ["L0", "L1", "L2"]


@pytest.mark.parametrize("c", range(2, 7))
def test_contact_chain(c):
    res = resolve_point(["a", "b"], {"a|b": c})
    chain = res.exceptional_order["x"]
    assert len(chain) == c
    assert [res.graph.w(e) for e in chain] == [-2] * (c - 1) + [-1]
    assert sorted(res.graph.neighbors("E_x")) == sorted(["a", "b", chain[-2]])


def test_triple_point_with_tangency():
    res = resolve_point(["a", "b", "c"], {"a|b": 3})
    assert res.exceptional_order["x"] == ["E_x.1", "E_x.2", "E_x"]
    g = res.graph
    assert "c" in g.neighbors("E_x.1")
    assert sorted(g.neighbors("E_x")) == ["E_x.2", "a", "b"]


def test_invalid_input_rejected():
    arr = Arrangement([Component("L", 1), Component("M", 1)], [])
    with pytest.raises(InvalidArrangement):
        minimal_log_resolution(arr)
    with pytest.raises(KeyError):
        minimal_log_resolution(Arrangement([], []), ["nope"])


@pytest.mark.parametrize("row", catalog.list_rows(), ids=lambda r: r.label)
def test_catalog_resolutions(row, built_rows):
    b = built_rows[row.label]
    res = b.resolution
    assert res.check() == []
    K = res.lattice.canonical_class
    for v in res.graph.ids:
        C = res.classes[v]
        assert pair(res.lattice, K, C) == -2 - pair(res.lattice, C, C)
    # D' is a rational tree after the centers are cut, and its rank defect is the number of centers
    assert len(b.graph) - res.lattice.rank == row.n_centers
    assert b.n == row.n_centers
    if row.n_centers == 0:
        assert is_rational_tree(b.graph)
