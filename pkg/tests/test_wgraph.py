import pytest
from gmpy2 import mpq

from conftest import FIXTURES, quotient
from wgraph_algebra.coxeter import build_system, parse_type
from wgraph_algebra.decomp import left_module
from wgraph_algebra.wgraph import (
    WGraph, WGraphError, apply_duality, apply_graph_automorphism, conjugate, dihedral_graph, direct_sum,
    load_wgraph, module_to_wgraph, modules_equal, sign_graph, trivial_graph, validate_wgraph, wgraph_to_module,
)


def test_fixture_trivial():
    W, g = load_wgraph(str(FIXTURES / "trivial_A3.json"))
    assert W.name == "A3" and validate_wgraph(W, g).ok


def test_fixture_dihedral():
    W, g = load_wgraph(str(FIXTURES / "i2_5_lambda1.json"))
    assert validate_wgraph(W, g).ok


def test_fixture_condition_one():
    W, g = load_wgraph(str(FIXTURES / "i2_5_condition1_violation.json"))
    rep = validate_wgraph(W, g)
    assert not rep.ok
    assert rep.checks[0].detail == {"offending": [["x", "y", "2"]]}


def test_shape_errors():
    W = build_system("I2", m=5)
    with pytest.raises(WGraphError):
        validate_wgraph(W, WGraph(["x"], {}, {}))
    with pytest.raises(WGraphError):
        validate_wgraph(W, WGraph(["x"], {"x": 1}, {0: [[0, 0]]}))


@pytest.mark.parametrize("m", range(3, 9))
def test_dihedral_modules(m):
    W = build_system("I2", m=m)
    for a in range(1, (m - 1) // 2 + 1):
        g = dihedral_graph(W, a)
        assert validate_wgraph(W, g).ok
        M = wgraph_to_module(W, g)
        assert M.check_relations().ok
        assert apply_duality(M).check_relations().ok
        g2, P = module_to_wgraph(M)
        assert modules_equal(wgraph_to_module(W, g2), M)


@pytest.mark.parametrize("spec", ["A3", "B3", "D4"])
def test_one_dimensional(spec):
    W = parse_type(spec)
    for g in (trivial_graph(W), sign_graph(W)):
        assert validate_wgraph(W, g).ok
        assert wgraph_to_module(W, g).check_relations().ok


def test_duality_swaps_trivial_and_sign():
    W = parse_type("A3")
    assert apply_duality(trivial_graph(W), W).labels == sign_graph(W).labels


def test_automorphism_of_dihedral():
    W = build_system("I2", m=5)
    g = dihedral_graph(W, 2)
    h = apply_graph_automorphism(W, [1, 0], g)
    assert validate_wgraph(W, h).ok


def test_invalid_graph_rejected_by_module_conversion():
    W, g = load_wgraph(str(FIXTURES / "i2_5_condition1_violation.json"))
    with pytest.raises(WGraphError):
        wgraph_to_module(W, g)


def test_regular_module_gives_valid_wgraph():
    """kOmega acting on itself is a module, so the W-graph read off from it is valid."""
    alg = quotient("I2(5)")
    R = left_module(alg, alg.E(0))
    assert R.check_relations().ok
    g, P = module_to_wgraph(R)
    assert validate_wgraph(alg.system, g).ok
    assert modules_equal(conjugate(R, P), wgraph_to_module(alg.system, g))


def test_direct_sum():
    W = build_system("I2", m=5)
    g = direct_sum(dihedral_graph(W, 1), dihedral_graph(W, 2))
    assert g.size == 4 and validate_wgraph(W, g).ok
