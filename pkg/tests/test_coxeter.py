import itertools

import pytest
from hypothesis import given, settings, strategies as st

from wgraph_algebra.arith import LaurentPoly, NumberField, v, v_inv
from wgraph_algebra.coxeter import (
    CoxeterError, Matrix, PreconditionError, build_system, check_hecke_rep, dominates, group_order,
    hook_dimension, irr_data, parse_type, partition_label, partitions, verify_braid_factorization,
)
from wgraph_algebra.wgraph import dihedral_graph, hecke_matrices

# |W| from the standard order formulas
ORDERS = {"A1": 2, "A1^2": 4, "A1^3": 8, "A3": 24, "A4": 120, "B3": 48, "H3": 120, "D4": 192, "B4": 384, "F4": 1152}


@pytest.mark.parametrize("spec,order", sorted(ORDERS.items()))
def test_group_order(spec, order):
    assert group_order(parse_type(spec)) == order


@pytest.mark.parametrize("m", range(3, 9))
def test_dihedral_order(m):
    assert group_order(build_system("I2", m=m)) == 2 * m


def test_b3_labels_and_bonds():
    W = build_system("B3")
    assert W.labels == ("0", "1", "2")
    assert W.m(0, 1) == 4 and W.m(1, 2) == 3 and W.m(0, 2) == 2
    assert W.subset_name(W.subset("02")) == "02"
    assert W.subset_name(0) == "∅"


def test_d4_center():
    W = build_system("D4")
    assert all(W.m(2, s) == 3 for s in (0, 1, 3))
    assert W.is_automorphism([1, 0, 2, 3]) and not W.is_automorphism([2, 1, 0, 3])


def test_bad_types():
    with pytest.raises(CoxeterError):
        build_system("I2", m=2)
    with pytest.raises(CoxeterError):
        parse_type("E9")


def test_system_json_roundtrip():
    W = parse_type("I2(7)")
    assert type(W).from_json(W.to_json()) == W


@pytest.mark.parametrize("spec", ["A1", "A1^2", "A1^3", "I2(3)", "I2(4)", "I2(5)", "I2(8)", "A3", "A4", "B3"])
def test_irr_sum_of_squares(spec):
    W = parse_type(spec)
    irr = irr_data(W)
    assert irr.sum_of_squares() == group_order(W)
    assert irr.is_partial_order()
    topo = irr.topological_order()
    assert sorted(topo) == sorted(irr.labels)


def test_b3_degrees():
    irr = irr_data(build_system("B3"))
    assert sorted(irr.degree(l) for l in irr.labels) == [1, 1, 1, 1, 2, 2, 3, 3, 3, 3]


def test_i2_order_shape():
    irr = irr_data(parse_type("I2(6)"))
    for lab in irr.labels:
        assert irr.leq("sgn", lab) and irr.leq(lab, "1")
    assert not irr.leq("lambda_1", "lambda_2") and not irr.leq("eps1", "eps2")


def test_partitions_and_hooks():
    assert len(list(partitions(5))) == 7
    assert partition_label((2, 2, 1)) == "(2^2,1)"
    assert partition_label((1, 1, 1, 1)) == "(1^4)"
    assert sum(hook_dimension(p) ** 2 for p in partitions(5)) == 120
    assert dominates((3, 1), (2, 2)) and not dominates((2, 2), (3, 1))


@given(st.integers(2, 7))
def test_dominance_is_partial_order(n):
    ps = list(partitions(n))
    for p, q in itertools.product(ps, ps):
        if dominates(p, q) and dominates(q, p):
            assert p == q


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
def test_braid_factorization_dihedral(m):
    W = build_system("I2", m=m)
    for a in range(1, (m - 1) // 2 + 1):
        mats = hecke_matrices(W, dihedral_graph(W, a))
        rep = verify_braid_factorization(mats[0], mats[1], v - v_inv, m)
        assert rep.ok, rep.text()
        assert check_hecke_rep(W, mats).ok


def test_braid_factorization_precondition():
    one = LaurentPoly.const(1)
    x = Matrix([[one]], LaurentPoly())
    with pytest.raises(PreconditionError):
        verify_braid_factorization(x, x, v - v_inv, 2)


def test_hecke_rep_detects_wrong_weight():
    # sigma_a with the wrong a breaks the braid relation for m = 5
    W = build_system("I2", m=5)
    g = dihedral_graph(W, 1)
    g.weights[1][1][0] = g.weights[1][1][0] + 1
    assert not check_hecke_rep(W, hecke_matrices(W, g)).ok
