import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from conftest import family, quotient
from wgraph_algebra.arith import NumberField, sigma
from wgraph_algebra.decomp import (
    UnsupportedType, alg_duality, build_family, check_Z1_Z2, check_Z3, check_Z4, denominator_audit,
    filtration, left_module, refined_graph, spectral_idempotents_I2, transport, transport_suite,
)
from wgraph_algebra.omega import compute_quotient
from wgraph_algebra.coxeter import parse_type
from wgraph_algebra.wgraph import dihedral_graph, direct_sum, wgraph_to_module


def test_transport_rank_one_edge():
    # in A3, X12 X21 = E1 so E1 moves to X21 X12 = F_2^(3,1)
    alg = quotient("A3")
    tr = transport(alg, "1", "2", [(alg.E("1"), mpq(1))])
    assert tr.report.ok
    assert tr.transported[0] == alg.X("2", "1") * alg.X("1", "2")
    assert tr.leftover == alg.X("2", "13") * alg.X("13", "2")


def test_transport_precondition():
    alg = quotient("A3")
    with pytest.raises(ValueError):
        transport(alg, "2", "1", [(alg.E("2"), mpq(1))])  # X21 X12 != E2
    with pytest.raises(ValueError):
        transport(alg, "1", "3", [(alg.E("1"), mpq(1))])  # not a transversal pair


@pytest.mark.parametrize("m", range(3, 9))
def test_spectral_idempotents(m):
    alg = quotient(f"I2({m})")
    F1, F2, F = spectral_idempotents_I2(alg, m)
    loop = alg.X(1, 2) * alg.X(2, 1)
    total = alg.zero()
    for a, e in F1.items():
        assert e * e == e
        total = total + e * F.scalar(sigma(a, m, F))
    assert total == loop
    assert sum(F2.values(), alg.zero()) == alg.E(2)


@pytest.mark.parametrize("spec", ["A1", "A1^2", "A1^3", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "I2(7)", "I2(8)",
                                  "A3", "B3"])
def test_Z_properties(spec):
    alg, fam = quotient(spec), family(spec)
    assert fam.report.ok
    assert check_Z1_Z2(alg, fam).ok
    assert check_Z3(alg, fam).ok
    assert check_Z4(alg, fam).ok


def test_unsupported_family():
    class Stub:
        system = parse_type("D4")

    with pytest.raises(UnsupportedType):
        build_family(Stub())


@pytest.mark.parametrize("spec", ["A3", "B3"])
def test_transport_suite(spec):
    rep = transport_suite(quotient(spec), family(spec))
    assert rep.ok, [c.name for c in rep.failures()]


def test_b3_duality_on_family():
    fam = family("B3")
    conj = {"(2),(1)": "(1),(1^2)", "(1),(2)": "(1^2),(1)", "(2,1),∅": "∅,(2,1)"}
    for lab, dual in conj.items():
        assert alg_duality(fam.component(dual, "1")) == fam.component(lab, "02")


def test_b3_denominators():
    rep = denominator_audit(family("B3"))
    assert rep.ok and 2 in rep.data["denominators"]


def test_i2_field_degree():
    fam = family("I2(7)")
    assert fam.field.degree == 3


def test_i2_refined_graph_components():
    alg, fam = quotient("I2(6)"), family("I2(6)")
    g = refined_graph(alg, fam)
    verts = {tuple(v) for v in g["vertices"]}
    assert ("eps1", "1") in verts and ("eps2", "2") in verts
    assert not any(e["target"][0] == e["source"][0] and e["target"][0].startswith("eps") for e in g["edges"])


def test_filtration_regular_module():
    alg, fam = quotient("I2(4)"), family("I2(4)")
    R = left_module(alg)
    res = filtration(R, fam)
    assert res.report.ok
    # each character occurs with multiplicity equal to its projective cover's dimension; sum d * mult
    assert sum(res.subquotients.values()) == alg.dim


@settings(max_examples=10, deadline=None)
@given(st.lists(st.sampled_from([1, 2]), min_size=1, max_size=3))
def test_filtration_of_semisimple_sums(parts):
    alg, fam = quotient("I2(5)"), family("I2(5)")
    W = alg.system
    M = wgraph_to_module(W, dihedral_graph(W, parts[0]))
    for a in parts[1:]:
        M = direct_sum(M, wgraph_to_module(W, dihedral_graph(W, a)))
    res = filtration(M, fam)
    assert res.report.ok
    for a in (1, 2):
        assert res.subquotients[f"lambda_{a}"] == 2 * parts.count(a)
