import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from conftest import GOLDEN
from wgraph_algebra.coxeter import build_system, parse_type
from wgraph_algebra.pathalg import (
    PathElement, all_relators, alpha_relators, beta_relators, build_compatibility_graph, build_full_quiver,
    duality, edge_elem, gen_e, gen_x, graph_automorphism, reduce_to_compatibility, unit, vertex_idem,
)


def compat_oracle(W):
    """Edges I <- J from the definition: I not inside J and m_st >= 3 across the difference."""
    n = W.rank
    out = set()
    for I in range(1 << n):
        for J in range(1 << n):
            A = [s for s in range(n) if I >> s & 1 and not J >> s & 1]
            B = [t for t in range(n) if J >> t & 1 and not I >> t & 1]
            if A and all(W.m(s, t) >= 3 for s in A for t in B):
                out.add((I, J))
    return out


@pytest.mark.parametrize("spec", ["I2(3)", "I2(6)", "A3", "A4", "B3", "D4", "H3", "F4", "B4"])
def test_compatibility_graph_oracle(spec):
    W = parse_type(spec)
    q = build_compatibility_graph(W)
    assert {(I, J) for I, J, _ in q.edges} == compat_oracle(W)


def test_transversal_counts():
    assert len(build_compatibility_graph(parse_type("A3")).transversal_pairs()) == 5
    assert len(build_compatibility_graph(parse_type("I2(5)")).transversal_pairs()) == 1


def test_d4_long_edge():
    W = build_system("D4")
    q = build_compatibility_graph(W)
    pairs = {frozenset(p) for p in q.transversal_pairs()}
    c = W.subset("2")
    nbrs = {W.subset_name(J) for p in pairs if c in p for J in p if J != c}
    assert nbrs == {"0", "1", "3", "13", "03", "01", "013"}


@pytest.mark.parametrize("name", ["I2(3)", "I2(5)", "I2(6)", "A3", "A4", "D4", "B3"])
def test_golden_dot(name):
    q = build_compatibility_graph(parse_type(name))
    golden = (GOLDEN / f"compat_{name.replace('(', '').replace(')', '')}.dot").read_text(encoding="utf-8")
    assert q.to_dot() == golden


def test_full_quiver_edge_count():
    W = parse_type("A3")
    q = build_full_quiver(W)
    # one edge per (I, J, s) with s in I but not in J: 3 generators * 4^2 choices elsewhere
    assert len(q.edges) == 3 * 16


def test_unit_and_idempotents():
    q = build_full_quiver(parse_type("I2(4)"))
    one = unit(q)
    for I in q.vertices:
        e = vertex_idem(q, I)
        assert e * e == e
        assert one * e == e == e * one
    e0 = gen_e(q, 0)
    assert e0 * e0 == e0


def test_relator_blocks_are_homogeneous():
    q = build_full_quiver(parse_type("B3"))
    for (I, J), rel in alpha_relators(q, 0, 1):
        assert set(rel.blocks()) <= {(I, J)}
    for (I, J, i), rel in beta_relators(q, 1, 2):
        assert set(rel.blocks()) <= {(I, J)}
    assert all(r for r in all_relators(q))


path_strategy = st.lists(st.integers(0, 10 ** 6), min_size=0, max_size=5)


def _walk(q, start, choices):
    edges = []
    cur = start
    for c in choices:
        outs = q.out_of[cur]
        if not outs:
            break
        e = outs[c % len(outs)]
        edges.append(e)
        cur = q.source(e)
    return PathElement.path(q, edges) if edges else vertex_idem(q, start)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 7), path_strategy, st.integers(0, 7), path_strategy)
def test_duality_is_antiautomorphism(i, a, j, b):
    q = build_compatibility_graph(parse_type("B3"))
    x, y = _walk(q, i, a), _walk(q, j, b)
    assert duality(duality(x)) == x
    assert duality(x * y) == duality(y) * duality(x)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 15), path_strategy)
def test_automorphism_is_multiplicative(i, a):
    q = build_compatibility_graph(parse_type("A4"))
    x = _walk(q, i, a)
    perm = [3, 2, 1, 0]
    assert graph_automorphism(graph_automorphism(x, perm), perm) == x


def test_reduction_kills_incompatible_edges():
    W = parse_type("B3")
    fq, cq = build_full_quiver(W), build_compatibility_graph(W)
    # {0} <- {2} is not compatible since m_02 = 2
    x = edge_elem(fq, W.subset("0"), W.subset("2"), 0)
    assert not reduce_to_compatibility(x, cq)
    y = edge_elem(fq, W.subset("0"), W.subset("1"), 0)
    assert reduce_to_compatibility(y, cq)
