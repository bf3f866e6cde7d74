"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line."""

import time

import pytest
import sympy

from conftest import FIXTURES, GOLDEN, family, quotient
from wgraph_algebra.arith import tau_poly, v, v_inv
from wgraph_algebra.coxeter import build_system, irr_data, parse_type, partitions, dominates, partition_label
from wgraph_algebra.decomp import (
    check_Z1_Z2, check_Z3, check_Z4, denominator_audit, filtration, left_module, transport_suite,
)
from wgraph_algebra.coxeter import verify_braid_factorization
from wgraph_algebra.omega import compute_quotient
from wgraph_algebra.pathalg import build_compatibility_graph
from wgraph_algebra.wgraph import (
    dihedral_graph, direct_sum, hecke_matrices, load_wgraph, sign_graph, trivial_graph, validate_wgraph,
    wgraph_to_module,
)


@pytest.fixture
def say(capsys):
    def _say(n, ok, detail=""):
        with capsys.disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'}{' - ' + detail if detail else ''}")
    return _say


def _run(say, n, checks: dict, extra=""):
    bad = [k for k, ok in checks.items() if not ok]
    say(n, not bad, extra + ("" if not bad else " failing: " + "; ".join(bad)))
    assert not bad, bad


def test_criterion_01_tau(say):
    X = sympy.Symbol("X")
    t0 = time.monotonic()
    tau_poly.cache_clear()
    checks = {"tau_3 = T^3 - 2T": tau_poly(3).coeffs == (0, -2, 0, 1)}
    for r in range(1, 9):
        checks[f"recursion r={r}"] = tau_poly(r + 1) == tau_poly(1) * tau_poly(r) - tau_poly(r - 1)
    for r in range(0, 21):
        checks[f"parity r={r}"] = tau_poly(r).at_negative() == (tau_poly(r) if r % 2 == 0 else -tau_poly(r))
    dt = time.monotonic() - t0
    checks["runtime < 1 s"] = dt < 1.0
    # independent oracle for the product form: prod_a (T - 2cos(a pi/(r+1))) expands to tau_r
    for r in range(1, 9):
        prod = sympy.Integer(1)
        for a in range(1, r + 1):
            prod *= X - 2 * sympy.cos(a * sympy.pi / (r + 1))
        coeffs = sympy.Poly(sympy.expand(prod), X).all_coeffs()[::-1]
        checks[f"product form r={r}"] = all(
            abs(float(sympy.N(c, 30)) - t) < 1e-20 for c, t in zip(coeffs, tau_poly(r).coeffs)) \
            and len(coeffs) == len(tau_poly(r).coeffs)
    _run(say, 1, checks, f"tau computations {dt * 1000:.1f} ms")


def test_criterion_02_braid_factorization(say):
    t0 = time.monotonic()
    checks = {}
    for m in (3, 4, 5, 6, 7):
        W = build_system("I2", m=m)
        for a in range(1, (m - 1) // 2 + 1):
            g = dihedral_graph(W, a)
            checks[f"I2({m}) a={a} graph valid"] = validate_wgraph(W, g).ok
            mats = hecke_matrices(W, g)
            checks[f"I2({m}) a={a} factorization r<={m}"] = verify_braid_factorization(mats[0], mats[1], v - v_inv, m).ok
    dt = time.monotonic() - t0
    checks["runtime < 10 s"] = dt < 10
    _run(say, 2, checks, f"{dt:.2f}s")


def test_criterion_03_compatibility_graphs(say):
    t0 = time.monotonic()
    checks = {}
    for spec in ("I2(3)", "I2(5)", "I2(6)", "A3", "A4", "D4"):
        W = parse_type(spec)
        q = build_compatibility_graph(W)
        oracle = set()
        for I in range(1 << W.rank):
            for J in range(1 << W.rank):
                A = [s for s in W.members(I) if not J >> s & 1]
                B = [t for t in W.members(J) if not I >> t & 1]
                if A and all(W.m(s, t) >= 3 for s in A for t in B):
                    oracle.add((I, J))
        checks[f"{spec} edges"] = {(I, J) for I, J, _ in q.edges} == oracle
        golden = GOLDEN / f"compat_{spec.replace('(', '').replace(')', '')}.dot"
        checks[f"{spec} golden DOT"] = q.to_dot() == golden.read_text(encoding="utf-8")
        if spec.startswith("I2"):
            checks[f"{spec} single transversal pair 1-2"] = \
                {frozenset(p) for p in q.transversal_pairs()} == {frozenset((1, 2))}
    checks["A3 has 5 transversal pairs"] = len(build_compatibility_graph(parse_type("A3")).transversal_pairs()) == 5
    D4 = build_system("D4")
    qd = build_compatibility_graph(D4)
    checks["D4 {2}-{013} edge"] = qd.has_edge(D4.subset("2"), D4.subset("013")) and \
        qd.has_edge(D4.subset("013"), D4.subset("2"))
    dt = time.monotonic() - t0
    checks["runtime < 1 s"] = dt < 1
    _run(say, 3, checks, f"{dt:.2f}s")


ORDERS = {"A1": 2, "A1^2": 4, "I2(3)": 6, "I2(4)": 8, "I2(5)": 10, "I2(6)": 12, "I2(7)": 14, "I2(8)": 16,
          "A3": 24, "B3": 48, "A4": 120}


def test_criterion_04_quotient_certification(say):
    checks, times = {}, {}
    for spec, order in ORDERS.items():
        t0 = time.monotonic()
        alg = compute_quotient(parse_type(spec))
        rad = alg.radical()
        times[spec] = time.monotonic() - t0
        checks[f"{spec} certified and dim(kOmega/rad) = {order}"] = rad.quotient_dim == order
    checks["A4 within 5 min"] = times["A4"] < 300
    _run(say, 4, checks, f"A4 {times['A4']:.1f}s, all {sum(times.values()):.1f}s")


def test_criterion_05_relators_vanish(say):
    t0 = time.monotonic()
    checks = {}
    for path in sorted(FIXTURES.glob("*.json")):
        W, g = load_wgraph(str(path))
        if validate_wgraph(W, g).ok:
            checks[path.name] = wgraph_to_module(W, g).check_relations().ok
    for spec in ("I2(3)", "I2(4)", "I2(5)", "I2(6)", "I2(7)", "I2(8)", "A3", "B3", "A4"):
        W = parse_type(spec)
        graphs = [trivial_graph(W), sign_graph(W)]
        if W.type_tag == "I2":
            graphs += [dihedral_graph(W, a) for a in range(1, (W.param("m") - 1) // 2 + 1)]
        for k, g in enumerate(graphs):
            if validate_wgraph(W, g).ok:
                checks[f"{spec} graph {k}"] = wgraph_to_module(W, g).check_relations().ok
    dt = time.monotonic() - t0
    checks["runtime < 5 s"] = dt < 5
    _run(say, 5, checks, f"{len(checks) - 1} modules, {dt:.2f}s")


def test_criterion_06_transport(say):
    t0 = time.monotonic()
    checks = {}
    for spec in ("A3", "B3"):
        alg, fam = quotient(spec), family(spec)
        rep = transport_suite(alg, fam)
        checks[f"{spec} ({len(rep.checks)} checks)"] = rep.ok
    dt = time.monotonic() - t0
    checks["runtime < 30 s"] = dt < 30
    _run(say, 6, checks, f"{dt:.2f}s")


def _dominance(labels):
    parts = {partition_label(p): p for n in range(2, 6) for p in partitions(n)}
    return {(a, b) for a in labels for b in labels if dominates(parts[b], parts[a])}


def test_criterion_07_conjecture(say):
    t0 = time.monotonic()
    checks, notes = {}, []
    for spec in ("A1", "A1^2", "A1^3", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "I2(7)", "I2(8)", "A3", "B3", "A4"):
        alg, fam = quotient(spec), family(spec)
        z3 = check_Z3(alg, fam)
        checks[f"{spec} Z1/Z2"] = check_Z1_Z2(alg, fam).ok
        checks[f"{spec} Z3"] = z3.ok
        checks[f"{spec} Z4"] = check_Z4(alg, fam).ok
        realized = {tuple(p) for p in z3.data["realized_edges"]}
        closure = set(realized)
        changed = True
        while changed:
            new = {(a, d) for a, b in closure for c, d in closure if b == c and a != d} - closure
            closure |= new
            changed = bool(new)
        if spec in ("A3", "A4"):
            checks[f"{spec} realized order inside dominance"] = closure <= _dominance(fam.labels)
        elif spec == "B3":
            disc = z3.data["order_discrepancies"]
            notes.append(f"B3 realized pairs outside the reference order: {disc}")
            checks["B3 realized order matches the reference order"] = not disc
        elif spec.startswith("I2"):
            irr = irr_data(alg.system)
            strict = {(a, b) for a, b in irr.relation() if a != b}
            checks[f"{spec} realized order = sgn below everything below 1"] = closure == strict
    dt = time.monotonic() - t0
    checks["runtime <= 10 min"] = dt < 600
    _run(say, 7, checks, f"{dt:.1f}s; " + "; ".join(notes))


def test_criterion_08_identity_pack(say):
    checks, notes = {}, []
    for spec in ("I2(5)", "I2(6)", "A3", "B3", "A4"):
        fam = family(spec)  # strict construction: raises on the first failed identity
        checks[f"{spec}: {len(fam.report.checks)} identities"] = fam.report.ok
    lit = family("B3").literal_variants
    # the printed (1),(2) row of the B3 psi table has a sign typo: with -X10 the relations fail,
    # with +X10 (used in the construction above) they hold
    checks["B3 table row (1),(2) literal sign recorded as typo"] = not any(lit["(1),(2) e21 = -X10"].values())
    notes.append("literal variants: " + str({k: v for k, v in lit.items()}))
    _run(say, 8, checks, "; ".join(notes))


def test_criterion_09_denominators(say):
    checks = {}
    rep = denominator_audit(family("B3"))
    checks[f"B3 denominators {rep.data['denominators']} are powers of 2"] = rep.ok
    for m in range(3, 9):
        try:
            fam = family(f"I2({m})")
            checks[f"I2({m}) built without division by zero"] = fam.report.ok
        except ZeroDivisionError:
            checks[f"I2({m}) built without division by zero"] = False
    for spec in ("A3", "A4"):
        checks[f"{spec} integral"] = denominator_audit(family(spec)).ok
    _run(say, 9, checks)


def test_criterion_10_filtration(say):
    alg, fam = quotient("I2(5)"), family("I2(5)")
    W = alg.system
    P = left_module(alg, alg.E(0))  # projective cover of the trivial module: a non-split extension
    M = direct_sum(direct_sum(wgraph_to_module(W, dihedral_graph(W, 1)), wgraph_to_module(W, dihedral_graph(W, 2))), P)
    res = filtration(M, fam)
    rad = alg.radical()
    checks = {
        "extension piece is not semisimple (rad acts nonzero)":
            any(not P.evaluate_algebra(alg.element(r)).is_zero() for r in rad.vectors),
        "module relations": M.check_relations().ok,
    }
    for c in res.report.checks:
        checks[c.name] = c.passed
    _run(say, 10, checks, f"dim {M.dim}, subquotients {res.subquotients}")
