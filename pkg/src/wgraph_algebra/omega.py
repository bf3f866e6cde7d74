"""The W-graph algebra kOmega as an explicit finite-dimensional algebra.

The quotient of the path algebra by the braid relators is computed with a
length-bounded noncommutative Buchberger procedure on paths (deg-lex order).
Whenever the set of standard paths (paths containing no leading path of the
current rewriting system) is finite, the right regular representation on those
paths is built from normal forms, and every original relator is checked to act
as zero.  That check certifies the result independently of whether the
rewriting system is complete: the representation is then a cyclic kOmega-module
of dimension |B| while B spans kOmega, so dim kOmega = |B| and the
representation is faithful.
"""

from __future__ import annotations

import heapq
import json
import logging
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from gmpy2 import mpq

from .arith import LaurentPoly, NumberField, NumberFieldElem, format_rational, v, v_inv
from .coxeter import CoxeterSystem
from .linalg import Echelon, nullspace, vaxpy, vscale
from .pathalg import (
    PathElement,
    Quiver,
    all_relators,
    build_compatibility_graph,
    build_full_quiver,
    reduce_to_compatibility,
)
from .report import Report

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class StabilizationError(RuntimeError):
    """Raised when no certified quotient is found up to the length bound."""


def _key(p: tuple):
    return (len(p), p)


def _heapkey(p: tuple):
    return (-len(p), tuple(-e for e in p))


@dataclass
class Rule:
    """Monic rewriting rule tip -> -tail inside the block (target, source)."""

    target: int
    source: int
    tip: tuple
    tail: dict


class Rewriter:
    """Noncommutative Buchberger on a path algebra with deg-lex order.

    Polynomials are dicts {edge tuple: coefficient} living in a single block
    E_I (.) E_J; the empty tuple stands for E_I (only in diagonal blocks).
    """

    def __init__(self, quiver: Quiver):
        self.quiver = quiver
        self.rules: dict[tuple, Rule] = {}
        self.tip_lengths: set[int] = set()
        self.by_prefix: dict[tuple, list[tuple]] = {}
        self.processed: set = set()
        self.stats = {"rules_added": 0, "overlaps": 0, "reductions": 0}

    # -- normal forms ------------------------------------------------------
    def find_tip(self, p: tuple):
        n = len(p)
        rules = self.rules
        for ln in self.tip_lengths:
            for i in range(n - ln + 1):
                t = p[i:i + ln]
                if t in rules:
                    return i, rules[t]
        return None

    def normal_form(self, terms: Mapping) -> dict:
        """Fully reduced form of a block polynomial."""
        work = dict(terms)
        heap = [_heapkey(p) + (p,) for p in work]
        heapq.heapify(heap)
        out = {}
        while heap:
            p = heapq.heappop(heap)[-1]
            c = work.pop(p, None)
            if not c:
                continue
            hit = self.find_tip(p)
            if hit is None:
                out[p] = c
                continue
            self.stats["reductions"] += 1
            i, rule = hit
            u, w = p[:i], p[i + len(rule.tip):]
            for q, d in rule.tail.items():
                np_ = u + q + w
                y = work.get(np_)
                val = -c * d if y is None else y - c * d
                if val:
                    if y is None:
                        heapq.heappush(heap, _heapkey(np_) + (np_,))
                    work[np_] = val
                else:
                    work.pop(np_, None)
        return out

    # -- rules -----------------------------------------------------------
    def _make_rule(self, I: int, J: int, terms: dict) -> Rule:
        tip = max(terms, key=_key)
        if not tip:
            raise StabilizationError("a relator reduces to a nonzero multiple of a vertex idempotent")
        inv = 1 / terms[tip]
        tail = {q: c * inv for q, c in terms.items() if q != tip}
        return Rule(I, J, tip, tail)

    def _index(self, rule: Rule):
        self.rules[rule.tip] = rule
        self.tip_lengths = {len(t) for t in self.rules}
        for k in range(1, len(rule.tip)):
            self.by_prefix.setdefault(rule.tip[:k], []).append(rule.tip)

    def _unindex(self, tip: tuple):
        del self.rules[tip]
        self.tip_lengths = {len(t) for t in self.rules}
        for k in range(1, len(tip)):
            lst = self.by_prefix.get(tip[:k])
            if lst:
                lst.remove(tip)
        self.processed = {key for key in self.processed if tip not in key[:2]}

    def add(self, I: int, J: int, terms: Mapping) -> bool:
        """Reduce and insert; returns True if a new rule appeared."""
        nf = self.normal_form(terms)
        if not nf:
            return False
        pending = [(I, J, nf)]
        added = False
        while pending:
            I, J, nf = pending.pop()
            nf = self.normal_form(nf)
            if not nf:
                continue
            rule = self._make_rule(I, J, nf)
            # rules whose tip contains the new tip must be re-reduced
            stale = [r for t, r in self.rules.items() if len(t) >= len(rule.tip) and _contains(t, rule.tip)]
            for r in stale:
                self._unindex(r.tip)
            self._index(rule)
            self.stats["rules_added"] += 1
            added = True
            for r in stale:
                pending.append((r.target, r.source, {r.tip: mpq(1), **r.tail}))
        return added

    # -- overlaps ----------------------------------------------------------
    def overlaps(self, max_len: int):
        """Pending (word length, tip1, tip2, k) with tip1 suffix = tip2 prefix of length k."""
        out = []
        for t1 in self.rules:
            a = len(t1)
            for k in range(1, a):
                suffix = t1[a - k:]
                for t2 in self.by_prefix.get(suffix, ()):
                    if len(t2) <= k:
                        continue
                    wl = a + len(t2) - k
                    if wl > max_len:
                        continue
                    key = (t1, t2, k)
                    if key not in self.processed:
                        out.append((wl, t1, t2, k))
        out.sort()
        return out

    def s_poly(self, t1, t2, k) -> tuple[int, int, dict]:
        g1, g2 = self.rules[t1], self.rules[t2]
        right = t2[k:]
        left = t1[:len(t1) - k]
        out: dict = {}
        # g1 * right - left * g2 ; the tip words cancel
        for q, c in g1.tail.items():
            vaxpy(out, {q + right: c}, 1)
        for q, c in g2.tail.items():
            vaxpy(out, {left + q: c}, -1)
        return g1.target, g2.source, out

    def complete(self, max_len: int, deadline: float | None = None) -> int:
        """Process all overlaps of word length <= max_len; returns the number processed."""
        count = 0
        while True:
            pend = self.overlaps(max_len)
            if not pend:
                return count
            for wl, t1, t2, k in pend:
                if t1 not in self.rules or t2 not in self.rules:
                    continue
                key = (t1, t2, k)
                if key in self.processed:
                    continue
                self.processed.add(key)
                count += 1
                self.stats["overlaps"] += 1
                I, J, sp = self.s_poly(t1, t2, k)
                if sp:
                    self.add(I, J, sp)
                if deadline is not None and time.monotonic() > deadline:
                    raise StabilizationError("time budget exhausted during completion")

    # -- standard paths ------------------------------------------------------
    def standard_paths(self, max_len: int, max_count: int = 200000):
        """All paths (target, source, edges) avoiding every tip, up to max_len.

        Returns (paths, finite) where finite means no standard path of
        length max_len + 1 exists.
        """
        q = self.quiver
        layer = [(I, I, ()) for I in q.vertices]
        out = list(layer)
        for ln in range(1, max_len + 2):
            new = []
            for (I, J, p) in layer:
                for e in q.out_of[J]:
                    np_ = p + (e,)
                    if self._suffix_tip(np_):
                        continue
                    new.append((I, q.source(e), np_))
            if not new:
                return out, True
            if ln == max_len + 1:
                return out, False
            out.extend(new)
            layer = new
            if len(out) > max_count:
                return out, False
        return out, False

    def _suffix_tip(self, p: tuple) -> bool:
        n = len(p)
        for ln in self.tip_lengths:
            if ln <= n and p[n - ln:] in self.rules:
                return True
        return False


def _contains(word: tuple, sub: tuple) -> bool:
    n, k = len(word), len(sub)
    return any(word[i:i + k] == sub for i in range(n - k + 1))


# --------------------------------------------------------------------------
# the algebra
# --------------------------------------------------------------------------


class QuotientAlgebra:
    """Finite-dimensional algebra with a path basis and right-action tables.

    ``act[e][i]`` is the coordinate vector of basis[i] * (edge e).  Products
    of basis elements follow by acting with the edges of the right factor.
    """

    def __init__(self, system: CoxeterSystem, quiver: Quiver, basis: list, act: dict,
                 rewriter: Rewriter | None, length_bound: int, history: list | None = None):
        self.system = system
        self.quiver = quiver
        self.basis = basis
        self.index = {b: i for i, b in enumerate(basis)}
        self.act = act
        self.rewriter = rewriter
        self.length_bound = length_bound
        self.history = history or []
        self._rad = None
        self._blocks = None
        self._prod_cache: dict = {}
        self.full_quiver = build_full_quiver(system) if quiver.kind != "full" else quiver

    @property
    def dim(self) -> int:
        return len(self.basis)

    # -- elements ----------------------------------------------------------
    def element(self, coords: Mapping | None = None) -> "AlgebraElement":
        return AlgebraElement(self, dict(coords or {}))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def unit(self) -> "AlgebraElement":
        return AlgebraElement(self, {self.index[(I, I, ())]: mpq(1) for I in self.quiver.vertices})

    def E(self, I) -> "AlgebraElement":
        I = self.system.subset(I)
        return AlgebraElement(self, {self.index[(I, I, ())]: mpq(1)})

    def X(self, I, J, s=None) -> "AlgebraElement":
        """The edge element X_IJ (tag s only matters on the full quiver)."""
        I, J = self.system.subset(I), self.system.subset(J)
        q = self.quiver
        if q.kind == "full":
            if s is None:
                s = min(self.system.members(I & ~J))
            s = s if isinstance(s, int) else self.system.index(str(s))
            e = q.edge_index.get((I, J, s))
        else:
            e = q.edge_index.get((I, J, "inclusion")) if (I, J, "inclusion") in q.edge_index \
                else q.edge_index.get((I, J, "transversal"))
        if e is None:
            return self.zero()
        return self.path((e,))

    def path(self, edges: tuple) -> "AlgebraElement":
        q = self.quiver
        if not edges:
            raise ValueError("empty path; use E(I)")
        start = self.E(q.target(edges[0]))
        return AlgebraElement(self, self.act_path(start.coords, edges))

    def project(self, elem: PathElement) -> "AlgebraElement":
        """Image of a path-algebra element (full quiver or compatibility graph)."""
        if elem.quiver.kind == "full" and self.quiver.kind != "full":
            elem = reduce_to_compatibility(elem, self.quiver)
        out: dict = {}
        for (I, J, p), c in elem.terms.items():
            vec = {self.index[(I, I, ())]: mpq(1)}
            vec = self.act_path(vec, p)
            vaxpy(out, vec, c)
        return AlgebraElement(self, out)

    # -- multiplication ---------------------------------------------------
    def act_edge(self, vec: Mapping, e: int) -> dict:
        table = self.act[e]
        out: dict = {}
        for i, c in vec.items():
            col = table.get(i)
            if col:
                vaxpy(out, col, c)
        return out

    def act_path(self, vec: Mapping, edges: Iterable[int]) -> dict:
        for e in edges:
            if not vec:
                return {}
            vec = self.act_edge(vec, e)
        return dict(vec)

    def basis_product(self, i: int, j: int) -> dict:
        key = (i, j)
        r = self._prod_cache.get(key)
        if r is None:
            bi, bj = self.basis[i], self.basis[j]
            if bi[1] != bj[0]:
                r = {}
            elif not bj[2]:
                r = {i: mpq(1)}
            else:
                r = self.act_path({i: mpq(1)}, bj[2])
            self._prod_cache[key] = r
        return r

    def mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        by_source: dict = {}
        for i, a in x.items():
            by_source.setdefault(self.basis[i][1], []).append((i, a))
        for j, b in y.items():
            tgt = self.basis[j][0]
            for i, a in by_source.get(tgt, ()):
                prod = self.basis_product(i, j)
                if prod:
                    vaxpy(out, prod, a * b)
        return out

    def structure_constants(self) -> list[tuple[int, int, int, object]]:
        out = []
        for i, bi in enumerate(self.basis):
            for j, bj in enumerate(self.basis):
                if bi[1] != bj[0]:
                    continue
                for k, c in sorted(self.basis_product(i, j).items()):
                    out.append((i, j, k, c))
        return out

    def blocks(self) -> dict[tuple[int, int], list[int]]:
        if self._blocks is None:
            bl: dict = {}
            for i, (I, J, _) in enumerate(self.basis):
                bl.setdefault((I, J), []).append(i)
            self._blocks = bl
        return self._blocks

    def basis_name(self, i: int) -> str:
        I, J, p = self.basis[i]
        return f"E[{self.system.subset_name(I)}]" if not p else self.quiver.path_str(p)

    # -- radical ------------------------------------------------------------
    def left_traces(self) -> dict[int, object]:
        """tr(L_b) for loop basis elements b (all others have trace zero)."""
        blocks = self.blocks()
        out = {}
        for (I, J), idx in blocks.items():
            if I != J:
                continue
            targets = [k for (A, _), ks in blocks.items() if A == I for k in ks]
            for l in idx:
                tr = mpq(0)
                for k in targets:
                    c = self.basis_product(l, k).get(k)
                    if c:
                        tr += c
                if tr:
                    out[l] = tr
        return out

    def radical(self) -> "Radical":
        """Jacobson radical as the kernel of the trace form (characteristic zero)."""
        if self._rad is not None:
            return self._rad
        traces = self.left_traces()
        blocks = self.blocks()
        rad_vectors: list[dict] = []
        per_block = {}
        for (I, J), P in sorted(blocks.items()):
            Q = blocks.get((J, I), [])
            # G[q][p] = t(b_p b_q); the radical is the null space in p
            rows = []
            for q in Q:
                row = []
                for p in P:
                    prod = self.basis_product(p, q)
                    val = mpq(0)
                    for k, c in prod.items():
                        t = traces.get(k)
                        if t:
                            val += c * t
                    row.append(val)
                rows.append(row)
            ns = nullspace(rows, ncols=len(P), zero=mpq(0), one=mpq(1))
            per_block[(I, J)] = len(ns)
            for vec in ns:
                rad_vectors.append({P[i]: c for i, c in enumerate(vec) if c})
        self._rad = Radical(self, rad_vectors, per_block)
        return self._rad

    # -- Hecke embedding ------------------------------------------------------
    def iota(self, s: int) -> dict[int, "AlgebraElement"]:
        """iota(T_s) as {v-exponent: element}."""
        es = self.zero()
        for I in self.quiver.vertices:
            if I >> s & 1:
                es = es + self.E(I)
        xs = self.zero()
        for e, (I, J, tag) in enumerate(self.full_quiver.edges):
            if tag == s:
                xs = xs + self.project(PathElement.path(self.full_quiver, [e]))
        return _lclean({-1: -es, 1: self.unit() - es, 0: xs})

    def hecke_embedding_check(self) -> Report:
        rep = Report(f"Hecke relations in kOmega for {self.system.name}")
        n = self.system.rank
        one = {0: self.unit()}
        z = {1: self.unit(), -1: -self.unit()}
        Ts = [self.iota(s) for s in range(n)]
        for s in range(n):
            lhs = _lmul(Ts[s], Ts[s])
            rhs = _ladd(one, _lmul(z, Ts[s]))
            rep.add(f"quadratic {self.system.labels[s]}", _lsub(lhs, rhs) == {})
        for s in range(n):
            for t in range(s + 1, n):
                m = self.system.m(s, t)
                a, b = Ts[s], Ts[t]
                for i in range(1, m):
                    a, b = _lmul(a, Ts[t] if i % 2 else Ts[s]), _lmul(b, Ts[s] if i % 2 else Ts[t])
                rep.add(f"braid {self.system.labels[s]}{self.system.labels[t]}", _lsub(a, b) == {})
        return rep

    # -- serialization -------------------------------------------------------
    def to_json(self, with_structure: bool = True) -> dict:
        names = self.system.subset_name
        rad = self.radical()
        d = {
            "schema": SCHEMA_VERSION,
            "system": self.system.to_json(),
            "quiver": self.quiver.kind,
            "field": {"m": 3, "degree": 1, "note": "structure constants are rational"},
            "length_bound": self.length_bound,
            "dim": self.dim,
            "dim_radical": rad.dim,
            "dim_semisimple": self.dim - rad.dim,
            "basis": [
                {"target": names(I), "source": names(J), "path": self.quiver.path_str(p) if p else f"E[{names(I)}]"}
                for I, J, p in self.basis
            ],
            # timings are dropped so that identical inputs give identical bundles
            "history": [{k: v for k, v in h.items() if k != "seconds"} for h in self.history],
        }
        if with_structure:
            d["structure_constants"] = [[i, j, k, format_rational(c)] for i, j, k, c in self.structure_constants()]
        return d

    def dumps(self, with_structure: bool = True) -> str:
        return json.dumps(self.to_json(with_structure), sort_keys=True, indent=1, ensure_ascii=False)


def _lclean(d):
    return {k: x for k, x in d.items() if x}


def _ladd(a, b):
    out = dict(a)
    for k, x in b.items():
        out[k] = out[k] + x if k in out else x
    return _lclean(out)


def _lsub(a, b):
    return _ladd(a, {k: -x for k, x in b.items()})


def _lmul(a, b):
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            p = x * y
            if p:
                out[i + j] = out[i + j] + p if i + j in out else p
    return _lclean(out)


@dataclass
class Radical:
    algebra: QuotientAlgebra
    vectors: list
    per_block: dict

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def quotient_dim(self) -> int:
        return self.algebra.dim - self.dim

    def echelon(self) -> Echelon:
        e = Echelon()
        for vec in self.vectors:
            e.add(vec)
        return e

    def contains(self, x: "AlgebraElement") -> bool:
        return self.echelon().contains(x.coords)


class AlgebraElement:
    """Coordinates over the path basis of a QuotientAlgebra."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: QuotientAlgebra, coords: dict):
        self.algebra = algebra
        self.coords = {k: c for k, c in coords.items() if c}

    def _wrap(self, coords):
        return AlgebraElement(self.algebra, coords)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        out = dict(self.coords)
        vaxpy(out, other.coords, 1)
        return self._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({k: -c for k, c in self.coords.items()})

    def __sub__(self, other):
        out = dict(self.coords)
        vaxpy(out, other.coords, -1)
        return self._wrap(out)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self._wrap(self.algebra.mul(self.coords, other.coords))
        return self._wrap(vscale(self.coords, other))

    def __rmul__(self, c):
        return self._wrap(vscale(self.coords, c))

    def __truediv__(self, c):
        return self._wrap(vscale(self.coords, 1 / c))

    def __bool__(self):
        return bool(self.coords)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.coords
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return not (self - other).coords

    def __hash__(self):
        return hash(frozenset(self.coords.items()))

    def is_idempotent(self) -> bool:
        return self * self == self

    def support_blocks(self) -> set:
        return {self.algebra.basis[i][:2] for i in self.coords}

    def denominators(self) -> set[int]:
        out = set()
        for c in self.coords.values():
            if isinstance(c, NumberFieldElem):
                out |= c.denominators()
            else:
                out.add(int(mpq(c).denominator))
        return out

    def __repr__(self):
        if not self.coords:
            return "0"
        parts = [f"({c})*{self.algebra.basis_name(i)}" for i, c in sorted(self.coords.items())]
        return " + ".join(parts)


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------


@dataclass
class QuotientConfig:
    L_start: int = 4
    L_max: int = 12
    full_quiver: bool = False
    time_budget: float | None = None
    max_standard: int = 200000


def _relators_as_blocks(quiver: Quiver, relators: Iterable[PathElement]) -> list[tuple[int, int, dict]]:
    out = []
    for rel in relators:
        if rel.quiver.kind == "full" and quiver.kind != "full":
            rel = reduce_to_compatibility(rel, quiver)
        for (I, J), blk in rel.blocks().items():
            out.append((I, J, {p: c for (_, _, p), c in blk.terms.items()}))
    return out


def compute_quotient(system: CoxeterSystem, L_start: int = 4, L_max: int = 12,
                     relators: list[PathElement] | None = None, full_quiver: bool = False,
                     config: QuotientConfig | None = None) -> QuotientAlgebra:
    """Certified finite-dimensional presentation of kOmega.

    ``relators`` default to both relator families on the full quiver; pass
    e.g. the braid-commutator oracle to compare presentations.  With
    ``full_quiver=False`` the computation runs on the compatibility graph,
    after sending X^s_IJ to X_IJ or to zero.
    """
    cfg = config or QuotientConfig(L_start, L_max, full_quiver)
    if cfg.L_start < 1 or cfg.L_max < cfg.L_start:
        raise ValueError("need 1 <= L_start <= L_max")
    fq = build_full_quiver(system)
    quiver = fq if cfg.full_quiver else build_compatibility_graph(system)
    rels = relators if relators is not None else all_relators(fq)
    blocks = _relators_as_blocks(quiver, rels)
    rw = Rewriter(quiver)
    t0 = time.monotonic()
    deadline = None if cfg.time_budget is None else t0 + cfg.time_budget
    for I, J, terms in blocks:
        rw.add(I, J, terms)
    history = []
    for L in range(cfg.L_start, cfg.L_max + 1):
        rw.complete(L, deadline)
        paths, finite = rw.standard_paths(2 * L, cfg.max_standard)
        entry = {"L": L, "rules": len(rw.rules), "standard_paths": len(paths) if finite else None,
                 "finite": finite, "seconds": round(time.monotonic() - t0, 3)}
        history.append(entry)
        log.info("L=%d rules=%d finite=%s", L, len(rw.rules), finite)
        if not finite:
            continue
        alg = _build_algebra(system, quiver, rw, paths, L, history)
        ok, bad = _certify(alg, blocks)
        entry["certified"] = ok
        if ok:
            return alg
        log.info("certificate failed at L=%d (%s)", L, bad)
    raise StabilizationError(f"not stabilized by L_max={cfg.L_max} for {system.name}")


def _build_algebra(system, quiver, rw: Rewriter, paths, L, history) -> QuotientAlgebra:
    basis = sorted(paths, key=lambda b: (len(b[2]), b[0], b[1], b[2]))
    index = {b: i for i, b in enumerate(basis)}
    act: dict[int, dict] = {e: {} for e in range(len(quiver.edges))}
    for i, (I, J, p) in enumerate(basis):
        for e in quiver.out_of[J]:
            nf = rw.normal_form({p + (e,): mpq(1)})
            K = quiver.source(e)
            vec = {}
            for q, c in nf.items():
                vec[index[(I, K, q)]] = c
            if vec:
                act[e][i] = vec
    return QuotientAlgebra(system, quiver, basis, act, rw, L, history)


def _certify(alg: QuotientAlgebra, blocks) -> tuple[bool, object]:
    """Every relator acts as zero on the right regular representation."""
    by_source: dict[int, list[int]] = {}
    for i, (_, J, _) in enumerate(alg.basis):
        by_source.setdefault(J, []).append(i)
    for I, J, terms in blocks:
        for i in by_source.get(I, ()):
            out: dict = {}
            for p, c in terms.items():
                vec = alg.act_path({i: mpq(1)}, p) if p else {i: mpq(1)}
                vaxpy(out, vec, c)
            if out:
                return False, (alg.basis_name(i), I, J)
    return True, None


def extend_scalars(x: AlgebraElement, field: NumberField) -> AlgebraElement:
    return AlgebraElement(x.algebra, {k: field.scalar(c) for k, c in x.coords.items()})
