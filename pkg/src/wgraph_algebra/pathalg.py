"""Quivers on subsets of S, path-algebra elements, and the braid relators.

A path X_{I0 I1} X_{I1 I2} ... X_{I(k-1) Ik} runs from Ik to I0 and is stored
as the tuple of its edge ids (leftmost factor first).  Products concatenate
edge tuples: ``a*b`` is nonzero only if the source of ``a`` is the target of
``b``.  Subsets are bitmasks over the generator indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from gmpy2 import mpq

from .arith import LaurentPoly, tau_coefficients
from .coxeter import CoxeterSystem

MAX_RANK = 5

INCLUSION = "inclusion"
TRANSVERSAL = "transversal"


class QuiverError(ValueError):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class Quiver:
    """Vertices are all subsets of S; edges are (target, source, tag) triples.

    Tags are generator indices for the full quiver and "inclusion" /
    "transversal" for the compatibility graph.
    """

    system: CoxeterSystem
    edges: tuple[tuple[int, int, object], ...]
    kind: str  # "full" or "compatibility"

    @property
    def vertices(self) -> range:
        return range(1 << self.system.rank)

    @cached_property
    def edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def by_pair(self) -> dict:
        out: dict[tuple[int, int], list[int]] = {}
        for i, (I, J, _) in enumerate(self.edges):
            out.setdefault((I, J), []).append(i)
        return out

    @cached_property
    def out_of(self) -> dict:
        """Edges grouped by target, i.e. the edges that can follow a path ending (source) at that vertex."""
        out: dict[int, list[int]] = {I: [] for I in self.vertices}
        for i, (I, _, _) in enumerate(self.edges):
            out[I].append(i)
        return out

    @cached_property
    def into(self) -> dict:
        """Edges grouped by source."""
        out: dict[int, list[int]] = {I: [] for I in self.vertices}
        for i, (_, J, _) in enumerate(self.edges):
            out[J].append(i)
        return out

    def target(self, e: int) -> int:
        return self.edges[e][0]

    def source(self, e: int) -> int:
        return self.edges[e][1]

    def edge(self, I: int, J: int, tag=None) -> int:
        if tag is None:
            ids = self.by_pair.get((I, J), [])
            if len(ids) != 1:
                raise QuiverError(f"{len(ids)} edges {self.system.subset_name(I)}<-{self.system.subset_name(J)}")
            return ids[0]
        try:
            return self.edge_index[(I, J, tag)]
        except KeyError:
            raise QuiverError(f"no edge {self.system.subset_name(I)}<-{self.system.subset_name(J)} tagged {tag}")

    def has_edge(self, I: int, J: int) -> bool:
        return (I, J) in self.by_pair

    def transversal_pairs(self) -> list[tuple[int, int]]:
        return sorted({(min(I, J), max(I, J)) for I, J, tag in self.edges if tag == TRANSVERSAL})

    def inclusion_edges(self) -> list[tuple[int, int]]:
        return [(I, J) for I, J, tag in self.edges if tag == INCLUSION]

    def path_str(self, path: tuple) -> str:
        names = self.system.subset_name
        if not path:
            return "E"
        parts = []
        for e in path:
            I, J, tag = self.edges[e]
            t = f"^{self.system.labels[tag]}" if self.kind == "full" else ""
            parts.append(f"X{t}[{names(I)},{names(J)}]")
        return "".join(parts)

    def to_json(self) -> dict:
        names = self.system.subset_name
        return {
            "system": self.system.to_json(),
            "kind": self.kind,
            "vertices": [names(I) for I in self.vertices],
            "edges": [
                {"target": names(I), "source": names(J),
                 "tag": self.system.labels[tag] if self.kind == "full" else tag}
                for I, J, tag in self.edges
            ],
        }

    def to_dot(self, name: str | None = None) -> str:
        """DOT text: transversal pairs as one bold undirected edge, inclusion edges as thin dashed arrows."""
        names = self.system.subset_name
        lines = [f'digraph "{name or self.system.name}" {{', "  node [shape=plaintext];"]
        for I in sorted(self.vertices, key=lambda x: (_popcount(x), x)):
            lines.append(f'  "{names(I)}";')
        if self.kind == "full":
            for I, J, tag in self.edges:
                lines.append(f'  "{names(J)}" -> "{names(I)}" [label="{self.system.labels[tag]}"];')
        else:
            for I, J in self.transversal_pairs():
                lines.append(f'  "{names(I)}" -> "{names(J)}" [dir=none, style=bold];')
            for I, J in sorted(self.inclusion_edges(), key=lambda p: (p[1], p[0])):
                lines.append(f'  "{names(J)}" -> "{names(I)}" [style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _check_rank(system: CoxeterSystem):
    if system.rank > MAX_RANK:
        raise QuiverError(f"rank {system.rank} exceeds the supported maximum {MAX_RANK}")


def build_full_quiver(system: CoxeterSystem) -> Quiver:
    """|I \\ J| edges I <- J, one per generator s in I \\ J."""
    _check_rank(system)
    edges = []
    for I in range(1 << system.rank):
        for J in range(1 << system.rank):
            for s in system.members(I & ~J):
                edges.append((I, J, s))
    return Quiver(system, tuple(edges), "full")


def compatible(system: CoxeterSystem, I: int, J: int) -> bool:
    """Edge I <- J in the compatibility graph."""
    if not I & ~J:
        return False
    return all(system.m(s, t) >= 3 for s in system.members(I & ~J) for t in system.members(J & ~I))


def build_compatibility_graph(system: CoxeterSystem) -> Quiver:
    _check_rank(system)
    edges = []
    for I in range(1 << system.rank):
        for J in range(1 << system.rank):
            if compatible(system, I, J):
                edges.append((I, J, INCLUSION if J & ~I == 0 else TRANSVERSAL))
    return Quiver(system, tuple(edges), "compatibility")


# --------------------------------------------------------------------------
# path algebra elements
# --------------------------------------------------------------------------


class PathElement:
    """Finite linear combination of paths.

    Terms are keyed by (target, source, edges); the length-0 path at I is
    (I, I, ()).  Coefficients are rationals, number-field elements or
    Laurent polynomials; zero coefficients are never stored.
    """

    __slots__ = ("quiver", "terms")

    def __init__(self, quiver: Quiver, terms: Mapping | None = None):
        self.quiver = quiver
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, quiver: Quiver) -> "PathElement":
        return cls(quiver)

    @classmethod
    def vertex(cls, quiver: Quiver, I: int, coeff=1) -> "PathElement":
        return cls(quiver, {(I, I, ()): mpq(coeff) if isinstance(coeff, int) else coeff})

    @classmethod
    def path(cls, quiver: Quiver, edges: Iterable[int], coeff=1) -> "PathElement":
        edges = tuple(edges)
        if not edges:
            raise QuiverError("use vertex() for length-0 paths")
        for a, b in zip(edges, edges[1:]):
            if quiver.source(a) != quiver.target(b):
                raise QuiverError("edges do not compose")
        key = (quiver.target(edges[0]), quiver.source(edges[-1]), edges)
        return cls(quiver, {key: mpq(coeff) if isinstance(coeff, int) else coeff})

    # arithmetic --------------------------------------------------------
    def _same(self, other: "PathElement"):
        if other.quiver is not self.quiver and other.quiver != self.quiver:
            raise QuiverError("elements live on different quivers")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            if k in out:
                s = out[k] + c
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = c
        return PathElement(self.quiver, out)

    __radd__ = __add__

    def __neg__(self):
        return PathElement(self.quiver, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PathElement":
        if not c:
            return PathElement(self.quiver)
        return PathElement(self.quiver, {k: c * a for k, a in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, PathElement):
            return self.scale(other)
        self._same(other)
        by_target: dict[int, list] = {}
        for k, c in other.terms.items():
            by_target.setdefault(k[0], []).append((k, c))
        out: dict = {}
        for (I, J, p), a in self.terms.items():
            for (_, K, q), b in by_target.get(J, ()):
                key = (I, K, p + q)
                c = a * b
                if key in out:
                    c = out[key] + c
                    if c:
                        out[key] = c
                    else:
                        del out[key]
                elif c:
                    out[key] = c
        return PathElement(self.quiver, out)

    def __rmul__(self, c):
        return PathElement(self.quiver, {k: c * a for k, a in self.terms.items()})

    def __pow__(self, n: int):
        out = unit(self.quiver)
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, PathElement):
            return NotImplemented
        return (self - other).terms == {}

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def blocks(self) -> dict[tuple[int, int], "PathElement"]:
        """Split into components E_I * self * E_J."""
        out: dict = {}
        for k, c in self.terms.items():
            out.setdefault((k[0], k[1]), {})[k] = c
        return {ij: PathElement(self.quiver, t) for ij, t in sorted(out.items())}

    def max_length(self) -> int:
        return max((len(k[2]) for k in self.terms), default=-1)

    def map_coeffs(self, f) -> "PathElement":
        return PathElement(self.quiver, {k: f(c) for k, c in self.terms.items()})

    def laurent_coefficients(self) -> dict[int, "PathElement"]:
        """For Laurent-coefficient elements: v-exponent -> coefficient element."""
        out: dict[int, dict] = {}
        for k, c in self.terms.items():
            lp = c if isinstance(c, LaurentPoly) else LaurentPoly.const(c)
            for e in lp.exponents():
                out.setdefault(e, {})[k] = lp.coefficient(e)
        return {e: PathElement(self.quiver, t) for e, t in sorted(out.items())}

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0][2]), kv[0]))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = self.quiver.system.subset_name
        parts = []
        for (I, J, p), c in self.sorted_terms():
            word = f"E[{names(I)}]" if not p else self.quiver.path_str(p)
            parts.append(f"({c})*{word}")
        return " + ".join(parts)


def unit(quiver: Quiver, coeff=1) -> PathElement:
    return PathElement(quiver, {(I, I, ()): mpq(coeff) for I in quiver.vertices})


def vertex_idem(quiver: Quiver, I) -> PathElement:
    return PathElement.vertex(quiver, quiver.system.subset(I))


def edge_elem(quiver: Quiver, I, J, s=None) -> PathElement:
    """X^s_IJ on the full quiver, or X_IJ on the compatibility graph."""
    sysm = quiver.system
    I, J = sysm.subset(I), sysm.subset(J)
    if quiver.kind == "full":
        if s is None:
            raise QuiverError("a generator tag is required on the full quiver")
        s = s if isinstance(s, int) else sysm.index(str(s))
        if not (I >> s & 1) or (J >> s & 1):
            raise QuiverError(f"invalid triple: s={sysm.labels[s]} not in I\\J")
        return PathElement.path(quiver, [quiver.edge(I, J, s)])
    if not quiver.has_edge(I, J):
        return PathElement(quiver)
    return PathElement.path(quiver, [quiver.edge(I, J)])


def gen_e(quiver: Quiver, s: int) -> PathElement:
    return PathElement(quiver, {(I, I, ()): mpq(1) for I in quiver.vertices if I >> s & 1})


def gen_x(quiver: Quiver, s: int) -> PathElement:
    if quiver.kind != "full":
        raise QuiverError("x_s is defined on the full quiver")
    return PathElement(quiver, {(I, J, (e,)): mpq(1) for e, (I, J, t) in enumerate(quiver.edges) if t == s})


def p_element(quiver: Quiver, I: int, J: int, s: int, t: int, r: int) -> PathElement:
    """E_I x_s x_t x_s ... E_J with r alternating factors (leftmost x_s)."""
    if r == 0:
        return PathElement.vertex(quiver, I) if I == J else PathElement(quiver)
    # build from the right: current maps "paths ending at J" by their target
    factors = [s if k % 2 == 0 else t for k in range(r)]
    # layer: dict target -> list of edge tuples from that target down to J
    layer: dict[int, list[tuple]] = {J: [()]}
    for k, u in enumerate(reversed(factors)):
        last = k == r - 1
        new: dict[int, list[tuple]] = {}
        for e, (A, B, tag) in enumerate(quiver.edges):
            if tag != u or B not in layer:
                continue
            if last and A != I:
                continue
            new.setdefault(A, []).extend((e,) + p for p in layer[B])
        layer = new
        if not layer:
            return PathElement(quiver)
    return PathElement(quiver, {(I, J, p): mpq(1) for p in layer.get(I, [])})


def _pattern_ok(I: int, J: int, s: int, t: int, m: int) -> bool:
    sI, tI, sJ, tJ = I >> s & 1, I >> t & 1, J >> s & 1, J >> t & 1
    if not (sI and not tI):
        return False
    if m % 2:
        return bool(sJ and not tJ)
    return bool(tJ and not sJ)


def alpha_relators(quiver: Quiver, s: int, t: int) -> list[tuple[tuple[int, int], PathElement]]:
    """sum_i a_i P^i_IJ(s,t) with tau_{m-1} = sum_i a_i T^i, over the admissible (I, J).

    The membership pattern is forced by which P^i can be nonzero: a leftmost
    x_s needs s in I \\ (anything), and the rightmost factor of a P^i with
    i of the parity of m-1 decides the pattern at J.
    """
    if s == t:
        raise ValueError("alpha relators need s != t")
    m = quiver.system.m(s, t)
    coeffs = tau_coefficients(m - 1)
    out = []
    n = 1 << quiver.system.rank
    for I in range(n):
        for J in range(n):
            if not _pattern_ok(I, J, s, t, m):
                continue
            rel = PathElement(quiver)
            for i, a in enumerate(coeffs):
                if a:
                    rel = rel + p_element(quiver, I, J, s, t, i).scale(mpq(a))
            if rel:
                out.append(((I, J), rel))
    return out


def beta_relators(quiver: Quiver, s: int, t: int) -> list[tuple[tuple[int, int, int], PathElement]]:
    """P^i_IJ(s,t) - P^i_IJ(t,s) for s, t in I and s, t not in J, i = 1..m_st."""
    if s == t:
        raise ValueError("beta relators need s != t")
    m = quiver.system.m(s, t)
    out = []
    n = 1 << quiver.system.rank
    for I in range(n):
        if not (I >> s & 1 and I >> t & 1):
            continue
        for J in range(n):
            if J >> s & 1 or J >> t & 1:
                continue
            for i in range(1, m + 1):
                rel = p_element(quiver, I, J, s, t, i) - p_element(quiver, I, J, t, s, i)
                if rel:
                    out.append(((I, J, i), rel))
    return out


def all_relators(quiver: Quiver) -> list[PathElement]:
    """Both relator families for every ordered pair s != t, deduplicated up to sign."""
    seen = set()
    out = []
    n = quiver.system.rank
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            for _, rel in alpha_relators(quiver, s, t) + beta_relators(quiver, s, t):
                key = frozenset(rel.terms.items())
                nkey = frozenset((-rel).terms.items())
                if key in seen or nkey in seen:
                    continue
                seen.add(key)
                out.append(rel)
    return out


# --------------------------------------------------------------------------
# the Hecke generators and the braid-commutator oracle
# --------------------------------------------------------------------------


def iota_T(quiver: Quiver, s: int) -> PathElement:
    """-v^-1 e_s + v (1 - e_s) + x_s with Laurent coefficients."""
    if quiver.kind != "full":
        raise QuiverError("iota(T_s) is defined on the full quiver")
    terms = {}
    for I in quiver.vertices:
        terms[(I, I, ())] = LaurentPoly({-1: mpq(-1)}) if I >> s & 1 else LaurentPoly({1: mpq(1)})
    for k, c in gen_x(quiver, s).terms.items():
        terms[k] = LaurentPoly.const(c)
    return PathElement(quiver, terms)


def laurent_unit(quiver: Quiver) -> PathElement:
    return PathElement(quiver, {(I, I, ()): LaurentPoly.const(mpq(1)) for I in quiver.vertices})


def braid_commutator_elem(x: PathElement, y: PathElement, m: int) -> PathElement:
    if m == 0:
        return PathElement(x.quiver)
    a, b = x, y
    for i in range(1, m):
        a, b = a * (y if i % 2 else x), b * (x if i % 2 else y)
    return a - b


def braid_relators(quiver: Quiver, s: int, t: int) -> list[PathElement]:
    """Independent oracle: the v-coefficients of Delta_m(iota T_s, iota T_t), split into E_I . E_J blocks."""
    m = quiver.system.m(s, t)
    d = braid_commutator_elem(iota_T(quiver, s), iota_T(quiver, t), m)
    out = []
    for _, coeff in d.laurent_coefficients().items():
        for _, blk in coeff.blocks().items():
            out.append(blk)
    return out


def quadratic_defect(quiver: Quiver, s: int) -> PathElement:
    """iota(T_s)^2 - (v - v^-1) iota(T_s) - 1; vanishes in the free algebra."""
    x = iota_T(quiver, s)
    z = LaurentPoly({1: mpq(1), -1: mpq(-1)})
    return x * x - x.scale(z) - laurent_unit(quiver)


# --------------------------------------------------------------------------
# reduction to the compatibility graph and the symmetries
# --------------------------------------------------------------------------


def reduce_to_compatibility(elem: PathElement, target: Quiver) -> PathElement:
    """X^s_IJ -> X_IJ if I <- J is a compatibility edge, else 0."""
    src = elem.quiver
    if src.kind != "full" or target.kind != "compatibility":
        raise QuiverError("reduction maps full-quiver elements to the compatibility graph")
    out: dict = {}
    for (I, J, p), c in elem.terms.items():
        q = []
        for e in p:
            A, B, _ = src.edges[e]
            if not target.has_edge(A, B):
                break
            q.append(target.edge(A, B))
        else:
            key = (I, J, tuple(q))
            c2 = out.get(key, 0) + c
            if c2:
                out[key] = c2
            else:
                out.pop(key, None)
    return PathElement(target, out)


def duality(elem: PathElement) -> PathElement:
    """The antiautomorphism e_s -> 1 - e_s, x_s -> -x_s.

    Paths are reversed, vertices complemented, and X_IJ -> -X_{S\\J, S\\I}.
    """
    q = elem.quiver
    full = q.system.full
    out = {}
    for (I, J, p), c in elem.terms.items():
        edges = []
        for e in reversed(p):
            A, B, tag = q.edges[e]
            edges.append(q.edge_index[(full & ~B, full & ~A, tag)])
        sign = -1 if len(p) % 2 else 1
        out[(full & ~J, full & ~I, tuple(edges))] = c * sign
    return PathElement(q, out)


def _permute_mask(mask: int, perm) -> int:
    out = 0
    for i, j in enumerate(perm):
        if mask >> i & 1:
            out |= 1 << j
    return out


def graph_automorphism(elem: PathElement, perm) -> PathElement:
    """Relabel generators by s -> perm[s] (must preserve the Coxeter matrix)."""
    q = elem.quiver
    if not q.system.is_automorphism(perm):
        raise QuiverError("permutation is not a Coxeter graph automorphism")
    out = {}
    for (I, J, p), c in elem.terms.items():
        edges = []
        for e in p:
            A, B, tag = q.edges[e]
            tag2 = perm[tag] if q.kind == "full" else tag
            edges.append(q.edge_index[(_permute_mask(A, perm), _permute_mask(B, perm), tag2)])
        out[(_permute_mask(I, perm), _permute_mask(J, perm), tuple(edges))] = c
    return PathElement(q, out)


def quiver_json(quiver: Quiver) -> str:
    return json.dumps(quiver.to_json(), sort_keys=True, indent=1, ensure_ascii=False)
