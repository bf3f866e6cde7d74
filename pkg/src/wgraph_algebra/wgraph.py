"""W-graphs, kOmega-modules given by matrices, and the conversions between them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from gmpy2 import mpq

from .arith import LaurentPoly, NumberField, NumberFieldElem, format_rational, rational
from .coxeter import CoxeterSystem, Matrix, check_hecke_rep
from .linalg import rref, solve
from .pathalg import PathElement, Quiver, all_relators, build_full_quiver
from .report import Report


class WGraphError(ValueError):
    pass


def _is_zero(x) -> bool:
    return not x


def _scalar_json(x):
    if isinstance(x, NumberFieldElem):
        if x.is_rational():
            return format_rational(x.coeffs[0])
        return x.field.to_json(x)
    return format_rational(mpq(x))


def _scalar_from_json(d, field: NumberField | None):
    if isinstance(d, dict):
        f = NumberField(d["m"])
        return f.from_json(d) if f.degree > 1 else rational(d["coeffs"][0])
    if isinstance(d, (int, str)):
        q = rational(d)
        return field.scalar(q) if field is not None and field.degree > 1 else q
    raise WGraphError(f"cannot parse scalar {d!r}")


@dataclass
class WGraph:
    """Vertices, a subset I(x) per vertex (bitmask), and one weight matrix per generator.

    ``weights[s][x][y]`` is m^s_xy, the weight of the edge y -> x.
    """

    vertices: list
    labels: dict
    weights: dict
    field: NumberField | None = None

    @property
    def size(self) -> int:
        return len(self.vertices)

    def label(self, i: int) -> int:
        return self.labels[self.vertices[i]]

    def weight(self, s: int, x: int, y: int):
        w = self.weights.get(s)
        return 0 if w is None else w[x][y]

    def to_json(self, system: CoxeterSystem) -> dict:
        return {
            "type": system.to_json(),
            "vertices": list(self.vertices),
            "labels": {str(x): system.subset_labels(self.labels[x]) for x in self.vertices},
            "weights": {
                system.labels[s]: [[_scalar_json(a) for a in row] for row in w]
                for s, w in sorted(self.weights.items())
            },
        }

    @classmethod
    def from_json(cls, system: CoxeterSystem, d: Mapping, field: NumberField | None = None) -> "WGraph":
        verts = [str(x) for x in d["vertices"]]
        labels = {}
        for x in verts:
            labs = d["labels"].get(x, [])
            labels[x] = system.subset([str(s) for s in labs])
        weights = {}
        n = len(verts)
        for s_lab, mat in d.get("weights", {}).items():
            s = system.index(str(s_lab))
            if len(mat) != n or any(len(r) != n for r in mat):
                raise WGraphError(f"weight matrix for {s_lab} must be {n}x{n}")
            weights[s] = [[_scalar_from_json(a, field) for a in row] for row in mat]
        return cls(verts, labels, weights, field)

    def to_dot(self, system: CoxeterSystem) -> str:
        lines = ["digraph wgraph {"]
        for i, x in enumerate(self.vertices):
            lines.append(f'  "{x}" [label="{x}: {system.subset_name(self.labels[x])}"];')
        for s, w in sorted(self.weights.items()):
            for i in range(self.size):
                for j in range(self.size):
                    if w[i][j]:
                        lines.append(f'  "{self.vertices[j]}" -> "{self.vertices[i]}" '
                                     f'[label="{system.labels[s]}:{w[i][j]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def load_wgraph(path: str, system: CoxeterSystem | None = None) -> tuple[CoxeterSystem, WGraph]:
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    if system is None:
        if "type" not in d:
            raise WGraphError("W-graph file has no type and none was given")
        system = CoxeterSystem.from_json(d["type"])
    field = system.field()
    return system, WGraph.from_json(system, d, field)


# --------------------------------------------------------------------------
# validation and Hecke matrices
# --------------------------------------------------------------------------


def hecke_matrices(system: CoxeterSystem, g: WGraph) -> dict[int, Matrix]:
    """omega(T_s): -v^-1 / v on the diagonal by membership of s, m^s off the diagonal."""
    n = g.size
    out = {}
    for s in range(system.rank):
        rows = []
        for x in range(n):
            row = []
            for y in range(n):
                if x == y:
                    row.append(LaurentPoly({-1: -1}) if g.label(x) >> s & 1 else LaurentPoly({1: 1}))
                else:
                    w = g.weight(s, x, y)
                    row.append(LaurentPoly.const(w) if w else LaurentPoly())
            rows.append(row)
        out[s] = Matrix(rows, LaurentPoly())
    return out


def condition_one_violations(system: CoxeterSystem, g: WGraph) -> list[tuple[str, str, str]]:
    """(x, y, s) with m^s_xy != 0 but s not in I(x) \\ I(y) (diagonal entries included)."""
    bad = []
    for s, w in sorted(g.weights.items()):
        for x in range(g.size):
            for y in range(g.size):
                if w[x][y] and not ((g.label(x) >> s & 1) and not (g.label(y) >> s & 1)):
                    bad.append((g.vertices[x], g.vertices[y], system.labels[s]))
    return bad


def weight_disagreements(system: CoxeterSystem, g: WGraph) -> list[tuple[str, str]]:
    bad = []
    for x in range(g.size):
        for y in range(g.size):
            vals = {g.weight(s, x, y) for s in system.members(g.label(x) & ~g.label(y))}
            vals = {a for a in vals}
            if len(vals) > 1:
                bad.append((g.vertices[x], g.vertices[y]))
    return bad


def validate_wgraph(system: CoxeterSystem, g: WGraph) -> Report:
    rep = Report(f"W-graph validation for {system.name}")
    n = g.size
    if set(g.labels) != set(g.vertices):
        raise WGraphError("every vertex needs a label")
    for s, w in g.weights.items():
        if not 0 <= s < system.rank:
            raise WGraphError(f"unknown generator index {s}")
        if len(w) != n or any(len(r) != n for r in w):
            raise WGraphError(f"weight matrix for {system.labels[s]} must be {n}x{n}")
    bad = condition_one_violations(system, g)
    rep.add("condition 1 (m^s_xy != 0 only if s in I(x)\\I(y))", not bad,
            None if not bad else {"offending": [list(t) for t in bad]})
    if bad:
        return rep
    hk = check_hecke_rep(system, hecke_matrices(system, g))
    rep.extend(hk, "hecke: ")
    dis = weight_disagreements(system, g)
    rep.data["weight_agreement_warnings"] = [list(p) for p in dis]
    return rep


# --------------------------------------------------------------------------
# modules
# --------------------------------------------------------------------------


@dataclass
class OmegaModule:
    """Matrices for every E_I and every x_s on a common space k^n."""

    system: CoxeterSystem
    dim: int
    E: dict  # mask -> Matrix
    x: dict  # s -> Matrix
    zero: object = mpq(0)
    one: object = mpq(1)

    def identity(self) -> Matrix:
        return Matrix.identity(self.dim, self.one, self.zero)

    def edge(self, I: int, J: int, s: int) -> Matrix:
        return self.E[I] * self.x[s] * self.E[J]

    def evaluate(self, elem: PathElement) -> Matrix:
        """Image of a full-quiver or compatibility-graph element."""
        q = elem.quiver
        out = Matrix.zeros(self.dim, zero=self.zero)
        for (I, J, p), c in elem.terms.items():
            mat = self.E[I]
            for e in p:
                A, B, tag = q.edges[e]
                s = tag if q.kind == "full" else min(self.system.members(A & ~B))
                mat = mat * self.edge(A, B, s)
            out = out + mat * c
        return out

    def evaluate_algebra(self, x) -> Matrix:
        """Image of an element of a QuotientAlgebra (via its basis paths)."""
        alg = x.algebra
        out = Matrix.zeros(self.dim, zero=self.zero)
        cache = getattr(self, "_basis_cache", None)
        if cache is None or cache[0] is not alg:
            cache = (alg, {})
            object.__setattr__(self, "_basis_cache", cache)
        for i, c in x.coords.items():
            mat = cache[1].get(i)
            if mat is None:
                I, J, p = alg.basis[i]
                mat = self.E[I]
                for e in p:
                    A, B, tag = alg.quiver.edges[e]
                    s = tag if alg.quiver.kind == "full" else min(self.system.members(A & ~B))
                    mat = mat * self.edge(A, B, s)
                cache[1][i] = mat
            out = out + mat * c
        return out

    def check_relations(self, relators: list[PathElement] | None = None) -> Report:
        rep = Report(f"kOmega-module relations ({self.dim}-dimensional, {self.system.name})")
        ident = self.identity()
        total = None
        for I, P in sorted(self.E.items()):
            rep.add(f"E[{self.system.subset_name(I)}] idempotent", P * P == P)
            total = P if total is None else total + P
        rep.add("sum of E_I is the identity", total == ident)
        for I, P in self.E.items():
            for J, Q in self.E.items():
                if I < J and not (P * Q).is_zero():
                    rep.add(f"E[{self.system.subset_name(I)}] E[{self.system.subset_name(J)}] = 0", False)
        for s in range(self.system.rank):
            es = Matrix.zeros(self.dim, zero=self.zero)
            for I, P in self.E.items():
                if I >> s & 1:
                    es = es + P
            xs = self.x[s]
            rep.add(f"e_{self.system.labels[s]} x = x", es * xs == xs)
            rep.add(f"x e_{self.system.labels[s]} = 0", (xs * es).is_zero())
        fq = build_full_quiver(self.system)
        rels = relators if relators is not None else all_relators(fq)
        bad = [i for i, r in enumerate(rels) if not self.evaluate(r).is_zero()]
        rep.add(f"all {len(rels)} relators vanish", not bad, None if not bad else {"first": repr(rels[bad[0]])})
        return rep


def wgraph_to_module(system: CoxeterSystem, g: WGraph, check: bool = True) -> OmegaModule:
    if check:
        rep = validate_wgraph(system, g)
        if not rep.ok:
            raise WGraphError("invalid W-graph: " + "; ".join(c.name for c in rep.failures()))
    n = g.size
    zero, one = mpq(0), mpq(1)
    E = {}
    for I in range(1 << system.rank):
        E[I] = Matrix([[one if (i == j and g.label(i) == I) else zero for j in range(n)] for i in range(n)], zero)
    x = {}
    for s in range(system.rank):
        w = g.weights.get(s)
        x[s] = Matrix([[w[i][j] if w else zero for j in range(n)] for i in range(n)], zero)
    return OmegaModule(system, n, E, x, zero, one)


def _column_space_basis(mat: Matrix) -> list[list]:
    """Deterministic basis of the image: the pivot columns of the matrix."""
    if mat.nrows == 0:
        return []
    _, piv = rref(mat.rows)
    return [[mat.rows[i][j] for i in range(mat.nrows)] for j in piv]


def module_to_wgraph(module: OmegaModule, basis_choice: Mapping | None = None) -> tuple[WGraph, Matrix]:
    """Choose bases of every E_J V and read off the x_s matrices.

    Returns the W-graph and the change-of-basis matrix P (columns = chosen
    vectors), so that m^s = P^-1 x_s P.
    """
    system = module.system
    cols = []
    labels = []
    for J in range(1 << system.rank):
        P = module.E[J]
        if basis_choice is not None and J in basis_choice:
            chosen = [list(c) for c in basis_choice[J]]
            r = len(rref(P.rows)[1]) if P.nrows else 0
            if len(chosen) != r:
                raise WGraphError(f"basis for E[{system.subset_name(J)}] has {len(chosen)} vectors, rank is {r}")
            for c in chosen:
                img = P * Matrix([[a] for a in c], module.zero)
                if [row[0] for row in img.rows] != list(c):
                    raise WGraphError("chosen vector is not in the image of E_J")
        else:
            chosen = _column_space_basis(P)
        for c in chosen:
            cols.append(c)
            labels.append(J)
    n = module.dim
    if len(cols) != n:
        raise WGraphError("projector ranks do not add up to the dimension")
    Pm = Matrix([[cols[j][i] for j in range(n)] for i in range(n)], module.zero)
    Pinv = _inverse(Pm, module.zero, module.one)
    verts = [f"v{i}" for i in range(n)]
    weights = {}
    for s in range(system.rank):
        m = Pinv * module.x[s] * Pm
        if not m.is_zero():
            weights[s] = m.rows
    g = WGraph(verts, {verts[i]: labels[i] for i in range(n)}, weights)
    return g, Pm


def _inverse(P: Matrix, zero, one) -> Matrix:
    n = P.nrows
    aug = [list(P.rows[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise WGraphError("chosen basis vectors are linearly dependent")
    return Matrix([row[n:] for row in R], zero)


def apply_duality(obj, system: CoxeterSystem | None = None):
    """delta: labels complemented, x_s -> -x_s^T (graphs: weights -(m^s)^T)."""
    if isinstance(obj, WGraph):
        if system is None:
            raise WGraphError("duality on a W-graph needs the Coxeter system")
        full = system.full
        weights = {}
        for s, w in obj.weights.items():
            n = obj.size
            weights[s] = [[-w[y][x] for y in range(n)] for x in range(n)]
        return WGraph(list(obj.vertices), {x: full & ~I for x, I in obj.labels.items()}, weights, obj.field)
    m: OmegaModule = obj
    full = m.system.full
    E = {full & ~I: P.transpose() for I, P in m.E.items()}
    x = {s: -X.transpose() for s, X in m.x.items()}
    return OmegaModule(m.system, m.dim, E, x, m.zero, m.one)


def _perm_mask(mask: int, perm) -> int:
    out = 0
    for i, j in enumerate(perm):
        if mask >> i & 1:
            out |= 1 << j
    return out


def apply_graph_automorphism(system: CoxeterSystem, perm: Sequence[int], obj):
    perm = list(perm)
    if not system.is_automorphism(perm):
        raise WGraphError("not an automorphism of the Coxeter graph")
    if isinstance(obj, WGraph):
        return WGraph(list(obj.vertices), {x: _perm_mask(I, perm) for x, I in obj.labels.items()},
                      {perm[s]: w for s, w in obj.weights.items()}, obj.field)
    m: OmegaModule = obj
    return OmegaModule(m.system, m.dim, {_perm_mask(I, perm): P for I, P in m.E.items()},
                       {perm[s]: X for s, X in m.x.items()}, m.zero, m.one)


def direct_sum(a, b):
    if isinstance(a, WGraph):
        va = [f"a.{x}" for x in a.vertices]
        vb = [f"b.{x}" for x in b.vertices]
        n, k = a.size, b.size
        weights = {}
        for s in set(a.weights) | set(b.weights):
            wa, wb = a.weights.get(s), b.weights.get(s)
            rows = []
            for i in range(n + k):
                row = []
                for j in range(n + k):
                    if i < n and j < n:
                        row.append(wa[i][j] if wa else 0)
                    elif i >= n and j >= n:
                        row.append(wb[i - n][j - n] if wb else 0)
                    else:
                        row.append(0)
                rows.append(row)
            weights[s] = rows
        labels = {**{va[i]: a.label(i) for i in range(n)}, **{vb[i]: b.label(i) for i in range(k)}}
        return WGraph(va + vb, labels, weights, a.field or b.field)
    return OmegaModule(a.system, a.dim + b.dim,
                       {I: block_diag(a.E[I], b.E[I], a.zero) for I in a.E},
                       {s: block_diag(a.x[s], b.x[s], a.zero) for s in a.x}, a.zero, a.one)


def block_diag(A: Matrix, B: Matrix, zero) -> Matrix:
    n, k = A.nrows, B.nrows
    rows = [list(A.rows[i]) + [zero] * k for i in range(n)]
    rows += [[zero] * n + list(B.rows[i]) for i in range(k)]
    return Matrix(rows, zero)


def conjugate(module: OmegaModule, P: Matrix) -> OmegaModule:
    Pinv = _inverse(P, module.zero, module.one)
    return OmegaModule(module.system, module.dim,
                       {I: Pinv * M * P for I, M in module.E.items()},
                       {s: Pinv * M * P for s, M in module.x.items()}, module.zero, module.one)


def modules_equal(a: OmegaModule, b: OmegaModule) -> bool:
    return a.dim == b.dim and all(a.E[I] == b.E[I] for I in a.E) and all(a.x[s] == b.x[s] for s in a.x)


# --------------------------------------------------------------------------
# small standard graphs
# --------------------------------------------------------------------------


def trivial_graph(system: CoxeterSystem) -> WGraph:
    return WGraph(["x"], {"x": 0}, {})


def sign_graph(system: CoxeterSystem) -> WGraph:
    return WGraph(["x"], {"x": system.full}, {})


def dihedral_graph(system: CoxeterSystem, a: int) -> WGraph:
    """Two vertices labelled {1}, {2} with m^1_xy = 1 and m^2_yx = sigma_a."""
    from .arith import sigma

    m = system.param("m") if system.type_tag == "I2" else system.m(0, 1)
    if not 1 <= a <= (m - 1) // 2:
        raise WGraphError("need 1 <= a <= (m-1)/2")
    F = NumberField(m)
    sg = F.scalar(sigma(a, m, F))
    zero = F.scalar(0)
    one = F.scalar(1)
    return WGraph(["x", "y"], {"x": 0b01, "y": 0b10},
                  {0: [[zero, one], [zero, zero]], 1: [[zero, zero], [sg, zero]]}, F)
