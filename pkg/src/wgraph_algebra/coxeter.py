"""Coxeter systems, character data, matrices over Laurent polynomials and the
Hecke-relation checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .arith import IntPoly, LaurentPoly, NumberField, field_for_orders, tau_poly, v, v_inv
from .report import Report

TYPE_TAGS = ("A1xN", "I2", "A3", "A4", "B3", "B4", "D4", "F4", "H3")
FAMILY_TYPES = ("A1xN", "I2", "A3", "A4", "B3")


class CoxeterError(ValueError):
    pass


@dataclass(frozen=True)
class CoxeterSystem:
    """Generators (labels, in order) and the symmetric Coxeter matrix."""

    labels: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]
    type_tag: str = "custom"
    params: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        n = len(self.labels)
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise CoxeterError("Coxeter matrix has the wrong shape")
        for i in range(n):
            if self.matrix[i][i] != 1:
                raise CoxeterError("diagonal entries of a Coxeter matrix must be 1")
            for j in range(n):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise CoxeterError("Coxeter matrix must be symmetric")
                if i != j and self.matrix[i][j] < 2:
                    raise CoxeterError("off-diagonal entries must be >= 2")

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        """Bitmask of S."""
        return (1 << self.rank) - 1

    def m(self, s: int, t: int) -> int:
        return self.matrix[s][t]

    def param(self, name: str, default=None):
        return dict(self.params).get(name, default)

    @property
    def name(self) -> str:
        if self.type_tag == "I2":
            return f"I2({self.param('m')})"
        if self.type_tag == "A1xN":
            return "A1" if self.rank == 1 else f"A1^{self.rank}"
        return self.type_tag

    def index(self, label: str) -> int:
        return self.labels.index(str(label))

    def subset(self, labels) -> int:
        """Bitmask from an iterable of labels, or from a string like "13"."""
        if isinstance(labels, int):
            return labels
        if isinstance(labels, str):
            labels = [] if labels in ("", "∅") else list(labels)
        mask = 0
        for lab in labels:
            mask |= 1 << self.index(str(lab))
        return mask

    def subset_name(self, mask: int) -> str:
        if mask == 0:
            return "∅"
        return "".join(self.labels[i] for i in range(self.rank) if mask >> i & 1)

    def subset_labels(self, mask: int) -> list[str]:
        return [self.labels[i] for i in range(self.rank) if mask >> i & 1]

    def members(self, mask: int) -> list[int]:
        return [i for i in range(self.rank) if mask >> i & 1]

    def field(self) -> NumberField:
        """Coefficient field containing 2cos(2pi/m_st) for all s, t."""
        orders = [self.m(s, t) for s in range(self.rank) for t in range(s + 1, self.rank)]
        return field_for_orders(orders)

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        n = self.rank
        if sorted(perm) != list(range(n)):
            return False
        return all(self.m(perm[s], perm[t]) == self.m(s, t) for s in range(n) for t in range(n))

    def to_json(self) -> dict:
        return {
            "type": self.type_tag,
            "params": dict(self.params),
            "generators": list(self.labels),
            "coxeter_matrix": [list(r) for r in self.matrix],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "CoxeterSystem":
        return cls(
            tuple(d["generators"]),
            tuple(tuple(r) for r in d["coxeter_matrix"]),
            d.get("type", "custom"),
            tuple(sorted(d.get("params", {}).items())),
        )


def _matrix_from_bonds(n: int, bonds: Mapping[tuple[int, int], int]) -> tuple:
    M = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for (i, j), m in bonds.items():
        M[i][j] = M[j][i] = m
    return tuple(tuple(r) for r in M)


def build_system(type_tag: str, m: int | None = None, n: int | None = None) -> CoxeterSystem:
    """Coxeter system for a type tag.

    ``m`` is required for I2; ``n`` (default 1) is the number of factors for A1xN.
    """
    tag = type_tag.strip()
    if tag in ("A1", "A1^2", "A1^3"):
        n = {"A1": 1, "A1^2": 2, "A1^3": 3}[tag]
        tag = "A1xN"
    if tag == "A1xN":
        n = 1 if n is None else n
        if n < 1:
            raise CoxeterError("A1xN needs n >= 1")
        return CoxeterSystem(tuple(str(i + 1) for i in range(n)), _matrix_from_bonds(n, {}), "A1xN", (("n", n),))
    if tag == "I2":
        if m is None or m < 3:
            raise CoxeterError("I2(m) needs m >= 3")
        return CoxeterSystem(("1", "2"), _matrix_from_bonds(2, {(0, 1): m}), "I2", (("m", m),))
    if tag == "A2":
        return CoxeterSystem(("1", "2"), _matrix_from_bonds(2, {(0, 1): 3}), "I2", (("m", 3),))
    if tag in ("A3", "A4"):
        k = int(tag[1])
        return CoxeterSystem(tuple(str(i + 1) for i in range(k)),
                             _matrix_from_bonds(k, {(i, i + 1): 3 for i in range(k - 1)}), tag)
    if tag == "B3":
        return CoxeterSystem(("0", "1", "2"), _matrix_from_bonds(3, {(0, 1): 4, (1, 2): 3}), "B3")
    if tag == "H3":
        return CoxeterSystem(("1", "2", "3"), _matrix_from_bonds(3, {(0, 1): 5, (1, 2): 3}), "H3")
    if tag == "B4":
        return CoxeterSystem(("1", "2", "3", "4"), _matrix_from_bonds(4, {(0, 1): 4, (1, 2): 3, (2, 3): 3}), "B4")
    if tag == "F4":
        return CoxeterSystem(("1", "2", "3", "4"), _matrix_from_bonds(4, {(0, 1): 3, (1, 2): 4, (2, 3): 3}), "F4")
    if tag == "D4":
        # central node 2
        return CoxeterSystem(("0", "1", "2", "3"), _matrix_from_bonds(4, {(0, 2): 3, (1, 2): 3, (2, 3): 3}), "D4")
    raise CoxeterError(f"unknown Coxeter type {type_tag!r}")


def parse_type(spec: str) -> CoxeterSystem:
    """Parse strings like "A3", "B3", "I2(5)", "A1^2"."""
    s = spec.strip()
    if s.startswith("I2(") and s.endswith(")"):
        return build_system("I2", m=int(s[3:-1]))
    if s.startswith("A1^"):
        return build_system("A1xN", n=int(s[3:]))
    return build_system(s)


# --------------------------------------------------------------------------
# group order by enumeration
# --------------------------------------------------------------------------


def reflection_matrices(system: CoxeterSystem):
    """Geometric representation s(x) = x - 2B(a_s, x) a_s, B(a_s,a_t) = -cos(pi/m_st)."""
    n = system.rank
    L = 1
    for s in range(n):
        for t in range(n):
            L = L * system.m(s, t) // math.gcd(L, system.m(s, t))
    F = NumberField(max(L, 3)) if L >= 3 else NumberField(3)

    def two_cos(mst):
        if F.m % mst == 0:
            return F.two_cos(F.m // mst)
        # 2cos(pi/2) = 0 when F = Q(2cos(pi/3))
        return F.two_cos(F.m * 2 // mst) if (F.m * 2) % mst == 0 else None

    gens = []
    for s in range(n):
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                # column j = image of a_j: a_j - 2B(a_s,a_j) a_s = a_j + 2cos(pi/m_sj) a_s
                val = F(1) if i == j else F(0)
                if i == s:
                    val = val + (F(-2) if j == s else (two_cos(system.m(s, j)) if system.m(s, j) != 2 else F(0)))
                row.append(val)
            rows.append(tuple(row))
        gens.append(tuple(rows))
    return F, gens


def group_order(system: CoxeterSystem, limit: int = 20000) -> int:
    """|W| by breadth-first closure of the reflection matrices."""
    F, gens = reflection_matrices(system)
    n = system.rank

    def mul(a, b):
        return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), F(0)) for j in range(n)) for i in range(n))

    def key(a):
        return tuple(x.coeffs for row in a for x in row)

    ident = tuple(tuple(F(1) if i == j else F(0) for j in range(n)) for i in range(n))
    seen = {key(ident)}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mul(a, g)
                k = key(b)
                if k not in seen:
                    seen.add(k)
                    nxt.append(b)
                    if len(seen) > limit:
                        raise CoxeterError("group larger than enumeration limit")
        frontier = nxt
    return len(seen)


# --------------------------------------------------------------------------
# characters and the partial order
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IrrData:
    """Irreducible characters with degrees, and the partial order as covering pairs.

    A pair (a, b) in ``covers`` means a < b.  The convention is the one of
    the "downward edges" property: F^a kOmega F^b != 0 forces a <= b.
    """

    characters: tuple[tuple[str, int], ...]
    covers: tuple[tuple[str, str], ...]
    notes: str = ""

    @property
    def labels(self) -> list[str]:
        return [c for c, _ in self.characters]

    def degree(self, label: str) -> int:
        return dict(self.characters)[label]

    def sum_of_squares(self) -> int:
        return sum(d * d for _, d in self.characters)

    def relation(self) -> set[tuple[str, str]]:
        """Reflexive-transitive closure of the covering pairs."""
        labs = self.labels
        rel = {(a, a) for a in labs} | set(self.covers)
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for c, d in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        return rel

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.relation()

    def is_partial_order(self) -> bool:
        rel = self.relation()
        return all(not ((a, b) in rel and (b, a) in rel and a != b) for a, b in rel)

    def topological_order(self) -> list[str]:
        """Labels sorted so that a < b implies a comes first."""
        import graphlib

        ts = graphlib.TopologicalSorter({lab: set() for lab in self.labels})
        for a, b in self.covers:
            ts.add(b, a)
        return list(ts.static_order())

    def to_json(self) -> dict:
        return {
            "characters": [{"label": c, "degree": d} for c, d in self.characters],
            "covers": [list(p) for p in self.covers],
        }


def partitions(n: int, max_part: int | None = None):
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def partition_label(p: Sequence[int]) -> str:
    if not p:
        return "∅"
    parts = []
    for k, grp in itertools.groupby(p):
        c = len(list(grp))
        parts.append(f"{k}^{c}" if c > 1 else str(k))
    return "(" + ",".join(parts) + ")"


def hook_dimension(p: Sequence[int]) -> int:
    n = sum(p)
    conj = [sum(1 for r in p if r > j) for j in range(p[0])] if p else []
    hooks = 1
    for i, r in enumerate(p):
        for j in range(r):
            hooks *= (r - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(n) // hooks


def dominates(p: Sequence[int], q: Sequence[int]) -> bool:
    """p dominates q (p >= q in dominance order)."""
    a = b = 0
    for i in range(max(len(p), len(q))):
        a += p[i] if i < len(p) else 0
        b += q[i] if i < len(q) else 0
        if a < b:
            return False
    return True


def _covers_from_relation(labels: list[str], leq) -> tuple:
    covers = []
    for a in labels:
        for b in labels:
            if a == b or not leq(a, b):
                continue
            if any(c not in (a, b) and leq(a, c) and leq(c, b) for c in labels):
                continue
            covers.append((a, b))
    return tuple(covers)


# vertical position of each character in the refined B3 graph (bottom = 0)
B3_LEVELS = {
    "(3),∅": 0, "∅,(3)": 1, "(2,1),∅": 1, "(2),(1)": 2, "(1),(2)": 4,
    "(1^2),(1)": 4, "(1),(1^2)": 6, "∅,(2,1)": 7, "(1^3),∅": 7, "∅,(1^3)": 8,
}
B3_DEGREES = {
    "(3),∅": 1, "∅,(3)": 1, "(2,1),∅": 2, "(2),(1)": 3, "(1),(2)": 3,
    "(1^2),(1)": 3, "(1),(1^2)": 3, "∅,(2,1)": 2, "(1^3),∅": 1, "∅,(1^3)": 1,
}


def i2_labels(m: int) -> list[str]:
    labs = ["1"] + [f"lambda_{a}" for a in range(1, (m - 1) // 2 + 1)]
    if m % 2 == 0:
        labs += ["eps1", "eps2"]
    return labs + ["sgn"]


def irr_data(system: CoxeterSystem) -> IrrData:
    tag = system.type_tag
    if tag == "A1xN":
        n = system.rank
        labels = [system.subset_name(mask) for mask in range(1 << n)]
        chars = tuple((lab, 1) for lab in labels)
        covers = []
        for mask in range(1 << n):
            for s in range(n):
                if not mask >> s & 1:
                    covers.append((system.subset_name(mask | 1 << s), system.subset_name(mask)))
        return IrrData(chars, tuple(covers), "labels are the subsets {s : chi(T_s) = -v^-1}")
    if tag == "I2":
        m = system.param("m")
        labs = i2_labels(m)
        chars = tuple((lab, 1 if lab in ("1", "sgn", "eps1", "eps2") else 2) for lab in labs)
        middle = labs[1:-1]
        covers = tuple([("sgn", x) for x in middle] + [(x, "1") for x in middle])
        return IrrData(chars, covers, "sgn smallest, 1 largest, all others incomparable")
    if tag in ("A3", "A4"):
        n = system.rank + 1
        parts = list(partitions(n))
        labels = [partition_label(p) for p in parts]
        by_label = dict(zip(labels, parts))
        chars = tuple((partition_label(p), hook_dimension(p)) for p in parts)

        def leq(a, b):
            return dominates(by_label[b], by_label[a])

        return IrrData(chars, _covers_from_relation(labels, leq), "dominance order on partitions")
    if tag == "B3":
        labels = list(B3_DEGREES)
        chars = tuple((lab, B3_DEGREES[lab]) for lab in labels)

        def leq(a, b):
            return a == b or B3_LEVELS[a] > B3_LEVELS[b]

        return IrrData(chars, _covers_from_relation(labels, leq), "vertical levels of the refined B3 graph")
    raise CoxeterError(f"no character data for type {system.name}")


# --------------------------------------------------------------------------
# matrices with ring entries
# --------------------------------------------------------------------------


class Matrix:
    """Dense square-or-rectangular matrix over any commutative ring of Python objects."""

    __slots__ = ("rows", "nrows", "ncols", "zero")

    def __init__(self, rows, zero=0):
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        self.zero = zero

    @classmethod
    def identity(cls, n: int, one=1, zero=0) -> "Matrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], zero)

    @classmethod
    def zeros(cls, n: int, m: int | None = None, zero=0) -> "Matrix":
        return cls([[zero] * (n if m is None else m) for _ in range(n)], zero)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other: "Matrix"):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError(f"dimension mismatch: {self.nrows}x{self.ncols} vs {other.nrows}x{other.ncols}")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            other = Matrix.identity(self.nrows, other, self.zero * 0 if self.zero else 0)
        self._check(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.zero)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], self.zero)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("dimension mismatch in matrix product")
            cols = list(zip(*other.rows)) if other.rows else []
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    acc = None
                    for a, b in zip(r, c):
                        if a and b:
                            acc = a * b if acc is None else acc + a * b
                    row.append(self.zero if acc is None else acc)
                out.append(row)
            return Matrix(out, self.zero)
        return Matrix([[a * other for a in r] for r in self.rows], self.zero)

    def __rmul__(self, other):
        return Matrix([[other * a for a in r] for r in self.rows], self.zero)

    def is_zero(self) -> bool:
        return not any(a for r in self.rows for a in r)

    def first_nonzero(self):
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if a:
                    return i, j, a
        return None

    def transpose(self) -> "Matrix":
        return Matrix([list(c) for c in zip(*self.rows)], self.zero)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    def map(self, f) -> "Matrix":
        return Matrix([[f(a) for a in r] for r in self.rows], self.zero)

    def __repr__(self) -> str:
        return "Matrix(" + repr(self.rows) + ")"


def laurent_identity(n: int) -> Matrix:
    return Matrix.identity(n, LaurentPoly.const(1), LaurentPoly())


def braid_commutator(x: Matrix, y: Matrix, m: int) -> Matrix:
    """xyx... - yxy... with m factors each."""
    if (x.nrows, x.ncols) != (y.nrows, y.ncols) or x.nrows != x.ncols:
        raise ValueError("braid commutator needs two square matrices of equal size")
    if m == 0:
        return x - x
    a, b = x, y
    for i in range(1, m):
        a, b = a * (y if i % 2 else x), b * (x if i % 2 else y)
    return a - b


def _entry_str(a) -> str:
    return str(a)


def check_hecke_rep(system: CoxeterSystem, matrices: Mapping) -> Report:
    """Quadratic and braid relations for matrices T_s over Laurent polynomials."""
    rep = Report(f"Hecke relations for {system.name}")
    mats = {}
    for key, mat in matrices.items():
        s = key if isinstance(key, int) else system.index(str(key))
        mats[s] = mat
    if sorted(mats) != list(range(system.rank)):
        raise ValueError("one matrix per generator is required")
    n = mats[0].nrows
    one = laurent_identity(n)
    for s in range(system.rank):
        Ts = mats[s]
        diff = Ts * Ts - (one + Ts * (v - v_inv))
        fn = diff.first_nonzero()
        rep.add(f"quadratic T_{system.labels[s]}", fn is None,
                None if fn is None else {"entry": fn[:2], "value": _entry_str(fn[2])})
    for s in range(system.rank):
        for t in range(s + 1, system.rank):
            d = braid_commutator(mats[s], mats[t], system.m(s, t))
            fn = d.first_nonzero()
            rep.add(f"braid {system.labels[s]}{system.labels[t]} (m={system.m(s, t)})", fn is None,
                    None if fn is None else {"entry": fn[:2], "value": _entry_str(fn[2])})
    return rep


class PreconditionError(ValueError):
    pass


def verify_braid_factorization(x: Matrix, y: Matrix, zeta, r_max: int) -> Report:
    """Delta_{r+1}(x,y) = (-1)^r tau_r(x+y-zeta)(x-y) for r = 0..r_max."""
    n = x.nrows
    one = Matrix.identity(n, LaurentPoly.const(1), LaurentPoly()) if isinstance(zeta, LaurentPoly) \
        else Matrix.identity(n, 1, 0)
    for name, a in (("x", x), ("y", y)):
        if not (a * a - (one + a * zeta)).is_zero():
            raise PreconditionError(f"{name}^2 != 1 + zeta*{name}")
    rep = Report("braid commutator factorization")
    base = x + y - one * zeta
    diff = x - y
    for r in range(r_max + 1):
        lhs = braid_commutator(x, y, r + 1)
        tau: IntPoly = tau_poly(r)
        rhs = tau(base, one=one) * diff
        if r % 2:
            rhs = -rhs
        rep.add(f"r={r}", (lhs - rhs).is_zero())
    return rep
