"""Exact sparse linear algebra over Q or a number field.

Vectors are dicts {index: scalar} without zero entries.  Scalars only need
+, -, *, / and truthiness, so gmpy2 rationals and NumberFieldElem both work.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence


def vadd(a: Mapping, b: Mapping, c=1) -> dict:
    """a + c*b."""
    out = dict(a)
    for k, x in b.items():
        y = out.get(k)
        y = c * x if y is None else y + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vscale(a: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in a.items()}


def vaxpy(out: dict, b: Mapping, c) -> None:
    """In place out += c*b."""
    for k, x in b.items():
        y = out.get(k)
        y = c * x if y is None else y + c * x
        if y:
            out[k] = y
        else:
            del out[k]


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace.

    Pivots are chosen as the largest index under ``key`` so that reduction
    removes the "leading" coordinates first.
    """

    def __init__(self, key=None):
        self.rows: dict = {}  # pivot -> row (normalized, pivot coefficient 1)
        self.key = key or (lambda k: k)

    def __len__(self) -> int:
        return len(self.rows)

    def _pivot(self, vec: Mapping):
        return max(vec, key=self.key)

    def reduce(self, vec: Mapping) -> dict:
        vec = dict(vec)
        while vec:
            done = True
            for k in sorted(vec, key=self.key, reverse=True):
                if k in self.rows:
                    vaxpy(vec, self.rows[k], -vec[k])
                    done = False
                    break
            if done:
                break
        return vec

    def add(self, vec: Mapping) -> bool:
        """Insert vec; returns False if it was already in the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = self._pivot(r)
        inv = 1 / r[p]
        r = vscale(r, inv)
        # keep rows fully reduced w.r.t. the new pivot
        for q, row in self.rows.items():
            if p in row:
                self.rows[q] = vadd(row, r, -row[p])
        self.rows[p] = r
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)


def rank(vectors: Iterable[Mapping]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return len(e)


def rref(matrix: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of a dense matrix; returns (rows, pivot columns)."""
    A = [list(r) for r in matrix]
    if not A:
        return A, []
    n, m = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(n):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return A[:r], pivots


def nullspace(matrix: Sequence[Sequence], ncols: int | None = None, zero=0, one=1) -> list[list]:
    """Basis of {x : matrix x = 0} as dense column vectors."""
    if not matrix:
        m = ncols or 0
        return [[one if i == j else zero for i in range(m)] for j in range(m)]
    R, piv = rref(matrix)
    m = len(matrix[0])
    free = [c for c in range(m) if c not in piv]
    basis = []
    for f in free:
        x = [zero] * m
        x[f] = one
        for row, p in zip(R, piv):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(matrix: Sequence[Sequence], rhs: Sequence):
    """Some solution x of matrix x = rhs, or None."""
    aug = [list(r) + [b] for r, b in zip(matrix, rhs)]
    R, piv = rref(aug)
    m = len(matrix[0]) if matrix else 0
    if m in piv:
        return None
    x = [0] * m
    for row, p in zip(R, piv):
        x[p] = row[m]
    return x
