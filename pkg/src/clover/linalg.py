"""
Exact integer and rational linear algebra.

Dense routines (Smith and Hermite normal forms with transforms, Bareiss
rank and determinant) work on lists of Python ints.  Quotients of large
sparse relation systems go through :class:`IntegerLattice` (row echelon
basis grown by gcd insertion) or :class:`RationalSpan`; the Smith form is
only taken on the small block of rows whose pivots are not units.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

__all__ = [
    "IntegerMatrix",
    "smith_normal_form",
    "hermite_normal_form",
    "bareiss_rank",
    "determinant",
    "integer_left_kernel",
    "IntegerLattice",
    "RationalSpan",
    "xgcd",
]


def xgcd(a, b):
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


class IntegerMatrix:
    """Sparse integer matrix; zero entries are never stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows, self.cols = rows, cols
        self.entries = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError((i, j))
            if v:
                self.entries[i, j] = v

    @classmethod
    def from_dense(cls, a, cols=None):
        rows = len(a)
        cols = len(a[0]) if rows else (cols or 0)
        return cls(rows, cols, {(i, j): v for i, r in enumerate(a) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self):
        a = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            a[i][j] = v
        return a

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc = {}
        for (i, k), u in self.entries.items():
            for j, v in by_row.get(k, ()):
                acc[i, j] = acc.get((i, j), 0) + u * v
        return IntegerMatrix(self.rows, other.cols, acc)

    def __eq__(self, other):
        return (
            isinstance(other, IntegerMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def transpose(self):
        return IntegerMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def is_diagonal(self):
        return all(i == j for i, j in self.entries)

    def diagonal(self):
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def dump(self, fh):
        """Write ``rows cols`` then one ``row col value`` triplet per line."""
        fh.write(f"{self.rows} {self.cols}\n")
        for (i, j), v in sorted(self.entries.items()):
            fh.write(f"{i} {j} {v}\n")

    @classmethod
    def load(cls, fh):
        lines = [l.split() for l in fh if l.strip()]
        rows, cols = map(int, lines[0])
        return cls(rows, cols, {(int(i), int(j)): int(v) for i, j, v in lines[1:]})

    def __repr__(self):
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def _dense(a):
    if isinstance(a, IntegerMatrix):
        return a.to_dense(), a.rows, a.cols
    a = [list(r) for r in a]
    return a, len(a), (len(a[0]) if a else 0)


def determinant(a) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    m, n, n2 = _dense(a)
    if n != n2:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def bareiss_rank(a) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination on a dense matrix."""
    m, rows, cols = _dense(a)
    r, prev = 0, 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == rows:
            break
    return r


def smith_normal_form(a, with_inverse=False):
    """Return ``(U, D, V)`` with ``U @ A @ V == D`` and ``d1 | d2 | ...``.

    U and V are unimodular.  Pivots are chosen with minimal absolute value,
    ties broken by the Markowitz count of the candidate.  With
    ``with_inverse`` the inverse of V is returned as a fourth matrix.
    """
    d, m, n = _dense(a)
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]
    vi = [[int(i == j) for j in range(n)] for i in range(n)] if with_inverse else None

    def swap_rows(i, j):
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for r in d:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]
            if vi is not None:
                vi[i], vi[j] = vi[j], vi[i]

    def add_row(dst, src, q):  # row dst += q * row src
        rd, rs = d[dst], d[src]
        for j in range(n):
            if rs[j]:
                rd[j] += q * rs[j]
        ud, us = u[dst], u[src]
        for j in range(m):
            if us[j]:
                ud[j] += q * us[j]

    def add_col(dst, src, q):  # col dst += q * col src
        for r in d:
            if r[src]:
                r[dst] += q * r[src]
        for r in v:
            if r[src]:
                r[dst] += q * r[src]
        if vi is not None:
            # inverse of the column operation is a row operation on V^-1
            rs, rd = vi[src], vi[dst]
            for j in range(n):
                if rd[j]:
                    rs[j] -= q * rd[j]

    def pick_pivot(t):
        best = None
        row_nnz = [sum(1 for j in range(t, n) if d[i][j]) for i in range(m)]
        col_nnz = [sum(1 for i in range(t, m) if d[i][j]) for j in range(n)]
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x:
                    cand = (abs(x), (row_nnz[i] - 1) * (col_nnz[j] - 1), i, j)
                    if best is None or cand < best:
                        best = cand
        return best

    t = 0
    while t < min(m, n):
        best = pick_pivot(t)
        if best is None:
            break
        swap_rows(t, best[2])
        swap_cols(t, best[3])
        while True:
            p = d[t][t]
            clean = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    clean &= d[i][t] == 0
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    clean &= d[t][j] == 0
            if not clean:
                # a smaller remainder sits in row/column t; make it the pivot
                cands = [(abs(d[i][t]), i, None) for i in range(t + 1, m) if d[i][t]]
                cands += [(abs(d[t][j]), None, j) for j in range(t + 1, n) if d[t][j]]
                _, i, j = min(cands, key=lambda c: c[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    out = (IntegerMatrix.from_dense(u, m), IntegerMatrix.from_dense(d, n), IntegerMatrix.from_dense(v, n))
    if with_inverse:
        out += (IntegerMatrix.from_dense(vi, n),)
    if os.environ.get("CLOVER_CHECK_SNF"):
        check_smith(a, *out)
    return out


def check_smith(a, U, D, V, Vinv=None):
    """Assert the Smith normal form postconditions."""
    dense, _, n = _dense(a)
    A = IntegerMatrix.from_dense(dense, n)
    if not (U @ A @ V == D and D.is_diagonal()):
        raise AssertionError("U A V != D or D not diagonal")
    diag = D.diagonal()
    nz = [x for x in diag if x]
    if any(x < 0 for x in diag) or diag[: len(nz)] != nz:
        raise AssertionError("diagonal not nonnegative with zeros last")
    if any(b % a for a, b in zip(nz, nz[1:])):
        raise AssertionError("divisibility chain broken")
    for M in (U, V):
        if abs(determinant(M.to_dense())) != 1:
            raise AssertionError("transform not unimodular")
    if Vinv is not None and not V @ Vinv == IntegerMatrix.identity(V.rows):
        raise AssertionError("V inverse wrong")


def hermite_normal_form(a):
    """Row-style HNF: returns ``(H, U)`` with ``U @ A == H``, U unimodular.

    Nonzero rows of H come first, pivots are positive and entries above a
    pivot are reduced into ``[0, pivot)``.
    """
    h, m, n = _dense(a)
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    pivots = []
    for c in range(n):
        rows = [i for i in range(r, m) if h[i][c]]
        if not rows:
            continue
        while True:
            rows = [i for i in range(r, m) if h[i][c]]
            i0 = min(rows, key=lambda i: abs(h[i][c]))
            h[r], h[i0] = h[i0], h[r]
            u[r], u[i0] = u[i0], u[r]
            done = True
            for i in range(r + 1, m):
                if h[i][c]:
                    q = h[i][c] // h[r][c]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    done &= h[i][c] == 0
            if done:
                break
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return IntegerMatrix.from_dense(h, n), IntegerMatrix.from_dense(u, m)


def integer_left_kernel(a):
    """Basis (list of int lists) of ``{y : y @ A == 0}`` in Hermite form."""
    h, u = hermite_normal_form(a)
    hd, ud = h.to_dense(), u.to_dense()
    kern = [ud[i] for i in range(h.rows) if not any(hd[i])]
    if not kern:
        return []
    kh, _ = hermite_normal_form(kern)
    return [row for row in kh.to_dense() if any(row)]


# ---------------------------------------------------------------------------
# sparse row spaces


def _axpy(x: dict, a: int, y: dict, b: int) -> dict:
    """Return a*x + b*y for sparse dict vectors."""
    out = {k: a * v for k, v in x.items()} if a != 1 else dict(x)
    for k, v in y.items():
        w = out.get(k, 0) + b * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return {k: v for k, v in out.items() if v}


class IntegerLattice:
    """Sublattice of Z^N kept as an echelon basis indexed by pivot column."""

    def __init__(self):
        self.rows = {}  # pivot column -> dict row, pivot entry > 0

    def __len__(self):
        return len(self.rows)

    def add(self, vec: dict) -> bool:
        """Insert a vector; return True when the lattice grew."""
        vec = {k: v for k, v in vec.items() if v}
        grew = False
        while vec:
            c = min(vec)
            a = vec[c]
            row = self.rows.get(c)
            if row is None:
                if a < 0:
                    vec = {k: -v for k, v in vec.items()}
                self.rows[c] = vec
                return True
            p = row[c]
            if a % p == 0:
                vec = _axpy(vec, 1, row, -(a // p))
                continue
            g, s, t = xgcd(p, a)
            new = _axpy(row, s, vec, t)
            vec = _axpy(row, a // g, vec, -(p // g))
            self.rows[c] = new
            grew = True
        return grew

    def reduce(self, vec: dict) -> dict:
        """Canonical coset representative: pivot coordinates in [0, pivot)."""
        vec = {k: v for k, v in vec.items() if v}
        done = set()
        while True:
            todo = [c for c in vec if c in self.rows and c not in done]
            if not todo:
                return vec
            c = min(todo)
            row = self.rows[c]
            q = vec[c] // row[c]
            if q:
                vec = _axpy(vec, 1, row, -q)
            done.add(c)

    def __contains__(self, vec):
        return not self.reduce(vec)

    def hermite(self):
        """Reduce every row above later pivots (full Hermite form, in place)."""
        for c in sorted(self.rows):
            row, last = self.rows[c], c
            while True:
                later = [k for k in row if k > last and k in self.rows]
                if not later:
                    break
                last = min(later)
                q = row[last] // self.rows[last][last]
                if q:
                    row = _axpy(row, 1, self.rows[last], -q)
            self.rows[c] = row
        return self


class RationalSpan:
    """Subspace of Q^N; rows stored as primitive integer vectors."""

    def __init__(self):
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    @staticmethod
    def _primitive(vec):
        g = 0
        for v in vec.values():
            g = gcd(g, v)
        c = min(vec)
        if vec[c] < 0:
            g = -g
        return {k: v // g for k, v in vec.items()} if g not in (1,) else vec

    def add(self, vec: dict) -> bool:
        vec = {k: v for k, v in vec.items() if v}
        while vec:
            c = min(vec)
            row = self.rows.get(c)
            if row is None:
                self.rows[c] = self._primitive(vec)
                return True
            p, a = row[c], vec[c]
            g = gcd(p, a)
            vec = _axpy(vec, p // g, row, -(a // g))
            if vec:
                vec = self._primitive(vec)
        return False

    def reduce(self, vec: dict) -> dict:
        """Remainder (Fraction entries) with every pivot coordinate zeroed."""
        vec = {k: Fraction(v) for k, v in vec.items() if v}
        while True:
            todo = [c for c in vec if c in self.rows]
            if not todo:
                return vec
            c = min(todo)
            row = self.rows[c]
            q = vec[c] / row[c]
            for k, v in row.items():
                w = vec.get(k, 0) - q * v
                if w:
                    vec[k] = w
                else:
                    vec.pop(k, None)

    def __contains__(self, vec):
        return not self.reduce(vec)
