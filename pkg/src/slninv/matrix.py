"""Matrices with polynomial entries: determinants and Pfaffians.

Determinants use cofactor expansion (memoized over row subsets, columns
processed left to right) up to a size threshold and fraction-free Bareiss
elimination above it; Bareiss divisions are exact by Sylvester's identity.

Pfaffians use perfect-matching expansion up to a size threshold and a
fraction-free skew elimination above it.  The elimination updates

    N'[i][j] = (N[a][b]*N[i][j] - N[a][i]*N[b][j] + N[a][j]*N[b][i]) / prev

keep every intermediate entry equal to a Pfaffian of a bordered principal
submatrix; the division by the previous pivot is exact by the overlapping
Pfaffian identity.  `PfaffianEngine` exposes the matching expansion on
arbitrary index subsets with a memo shared across calls, which is what the
principal-minor enumeration of the fundamental semi-invariant needs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .config import Caps, DEFAULT_CAPS
from .poly import ContextMismatch, Poly, VarContext, exact_div


class PolyMatrix:
    """Rectangular matrix of Poly entries sharing one context."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Poly]]):
        if not entries or not entries[0]:
            raise ValueError("matrix dimensions must be positive")
        self.rows = len(entries)
        self.cols = len(entries[0])
        ctx = entries[0][0].ctx
        for row in entries:
            if len(row) != self.cols:
                raise ValueError("ragged rows")
            for e in row:
                if e.ctx != ctx:
                    raise ContextMismatch("matrix entries use different contexts")
        self.ctx = ctx
        self.entries = [list(row) for row in entries]

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, ctx: VarContext, n: int) -> "PolyMatrix":
        one = Poly.const(ctx, 1)
        zero = Poly.zero(ctx)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ctx: VarContext, rows: int, cols: int) -> "PolyMatrix":
        zero = Poly.zero(ctx)
        return cls([[zero for _ in range(cols)] for _ in range(rows)])

    @classmethod
    def hstack(cls, blocks: Iterable["PolyMatrix"]) -> "PolyMatrix":
        blocks = list(blocks)
        rows = blocks[0].rows
        if any(b.rows != rows for b in blocks):
            raise ValueError("hstack needs equal row counts")
        return cls([sum((b.entries[i] for b in blocks), []) for i in range(rows)])

    # -- basics --------------------------------------------------------------

    def __getitem__(self, key: tuple[int, int]) -> Poly:
        return self.entries[key[0]][key[1]]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for i in range(self.rows)]
                           for j in range(self.cols)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows])

    def map(self, fn: Callable[[Poly], Poly]) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in row] for row in self.entries])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        zero = Poly.zero(self.ctx)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for t in range(self.cols):
                    a = self.entries[i][t]
                    b = other.entries[t][j]
                    if not a.is_zero and not b.is_zero:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def matpow(self, e: int) -> "PolyMatrix":
        if self.rows != self.cols:
            raise ValueError("matrix power needs a square matrix")
        if e < 0:
            raise ValueError("negative matrix power")
        result = PolyMatrix.identity(self.ctx, self.rows)
        for _ in range(e):
            result = result @ self
        return result

    def scale(self, c) -> "PolyMatrix":
        return self.map(lambda p: p.scale(c))

    def is_skew_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        for i in range(self.rows):
            for j in range(i, self.cols):
                if not (self.entries[i][j] + self.entries[j][i]).is_zero:
                    return False
        return True

    def evaluate(self, point: Sequence) -> list[list[Fraction]]:
        return [[e.evaluate(point) for e in row] for row in self.entries]

    def to_strings(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.entries]

    # -- determinant -----------------------------------------------------------

    def det(self, method: str = "auto", caps: Caps = DEFAULT_CAPS) -> Poly:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        if method == "auto":
            method = "cofactor" if self.rows <= caps.det_cofactor else "bareiss"
        if method == "cofactor":
            return _det_cofactor(self)
        if method == "bareiss":
            return _det_bareiss(self)
        raise ValueError(f"unknown determinant method {method!r}")

    # -- pfaffian ---------------------------------------------------------------

    def pfaffian(self, method: str = "auto", caps: Caps = DEFAULT_CAPS) -> Poly:
        n = self.rows
        if n != self.cols or n % 2:
            raise ValueError("pfaffian needs an even-size square matrix")
        if not self.is_skew_symmetric():
            raise ValueError("pfaffian needs a skew-symmetric matrix")
        if method == "auto":
            method = "matching" if n <= caps.pfaffian_matching else "eliminate"
        if method == "matching":
            return PfaffianEngine(self).pf(tuple(range(n)))
        if method == "eliminate":
            return _pfaffian_eliminate(self)
        raise ValueError(f"unknown pfaffian method {method!r}")


# ---------------------------------------------------------------------------
# determinant internals
# ---------------------------------------------------------------------------

def _det_cofactor(m: PolyMatrix) -> Poly:
    """Expansion over columns with a memo on the remaining row subset."""
    n = m.rows
    zero = Poly.zero(m.ctx)
    one = Poly.const(m.ctx, 1)
    memo: dict[tuple[int, ...], Poly] = {(): one}

    def minor(rows: tuple[int, ...]) -> Poly:
        val = memo.get(rows)
        if val is not None:
            return val
        col = n - len(rows)
        acc = zero
        for t, r in enumerate(rows):
            e = m.entries[r][col]
            if e.is_zero:
                continue
            sub = minor(rows[:t] + rows[t + 1:])
            if sub.is_zero:
                continue
            term = e * sub
            acc = acc + term if t % 2 == 0 else acc - term
        memo[rows] = acc
        return acc

    return minor(tuple(range(n)))


def _det_bareiss(m: PolyMatrix) -> Poly:
    n = m.rows
    a = [list(row) for row in m.entries]
    zero = Poly.zero(m.ctx)
    prev = Poly.const(m.ctx, 1)
    sign = 1
    for k in range(n - 1):
        pivot_row = next((r for r in range(k, n) if not a[r][k].is_zero), None)
        if pivot_row is None:
            return zero
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = exact_div(num, prev)
            a[i][k] = zero
        prev = pivot
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


# ---------------------------------------------------------------------------
# pfaffian internals
# ---------------------------------------------------------------------------

class PfaffianEngine:
    """Perfect-matching expansion of Pfaffians over index subsets.

    Sub-Pfaffians are memoized by the index tuple and the memo is shared
    across calls, so enumerating many principal minors of one structure
    matrix reuses most of the work.  Expansion deterministically picks the
    remaining index with the fewest nonzero partners, which makes large zero
    blocks (the abelian part of a structure matrix) essentially free.
    """

    def __init__(self, matrix: PolyMatrix):
        if matrix.rows != matrix.cols:
            raise ValueError("pfaffian needs a square matrix")
        if not matrix.is_skew_symmetric():
            raise ValueError("pfaffian needs a skew-symmetric matrix")
        self.m = matrix.entries
        self.ctx = matrix.ctx
        self.one = Poly.const(matrix.ctx, 1)
        self.zero = Poly.zero(matrix.ctx)
        self.partners = [
            frozenset(j for j in range(matrix.cols) if not matrix.entries[i][j].is_zero)
            for i in range(matrix.rows)
        ]
        self._memo: dict[tuple[int, ...], Poly] = {}

    def pf(self, indices: tuple[int, ...]) -> Poly:
        if len(indices) % 2:
            raise ValueError("pfaffian of an odd-size subset")
        return self._pf(tuple(sorted(indices)))

    def _pf(self, idx: tuple[int, ...]) -> Poly:
        if not idx:
            return self.one
        val = self._memo.get(idx)
        if val is not None:
            return val
        live = frozenset(idx)
        best = None
        best_count = None
        for pos, i in enumerate(idx):
            count = len(self.partners[i] & live)
            if count == 0:
                self._memo[idx] = self.zero
                return self.zero
            if best_count is None or count < best_count:
                best, best_count = pos, count
        p = best
        i0 = idx[p]
        rest = idx[:p] + idx[p + 1:]
        acc = self.zero
        i0_partners = self.partners[i0]
        for t, j in enumerate(rest):
            if j not in i0_partners:
                continue
            sub = self._pf(rest[:t] + rest[t + 1:])
            if sub.is_zero:
                continue
            term = self.m[i0][j] * sub
            # sign: move i0 to the front (p transpositions), then standard
            # first-row expansion sign (-1)^t over the remaining list
            if (p + t) % 2 == 0:
                acc = acc + term
            else:
                acc = acc - term
        self._memo[idx] = acc
        return acc


def _pfaffian_eliminate(m: PolyMatrix) -> Poly:
    """Fraction-free skew elimination; exact by overlapping-Pfaffian identities."""
    n = m.rows
    if n == 0:
        return Poly.const(m.ctx, 1)
    a = [list(row) for row in m.entries]
    prev = Poly.const(m.ctx, 1)
    sign = 1

    def swap(i: int, j: int):
        nonlocal sign
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        sign = -sign

    for t in range(0, n - 1, 2):
        pivot_pair = None
        for p in range(t, n):
            for q in range(p + 1, n):
                if not a[p][q].is_zero:
                    pivot_pair = (p, q)
                    break
            if pivot_pair:
                break
        if pivot_pair is None:
            return Poly.zero(m.ctx)
        p, q = pivot_pair
        swap(p, t)  # q > p >= t, so position q is untouched by this swap
        swap(q, t + 1)
        pivot = a[t][t + 1]
        for i in range(t + 2, n):
            ati = a[t][i]
            bti = a[t + 1][i]
            for j in range(i + 1, n):
                num = pivot * a[i][j] - ati * a[t + 1][j] + a[t][j] * bti
                val = exact_div(num, prev)
                a[i][j] = val
                a[j][i] = -val
        prev = pivot
    result = a[n - 2][n - 1]
    return result if sign > 0 else -result
