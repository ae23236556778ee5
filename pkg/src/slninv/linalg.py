"""Exact linear algebra over the rationals (and mod-p rank for speed).

Dense routines take lists of Fraction lists.  `SparseRowReducer` maintains a
reduced row echelon form incrementally for large sparse systems (kernel
computations for the invariant finder and the equivariant solver); the final
reduced form depends only on the row space, so results are deterministic
regardless of insertion order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

MERSENNE61 = (1 << 61) - 1


def rank_modp(rows: Sequence[Sequence[int]], p: int = MERSENNE61) -> int:
    """Rank of an integer matrix over GF(p).

    Always a lower bound for the rational rank; equality fails only when p
    divides all maximal-rank minors, which is vanishingly unlikely for the
    huge fixed prime used here.
    """
    a = [[x % p for x in row] for row in rows]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(a)) if a[r][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = pow(a[rank][col], p - 2, p)
        row_r = a[rank]
        for r in range(rank + 1, len(a)):
            f = a[r][col]
            if f:
                mult = f * inv % p
                row = a[r]
                for c in range(col, ncols):
                    row[c] = (row[c] - mult * row_r[c]) % p
        rank += 1
        if rank == len(a):
            break
    return rank


def rank_frac(rows: Sequence[Sequence[Fraction]]) -> int:
    a = [list(row) for row in rows]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(a)) if a[r][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        row_r = a[rank]
        inv = 1 / row_r[col]
        for r in range(rank + 1, len(a)):
            f = a[r][col]
            if f:
                mult = f * inv
                row = a[r]
                for c in range(col, ncols):
                    row[c] -= mult * row_r[c]
        rank += 1
        if rank == len(a):
            break
    return rank


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot column list."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][col]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        f = a[r][col]
        a[r] = [x / f for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col]:
                m = a[i][col]
                a[i] = [x - m * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


class SparseRowReducer:
    """Incremental reduced echelon form for sparse rational rows."""

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: dict[int, Fraction]) -> bool:
        """Reduce a row against the current pivots; True if it added rank."""
        row = {c: v for c, v in row.items() if v}
        while row:
            lead = min(row)
            pivot = self.pivots.get(lead)
            if pivot is None:
                f = row[lead]
                self.pivots[lead] = {c: v / f for c, v in row.items()}
                return True
            f = row[lead]
            for c, v in pivot.items():
                s = row.get(c, _F0) - f * v
                if s:
                    row[c] = s
                elif c in row:
                    del row[c]
        return False

    def _fully_reduce(self):
        for lead in sorted(self.pivots, reverse=True):
            row = self.pivots[lead]
            for other in [c for c in row if c != lead and c in self.pivots]:
                f = row[other]
                if not f:
                    continue
                for c, v in self.pivots[other].items():
                    s = row.get(c, _F0) - f * v
                    if s:
                        row[c] = s
                    elif c in row:
                        del row[c]

    def kernel(self, ncols: int) -> list[list[Fraction]]:
        """Canonical kernel basis (one vector per free column, ascending)."""
        self._fully_reduce()
        free = [c for c in range(ncols) if c not in self.pivots]
        basis = []
        for f in free:
            vec = [_F0] * ncols
            vec[f] = Fraction(1)
            for lead, row in self.pivots.items():
                coeff = row.get(f)
                if coeff:
                    vec[lead] = -coeff
            basis.append(vec)
        return basis


_F0 = Fraction(0)


def solve_in_rref_rows(
    rref_rows: Sequence[dict[int, Fraction]],
    leads: Sequence[int],
    vec: dict[int, Fraction],
) -> list[Fraction] | None:
    """Coordinates of `vec` in the span of reduced rows, or None.

    `rref_rows[i]` has leading column `leads[i]` with coefficient 1 and
    zeros at the other leading columns.
    """
    residual = {c: v for c, v in vec.items() if v}
    coords = [_F0] * len(rref_rows)
    lead_pos = {lead: i for i, lead in enumerate(leads)}
    while residual:
        lead = min(residual)
        i = lead_pos.get(lead)
        if i is None:
            return None
        f = residual[lead]
        coords[i] = f
        for c, v in rref_rows[i].items():
            s = residual.get(c, _F0) - f * v
            if s:
                residual[c] = s
            elif c in residual:
                del residual[c]
    return coords
