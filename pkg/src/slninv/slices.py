"""Bihomogeneous invariant slices, computed by exact linear algebra.

A symmetric invariant is supported on monomials of Cartan weight zero (all
basis coordinates are weight vectors, so the Cartan derivations act
diagonally on monomials).  The slice of invariants of a fixed bidegree is
therefore the kernel of the non-Cartan coadjoint derivations restricted to
the weight-zero monomials of that bidegree.  The kernel basis comes from a
reduced echelon form over the rationals, so it is canonical.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .config import Caps, DEFAULT_CAPS, CapExceeded
from .liealg import LieAlgebraData, lie_derivative
from .linalg import SparseRowReducer
from .poly import Monomial, Poly

_F0 = Fraction(0)


def slice_monomial_count(q: LieAlgebraData, bidegree: tuple[int, int]) -> int:
    a, b = bidegree
    return _compositions_count(q.dim_g, a) * _compositions_count(q.dim_v, b)


def _compositions_count(nvars: int, deg: int) -> int:
    import math

    return math.comb(nvars + deg - 1, deg) if deg >= 0 else 0


def _monomials(var_indices: list[int], deg: int):
    """All monomials of the given total degree over the listed variables."""
    if deg == 0:
        yield ()
        return
    for combo in itertools.combinations_with_replacement(var_indices, deg):
        exps: dict[int, int] = {}
        for v in combo:
            exps[v] = exps.get(v, 0) + 1
        yield tuple(sorted(exps.items()))


def cartan_indices(q: LieAlgebraData) -> list[int]:
    n = q.spec.n
    # H(i) basis elements sit after the n(n-1) off-diagonal matrices
    return list(range(n * (n - 1), n * n - 1))


def variable_weights(q: LieAlgebraData) -> list[list[Fraction]]:
    """weights[h][j] with [H_h, xi_j] = weights[h][j] * xi_j."""
    weights = []
    for h in cartan_indices(q):
        row = [_F0] * q.dim
        for j in range(q.dim):
            entries = q.bracket(h, j)
            if not entries:
                continue
            if len(entries) != 1 or entries[0][0] != j:
                raise AssertionError("basis is expected to consist of weight vectors")
            row[j] = entries[0][1]
        weights.append(row)
    return weights


def weight_zero_monomials(q: LieAlgebraData, bidegree: tuple[int, int],
                          caps: Caps = DEFAULT_CAPS) -> list[Monomial]:
    """Weight-zero monomials of the bidegree, in a fixed deterministic order."""
    a, b = bidegree
    count = slice_monomial_count(q, bidegree)
    if count > caps.finder_monomials:
        raise CapExceeded("finder_monomials", count, caps.finder_monomials)
    weights = variable_weights(q)
    out = []
    g_vars = list(range(q.dim_g))
    v_vars = list(range(q.dim_g, q.dim))
    v_monos = list(_monomials(v_vars, b))
    v_weights = [
        [sum(row[v] * e for v, e in mono) for row in weights] for mono in v_monos
    ]
    for g_mono in _monomials(g_vars, a):
        gw = [sum(row[v] * e for v, e in g_mono) for row in weights]
        for v_mono, vw in zip(v_monos, v_weights):
            if all(x + y == 0 for x, y in zip(gw, vw)):
                out.append(tuple(sorted(g_mono + v_mono)))
    return out


def invariant_slice_basis(q: LieAlgebraData, bidegree: tuple[int, int],
                          caps: Caps = DEFAULT_CAPS) -> list[Poly]:
    """Canonical basis of the invariants of the given bidegree.

    Kernel of the stacked coadjoint derivations on the weight-zero monomial
    slice; the Cartan derivations are exactly the weight-zero condition.
    """
    monos = weight_zero_monomials(q, bidegree, caps=caps)
    if not monos:
        return []
    col_of = {m: i for i, m in enumerate(monos)}
    cartan = set(cartan_indices(q))
    reducer = SparseRowReducer()
    for i in range(q.dim):
        if i in cartan:
            continue
        row_map = q.derivation_row(i)
        if not row_map:
            continue
        # constraint rows: coefficient of every image monomial must vanish
        rows: dict[Monomial, dict[int, Fraction]] = {}
        for col, mono in enumerate(monos):
            image = lie_derivative(q, i, Poly(q.ctx, {mono: Fraction(1)}))
            for m, c in image.terms.items():
                rows.setdefault(m, {})[col] = c
        for m in sorted(rows, key=lambda mm: tuple(mm)):
            reducer.add(rows[m])
    kernel = reducer.kernel(len(monos))
    basis = []
    for vec in kernel:
        p = Poly(q.ctx, {monos[i]: c for i, c in enumerate(vec) if c})
        basis.append(p.integer_normalized())
    return basis
