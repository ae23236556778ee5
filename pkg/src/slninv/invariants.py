"""Explicit invariant polynomials of the semi-direct products.

Constructions:
  * pure abelian-part invariants (pairings and maximal minors),
  * Krylov-column determinants det(v | Av | ... | A^(q-1)v | A^q v_I)
    for k = 0 together with their restricted block form,
  * characteristic-polynomial coefficients of the bordered matrix
    [[A, v], [w, 0]] for m = k (not abelian-part invariant),
  * the mixed wedge contraction for 0 < k < m < n together with its
    restricted block form det(U | bU | ... | b^(d-1) U),
  * a generic bidegree-slice invariant finder (exact kernel computation).

Every candidate is normalized to integer content 1 with positive leading
coefficient; invariance is checked by the verify module, not assumed here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .config import Caps, DEFAULT_CAPS, CapExceeded
from .liealg import (
    LieAlgebraData,
    SemidirectSpec,
    symbolic_g_matrix,
    symbolic_v_matrix,
    symbolic_w_matrix,
)
from .matrix import PolyMatrix
from .poly import Poly
from .slices import invariant_slice_basis
from .tensorrep import derivation_apply, equivariant_projection, wedge_of_columns


@dataclass(frozen=True)
class InvariantCandidate:
    """A constructed polynomial with its provenance and degree data."""

    poly: Poly
    construction: str
    bidegree: tuple[int, int] | None
    note: str = ""

    @property
    def total_degree(self) -> int:
        return self.poly.total_degree()

    def validate(self):
        if self.poly.is_zero:
            raise ValueError(f"{self.construction}: zero candidate")
        if self.bidegree is not None and self.poly.bidegree() != self.bidegree:
            raise ValueError(
                f"{self.construction}: declared bidegree {self.bidegree} "
                f"differs from actual {self.poly.bidegree()}"
            )

    def export(self) -> dict:
        return {
            "construction": self.construction,
            "bidegree": list(self.bidegree) if self.bidegree else None,
            "total_degree": self.total_degree,
            "poly": str(self.poly),
            "note": self.note,
        }


def _candidate(poly: Poly, construction: str, bidegree, note: str = "") -> InvariantCandidate:
    cand = InvariantCandidate(poly.integer_normalized(), construction, bidegree, note)
    cand.validate()
    return cand


# ---------------------------------------------------------------------------
# abelian-part invariants
# ---------------------------------------------------------------------------

def pairing_invariant(q: LieAlgebraData, b: int, a: int) -> InvariantCandidate:
    """<w_b, v_a> = sum_j w[b][j] v[j][a]; quadratic, bidegree (0, 2)."""
    v = symbolic_v_matrix(q)
    w = symbolic_w_matrix(q)
    n = q.spec.n
    p = Poly.zero(q.ctx)
    for j in range(n):
        p = p + w.entries[b - 1][j] * v.entries[j][a - 1]
    return _candidate(p, f"pairing({b},{a})", (0, 2))


def v_invariant_generators(q: LieAlgebraData) -> list[InvariantCandidate]:
    """Generators of the pure abelian-part invariant ring, by case.

    k = 0, m >= n: all n x n column minors of v.  k = 0, m < n: empty.
    k > 0: the m*k pairings, plus the maximal minors of v (and of w) when
    they exist, i.e. for m >= n (resp. k >= n).
    """
    spec = q.spec
    n, m, k = spec.n, spec.m, spec.k
    out: list[InvariantCandidate] = []
    if m >= n:
        v = symbolic_v_matrix(q)
        for cols in itertools.combinations(range(m), n):
            label = ",".join(str(c + 1) for c in cols)
            minor = v.submatrix(range(n), cols).det()
            out.append(_candidate(minor, f"column_minor[{label}]", (0, n)))
    if k >= n:
        w = symbolic_w_matrix(q)
        for rows in itertools.combinations(range(k), n):
            label = ",".join(str(r + 1) for r in rows)
            minor = w.submatrix(rows, range(n)).det()
            out.append(_candidate(minor, f"row_minor[{label}]", (0, n)))
    for b in range(1, k + 1):
        for a in range(1, m + 1):
            out.append(pairing_invariant(q, b, a))
    return out


# ---------------------------------------------------------------------------
# k = 0: Krylov-column determinants
# ---------------------------------------------------------------------------

def krylov_parameters(spec: SemidirectSpec) -> tuple[int, int]:
    """(q, r) with n = q*m + r and 0 < r <= m."""
    n, m = spec.n, spec.m
    q = (n - 1) // m
    return q, n - q * m


def krylov_minor_invariant(q: LieAlgebraData, cols: tuple[int, ...]) -> InvariantCandidate:
    """det(v | Av | ... | A^(q-1)v | A^q v_I) for column subset I (1-based).

    Needs k = 0 and m < n; |I| must equal the remainder r of n = q*m + r.
    """
    spec = q.spec
    if spec.k != 0:
        raise ValueError("Krylov minors are defined for k = 0")
    if spec.m >= spec.n:
        raise ValueError("Krylov minors need m < n")
    qq, rr = krylov_parameters(spec)
    cols = tuple(sorted(cols))
    if len(cols) != rr or not all(1 <= c <= spec.m for c in cols):
        raise ValueError(f"column subset must have size {rr} within 1..{spec.m}")
    a = symbolic_g_matrix(q)
    v = symbolic_v_matrix(q)
    blocks = []
    power = v
    for _ in range(qq):
        blocks.append(power)
        power = a @ power
    blocks.append(power.submatrix(range(spec.n), [c - 1 for c in cols]))
    det = PolyMatrix.hstack(blocks).det()
    label = ",".join(map(str, cols))
    bideg = (spec.m * qq * (qq - 1) // 2 + qq * rr, spec.n)
    return _candidate(det, f"krylov_minor[{label}]", bideg)


def all_krylov_minors(q: LieAlgebraData) -> list[InvariantCandidate]:
    qq, rr = krylov_parameters(q.spec)
    return [
        krylov_minor_invariant(q, cols)
        for cols in itertools.combinations(range(1, q.spec.m + 1), rr)
    ]


def restricted_krylov_minor(q: LieAlgebraData, cols: tuple[int, ...]) -> Poly:
    """det(L | bL | ... | b^(q-2)L | b^(q-1)L_I) in the blocks of A.

    L is the lower-left (n-m) x m block of A and b the lower-right square
    block; this is the specialization of the Krylov minor at the standard
    generic abelian-part point, expressed in g-coordinates.
    """
    spec = q.spec
    if spec.k != 0 or spec.m >= spec.n:
        raise ValueError("restricted Krylov minors need k = 0 and m < n")
    qq, rr = krylov_parameters(spec)
    cols = tuple(sorted(cols))
    if len(cols) != rr or not all(1 <= c <= spec.m for c in cols):
        raise ValueError(f"column subset must have size {rr} within 1..{spec.m}")
    n, m = spec.n, spec.m
    a = symbolic_g_matrix(q)
    lower = a.submatrix(range(m, n), range(m))
    beta = a.submatrix(range(m, n), range(m, n))
    blocks = []
    power = lower
    for _ in range(qq - 1):
        blocks.append(power)
        power = beta @ power
    blocks.append(power.submatrix(range(n - m), [c - 1 for c in cols]))
    return PolyMatrix.hstack(blocks).det()


# ---------------------------------------------------------------------------
# m = k: characteristic polynomial coefficients of the bordered matrix
# ---------------------------------------------------------------------------

def bordered_matrix(q: LieAlgebraData) -> PolyMatrix:
    """[[A, v], [w, 0]] of size (n+k) for m = k."""
    spec = q.spec
    if spec.m != spec.k:
        raise ValueError("the bordered matrix construction needs m = k")
    n, k = spec.n, spec.k
    a = symbolic_g_matrix(q)
    v = symbolic_v_matrix(q)
    w = symbolic_w_matrix(q)
    zero = Poly.zero(q.ctx)
    rows = []
    for i in range(n):
        rows.append(list(a.entries[i]) + list(v.entries[i]))
    for b in range(k):
        rows.append(list(w.entries[b]) + [zero] * k)
    return PolyMatrix(rows)


def charpoly_coefficients(mat: PolyMatrix) -> list[Poly]:
    """Sums of principal i x i minors, i = 1..N, via Faddeev-LeVerrier."""
    n = mat.rows
    ctx = mat.ctx
    ident = PolyMatrix.identity(ctx, n)
    b = ident
    coeffs = []
    for j in range(1, n + 1):
        mj = mat @ b
        tr = Poly.zero(ctx)
        for i in range(n):
            tr = tr + mj.entries[i][i]
        cj = tr.scale(Fraction(1, j))
        coeffs.append(cj)  # equals the sum of principal j-minors
        if j < n:
            b = PolyMatrix(
                [
                    [cj - mj.entries[r][c] if r == c else -mj.entries[r][c]
                     for c in range(n)]
                    for r in range(n)
                ]
            )
    return coeffs


def principal_minor_sum(mat: PolyMatrix, size: int) -> Poly:
    """Direct sum of principal minors; the slow cross-check for charpoly."""
    total = Poly.zero(mat.ctx)
    for rows in itertools.combinations(range(mat.rows), size):
        total = total + mat.submatrix(rows, rows).det()
    return total


def charpoly_invariants(q: LieAlgebraData) -> list[InvariantCandidate]:
    """Degree-i coefficients for i = 2k+1 .. n+k.

    These are invariant for the reductive part but not for the abelian part;
    they are inhomogeneous for the bigrading, so no bidegree is declared.
    """
    spec = q.spec
    n, k = spec.n, spec.k
    coeffs = charpoly_coefficients(bordered_matrix(q))
    out = []
    for i in range(2 * k + 1, n + k + 1):
        p = coeffs[i - 1]
        if p.is_zero:
            raise ValueError(f"charpoly coefficient {i} vanished unexpectedly")
        out.append(
            InvariantCandidate(
                p.integer_normalized(),
                f"charpoly({i})",
                p.bidegree() if p.bidegree() is not None else None,
                note="reductive-part invariant only; fails abelian-part invariance",
            )
        )
    return out


# ---------------------------------------------------------------------------
# 0 < k < m: the mixed wedge contraction
# ---------------------------------------------------------------------------

def mixed_parameters(spec: SemidirectSpec) -> tuple[int, int]:
    """(d, r) with n - k = d*(m-k) + r and 0 < r <= m - k."""
    if not 0 < spec.k < spec.m:
        raise ValueError("mixed parameters need 0 < k < m")
    step = spec.m - spec.k
    d = (spec.n - spec.k - 1) // step
    return d, spec.n - spec.k - d * step


def _mixed_bidegree(spec: SemidirectSpec, d: int, r: int) -> tuple[int, int]:
    m, k = spec.m, spec.k
    if r == m - k:
        return ((m - k) * d * (d + 1) // 2, m * (d + 1) + d * k)
    return ((m - k) * (d - 1) * d // 2 + r * d, d * m + (k + r) + d * k)


def restricted_mixed_wedge(q: LieAlgebraData, subset: tuple[int, ...] | None = None) -> Poly:
    """det(U | bU | ... | b^(d-1)U) in the blocks of A (0 < k < m < n).

    U is rows m+1..n, columns k+1..m of A and b the lower-right square
    block.  When the remainder r < m-k a column subset I of size k+r with
    {1..k} contained in it is required and the last block uses the columns
    I minus {1..k}; for I not containing {1..k} the result is identically
    zero, which is returned as the zero polynomial rather than an error.
    """
    spec = q.spec
    if not 0 < spec.k < spec.m < spec.n:
        raise ValueError("mixed construction needs 0 < k < m < n")
    n, m, k = spec.n, spec.m, spec.k
    d, r = mixed_parameters(spec)
    tail_cols = _mixed_subset_tail(spec, d, r, subset)
    if tail_cols is None:
        return Poly.zero(q.ctx)
    a = symbolic_g_matrix(q)
    u = a.submatrix(range(m, n), range(k, m))
    beta = a.submatrix(range(m, n), range(m, n))
    blocks = []
    power = u
    for _ in range(d - 1):
        blocks.append(power)
        power = beta @ power
    blocks.append(power.submatrix(range(n - m), tail_cols))
    return PolyMatrix.hstack(blocks).det()


def _mixed_subset_tail(spec: SemidirectSpec, d: int, r: int,
                       subset: tuple[int, ...] | None) -> list[int] | None:
    """Columns of U used by the last block; None encodes the zero certificate."""
    m, k = spec.m, spec.k
    if r == m - k:
        if subset is not None:
            raise ValueError("no column subset is expected when r = m - k")
        return list(range(m - k))
    if subset is None:
        raise ValueError(f"a column subset of size {k + r} is required when r < m - k")
    subset = tuple(sorted(subset))
    if len(subset) != k + r or not all(1 <= c <= m for c in subset):
        raise ValueError(f"column subset must have size {k + r} within 1..{m}")
    if not set(range(1, k + 1)) <= set(subset):
        return None  # the contraction vanishes identically for such subsets
    return [c - k - 1 for c in subset if c > k]


def mixed_wedge_invariant(q: LieAlgebraData, subset: tuple[int, ...] | None = None,
                          caps: Caps = DEFAULT_CAPS) -> InvariantCandidate:
    """The wedge/tensor contraction invariant for 0 < k < m < n.

    Tensor factors (wedges of the abelian-part columns, moved by powers of
    A through the derivation action) are projected onto the highest-weight
    submodule of S^d(Lambda^k) by the unique equivariant map and contracted
    with the d-th power of the wedge of the w-rows.
    """
    spec = q.spec
    if not 0 < spec.k < spec.m < spec.n:
        raise ValueError("mixed construction needs 0 < k < m < n")
    n, m, k = spec.n, spec.m, spec.k
    d, r = mixed_parameters(spec)
    label = "" if subset is None else "[" + ",".join(map(str, sorted(subset))) + "]"
    tail = _mixed_subset_tail(spec, d, r, subset)
    if tail is None:
        return InvariantCandidate(
            Poly.zero(q.ctx), f"wedge_mixed{label}", None,
            note="zero certificate: subset misses a mandatory column",
        )
    factor_degrees = [m] * d + [k + r]
    dim_w = 1
    for t in factor_degrees:
        dim_w *= math.comb(n, t)
    if dim_w > caps.tensor_space:
        raise CapExceeded("tensor_space", dim_w, caps.tensor_space)

    a = symbolic_g_matrix(q)
    v = symbolic_v_matrix(q)
    w = symbolic_w_matrix(q)
    phi_v = wedge_of_columns(v, list(range(m)))
    factors = [phi_v]
    # factor s is the iterated derivation rho(A)^(s*(m-k)) of phi(v); the
    # matrix-power reading rho(A^s) breaks abelian-part invariance for d >= 2
    moved = phi_v
    for s in range(1, d + 1):
        if s == d and r < m - k:
            last = wedge_of_columns(v, [c - 1 for c in sorted(subset)])
            for _ in range(d * r):
                last = derivation_apply(a.entries, last, n)
            factors.append(last)
        else:
            for _ in range(m - k):
                moved = derivation_apply(a.entries, moved, n)
            factors.append(moved)

    proj = equivariant_projection(n, factor_degrees, k, d)
    tensor_coeffs: dict[int, Poly] = {}
    index_maps = proj.tensor.factor_index
    for combo in itertools.product(*(f.items() for f in factors)):
        flat = proj.tensor.flat_index(
            tuple(index_maps[fi][j_set] for fi, (j_set, _) in enumerate(combo))
        )
        prod = combo[0][1]
        for _, coeff in combo[1:]:
            prod = prod * coeff
        if flat in tensor_coeffs:
            tensor_coeffs[flat] = tensor_coeffs[flat] + prod
        else:
            tensor_coeffs[flat] = prod

    coords = proj.apply(tensor_coeffs, q.ctx)

    # contract with the d-th power of the wedge of the w rows: the pairing
    # of a sym-basis monomial with phi~(w)^d is the product of the k x k
    # minors of w over its wedge factors
    minors: dict[int, Poly] = {}
    for pos, j_set in enumerate(proj.target.wedges):
        minor = w.submatrix(range(k), j_set).det()
        if not minor.is_zero:
            minors[pos] = minor
    total = Poly.zero(q.ctx)
    for t, coord in enumerate(coords):
        if coord.is_zero:
            continue
        row_pair = Poly.zero(q.ctx)
        for sym_pos, c in proj.rows[t].items():
            mono = proj.target.basis[sym_pos]
            prod = Poly.const(q.ctx, c)
            ok = True
            for wedge_pos in mono:
                mp = minors.get(wedge_pos)
                if mp is None:
                    ok = False
                    break
                prod = prod * mp
            if ok:
                row_pair = row_pair + prod
        if not row_pair.is_zero:
            total = total + coord * row_pair
    if total.is_zero:
        raise ValueError("mixed wedge contraction vanished; construction mismatch")
    return _candidate(total, f"wedge_mixed{label}", _mixed_bidegree(spec, d, r))


def all_mixed_wedge_invariants(q: LieAlgebraData, caps: Caps = DEFAULT_CAPS) -> list[InvariantCandidate]:
    spec = q.spec
    d, r = mixed_parameters(spec)
    if r == spec.m - spec.k:
        return [mixed_wedge_invariant(q, caps=caps)]
    out = []
    for tail in itertools.combinations(range(spec.k + 1, spec.m + 1), r):
        subset = tuple(range(1, spec.k + 1)) + tail
        out.append(mixed_wedge_invariant(q, subset, caps=caps))
    return out


# ---------------------------------------------------------------------------
# generic finder
# ---------------------------------------------------------------------------

def invariant_finder(q: LieAlgebraData, bidegree: tuple[int, int],
                     caps: Caps = DEFAULT_CAPS) -> list[InvariantCandidate]:
    """Canonical basis of the invariants of one bidegree, as candidates."""
    basis = invariant_slice_basis(q, bidegree, caps=caps)
    a, b = bidegree
    return [
        _candidate(p, f"finder({a},{b})#{t}", bidegree,
                   note="kernel basis vector of the coadjoint derivations")
        for t, p in enumerate(basis)
    ]
