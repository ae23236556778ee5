"""The semi-direct products q = sl_n |x (m copies of (C^n)* + k copies of C^n).

Basis conventions
-----------------
g-part: elementary matrices E(i,j) for i != j in row-major order, followed by
H(i) = E(i,i) - E(i+1,i+1) for i = 1..n-1.  Abelian part: covector copies
cov(a,j) for a = 1..m, j = 1..n (basis of (C^n)*), then vector copies
vec(b,j) for b = 1..k.  Brackets are computed from matrix actions, not from
hand-written delta formulas: [xi, u] = rho(xi) u with rho the dual of the
defining representation on covector copies and the defining representation on
vector copies.

Coordinates on q* are dual to this basis (context variables g1.., v1..).  The
g*-part of a point is materialized as an n x n matrix through the trace form:
the symbolic matrix A satisfies trace(A * xi_t) = g_t for every g-basis
element xi_t, so all determinantal formulas read off matrix entries directly.

Structure constants of this family are integers, which keeps every evaluation
exact and lets the randomized rank path work modulo a large prime.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .config import Caps, DEFAULT_CAPS, CapExceeded
from .gcd import gcd_multi
from .linalg import rank_frac, rank_modp, rref
from .matrix import PfaffianEngine, PolyMatrix
from .poly import Poly, VarContext, try_exact_div

_F0 = Fraction(0)
_F1 = Fraction(1)

RANDOM_COORD_BOUND = 100  # evaluation points use integers in [-100, 100]


class JacobiError(AssertionError):
    """The assembled structure constants violate the Jacobi identity."""


class RankDetectionError(RuntimeError):
    """Every principal Pfaffian of the detected rank vanished identically."""


@dataclass(frozen=True)
class SemidirectSpec:
    """Family parameters (n, m, k): n >= 2, m >= 1, m >= k >= 0."""

    n: int
    m: int
    k: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if not 0 <= self.k <= self.m:
            raise ValueError("k must satisfy 0 <= k <= m")

    @property
    def dim_g(self) -> int:
        return self.n * self.n - 1

    @property
    def dim_v(self) -> int:
        return (self.m + self.k) * self.n

    @property
    def dim_q(self) -> int:
        return self.dim_g + self.dim_v

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n, self.m, self.k)


# ---------------------------------------------------------------------------
# basis bookkeeping
# ---------------------------------------------------------------------------

def _sl_basis(n: int) -> list[tuple[str, tuple[tuple[Fraction, ...], ...]]]:
    basis = []
    for i in range(n):
        for j in range(n):
            if i != j:
                mat = [[_F0] * n for _ in range(n)]
                mat[i][j] = _F1
                basis.append((f"E({i + 1},{j + 1})", tuple(map(tuple, mat))))
    for i in range(n - 1):
        mat = [[_F0] * n for _ in range(n)]
        mat[i][i] = _F1
        mat[i + 1][i + 1] = -_F1
        basis.append((f"H({i + 1})", tuple(map(tuple, mat))))
    return basis


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def _decompose_sl(mat, n: int) -> dict[int, Fraction]:
    """Coordinates of a traceless matrix in the E/H basis."""
    coords: dict[int, Fraction] = {}
    pos = 0
    for i in range(n):
        for j in range(n):
            if i != j:
                if mat[i][j]:
                    coords[pos] = mat[i][j]
                pos += 1
    # diagonal = sum_t c_t (E_tt - E_{t+1,t+1}) with c_t the partial sums
    acc = _F0
    for t in range(n - 1):
        acc += mat[t][t]
        if acc:
            coords[pos + t] = acc
    return coords


class LieAlgebraData:
    """Basis labels plus sparse structure constants for one family member."""

    def __init__(self, spec: SemidirectSpec, labels: list[str],
                 brackets: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]]):
        self.spec = spec
        self.labels = labels
        self.dim = len(labels)
        self.dim_g = spec.dim_g
        self.dim_v = spec.dim_v
        self._brackets = brackets  # keys (i, j) with i < j only
        self.ctx = VarContext(self.dim_g, self.dim_v)
        self._structure_matrix: PolyMatrix | None = None
        self._derivation_rows: dict[int, dict[int, Poly]] = {}

    def bracket(self, i: int, j: int) -> tuple[tuple[int, Fraction], ...]:
        if i == j:
            return ()
        if i < j:
            return self._brackets.get((i, j), ())
        return tuple((k, -c) for k, c in self._brackets.get((j, i), ()))

    def v_index(self, kind: str, copy: int, component: int) -> int:
        """Global basis index of cov(copy, component) or vec(copy, component); 1-based args."""
        spec = self.spec
        if kind == "cov":
            if not (1 <= copy <= spec.m and 1 <= component <= spec.n):
                raise IndexError("covector label out of range")
            return self.dim_g + (copy - 1) * spec.n + (component - 1)
        if kind == "vec":
            if not (1 <= copy <= spec.k and 1 <= component <= spec.n):
                raise IndexError("vector label out of range")
            return self.dim_g + (spec.m + copy - 1) * spec.n + (component - 1)
        raise ValueError(f"unknown abelian-part kind {kind!r}")

    def structure_constants_table(self) -> str:
        lines = [f"# basis: {', '.join(self.labels)}"]
        for (i, j), entries in sorted(self._brackets.items()):
            rhs = ", ".join(f"({k}, {c})" for k, c in entries)
            lines.append(f"({i},{j}) -> [{rhs}]")
        return "\n".join(lines)

    def derivation_row(self, i: int) -> dict[int, Poly]:
        """Sparse row j -> sum_k c_{ij}^k x_k used by the coadjoint derivation."""
        row = self._derivation_rows.get(i)
        if row is None:
            row = {}
            for j in range(self.dim):
                entries = self.bracket(i, j)
                if entries:
                    row[j] = Poly(self.ctx, {((k, 1),): c for k, c in entries})
            self._derivation_rows[i] = row
        return row


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def build_semidirect(spec: SemidirectSpec, verify: str = "auto",
                     caps: Caps = DEFAULT_CAPS, seed: int = 0) -> LieAlgebraData:
    """Assemble structure constants and (by default) verify Jacobi.

    verify: "auto" (exhaustive up to the cap, sampled above), "exhaustive",
    "sampled", or "none".
    """
    n, m, k = spec.n, spec.m, spec.k
    sl = _sl_basis(n)
    labels = [name for name, _ in sl]
    labels += [f"cov({a},{j})" for a in range(1, m + 1) for j in range(1, n + 1)]
    labels += [f"vec({b},{j})" for b in range(1, k + 1) for j in range(1, n + 1)]
    dim_g = spec.dim_g

    brackets: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}

    def put(i: int, j: int, coords: dict[int, Fraction]):
        if not coords:
            return
        entries = tuple(sorted(coords.items()))
        if i < j:
            brackets[(i, j)] = entries
        else:
            brackets[(j, i)] = tuple((kk, -c) for kk, c in entries)

    # g x g: matrix commutators decomposed in the basis
    mats = [mat for _, mat in sl]
    for s in range(dim_g):
        for t in range(s + 1, dim_g):
            comm = [
                [x - y for x, y in zip(r1, r2)]
                for r1, r2 in zip(_mat_mul(mats[s], mats[t]), _mat_mul(mats[t], mats[s]))
            ]
            put(s, t, _decompose_sl(comm, n))

    # g x covector copies: rho*(xi) f_l = -(f_l o xi) = -sum_j xi[l][j] f_j
    offset_cov = dim_g
    for s in range(dim_g):
        xi = mats[s]
        for a in range(m):
            for l in range(n):
                coords = {}
                for j in range(n):
                    if xi[l][j]:
                        coords[offset_cov + a * n + j] = -xi[l][j]
                put(s, offset_cov + a * n + l, coords)

    # g x vector copies: rho(xi) e_l = sum_j xi[j][l] e_j
    offset_vec = dim_g + m * n
    for s in range(dim_g):
        xi = mats[s]
        for b in range(k):
            for l in range(n):
                coords = {}
                for j in range(n):
                    if xi[j][l]:
                        coords[offset_vec + b * n + j] = xi[j][l]
                put(s, offset_vec + b * n + l, coords)

    q = LieAlgebraData(spec, labels, brackets)

    if verify == "auto":
        verify = "exhaustive" if q.dim <= caps.jacobi_exhaustive_dim else "sampled"
    if verify == "exhaustive":
        verify_jacobi(q)
    elif verify == "sampled":
        verify_jacobi(q, samples=caps.jacobi_samples, seed=seed)
    elif verify != "none":
        raise ValueError(f"unknown verify mode {verify!r}")
    return q


def verify_jacobi(q: LieAlgebraData, samples: int | None = None, seed: int = 0):
    """Check [[x,y],z] + [[y,z],x] + [[z,x],y] = 0 on basis triples.

    Exhaustive when samples is None, otherwise on seeded random triples.
    """
    dim = q.dim
    if samples is None:
        triples = itertools.combinations(range(dim), 3)
    else:
        rng = random.Random(seed)
        triples = (tuple(sorted(rng.sample(range(dim), 3))) for _ in range(samples))
    for i, j, l in triples:
        acc: dict[int, Fraction] = {}
        for a, b, c in ((i, j, l), (j, l, i), (l, i, j)):
            for t, coeff in q.bracket(a, b):
                for u, coeff2 in q.bracket(t, c):
                    s = acc.get(u, _F0) + coeff * coeff2
                    if s:
                        acc[u] = s
                    elif u in acc:
                        del acc[u]
        if acc:
            raise JacobiError(f"Jacobi fails on basis triple ({i},{j},{l})")


# ---------------------------------------------------------------------------
# structure matrix and coadjoint derivations
# ---------------------------------------------------------------------------

def structure_matrix(q: LieAlgebraData) -> PolyMatrix:
    """Skew matrix of linear forms M[i][j] = sum_k c_{ij}^k x_k."""
    if q._structure_matrix is None:
        zero = Poly.zero(q.ctx)
        rows = [[zero] * q.dim for _ in range(q.dim)]
        for (i, j), entries in q._brackets.items():
            p = Poly(q.ctx, {((k, 1),): c for k, c in entries})
            rows[i][j] = p
            rows[j][i] = -p
        q._structure_matrix = PolyMatrix(rows)
    return q._structure_matrix


def lie_derivative(q: LieAlgebraData, i: int, f: Poly) -> Poly:
    """Coadjoint derivation of f by basis element i:

        sum_{j,k} c_{ij}^k x_k dF/dx_j

    A polynomial is a symmetric invariant iff this vanishes for every i.
    """
    if f.ctx != q.ctx:
        raise ValueError("polynomial lives in a different coordinate context")
    row = q.derivation_row(i)
    total = Poly.zero(q.ctx)
    if not row:
        return total
    for j, linform in row.items():
        d = f.partial_derivative(j)
        if not d.is_zero:
            total = total + linform * d
    return total


# ---------------------------------------------------------------------------
# index computations
# ---------------------------------------------------------------------------

def _evaluated_structure_int(q: LieAlgebraData, point: list[int]) -> list[list[int]]:
    rows = [[0] * q.dim for _ in range(q.dim)]
    for (i, j), entries in q._brackets.items():
        val = 0
        for k, c in entries:
            # structure constants of this family are integers
            assert c.denominator == 1
            val += c.numerator * point[k]
        rows[i][j] = val
        rows[j][i] = -val
    return rows


def random_points(nvars: int, trials: int, seed: int,
                  bound: int = RANDOM_COORD_BOUND) -> list[list[int]]:
    rng = random.Random(seed)
    return [[rng.randint(-bound, bound) for _ in range(nvars)] for _ in range(trials)]


def generic_rank(q: LieAlgebraData, trials: int = 5, seed: int = 0,
                 method: str = "modp") -> int:
    """Max rank of the structure matrix over seeded random integer points."""
    if trials < 1:
        raise ValueError("need at least one trial")
    best = 0
    for point in random_points(q.dim, trials, seed):
        m = _evaluated_structure_int(q, point)
        if method == "modp":
            r = rank_modp(m)
        elif method == "exact":
            r = rank_frac([[Fraction(x) for x in row] for row in m])
        else:
            raise ValueError(f"unknown rank method {method!r}")
        best = max(best, r)
    return best


def index_by_rank(q: LieAlgebraData, trials: int = 5, seed: int = 0,
                  method: str = "modp") -> int:
    """dim q minus the generic rank of the structure matrix.

    Probabilistically exact (Schwartz-Zippel) and deterministic per seed.
    """
    return q.dim - generic_rank(q, trials=trials, seed=seed, method=method)


class StabilizerKind(Enum):
    ZERO = "zero"
    SPECIAL_LINEAR = "sl"
    SL_SEMIDIRECT = "sl_semidirect"


@dataclass(frozen=True)
class GenericStabilizerSpec:
    """Generic stabilizer of the g-action on V*, as abstract Lie algebra data."""

    kind: StabilizerKind
    size: int  # s in sl_s (0 for the zero algebra)
    copies: int  # c in sl_s |x c C^s (0 unless SL_SEMIDIRECT)

    @property
    def dim(self) -> int:
        if self.kind is StabilizerKind.ZERO:
            return 0
        if self.kind is StabilizerKind.SPECIAL_LINEAR:
            return self.size * self.size - 1
        return self.size * self.size - 1 + self.copies * self.size

    @property
    def ind(self) -> int:
        if self.kind is StabilizerKind.ZERO:
            return 0
        if self.kind is StabilizerKind.SPECIAL_LINEAR:
            return self.size - 1
        if self.size == 1:
            return self.copies  # abelian
        return index_by_rais(SemidirectSpec(self.size, self.copies, 0))

    @property
    def b(self) -> Fraction:
        return Fraction(self.dim + self.ind, 2)

    def describe(self) -> str:
        if self.kind is StabilizerKind.ZERO:
            return "0"
        if self.kind is StabilizerKind.SPECIAL_LINEAR:
            return f"sl({self.size})"
        if self.size == 1:
            return f"abelian C^{self.copies}"
        return f"sl({self.size}) |x {self.copies} C^{self.size}"


def generic_stabilizer(spec: SemidirectSpec) -> GenericStabilizerSpec:
    """Case analysis for the stabilizer of a generic point of V*.

    m >= n, or m = k = n-1        -> 0
    k = 0, m < n                  -> sl(n-m) |x m C^(n-m)
    0 < k = m < n-1               -> sl(n-k)
    0 < k < m < n                 -> sl(n-m) |x (m-k) C^(n-m)
    """
    n, m, k = spec.n, spec.m, spec.k
    if m >= n or (m == k == n - 1):
        return GenericStabilizerSpec(StabilizerKind.ZERO, 0, 0)
    if k == m:  # 0 < k = m < n-1
        return GenericStabilizerSpec(StabilizerKind.SPECIAL_LINEAR, n - k, 0)
    return GenericStabilizerSpec(StabilizerKind.SL_SEMIDIRECT, n - m, m - k)


def index_by_rais(spec: SemidirectSpec) -> int:
    """Index through the semi-direct-product index formula,

        ind q = dim V - (dim g - dim g_x) + ind g_x,

    applied recursively to the stabilizers of this family.
    """
    gx = generic_stabilizer(spec)
    return spec.dim_v - (spec.dim_g - gx.dim) + gx.ind


def b_of_q(spec: SemidirectSpec) -> Fraction:
    """(ind q + dim q) / 2; satisfies b(q) = b(g_x) + dim V."""
    return Fraction(index_by_rais(spec) + spec.dim_q, 2)


# ---------------------------------------------------------------------------
# symbolic coordinate matrices on q*
# ---------------------------------------------------------------------------

def _h_dual_matrices(n: int) -> list[list[list[Fraction]]]:
    """Trace-form dual basis of the H(i), as diagonal matrices."""
    gram = [[Fraction(0)] * (n - 1) for _ in range(n - 1)]
    for i in range(n - 1):
        gram[i][i] = Fraction(2)
        if i + 1 < n - 1:
            gram[i][i + 1] = Fraction(-1)
            gram[i + 1][i] = Fraction(-1)
    # invert via rref of [gram | I]
    aug = [row + [Fraction(1) if i == j else Fraction(0) for j in range(n - 1)]
           for i, row in enumerate(gram)]
    reduced, pivots = rref(aug)
    assert pivots == list(range(n - 1)), "Cartan Gram matrix must be invertible"
    inv = [row[n - 1:] for row in reduced]
    duals = []
    for i in range(n - 1):
        diag = [Fraction(0)] * n
        for j in range(n - 1):
            diag[j] += inv[i][j]
            diag[j + 1] -= inv[i][j]
        duals.append([[diag[r] if r == c else Fraction(0) for c in range(n)]
                      for r in range(n)])
    return duals


def symbolic_g_matrix(q: LieAlgebraData) -> PolyMatrix:
    """n x n matrix A with trace(A xi_t) = g_t for every g-basis element."""
    n = q.spec.n
    zero = Poly.zero(q.ctx)
    rows = [[zero for _ in range(n)] for _ in range(n)]
    pos = 0
    for i in range(n):
        for j in range(n):
            if i != j:
                # dual of E(i,j) is E(j,i)
                rows[j][i] = rows[j][i] + Poly.variable(q.ctx, pos)
                pos += 1
    for t, dual in enumerate(_h_dual_matrices(n)):
        var = Poly.variable(q.ctx, pos + t)
        for r in range(n):
            if dual[r][r]:
                rows[r][r] = rows[r][r] + var.scale(dual[r][r])
    return PolyMatrix(rows)


def symbolic_v_matrix(q: LieAlgebraData) -> PolyMatrix:
    """n x m matrix of the covector-copy components of a point of V*.

    Column a holds the vector dual to covector copy a.
    """
    n, m = q.spec.n, q.spec.m
    return PolyMatrix([
        [Poly.variable(q.ctx, q.v_index("cov", a, j)) for a in range(1, m + 1)]
        for j in range(1, n + 1)
    ])


def symbolic_w_matrix(q: LieAlgebraData) -> PolyMatrix:
    """k x n matrix of the vector-copy components (covectors) of a point of V*."""
    n, k = q.spec.n, q.spec.k
    if k == 0:
        raise ValueError("no vector copies for k = 0")
    return PolyMatrix([
        [Poly.variable(q.ctx, q.v_index("vec", b, j)) for j in range(1, n + 1)]
        for b in range(1, k + 1)
    ])


# ---------------------------------------------------------------------------
# fundamental semi-invariant
# ---------------------------------------------------------------------------

_MODP = (1 << 61) - 1


def _upoly_gcd_modp(a: list[int], b: list[int], p: int = _MODP) -> list[int]:
    def trim(c):
        while c and c[-1] % p == 0:
            c.pop()
        return c

    a, b = trim([x % p for x in a]), trim([x % p for x in b])
    while b:
        inv = pow(b[-1], p - 2, p)
        while len(a) >= len(b):
            f = a[-1] * inv % p
            s = len(a) - len(b)
            for i in range(len(b)):
                a[s + i] = (a[s + i] - f * b[i]) % p
            trim(a)
            if not a:
                break
        a, b = b, a
    return a


def _random_line(q: LieAlgebraData, moving_g: bool, rng: random.Random,
                 p: int = _MODP) -> list[list[int]]:
    """Coefficient lists x_v = beta + alpha*t, with alpha = 0 off the moving block."""
    line = []
    for v in range(q.ctx.nvars):
        beta = rng.randrange(1, p)
        moving = (v < q.dim_g) == moving_g
        line.append([beta, rng.randrange(1, p)] if moving else [beta])
    return line


def _line_image_modp(pf: Poly, line: list[list[int]], p: int = _MODP) -> list[int]:
    """pf restricted to a line; dense univariate coefficients mod p.

    The image degree is the degree of pf along the moving block for a
    generic line.
    """
    max_e = max((max((e for _, e in m), default=0) for m in pf.terms), default=0)
    tables: list[list[list[int]]] = []
    for base in line:
        pows = [[1]]
        cur = [1]
        for _ in range(max_e):
            nxt = [0] * (len(cur) + len(base) - 1)
            for i, ci in enumerate(cur):
                for j, bj in enumerate(base):
                    nxt[i + j] = (nxt[i + j] + ci * bj) % p
            cur = nxt
            pows.append(cur)
        tables.append(pows)
    out = [0]
    for mono, coeff in pf.terms.items():
        c = coeff.numerator % p * pow(coeff.denominator, p - 2, p) % p
        term = [c]
        for v, e in mono:
            t = tables[v][e]
            nxt = [0] * (len(term) + len(t) - 1)
            for i, ci in enumerate(term):
                if ci:
                    for j, tj in enumerate(t):
                        nxt[i + j] = (nxt[i + j] + ci * tj) % p
            term = nxt
        if len(term) > len(out):
            out.extend([0] * (len(term) - len(out)))
        for i, ci in enumerate(term):
            out[i] = (out[i] + ci) % p
    while out and out[-1] % p == 0:
        out.pop()
    return out


def _estimate_gcd_bidegree(pfs: list[Poly], q: LieAlgebraData, seed: int) -> tuple[int, int]:
    """Seeded probabilistic bidegree of the gcd of a list of bihomogeneous polys."""
    est = []
    for moving_g in (True, False):
        best = None
        for trial in range(2):
            rng = random.Random((seed, moving_g, trial))
            line = _random_line(q, moving_g, rng)
            g: list[int] | None = None
            for pf in pfs:
                img = _line_image_modp(pf, line)
                g = img if g is None else _upoly_gcd_modp(g, img)
                if g is not None and len(g) <= 1:
                    break
            d = max(len(g) - 1, 0) if g else 0
            best = d if best is None else min(best, d)
        est.append(best or 0)
    return (est[0], est[1])


def fundamental_semi_invariant(q: LieAlgebraData, seed: int = 0,
                               caps: Caps = DEFAULT_CAPS,
                               trials: int | None = None) -> Poly:
    """GCD of the Pfaffians of all principal minors of rank size.

    The rank of the structure matrix is detected by seeded random
    evaluation; principal index subsets are enumerated lexicographically and
    identically-zero Pfaffians are skipped.  Because the group here is
    semisimple, the GCD is itself a symmetric invariant, so the fast path
    estimates its bidegree from seeded line images, solves for the unique
    invariant of that bidegree, and verifies it by exact division of every
    Pfaffian.  When the fast path does not apply, the GCD is accumulated
    incrementally with early exit at 1.  The result is content-1 with a
    positive leading coefficient.
    """
    if q.dim > caps.semiinvariant_dim:
        raise CapExceeded("semiinvariant_dim", q.dim, caps.semiinvariant_dim)
    if trials is None:
        trials = caps.rank_trials
    rank = generic_rank(q, trials=trials, seed=seed)
    if rank % 2:
        raise RankDetectionError(f"detected odd rank {rank}; retry with a new seed")
    m = structure_matrix(q)
    engine = PfaffianEngine(m)
    one = Poly.const(q.ctx, 1)
    pfs = []
    for subset in itertools.combinations(range(q.dim), rank):
        pf = engine.pf(subset)
        if not pf.is_zero:
            pfs.append(pf)
    if not pfs:
        raise RankDetectionError(
            "all principal Pfaffians of the detected rank vanish; retry with a new seed"
        )

    candidate = _semi_invariant_fast_path(q, pfs, seed, caps)
    if candidate is not None:
        return candidate

    g = pfs[0].integer_normalized()
    for pf in pfs[1:]:
        if g.is_constant():
            return one
        if try_exact_div(pf, g) is None:
            g = gcd_multi(g, pf)
    return one if g.is_constant() else g


def _semi_invariant_fast_path(q: LieAlgebraData, pfs: list[Poly], seed: int,
                              caps: Caps) -> Poly | None:
    from .slices import invariant_slice_basis  # deferred: slices imports liealg

    one = Poly.const(q.ctx, 1)
    sample_sizes = [min(3, len(pfs)), len(pfs)]
    previous = None
    for size in sample_sizes:
        est = _estimate_gcd_bidegree(pfs[:size], q, seed)
        if est == previous:
            continue
        previous = est
        if est == (0, 0):
            return one
        try:
            basis = invariant_slice_basis(q, est, caps=caps)
        except CapExceeded:
            return None
        if len(basis) != 1:
            continue
        cand = basis[0]
        if all(try_exact_div(pf, cand) is not None for pf in pfs):
            return cand
    return None
