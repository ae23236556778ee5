"""Wedge and symmetric power representations of sl_n, over the rationals.

Supports the mixed wedge construction: exterior powers of the defining
module with their derivation action, symmetric powers of exterior powers,
the highest-weight submodule generated by a power of a top wedge, and the
unique equivariant projection from a tensor product of wedge factors onto
that submodule (solved from the Chevalley-generator equivariance equations,
blocked by gl-weights).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .linalg import SparseRowReducer, solve_in_rref_rows
from .poly import Poly

_F0 = Fraction(0)
_F1 = Fraction(1)

WedgeIndex = tuple[int, ...]  # ascending tuple of basis indices in range(n)


def wedge_basis(n: int, t: int) -> list[WedgeIndex]:
    return list(itertools.combinations(range(n), t))


def wedge_substitute(j_set: WedgeIndex, pos: int, new: int) -> tuple[WedgeIndex, int] | None:
    """Replace entry pos by `new` and resort; None if the result repeats."""
    if new in j_set and j_set[pos] != new:
        return None
    rest = j_set[:pos] + j_set[pos + 1:]
    # count how many remaining entries the new element passes over
    smaller = sum(1 for x in rest if x < new)
    sign = -1 if (pos - smaller) % 2 else 1
    out = tuple(sorted(rest + (new,)))
    return out, sign


def elementary_action_on_wedge(n: int, a: int, b: int, t: int) -> dict[WedgeIndex, list[tuple[WedgeIndex, int]]]:
    """Sparse derivation action of E(a,b) on the Lambda^t basis (0-based a, b)."""
    out: dict[WedgeIndex, list[tuple[WedgeIndex, int]]] = {}
    for j_set in wedge_basis(n, t):
        if b not in j_set:
            continue
        sub = wedge_substitute(j_set, j_set.index(b), a)
        if sub is not None:
            out[j_set] = [sub]
    return out


def derivation_apply(matrix_entries, vec: dict[WedgeIndex, object], n: int):
    """Apply the derivation of an n x n matrix to a wedge coefficient vector.

    matrix_entries[l][j] may be Fractions or Poly; coefficients of `vec`
    must multiply with them.
    """
    out: dict[WedgeIndex, object] = {}
    for j_set, coeff in vec.items():
        for pos, j in enumerate(j_set):
            for l in range(n):
                entry = matrix_entries[l][j]
                if _entry_is_zero(entry):
                    continue
                sub = wedge_substitute(j_set, pos, l)
                if sub is None:
                    continue
                target, sign = sub
                term = entry * coeff if sign > 0 else -(entry * coeff)
                if target in out:
                    out[target] = out[target] + term
                else:
                    out[target] = term
    return {k: v for k, v in out.items() if not _entry_is_zero(v)}


def _entry_is_zero(x) -> bool:
    if isinstance(x, Poly):
        return x.is_zero
    return not x


def wedge_of_columns(mat, col_indices: list[int]) -> dict[WedgeIndex, Poly]:
    """Wedge of the selected columns of a PolyMatrix; coefficients are minors."""
    from .matrix import PolyMatrix

    out = {}
    t = len(col_indices)
    for rows in itertools.combinations(range(mat.rows), t):
        minor = mat.submatrix(rows, col_indices).det()
        if not minor.is_zero:
            out[rows] = minor
    return out


# ---------------------------------------------------------------------------
# symmetric powers of wedge powers, numerically
# ---------------------------------------------------------------------------

SymIndex = tuple[int, ...]  # nondecreasing tuple of wedge-basis positions


def sym_basis(n: int, k: int, d: int) -> list[SymIndex]:
    count = len(wedge_basis(n, k))
    return list(itertools.combinations_with_replacement(range(count), d))


def gl_weight_of_wedge(j_set: WedgeIndex, n: int) -> tuple[int, ...]:
    w = [0] * n
    for j in j_set:
        w[j] = 1
    return tuple(w)


class SymWedgeSpace:
    """S^d(Lambda^k C^n) with the action of the Chevalley generators."""

    def __init__(self, n: int, k: int, d: int):
        self.n, self.k, self.d = n, k, d
        self.wedges = wedge_basis(n, k)
        self.windex = {w: i for i, w in enumerate(self.wedges)}
        self.basis = sym_basis(n, k, d)
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.weights = [
            tuple(
                sum(col)
                for col in zip(*(gl_weight_of_wedge(self.wedges[p], n) for p in b))
            )
            for b in self.basis
        ]

    def generator_action(self, a: int, b: int) -> dict[int, list[tuple[int, Fraction]]]:
        """Column-sparse action of E(a,b): basis position -> image terms."""
        wedge_act = elementary_action_on_wedge(self.n, a, b, self.k)
        out: dict[int, list[tuple[int, Fraction]]] = {}
        for pos, mono in enumerate(self.basis):
            acc: dict[int, Fraction] = {}
            for slot in range(self.d):
                j_set = self.wedges[mono[slot]]
                for target, sign in wedge_act.get(j_set, ()):  # at most one
                    new = tuple(sorted(mono[:slot] + mono[slot + 1:] + (self.windex[target],)))
                    i = self.index[new]
                    acc[i] = acc.get(i, _F0) + sign
            entries = [(i, c) for i, c in acc.items() if c]
            if entries:
                out[pos] = entries
        return out


def highest_weight_rows(space: SymWedgeSpace) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Basis (reduced echelon rows over the sym basis) of the submodule
    generated by the highest-weight line (e_1^...^e_k)^d under lowering.
    """
    n, k, d = space.n, space.k, space.d
    top = tuple([space.windex[tuple(range(k))]] * d)
    start = {space.index[top]: _F1}
    lowers = [space.generator_action(i + 1, i) for i in range(n - 1)]
    reducer = SparseRowReducer()
    reducer.add(start)
    queue = [start]
    while queue:
        vec = queue.pop()
        for low in lowers:
            img: dict[int, Fraction] = {}
            for pos, coeff in vec.items():
                for i, c in low.get(pos, ()):
                    s = img.get(i, _F0) + coeff * c
                    if s:
                        img[i] = s
                    elif i in img:
                        del img[i]
            if img and reducer.add(dict(img)):
                queue.append(img)
    leads = sorted(reducer.pivots)
    reducer._fully_reduce()
    rows = [dict(reducer.pivots[lead]) for lead in leads]
    return rows, leads


# ---------------------------------------------------------------------------
# the equivariant projection
# ---------------------------------------------------------------------------

class TensorSpace:
    """Tensor product of wedge powers Lambda^{t_0} x ... x Lambda^{t_last}."""

    def __init__(self, n: int, factor_degrees: list[int]):
        self.n = n
        self.factor_degrees = list(factor_degrees)
        self.factor_bases = [wedge_basis(n, t) for t in factor_degrees]
        self.factor_index = [
            {w: i for i, w in enumerate(b)} for b in self.factor_bases
        ]
        self.sizes = [len(b) for b in self.factor_bases]
        self.dim = 1
        for s in self.sizes:
            self.dim *= s

    def flat_index(self, combo: tuple[int, ...]) -> int:
        idx = 0
        for pos, size in zip(combo, self.sizes):
            idx = idx * size + pos
        return idx

    def combos(self):
        return itertools.product(*(range(s) for s in self.sizes))

    def weight(self, combo: tuple[int, ...]) -> tuple[int, ...]:
        w = [0] * self.n
        for f, pos in enumerate(combo):
            for j in self.factor_bases[f][pos]:
                w[j] += 1
        return tuple(w)

    def generator_action(self, a: int, b: int) -> dict[int, list[tuple[int, Fraction]]]:
        """Column-sparse Leibniz action of E(a,b) on flat indices."""
        per_factor = [
            elementary_action_on_wedge(self.n, a, b, t) for t in self.factor_degrees
        ]
        out: dict[int, list[tuple[int, Fraction]]] = {}
        for combo in self.combos():
            col = self.flat_index(combo)
            acc: dict[int, Fraction] = {}
            for f, pos in enumerate(combo):
                j_set = self.factor_bases[f][pos]
                for target, sign in per_factor[f].get(j_set, ()):
                    new = list(combo)
                    new[f] = self.factor_index[f][target]
                    i = self.flat_index(tuple(new))
                    acc[i] = acc.get(i, _F0) + sign
            entries = [(i, c) for i, c in acc.items() if c]
            if entries:
                out[col] = entries
        return out


class EquivariantProjection:
    """The (unique up to scalar) sl_n-map from the tensor space onto the
    highest-weight submodule of S^d(Lambda^k), found by solving the
    Chevalley equivariance equations on weight-matched unknowns.
    """

    def __init__(self, n: int, factor_degrees: list[int], k: int, d: int):
        self.tensor = TensorSpace(n, factor_degrees)
        self.target = SymWedgeSpace(n, k, d)
        self.rows, self.leads = highest_weight_rows(self.target)
        self.row_weights = [self.target.weights[min(r)] for r in self.rows]
        self._solve(n, k, d)

    def _solve(self, n: int, k: int, d: int):
        tensor, target = self.tensor, self.target
        one_shift = tuple(
            1 for _ in range(n)
        )  # gl-weight excess of the tensor space over the target
        unknowns: dict[tuple[int, int], int] = {}
        combos = list(tensor.combos())
        tensor_weights = [tensor.weight(c) for c in combos]
        for w_flat, wt in enumerate(tensor_weights):
            for t, rwt in enumerate(self.row_weights):
                if all(a == b + s for a, b, s in zip(wt, rwt, one_shift)):
                    unknowns[(t, w_flat)] = len(unknowns)
        if not unknowns:
            raise ValueError("no weight-compatible unknowns; construction mismatch")

        generators = [(i, i + 1) for i in range(n - 1)] + [(i + 1, i) for i in range(n - 1)]
        reducer = SparseRowReducer()
        nrows = len(self.rows)
        for (a, b) in generators:
            act_w = tensor.generator_action(a, b)
            act_v = target.generator_action(a, b)
            # express z . row_t in the row basis
            rho: list[list[tuple[int, Fraction]]] = []
            for t in range(nrows):
                img: dict[int, Fraction] = {}
                for pos, coeff in self.rows[t].items():
                    for i, c in act_v.get(pos, ()):
                        s = img.get(i, _F0) + coeff * c
                        if s:
                            img[i] = s
                        elif i in img:
                            del img[i]
                coords = solve_in_rref_rows(self.rows, self.leads, img)
                if coords is None:
                    raise AssertionError("highest-weight submodule is not invariant")
                rho.append([(tp, c) for tp, c in enumerate(coords) if c])
            # equations: sum_l A[l][j] X[t'][l] = sum_t R[t][t'] X[t][j]
            inv_rho: list[list[tuple[int, Fraction]]] = [[] for _ in range(nrows)]
            for t, entries in enumerate(rho):
                for tp, c in entries:
                    inv_rho[tp].append((t, c))
            for j, _ in enumerate(combos):
                a_col = act_w.get(j, ())
                for tp in range(nrows):
                    row: dict[int, Fraction] = {}
                    for l, c in a_col:
                        u = unknowns.get((tp, l))
                        if u is not None:
                            row[u] = row.get(u, _F0) + c
                    for t, c in inv_rho[tp]:
                        u = unknowns.get((t, j))
                        if u is not None:
                            row[u] = row.get(u, _F0) - c
                    if row:
                        reducer.add(row)
        kernel = reducer.kernel(len(unknowns))
        if len(kernel) != 1:
            raise ValueError(
                f"equivariant solution space has dimension {len(kernel)}, expected 1"
            )
        vec = kernel[0]
        self.matrix: dict[tuple[int, int], Fraction] = {}
        for (t, w_flat), u in unknowns.items():
            if vec[u]:
                self.matrix[(t, w_flat)] = vec[u]

    def apply(self, tensor_coeffs: dict[int, Poly], ctx) -> list[Poly]:
        """Coordinates of the projection of a Poly-coefficient tensor in the
        highest-weight row basis."""
        out = [Poly.zero(ctx) for _ in self.rows]
        by_flat: dict[int, list[tuple[int, Fraction]]] = {}
        for (t, w_flat), c in self.matrix.items():
            by_flat.setdefault(w_flat, []).append((t, c))
        for w_flat, poly in tensor_coeffs.items():
            for t, c in by_flat.get(w_flat, ()):  # sparse
                out[t] = out[t] + poly.scale(c)
        return out


_projection_cache: dict[tuple, EquivariantProjection] = {}


def equivariant_projection(n: int, factor_degrees: list[int], k: int, d: int) -> EquivariantProjection:
    key = (n, tuple(factor_degrees), k, d)
    if key not in _projection_cache:
        _projection_cache[key] = EquivariantProjection(n, factor_degrees, k, d)
    return _projection_cache[key]
