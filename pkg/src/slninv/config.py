"""Resource caps and shared defaults.

Every potentially combinatorial routine takes a `Caps` value so that callers
(and the CLI) can bound the work deterministically.  Caps never change a
result, only whether the computation is attempted at all.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict


class CapExceeded(RuntimeError):
    """A computation was refused because a configured cap would be exceeded."""

    def __init__(self, cap_name: str, needed: object, limit: object):
        self.cap_name = cap_name
        self.needed = needed
        self.limit = limit
        super().__init__(f"cap {cap_name!r} exceeded: needs {needed}, limit {limit}")


@dataclass(frozen=True)
class Caps:
    # Jacobi identity is verified exhaustively up to this dimension of q,
    # and on sampled triples above it.
    jacobi_exhaustive_dim: int = 20
    jacobi_samples: int = 200
    # Pfaffians switch from perfect-matching expansion to fraction-free
    # elimination above this matrix size.
    pfaffian_matching: int = 12
    # Determinants switch from cofactor expansion to Bareiss above this size.
    det_cofactor: int = 5
    # Fundamental semi-invariants enumerate principal minors; refuse above
    # this dimension of q.
    semiinvariant_dim: int = 24
    # Bihomogeneous slice size (monomial count before the weight filter)
    # accepted by the invariant finder.
    finder_monomials: int = 300_000
    # Dimension of the tensor space used by the mixed wedge construction.
    tensor_space: int = 2000
    # Randomized rank evaluation.
    rank_trials: int = 5
    rank_coord_bound: int = 100

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_CAPS = Caps()
