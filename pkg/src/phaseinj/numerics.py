"""Tolerance-aware dense linear algebra: rank, null space, spanning tests.

Every rank decision in the package goes through the threshold

    tau(B) = max(rel_rank_tol * sigma_max(B), abs_floor)

so that verdicts do not depend on the overall scale of the input.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonFinite


@dataclass(frozen=True)
class ToleranceConfig:
    rel_rank_tol: float = 1e-10
    abs_floor: float = 1e-14

    def __post_init__(self):
        if not (self.rel_rank_tol > 0 and self.abs_floor > 0):
            raise ValueError("rel_rank_tol and abs_floor must be positive")

    def threshold(self, sigma_max: float) -> float:
        return max(self.rel_rank_tol * sigma_max, self.abs_floor)


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class RankResult:
    rank: int
    singular_values: tuple[float, ...]
    threshold_used: float


@dataclass(frozen=True)
class NullSpaceBasis:
    dimension: int
    basis_vectors: tuple[np.ndarray, ...] = field(repr=False)

    def as_matrix(self) -> np.ndarray:
        """Basis vectors stacked as columns (shape ``cols x dimension``)."""
        if not self.basis_vectors:
            return np.zeros((0, 0))
        return np.column_stack(self.basis_vectors)


def _as_matrix(matrix) -> np.ndarray:
    a = np.asarray(matrix)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.size == 0:
        raise DimensionMismatch(f"expected a nonempty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix contains NaN or Inf entries")
    return a


def singular_values(a: np.ndarray) -> np.ndarray:
    """Nonincreasing singular values of a (possibly empty) matrix."""
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def fast_rank(a: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Rank without input validation, for inner enumeration loops.

    Empty matrices (e.g. a subset with no columns) have rank 0.
    """
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.count_nonzero(s >= tol.threshold(s[0])))


def batch_ranks(a: np.ndarray, index_sets: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Ranks of the column submatrices ``a[:, idx]`` for each row ``idx`` of a
    (K, s) index array, computed with one batched SVD."""
    k = index_sets.shape[0]
    if k == 0:
        return np.zeros(0, dtype=int)
    if index_sets.shape[1] == 0:
        return np.zeros(k, dtype=int)
    subs = a[:, index_sets].transpose(1, 0, 2)  # (K, M, s)
    s = np.linalg.svd(subs, compute_uv=False)
    thr = np.maximum(tol.rel_rank_tol * s[:, :1], tol.abs_floor)
    return np.count_nonzero(s >= thr, axis=1)


def rank_of(matrix, tol: ToleranceConfig = DEFAULT_TOL) -> RankResult:
    a = _as_matrix(matrix)
    s = singular_values(a)
    thr = tol.threshold(float(s[0]))
    return RankResult(
        rank=int(np.count_nonzero(s >= thr)),
        singular_values=tuple(float(v) for v in s),
        threshold_used=thr,
    )


def null_space_of(matrix, tol: ToleranceConfig = DEFAULT_TOL) -> NullSpaceBasis:
    """Orthonormal basis of the right null space of ``matrix``.

    For a complex matrix the basis vectors are complex; callers that need a
    real null space (e.g. of the super analysis matrix) pass a real matrix.
    """
    a = _as_matrix(matrix)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    thr = tol.threshold(float(s[0]))
    r = int(np.count_nonzero(s >= thr))
    basis = tuple(vh[k].conj().copy() for k in range(r, a.shape[1]))
    return NullSpaceBasis(dimension=len(basis), basis_vectors=basis)


def orth_complement(a: np.ndarray, dim: int, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of span(columns of ``a``)^perp in F^dim."""
    if a.size == 0:
        return np.eye(dim, dtype=a.dtype if a.dtype.kind == "c" else float)
    u, s, _ = np.linalg.svd(a, full_matrices=True)
    r = int(np.count_nonzero(s >= tol.threshold(s[0])))
    return u[:, r:]


def spans_space(columns, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff the given vectors span the whole ambient space F^M."""
    vecs = [np.asarray(c).ravel() for c in columns]
    if not vecs:
        return False
    lengths = {v.shape[0] for v in vecs}
    if len(lengths) != 1:
        raise DimensionMismatch(f"vectors of differing lengths {sorted(lengths)}")
    m = lengths.pop()
    return rank_of(np.column_stack(vecs), tol).rank == m
