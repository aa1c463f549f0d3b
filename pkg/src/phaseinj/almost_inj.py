"""Almost injectivity for real ensembles.

A real ensemble with nonzero columns is almost injective iff it spans R^M
and rank(Phi_S) + rank(Phi_{S^c}) > M for every nonempty proper S.  Zero
columns carry no information and are dropped first.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd

import numpy as np

from .ensemble import Field, MeasurementEnsemble, as_signal, _field
from .errors import DimensionMismatch, FieldMismatch, NotSpanning, NotUntf, ShapeError, ZeroVector
from .injectivity import BoundsReport
from .numerics import DEFAULT_TOL, ToleranceConfig, batch_ranks, fast_rank, orth_complement
from .subsets import (
    DEFAULT_SUBSET_GUARD,
    canonical_order_key,
    check_subset_guard,
    complement,
    symmetric_subset_blocks,
    symmetric_subsets,
)

UNTF_TOL = 1e-8
ORTH_TOL = 1e-10
NONZERO_TOL = 1e-8


class AlmostVerdict(str, Enum):
    ALMOST_INJECTIVE = "AlmostInjective"
    NOT_ALMOST_INJECTIVE = "NotAlmostInjective"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class AlmostInjVerdict:
    verdict: AlmostVerdict
    rule: str
    subset: tuple[int, ...] | None = None
    dropped_zero_columns: int = 0
    subsets_examined: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict is AlmostVerdict.ALMOST_INJECTIVE


@dataclass(frozen=True)
class UntfReport:
    is_untf: bool
    row_norm_deviation: float
    row_orthogonality_deviation: float
    column_norm_deviation: float


def _require_real(phi: MeasurementEnsemble, what: str) -> None:
    if not phi.is_real:
        raise FieldMismatch(f"{what} is only characterized for real ensembles")


def _nonzero_columns(a: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    norms = np.linalg.norm(a, axis=0)
    top = norms.max() if norms.size else 0.0
    if top == 0.0:
        return np.zeros(a.shape[1], dtype=bool)
    return norms > tol.threshold(top)


def real_almost_injectivity(
    phi: MeasurementEnsemble,
    tol: ToleranceConfig = DEFAULT_TOL,
    guard: int = DEFAULT_SUBSET_GUARD,
) -> AlmostInjVerdict:
    """Decide almost injectivity via the rank-sum condition.

    The witness subset is reported in the original (0-based) column numbering.
    """
    _require_real(phi, "real_almost_injectivity")
    a = phi.normalized()[0].matrix
    m = phi.M
    keep = _nonzero_columns(a, tol)
    dropped = int(np.count_nonzero(~keep))
    orig = np.flatnonzero(keep)
    b = a[:, keep]
    n = b.shape[1]
    if n == 0 or fast_rank(b, tol) < m:
        return AlmostInjVerdict(AlmostVerdict.NOT_ALMOST_INJECTIVE, "does not span", (), dropped)
    check_subset_guard(n, guard)
    examined = 0
    for subs, comps in symmetric_subset_blocks(n):
        rank_sc = batch_ranks(b, comps, tol)
        # columns are nonzero, so rank(Phi_S) >= 1 and a spanning S^c already wins
        fail = rank_sc < m
        if fail.any():
            idx = np.flatnonzero(fail)
            fail[idx] = batch_ranks(b, subs[idx], tol) + rank_sc[idx] <= m
        if fail.any():
            first = int(np.argmax(fail))
            witness = tuple(int(orig[i]) for i in subs[first])
            return AlmostInjVerdict(
                AlmostVerdict.NOT_ALMOST_INJECTIVE, "rank sum <= M", witness, dropped, examined + first + 1
            )
        examined += len(subs)
    return AlmostInjVerdict(AlmostVerdict.ALMOST_INJECTIVE, "rank sum > M", None, dropped, examined)


def pointwise_recoverable(
    phi: MeasurementEnsemble,
    x,
    tol: ToleranceConfig = DEFAULT_TOL,
    guard: int = DEFAULT_SUBSET_GUARD,
) -> bool:
    """True iff A^{-1}(A(x)) = {x, -x}.

    x fails exactly when, for some S, x = u + v with nonzero
    u ⊥ span(Phi_S) and v ⊥ span(Phi_{S^c}); then u - v collides with x.
    """
    _require_real(phi, "pointwise_recoverable")
    x = as_signal(x, Field.REAL).entries
    if x.shape[0] != phi.M:
        raise DimensionMismatch(f"signal has length {x.shape[0]}, ensemble has M={phi.M}")
    nx = np.linalg.norm(x)
    if nx == 0.0:
        raise ZeroVector("x must be nonzero")
    a = phi.normalized()[0].matrix
    m, n = a.shape
    if fast_rank(a, tol) < m:
        raise NotSpanning("pointwise test requires Phi to span R^M")
    check_subset_guard(n, guard)
    for s in symmetric_subsets(n):
        bu = orth_complement(a[:, list(s)], m, tol)
        bv = orth_complement(a[:, complement(s, n)], m, tol)
        if bu.shape[1] == 0 or bv.shape[1] == 0:
            continue
        basis = np.hstack([bu, bv])
        coef, *_ = np.linalg.lstsq(basis, x, rcond=None)
        if np.linalg.norm(basis @ coef - x) > NONZERO_TOL * nx:
            continue
        u = bu @ coef[: bu.shape[1]]
        v = bv @ coef[bu.shape[1]:]
        if np.linalg.norm(u) > NONZERO_TOL * nx and np.linalg.norm(v) > NONZERO_TOL * nx:
            return False
    return True


def untf_check(phi: MeasurementEnsemble) -> UntfReport:
    a = phi.matrix
    m, n = a.shape
    rows = a @ a.conj().T
    row_norms = np.sqrt(np.real(np.diag(rows)))
    off = rows - np.diag(np.diag(rows))
    dev_rows = float(np.max(np.abs(row_norms - np.sqrt(n / m))))
    dev_orth = float(np.max(np.abs(off))) if m > 1 else 0.0
    dev_cols = float(np.max(np.abs(np.linalg.norm(a, axis=0) - 1.0)))
    ok = max(dev_rows, dev_orth, dev_cols) <= UNTF_TOL
    return UntfReport(ok, dev_rows, dev_orth, dev_cols)


def orthogonal_partitionable(phi: MeasurementEnsemble, tol: float = ORTH_TOL) -> tuple[int, ...] | None:
    """A nonempty proper S with span(Phi_S) ⊥ span(Phi_{S^c}), if one exists.

    Such S are exactly the unions of connected components of the graph joining
    columns with non-negligible normalized inner product.  The smallest
    component (lexicographically least on ties) is returned.
    """
    a = phi.matrix
    n = a.shape[1]
    if n < 2:
        return None
    norms = np.linalg.norm(a, axis=0)
    safe = np.where(norms == 0, 1.0, norms)
    gram = np.abs(a.conj().T @ a) / np.outer(safe, safe)
    adj = gram > tol
    seen = np.zeros(n, dtype=bool)
    components = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.flatnonzero(adj[i] & ~seen):
                seen[j] = True
                stack.append(int(j))
        components.append(tuple(sorted(comp)))
    if len(components) == 1:
        return None
    return min(components, key=canonical_order_key)


def untf_almost_injectivity(phi: MeasurementEnsemble, tol: float = ORTH_TOL) -> AlmostInjVerdict:
    """Almost injectivity of a UNTF: automatic when gcd(M, N) = 1, otherwise
    equivalent to not being orthogonally partitionable."""
    report = untf_check(phi)
    if not report.is_untf:
        raise NotUntf(f"not a unit norm tight frame: {report}")
    if gcd(phi.M, phi.N) == 1:
        return AlmostInjVerdict(AlmostVerdict.ALMOST_INJECTIVE, "relatively-prime UNTF")
    s = orthogonal_partitionable(phi, tol)
    if s is None:
        return AlmostInjVerdict(AlmostVerdict.ALMOST_INJECTIVE, "UNTF not orthogonally partitionable")
    return AlmostInjVerdict(AlmostVerdict.NOT_ALMOST_INJECTIVE, "UNTF orthogonally partitionable", s)


def almost_inj_bounds(field, M: int) -> BoundsReport:
    field = _field(field)
    if M < 2:
        raise ShapeError("bounds are stated for M >= 2")
    if field is Field.REAL:
        return BoundsReport(field, M, M + 1, M + 1, None, ("real: rank-sum characterization, full spark",))
    return BoundsReport(
        field,
        M,
        2 * M - 1,
        2 * M,
        2 * M,
        (
            "necessity 2M-1 proven via the Jacobian rank argument",
            "generic sufficiency at 2M proven",
            "necessity of 2M conjectured; only a proof sketch exists",
        ),
    )
