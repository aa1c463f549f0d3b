"""Certifiers for injectivity of the intensity map modulo global phase.

Real ensembles are decided exactly by the complement property.  Complex
ensembles are decided for M = 2 (rank of the lifted operator) and M = 3 (the
HMW null-space test); for larger M only necessary conditions are available,
so the answer may be ``Inconclusive``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, islice
from math import comb

import numpy as np

from .ensemble import (
    Field,
    MeasurementEnsemble,
    Signal,
    as_signal,
    coords_to_hermitian,
    intensity_map,
    real_lift_vectors,
    super_analysis_operator,
    _field,
)
from .errors import FieldMismatch, GuardExceeded, ShapeError, ZeroVector
from .numerics import (
    DEFAULT_TOL,
    RankResult,
    batch_ranks,
    ToleranceConfig,
    fast_rank,
    null_space_of,
    orth_complement,
    rank_of,
)
from .subsets import (
    DEFAULT_MINOR_GUARD,
    DEFAULT_SUBSET_GUARD,
    check_subset_guard,
    complement,
    symmetric_subset_blocks,
)

WITNESS_TOL = 1e-8
DET_TOL = 1e-8
SCAN_STEPS = 10_000
BISECT_TOL = 1e-12


class Verdict(str, Enum):
    INJECTIVE = "Injective"
    NOT_INJECTIVE = "NotInjective"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class InjectivityVerdict:
    verdict: Verdict
    rule: str
    subset: tuple[int, ...] | None = None
    pair: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)
    null_matrix: np.ndarray | None = field(default=None, repr=False)

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.INJECTIVE


@dataclass(frozen=True)
class BoundsReport:
    field: Field
    M: int
    necessary_N: int
    generic_sufficient_N: int | None
    conjectured_N: int | None = None
    notes: tuple[str, ...] = ()


def witness_pair_ok(phi: MeasurementEnsemble, x, y, tol: float = WITNESS_TOL) -> bool:
    """Check that (x, y) really is a collision: x !~ y and A(x) ~= A(y)."""
    fld = Field.REAL if phi.is_real else Field.COMPLEX
    sx, sy = Signal(x, fld), Signal(y, fld)
    if sx.equivalent(sy):
        return False
    ax, ay = intensity_map(phi, sx), intensity_map(phi, sy)
    return bool(np.linalg.norm(ax - ay) <= tol * (np.linalg.norm(ax) + 1.0))


# Real case --------------------------------------------------------------------


def _require_real(phi: MeasurementEnsemble, what: str) -> None:
    if not phi.is_real:
        raise FieldMismatch(
            f"{what} decides injectivity only for real ensembles; "
            "over C the complement property is necessary but not sufficient"
        )


def complement_property(
    phi: MeasurementEnsemble,
    tol: ToleranceConfig = DEFAULT_TOL,
    guard: int = DEFAULT_SUBSET_GUARD,
) -> tuple[bool, tuple[int, ...] | None]:
    """Check that for every S, Phi_S or Phi_{S^c} spans R^M.

    Returns ``(holds, witness)`` where the witness is the first failing S
    (0-based column indices, smallest size first, then lexicographic).
    """
    _require_real(phi, "complement_property")
    check_subset_guard(phi.N, guard)
    work, _ = phi.normalized()
    a, m, n = work.matrix, work.M, work.N
    if fast_rank(a, tol) < m:
        return False, ()
    for subs, comps in symmetric_subset_blocks(n):
        # |S| <= N/2, so S^c is the larger side; S can only span if |S| >= M
        fail = batch_ranks(a, comps, tol) < m
        if subs.shape[1] >= m and fail.any():
            idx = np.flatnonzero(fail)
            fail[idx] = batch_ranks(a, subs[idx], tol) < m
        if fail.any():
            return False, tuple(int(i) for i in subs[np.argmax(fail)])
    return True, None


def _real_witness_pair(a: np.ndarray, s, tol: ToleranceConfig):
    """(u+v, u-v) with u ⊥ span(Phi_S), v ⊥ span(Phi_{S^c}), both unit."""
    m, n = a.shape
    sc = complement(s, n)
    u = orth_complement(a[:, list(s)], m, tol)[:, 0]
    v = orth_complement(a[:, list(sc)], m, tol)[:, 0]
    return u + v, u - v


def real_injectivity(
    phi: MeasurementEnsemble,
    tol: ToleranceConfig = DEFAULT_TOL,
    guard: int = DEFAULT_SUBSET_GUARD,
) -> InjectivityVerdict:
    holds, s = complement_property(phi, tol, guard)
    if holds:
        return InjectivityVerdict(Verdict.INJECTIVE, "complement property")
    x, y = _real_witness_pair(phi.normalized()[0].matrix, s, tol)
    if not witness_pair_ok(phi, x, y):
        return InjectivityVerdict(Verdict.INCONCLUSIVE, "complement property (witness failed check)", subset=s)
    return InjectivityVerdict(Verdict.NOT_INJECTIVE, "complement property", subset=s, pair=(x, y))


def full_spark(
    phi: MeasurementEnsemble,
    tol: ToleranceConfig = DEFAULT_TOL,
    guard: int = DEFAULT_MINOR_GUARD,
    chunk: int = 4096,
) -> bool:
    """True iff every M x M submatrix is invertible (rank M under tau)."""
    m, n = phi.M, phi.N
    if n < m:
        raise ShapeError(f"full spark needs N >= M, got M={m}, N={n}")
    total = comb(n, m)
    if total > guard:
        raise GuardExceeded(f"C({n},{m}) = {total} submatrices exceeds guard {guard}")
    a = phi.normalized()[0].matrix
    it = combinations(range(n), m)
    while True:
        idx = list(islice(it, chunk))
        if not idx:
            return True
        subs = a[:, np.array(idx)].transpose(1, 0, 2)  # (k, M, M)
        s = np.linalg.svd(subs, compute_uv=False)
        thr = np.maximum(tol.rel_rank_tol * s[:, 0], tol.abs_floor)
        if np.any(s[:, -1] < thr):
            return False


# Complex case -----------------------------------------------------------------


def _require_complex(phi: MeasurementEnsemble, m: int | None, what: str) -> None:
    if phi.is_real:
        raise FieldMismatch(f"{what} expects a complex ensemble")
    if m is not None and phi.M != m:
        raise ShapeError(f"{what} requires M={m}, got M={phi.M}")


def pair_from_null_matrix(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Signal pair with equal intensities from a rank <= 2 null-space matrix.

    Uses the two eigenvalues of largest modulus.  With opposite signs the
    pair is (sqrt|l1| u1, sqrt|l2| u2); with equal signs (or rank one) every
    intensity of sqrt|l1| u1 vanishes, and it collides with the zero signal.
    """
    w, v = np.linalg.eigh(h)
    order = np.argsort(-np.abs(w))
    l1, l2 = w[order[0]], w[order[1]]
    x = np.sqrt(abs(l1)) * v[:, order[0]]
    if l1 * l2 < 0:
        y = np.sqrt(abs(l2)) * v[:, order[1]]
    else:
        y = np.zeros_like(x)
    return x, y


def _null_witness(phi: MeasurementEnsemble, scale: float, h: np.ndarray, rule: str) -> InjectivityVerdict:
    x, y = pair_from_null_matrix(h)
    # the pair was built for phi / scale; rescale so it collides for phi itself
    x, y = x / scale, y / scale
    if witness_pair_ok(phi, x, y):
        return InjectivityVerdict(Verdict.NOT_INJECTIVE, rule, pair=(x, y), null_matrix=h)
    return InjectivityVerdict(Verdict.NOT_INJECTIVE, rule, null_matrix=h)


def complex_injectivity_m2(phi: MeasurementEnsemble, tol: ToleranceConfig = DEFAULT_TOL) -> InjectivityVerdict:
    """M = 2: injective iff the lifted operator has rank 4.

    Every nonzero 2 x 2 matrix has rank <= 2, so any nonzero null-space
    element already yields a collision.
    """
    _require_complex(phi, 2, "complex_injectivity_m2")
    work, scale = phi.normalized()
    big_a = super_analysis_operator(work).entries
    ns = null_space_of(big_a, tol)
    if ns.dimension == 0:
        return InjectivityVerdict(Verdict.INJECTIVE, "rank of lifted operator = 4")
    h = coords_to_hermitian(ns.basis_vectors[0], 2)
    return _null_witness(phi, scale, h, "rank of lifted operator < 4")


def _det(h: np.ndarray) -> float:
    return float(np.real(np.linalg.det(h)))


def singular_combination(a: np.ndarray, b: np.ndarray, steps: int = SCAN_STEPS, tol: float = BISECT_TOL) -> float:
    """t0 in [0, pi] with det(a cos t0 + b sin t0) = 0 for 3 x 3 Hermitian a, b.

    det(-a) = -det(a) for odd size, so a sign change exists on [0, pi].
    """
    ts = np.linspace(0.0, np.pi, steps + 1)
    mats = np.cos(ts)[:, None, None] * a + np.sin(ts)[:, None, None] * b
    f = np.real(np.linalg.det(mats))
    zero = np.flatnonzero(f == 0)
    if zero.size:
        return float(ts[zero[0]])
    change = np.flatnonzero(np.sign(f[:-1]) != np.sign(f[1:]))
    if change.size == 0:
        raise RuntimeError("no sign change of det on [0, pi]; inputs are not 3 x 3 Hermitian")
    lo, hi = ts[change[0]], ts[change[0] + 1]
    f_lo = f[change[0]]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = _det(a * np.cos(mid) + b * np.sin(mid))
        if f_mid == 0:
            return float(mid)
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))


def _nonsingular(h: np.ndarray) -> bool:
    return abs(_det(h)) > DET_TOL * np.linalg.norm(h) ** 3


def hmw_test(phi: MeasurementEnsemble, tol: ToleranceConfig = DEFAULT_TOL) -> InjectivityVerdict:
    """The HMW null-space test, exact for M = 3.

    Trivial null space, or a one-dimensional null space spanned by a
    nonsingular matrix, means injective; anything else is not injective.
    """
    _require_complex(phi, 3, "hmw_test")
    work, scale = phi.normalized()
    big_a = super_analysis_operator(work).entries
    ns = null_space_of(big_a, tol)
    if ns.dimension == 0:
        return InjectivityVerdict(Verdict.INJECTIVE, "hmw: trivial null space")
    h = coords_to_hermitian(ns.basis_vectors[0], 3)
    if ns.dimension == 1:
        if _nonsingular(h):
            return InjectivityVerdict(Verdict.INJECTIVE, "hmw: 1-dim null space, nonsingular", null_matrix=h)
        return _null_witness(phi, scale, h, "hmw: 1-dim null space, singular")
    if not _nonsingular(h):
        return _null_witness(phi, scale, h, f"hmw: {ns.dimension}-dim null space")
    b = coords_to_hermitian(ns.basis_vectors[1], 3)
    t0 = singular_combination(h, b)
    return _null_witness(phi, scale, h * np.cos(t0) + b * np.sin(t0), f"hmw: {ns.dimension}-dim null space")


def local_injectivity_sample(phi: MeasurementEnsemble, u, tol: ToleranceConfig = DEFAULT_TOL) -> RankResult:
    """Rank of the real span of {phi_n phi_n^* u} in R^{2M}.

    Injectivity forces rank 2M - 1 at every nonzero u; a smaller rank at a
    single u disproves injectivity.
    """
    if phi.is_real:
        raise FieldMismatch("local_injectivity_sample expects a complex ensemble")
    u = as_signal(u, Field.COMPLEX)
    if not np.any(u.entries):
        raise ZeroVector("u must be nonzero")
    work, _ = phi.normalized()
    return rank_of(real_lift_vectors(work, u), tol)


def complex_injectivity(
    phi: MeasurementEnsemble,
    tol: ToleranceConfig = DEFAULT_TOL,
    samples: int = 20,
    seed: int = 0,
) -> InjectivityVerdict:
    """Dispatch to the exact tests for M = 2, 3; otherwise necessary checks only."""
    _require_complex(phi, None, "complex_injectivity")
    if phi.M == 1:
        return InjectivityVerdict(Verdict.INJECTIVE if np.any(phi.matrix) else Verdict.NOT_INJECTIVE, "M = 1")
    if phi.M == 2:
        return complex_injectivity_m2(phi, tol)
    if phi.M == 3:
        return hmw_test(phi, tol)
    m = phi.M
    if phi.N < injectivity_bounds(Field.COMPLEX, m).necessary_N:
        return InjectivityVerdict(Verdict.NOT_INJECTIVE, "N below proven lower bound")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        u = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        if local_injectivity_sample(phi, u, tol).rank < 2 * m - 1:
            return InjectivityVerdict(Verdict.NOT_INJECTIVE, "local rank < 2M-1 at a sampled point")
    return InjectivityVerdict(Verdict.INCONCLUSIVE, "no decision procedure for M >= 4")


def _popcount(n: int) -> int:
    return bin(n).count("1")


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def injectivity_bounds(field, M: int) -> BoundsReport:
    field = _field(field)
    if M < 2:
        raise ShapeError("bounds are stated for M >= 2")
    if field is Field.REAL:
        return BoundsReport(field, M, 2 * M - 1, 2 * M - 1, None, ("real: complement property, full spark",))
    a = _popcount(M - 1)
    notes = [f"embedding lower bound 4M-2a-3 with a=popcount(M-1)={a}"]
    lower = 4 * M - 2 * a - 3
    if M % 2 == 1 and a % 4 == 2:
        lower = max(lower, 4 * M - 2 * a - 2)
        notes.append("odd M, a = 2 mod 4: 4M-2a-2")
    if M % 2 == 1 and a % 4 == 3:
        lower = max(lower, 4 * M - 2 * a - 1)
        notes.append("odd M, a = 3 mod 4: 4M-2a-1")
    if M in (2, 3) or _is_power_of_two(M - 1):
        lower = max(lower, 4 * M - 4)
        notes.append("4M-4 necessity proven (M in {2,3} or M-1 a power of two)")
    notes.append("generic sufficiency at 4M-4 proven; explicit constructions known at 4M-2")
    return BoundsReport(field, M, lower, 4 * M - 4, 4 * M - 4, tuple(notes))
