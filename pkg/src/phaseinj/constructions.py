"""Explicit measurement ensembles and the random generator used for sweeps."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .ensemble import Field, MeasurementEnsemble, _field
from .errors import BadParam, DuplicateBases, ShapeError

GOLDEN_RATIO = (1 + 5 ** 0.5) / 2


class Family(str, Enum):
    VANDERMONDE = "vandermonde"
    HARMONIC_DFT = "harmonic-dft"
    BODMANN_HAMMEN = "bodmann-hammen"
    FIXTURE_3X8 = "fixture-3x8"
    GAUSSIAN_RANDOM = "gaussian"


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    M: int
    N: int | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        m, n = self.M, self.N
        forced = {
            Family.HARMONIC_DFT: 2 * m - 1,
            Family.BODMANN_HAMMEN: 4 * m - 2,
            Family.FIXTURE_3X8: 8,
        }
        if fam is Family.FIXTURE_3X8 and m != 3:
            raise ShapeError("the 3 x 8 fixture has M = 3")
        if fam in forced:
            if n is not None and n != forced[fam]:
                raise ShapeError(f"{fam.value} with M={m} has N={forced[fam]}, not {n}")
            object.__setattr__(self, "N", forced[fam])
        elif n is None:
            if fam is Family.VANDERMONDE and "bases" in self.params:
                object.__setattr__(self, "N", len(self.params["bases"]))
            else:
                raise ShapeError(f"{fam.value} needs an explicit N")

    def build(self) -> MeasurementEnsemble:
        fam, m, n, p = self.family, self.M, self.N, self.params
        if fam is Family.VANDERMONDE:
            return vandermonde(m, p.get("bases", list(range(1, n + 1))))
        if fam is Family.HARMONIC_DFT:
            return harmonic_dft(m)
        if fam is Family.BODMANN_HAMMEN:
            return bodmann_hammen(m, p.get("circle_param", GOLDEN_RATIO))
        if fam is Family.FIXTURE_3X8:
            return fixture_3x8()
        return gaussian_random(p.get("field", Field.COMPLEX), m, n, p.get("seed", 0))


def vandermonde(M: int, bases) -> MeasurementEnsemble:
    """Columns (1, b, b^2, ..., b^(M-1)) for each base b."""
    b = np.asarray(bases)
    if b.ndim != 1 or b.size < M:
        raise ShapeError(f"need at least M={M} bases, got {b.size}")
    if len(set(b.tolist())) != b.size:
        raise DuplicateBases(f"bases must be pairwise distinct: {b.tolist()}")
    cols = b[np.newaxis, :] ** np.arange(M)[:, np.newaxis]
    return MeasurementEnsemble(cols, Field.COMPLEX if np.iscomplexobj(b) else Field.REAL)


def _root_of_unity_columns(M: int, points: np.ndarray) -> np.ndarray:
    return points[np.newaxis, :] ** np.arange(M)[:, np.newaxis]


def harmonic_dft(M: int) -> MeasurementEnsemble:
    """First M rows of the unnormalized (2M-1)-point DFT, omega = exp(2 pi i/(2M-1))."""
    if M < 2:
        raise ShapeError("harmonic_dft needs M >= 2")
    n = 2 * M - 1
    k = np.arange(n)
    # exact integer exponents mod n keep every entry an n-th root of unity
    expo = np.outer(np.arange(M), k) % n
    return MeasurementEnsemble(np.exp(2j * np.pi * expo / n), Field.COMPLEX)


def bodmann_hammen(M: int, circle_param: float = GOLDEN_RATIO) -> MeasurementEnsemble:
    """Harmonic frame plus 2M-1 Vandermonde columns on a second circle.

    The second circle is the image of the real line under the Moebius map
    t -> circle_param + (t - i)/(t + i), i.e. the unit circle shifted by
    ``circle_param``; its nodes are equally spaced, z_k = circle_param + omega^k.
    ``circle_param = 0`` would reproduce the first circle and is rejected.
    """
    if M < 2:
        raise ShapeError("bodmann_hammen needs M >= 2")
    p = float(circle_param)
    if not np.isfinite(p) or p == 0.0:
        raise BadParam(f"circle_param must be finite and nonzero, got {circle_param!r}")
    n = 2 * M - 1
    omega = np.exp(2j * np.pi * np.arange(n) / n)
    second = _root_of_unity_columns(M, p + omega)
    return MeasurementEnsemble(np.hstack([harmonic_dft(M).matrix, second]), Field.COMPLEX)


def fixture_3x8() -> MeasurementEnsemble:
    """The 3 x 8 complex reference ensemble whose lifted operator has a
    one-dimensional null space spanned by a nonsingular matrix."""
    i = 1j
    rows = [
        [2, 1, 1, 0, 0, 0, 1, i],
        [-1, 0, 0, 1, 1, -1, -2, 2],
        [0, 1, -1, 1, -1, 2 * i, i, -1],
    ]
    return MeasurementEnsemble(np.array(rows, dtype=complex), Field.COMPLEX)


def gaussian_random(field, M: int, N: int, seed: int) -> MeasurementEnsemble:
    """i.i.d. standard normal entries (independent real and imaginary parts)."""
    if M < 1 or N < 1:
        raise ShapeError("M and N must be positive")
    fld = _field(field)
    rng = np.random.default_rng(seed)
    if fld is Field.REAL:
        return MeasurementEnsemble(rng.standard_normal((M, N)), Field.REAL)
    return MeasurementEnsemble(rng.standard_normal((M, N)) + 1j * rng.standard_normal((M, N)), Field.COMPLEX)
