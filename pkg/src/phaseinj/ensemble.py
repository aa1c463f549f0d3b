"""Measurement ensembles, signals, the intensity map and its lift.

An ensemble is stored as an ``M x N`` matrix whose columns are the
measurement vectors.  Intensities are ``|<x, phi_n>|**2`` with the inner
product linear in its first argument, i.e. ``|phi_n^* x|**2``.

Self-adjoint matrices are coordinatized in a fixed orthonormal basis of the
real space of ``M x M`` Hermitian matrices (Hilbert-Schmidt inner product):

1. ``E_mm`` for m ascending,
2. ``(E_jk + E_kj)/sqrt(2)`` for j < k in lexicographic order,
3. ``i(E_jk - E_kj)/sqrt(2)`` for j < k in the same order.

In that basis the coordinates of ``H`` are ``H_mm``, ``sqrt(2) Re H_jk`` and
``sqrt(2) Im H_jk``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatch,
    FieldMismatch,
    NonFinite,
    ParseError,
    ShapeError,
    ZeroVector,
)

SQRT2 = np.sqrt(2.0)
EQUIV_TOL = 1e-8


class Field(str, Enum):
    REAL = "real"
    COMPLEX = "complex"


def _field(value) -> Field:
    try:
        return Field(value.value if isinstance(value, Field) else str(value).lower())
    except ValueError:
        raise FieldMismatch(f"unknown field {value!r}") from None


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MeasurementEnsemble:
    """The matrix Phi; column n is the measurement vector phi_n."""

    field: Field
    matrix: np.ndarray

    def __init__(self, matrix, field=None):
        a = np.asarray(matrix)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        if a.ndim != 2 or a.size == 0:
            raise ShapeError(f"ensemble must be a nonempty M x N matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise NonFinite("ensemble contains NaN or Inf entries")
        if field is None:
            field = Field.COMPLEX if np.iscomplexobj(a) and np.any(a.imag != 0) else Field.REAL
        field = _field(field)
        if field is Field.REAL:
            if np.iscomplexobj(a):
                if np.any(a.imag != 0):
                    raise FieldMismatch("real ensemble has entries with nonzero imaginary part")
                a = a.real
            a = a.astype(float)
        else:
            a = a.astype(complex)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "matrix", _frozen(a))

    @property
    def M(self) -> int:
        return self.matrix.shape[0]

    @property
    def N(self) -> int:
        return self.matrix.shape[1]

    @property
    def columns(self) -> list[np.ndarray]:
        return [self.matrix[:, n] for n in range(self.N)]

    @property
    def is_real(self) -> bool:
        return self.field is Field.REAL

    @classmethod
    def from_columns(cls, columns, field=None) -> "MeasurementEnsemble":
        return cls(np.column_stack([np.asarray(c) for c in columns]), field)

    def scaled(self, c: float) -> "MeasurementEnsemble":
        return MeasurementEnsemble(self.matrix * c, self.field)

    def permuted(self, order) -> "MeasurementEnsemble":
        return MeasurementEnsemble(self.matrix[:, list(order)], self.field)

    def normalized(self) -> tuple["MeasurementEnsemble", float]:
        """Copy rescaled so the largest entry modulus is 1, and that scale.

        Verdicts are scale invariant, so certifiers work on the normalized copy
        to keep the absolute singular-value floor from ever mattering.
        """
        s = float(np.max(np.abs(self.matrix)))
        if s == 0.0:
            return self, 1.0
        return MeasurementEnsemble(self.matrix / s, self.field), s

    def __eq__(self, other):
        if not isinstance(other, MeasurementEnsemble):
            return NotImplemented
        return self.field is other.field and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.field, self.matrix.shape, self.matrix.tobytes()))

    # JSON matrix format --------------------------------------------------

    def to_dict(self) -> dict:
        cols = [[[float(z.real), float(z.imag)] for z in col] for col in self.matrix.T.astype(complex)]
        return {"field": self.field.value, "M": self.M, "N": self.N, "columns": cols}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc) -> "MeasurementEnsemble":
        try:
            field = Field(doc["field"])
            m, n, cols = int(doc["M"]), int(doc["N"]), doc["columns"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed matrix document: {exc}") from None
        if m < 1 or n < 1 or len(cols) != n:
            raise ParseError(f"expected {n} columns of length {m}")
        a = np.empty((m, n), dtype=complex)
        for j, col in enumerate(cols):
            if len(col) != m:
                raise ParseError(f"column {j} has {len(col)} entries, expected {m}")
            for i, entry in enumerate(col):
                try:
                    re, im = entry
                    a[i, j] = complex(float(re), float(im))
                except (TypeError, ValueError):
                    raise ParseError(f"entry ({i}, {j}) is not an [re, im] pair") from None
        if not np.all(np.isfinite(a)):
            raise ParseError("matrix contains non-finite entries")
        if field is Field.REAL and np.any(a.imag != 0):
            raise ParseError("real matrix has a nonzero imaginary part")
        return cls(a, field)

    @classmethod
    def from_json(cls, text: str) -> "MeasurementEnsemble":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from None
        return cls.from_dict(doc)

    def save(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path) -> "MeasurementEnsemble":
        return cls.from_json(Path(path).read_text())


@dataclass(frozen=True, eq=False)
class Signal:
    """A vector x in F^M, compared modulo a unimodular scalar."""

    field: Field
    entries: np.ndarray

    def __init__(self, entries, field=None):
        x = np.asarray(entries).ravel()
        if x.size == 0:
            raise ShapeError("signal must have at least one entry")
        if not np.all(np.isfinite(x)):
            raise NonFinite("signal contains NaN or Inf entries")
        if field is None:
            field = Field.COMPLEX if np.iscomplexobj(x) and np.any(x.imag != 0) else Field.REAL
        field = _field(field)
        if field is Field.REAL:
            if np.iscomplexobj(x) and np.any(x.imag != 0):
                raise FieldMismatch("real signal has a nonzero imaginary part")
            x = np.real(x).astype(float)
        else:
            x = x.astype(complex)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "entries", _frozen(x))

    @property
    def M(self) -> int:
        return self.entries.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def equivalent(self, other, tol: float = EQUIV_TOL) -> bool:
        """x == c*y for some |c| = 1 (c = +-1 when both signals are real)."""
        other = as_signal(other)
        x, y = self.entries, other.entries
        if x.shape != y.shape:
            return False
        nx, ny = np.linalg.norm(x), np.linalg.norm(y)
        if nx == 0.0 or ny == 0.0:
            return max(nx, ny) <= tol * max(nx, ny, 1.0)
        if self.field is Field.REAL and other.field is Field.REAL:
            return min(np.linalg.norm(x - y), np.linalg.norm(x + y)) <= tol * nx
        ip = np.vdot(x, y)  # sum y * conj(x) = <y, x>
        if ip == 0:
            return False
        return np.linalg.norm(x * (ip / abs(ip)) - y) <= tol * nx


def as_signal(x, field=None) -> Signal:
    return x if isinstance(x, Signal) else Signal(x, field)


def _check_compatible(phi: MeasurementEnsemble, x: Signal) -> None:
    if x.M != phi.M:
        raise DimensionMismatch(f"signal has length {x.M}, ensemble has M={phi.M}")
    if phi.is_real and x.field is Field.COMPLEX:
        raise FieldMismatch("complex signal measured by a real ensemble")


def intensity_map(phi: MeasurementEnsemble, x) -> np.ndarray:
    """Intensities ``|<x, phi_n>|**2`` for n = 1..N."""
    x = as_signal(x)
    _check_compatible(phi, x)
    return np.abs(phi.matrix.conj().T @ x.entries) ** 2


# Hermitian coordinates ------------------------------------------------------


def _pairs(m: int) -> list[tuple[int, int]]:
    return [(j, k) for j in range(m) for k in range(j + 1, m)]


@dataclass(frozen=True, eq=False)
class HermitianCoords:
    M: int
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float).ravel()
        if c.shape[0] != self.M * self.M:
            raise DimensionMismatch(f"expected {self.M ** 2} coordinates, got {c.shape[0]}")
        object.__setattr__(self, "coords", _frozen(c))

    @classmethod
    def from_matrix(cls, h) -> "HermitianCoords":
        h = np.asarray(h)
        m = h.shape[0]
        if h.shape != (m, m):
            raise ShapeError(f"expected a square matrix, got shape {h.shape}")
        return cls(m, hermitian_to_coords(h))

    def matrix(self) -> np.ndarray:
        return coords_to_hermitian(self.coords, self.M)


def hermitian_to_coords(h: np.ndarray) -> np.ndarray:
    """Coordinates of the Hermitian part of ``h`` in the fixed orthonormal basis."""
    h = np.asarray(h)
    m = h.shape[0]
    h = 0.5 * (h + h.conj().T)
    j, k = np.triu_indices(m, 1)
    off = h[j, k]
    return np.concatenate([np.real(np.diag(h)), SQRT2 * np.real(off), SQRT2 * np.imag(off)])


def coords_to_hermitian(coords: np.ndarray, m: int) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    p = m * (m - 1) // 2
    h = np.diag(coords[:m]).astype(complex)
    j, k = np.triu_indices(m, 1)
    off = (coords[m:m + p] + 1j * coords[m + p:m + 2 * p]) / SQRT2
    h[j, k] = off
    h[k, j] = off.conj()
    return h


def lift_rank_one(x) -> HermitianCoords:
    """Coordinates of the rank-one lift ``x x^*``."""
    x = as_signal(x)
    v = x.entries.astype(complex)
    return HermitianCoords(x.M, hermitian_to_coords(np.outer(v, v.conj())))


@dataclass(frozen=True, eq=False)
class SuperAnalysisMatrix:
    """Real ``N x M**2`` matrix of H -> (<H, phi_n phi_n^*>_HS)_n."""

    M: int
    N: int
    entries: np.ndarray

    def apply(self, h) -> np.ndarray:
        c = h.coords if isinstance(h, HermitianCoords) else hermitian_to_coords(h)
        return self.entries @ c


def super_analysis_operator(phi: MeasurementEnsemble, real_symmetric: bool = False) -> SuperAnalysisMatrix:
    """Row n holds the coordinates of ``phi_n phi_n^*``.

    The basis is orthonormal, so the Hilbert-Schmidt inner product with
    ``phi_n phi_n^*`` is the dot product of coordinate vectors.  With
    ``real_symmetric=True`` only the diagonal and symmetric coordinates are
    kept (the operator restricted to real symmetric H).
    """
    a = phi.matrix.astype(complex)
    m = phi.M
    j, k = np.triu_indices(m, 1)
    # phi_n phi_n^* has (j, k) entry phi_jn conj(phi_kn)
    off = a[j, :] * a[k, :].conj()
    rows = np.concatenate([np.abs(a) ** 2, SQRT2 * off.real, SQRT2 * off.imag], axis=0).T
    if real_symmetric:
        rows = rows[:, : m * (m + 1) // 2]
    return SuperAnalysisMatrix(M=m, N=phi.N, entries=_frozen(np.ascontiguousarray(rows)))


def real_lift_vectors(phi: MeasurementEnsemble, u) -> np.ndarray:
    """Rows ``(Re(phi_n phi_n^* u), Im(phi_n phi_n^* u))`` as an ``N x 2M`` array."""
    u = as_signal(u)
    if u.M != phi.M:
        raise DimensionMismatch(f"vector has length {u.M}, ensemble has M={phi.M}")
    if not np.any(u.entries):
        raise ZeroVector("u must be nonzero")
    a = phi.matrix.astype(complex)
    w = a * (a.conj().T @ u.entries)[np.newaxis, :]  # column n = phi_n (phi_n^* u)
    return np.concatenate([w.real, w.imag], axis=0).T
