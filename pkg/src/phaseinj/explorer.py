"""Monte Carlo sweeps over (M, N) grids of random ensembles.

Trial seeding contract: trial ``t`` of cell ``(M, N)`` in a grid with seed
``s`` uses the ensemble ``gaussian_random(field, M, N, trial_seed(s, M, N, t))``
where ``trial_seed`` draws one 64-bit word from
``numpy.random.SeedSequence([s, M, N, t])``.  Every trial is therefore
independent of how cells and trials are scheduled across workers.
"""
from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .almost_inj import real_almost_injectivity
from .constructions import gaussian_random
from .ensemble import Field, _field
from .errors import IncompatibleSpec
from .injectivity import (
    Verdict,
    complex_injectivity_m2,
    full_spark,
    hmw_test,
    local_injectivity_sample,
    real_injectivity,
)

CSV_HEADER = ["field", "property", "M", "N", "trials", "successes", "inconclusive", "seed"]
LOCAL_SAMPLES = 5


class Property(str, Enum):
    REAL_INJECTIVE = "RealInjective"
    REAL_ALMOST_INJECTIVE = "RealAlmostInjective"
    COMPLEX_INJECTIVE_M2 = "ComplexInjectiveM2"
    COMPLEX_INJECTIVE_M3 = "ComplexInjectiveM3"
    FULL_SPARK = "FullSpark"
    LOCAL_INJ_SAMPLE = "LocalInjSample"

    @property
    def necessity_only(self) -> bool:
        return self is Property.LOCAL_INJ_SAMPLE


@dataclass(frozen=True)
class GridSpec:
    field: Field
    property: Property
    M_range: tuple[int, int]
    N_range: tuple[int, int]
    trials: int
    seed: int

    def __post_init__(self):
        try:
            object.__setattr__(self, "field", _field(self.field))
            object.__setattr__(self, "property", Property(self.property))
        except ValueError as exc:
            raise IncompatibleSpec(str(exc)) from None
        object.__setattr__(self, "M_range", tuple(int(v) for v in self.M_range))
        object.__setattr__(self, "N_range", tuple(int(v) for v in self.N_range))
        (m0, m1), (n0, n1) = self.M_range, self.N_range
        if not (1 <= m0 <= m1 and 1 <= n0 <= n1):
            raise IncompatibleSpec(f"bad ranges M={self.M_range}, N={self.N_range}")
        if self.trials < 1:
            raise IncompatibleSpec("trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise IncompatibleSpec("seed must be a 64-bit unsigned integer")
        prop, fld = self.property, self.field
        if prop in (Property.REAL_INJECTIVE, Property.REAL_ALMOST_INJECTIVE) and fld is not Field.REAL:
            raise IncompatibleSpec(f"{prop.value} requires field=real")
        if prop in (Property.COMPLEX_INJECTIVE_M2, Property.COMPLEX_INJECTIVE_M3, Property.LOCAL_INJ_SAMPLE):
            if fld is not Field.COMPLEX:
                raise IncompatibleSpec(f"{prop.value} requires field=complex")
        fixed = {Property.COMPLEX_INJECTIVE_M2: 2, Property.COMPLEX_INJECTIVE_M3: 3}.get(prop)
        if fixed is not None and self.M_range != (fixed, fixed):
            raise IncompatibleSpec(f"{prop.value} requires M_range = {fixed}..{fixed}")

    def cells(self) -> list[tuple[int, int]]:
        (m0, m1), (n0, n1) = self.M_range, self.N_range
        return [(m, n) for m in range(m0, m1 + 1) for n in range(n0, n1 + 1)]


@dataclass(frozen=True)
class CellResult:
    field: Field
    property: Property
    M: int
    N: int
    trials: int
    successes: int
    inconclusive_count: int
    seed: int
    elapsed_ms: float = field(default=0.0, compare=False)

    @property
    def failures(self) -> int:
        return self.trials - self.successes - self.inconclusive_count

    @property
    def fraction(self) -> float:
        return self.successes / self.trials


def trial_seed(seed: int, M: int, N: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, M, N, trial]).generate_state(1, np.uint64)[0])


def _run_trial(prop: Property, fld: Field, m: int, n: int, seed: int) -> str:
    """Outcome of one trial: 'success', 'failure' or 'inconclusive'."""
    phi = gaussian_random(fld, m, n, seed)
    if prop is Property.FULL_SPARK:
        return "success" if n >= m and full_spark(phi) else "failure"
    if prop is Property.LOCAL_INJ_SAMPLE:
        rng = np.random.default_rng(seed ^ 0x5EED)
        for _ in range(LOCAL_SAMPLES):
            u = rng.standard_normal(m) + 1j * rng.standard_normal(m)
            if local_injectivity_sample(phi, u).rank < 2 * m - 1:
                return "failure"
        return "success"
    if prop is Property.REAL_ALMOST_INJECTIVE:
        return "success" if real_almost_injectivity(phi).holds else "failure"
    certifier = {
        Property.REAL_INJECTIVE: real_injectivity,
        Property.COMPLEX_INJECTIVE_M2: complex_injectivity_m2,
        Property.COMPLEX_INJECTIVE_M3: hmw_test,
    }[prop]
    v = certifier(phi).verdict
    if v is Verdict.INCONCLUSIVE:
        return "inconclusive"
    return "success" if v is Verdict.INJECTIVE else "failure"


def run_cell(spec: GridSpec, m: int, n: int) -> CellResult:
    start = time.perf_counter()
    tally = {"success": 0, "failure": 0, "inconclusive": 0}
    for t in range(spec.trials):
        tally[_run_trial(spec.property, spec.field, m, n, trial_seed(spec.seed, m, n, t))] += 1
    return CellResult(
        spec.field,
        spec.property,
        m,
        n,
        spec.trials,
        tally["success"],
        tally["inconclusive"],
        spec.seed,
        (time.perf_counter() - start) * 1e3,
    )


def _run_cell_args(args):
    return run_cell(*args)


def run_grid(spec: GridSpec, workers: int = 1) -> list[CellResult]:
    """Run every cell of the grid; output order is (M, N) ascending."""
    cells = spec.cells()
    if workers <= 1 or len(cells) == 1:
        return [run_cell(spec, m, n) for m, n in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_cell_args, [(spec, m, n) for m, n in cells]))


def emit_csv(results, path) -> None:
    results = list(results)
    if not results:
        raise ValueError("no results to write")
    rows = sorted(results, key=lambda r: (r.M, r.N))
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([r.field.value, r.property.value, r.M, r.N, r.trials, r.successes, r.inconclusive_count, r.seed])


def read_csv(path) -> list[CellResult]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        return [
            CellResult(
                _field(row["field"]),
                Property(row["property"]),
                int(row["M"]),
                int(row["N"]),
                int(row["trials"]),
                int(row["successes"]),
                int(row["inconclusive"]),
                int(row["seed"]),
            )
            for row in reader
        ]
