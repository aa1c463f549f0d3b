"""Injectivity and almost-injectivity certificates for phase retrieval.

Decides whether the intensity map x -> (|<x, phi_n>|^2)_n of a real or complex
measurement ensemble is injective modulo global phase, builds the explicit
ensembles known to achieve the thresholds, and estimates empirical phase
transitions over random ensembles.
"""
from .almost_inj import (
    AlmostInjVerdict,
    AlmostVerdict,
    UntfReport,
    almost_inj_bounds,
    orthogonal_partitionable,
    pointwise_recoverable,
    real_almost_injectivity,
    untf_almost_injectivity,
    untf_check,
)
from .constructions import (
    Family,
    FamilySpec,
    bodmann_hammen,
    fixture_3x8,
    gaussian_random,
    harmonic_dft,
    vandermonde,
)
from .ensemble import (
    Field,
    HermitianCoords,
    MeasurementEnsemble,
    Signal,
    SuperAnalysisMatrix,
    intensity_map,
    lift_rank_one,
    real_lift_vectors,
    super_analysis_operator,
)
from .explorer import CellResult, GridSpec, Property, emit_csv, read_csv, run_grid
from .injectivity import (
    BoundsReport,
    InjectivityVerdict,
    Verdict,
    complement_property,
    complex_injectivity,
    complex_injectivity_m2,
    full_spark,
    hmw_test,
    injectivity_bounds,
    local_injectivity_sample,
    real_injectivity,
)
from .numerics import NullSpaceBasis, RankResult, ToleranceConfig, null_space_of, rank_of, spans_space

__version__ = "0.1.0"
