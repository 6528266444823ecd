"""Kubo-Ando operator means on Hermitian matrices and Ky Fan type checks."""

from .errors import (
    DimensionMismatch,
    DomainError,
    LinearMean,
    NotHermitian,
    NotPositiveDefinite,
    NumericalFailure,
    OpMeanError,
    PreconditionViolated,
    SpecParseError,
)
from .hermitian import (
    HermitianMatrix,
    OrderComparison,
    SpectralDecomposition,
    eig_hermitian,
    inv_pd,
    inv_sqrt_pd,
    loewner_leq,
    matrix_function,
    psd_check,
    sqrt_psd,
)
from .means import (
    Pencil,
    adjoint,
    adjoint_mean,
    arithmetic,
    barbour,
    dual,
    dual_mean,
    evaluate_mean,
    geometric,
    harmonic,
    parse_mean_spec,
    transpose,
    transpose_mean,
)
from .measure import BorelMeasure, dirac, f_from_measure, geometric_measure, mean_from_measure
from .repfunc import RepresentingFunction

__version__ = "0.1.0"
