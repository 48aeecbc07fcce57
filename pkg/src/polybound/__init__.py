"""Rigorous annulus bounds on the eigenvalue moduli of matrix polynomials."""

from .bounds import (
    NormSummary,
    ReciprocalQuantities,
    all_bounds,
    best_enclosure,
    cauchy_classic,
    cauchy_disk,
    datt_govil,
    dominance_upper,
    enestrom_kakeya,
    holder_bounds,
    jlr_family,
    ratio_bounds,
)
from .core import (
    AnnulusBound,
    BoundId,
    BoundReport,
    MatrixPolynomial,
    NormKind,
    Tolerances,
    read_instance,
    validate,
    write_instance,
)
from .errors import (
    BracketInvalid,
    CapExceeded,
    ConvergenceFailure,
    EnclosureViolation,
    InvalidParameter,
    NoApplicableBound,
    NotHermitian,
    NotMonic,
    ParseError,
    PolyboundError,
    PolynomialError,
    PreconditionViolated,
    ShapeError,
    SingularCoefficient,
    SingularMatrix,
)
from .harness import (
    CampaignSummary,
    ExperimentReport,
    Family,
    InstanceSpec,
    generate_instance,
    render,
    run_campaign,
    run_experiment,
)
from .pep import SpectrumSummary, companion, monicize, reversal, solve_spectrum

__version__ = "0.1.0"

__all__ = [
    "AnnulusBound",
    "BoundId",
    "BoundReport",
    "BracketInvalid",
    "CampaignSummary",
    "CapExceeded",
    "ConvergenceFailure",
    "EnclosureViolation",
    "ExperimentReport",
    "Family",
    "InstanceSpec",
    "InvalidParameter",
    "MatrixPolynomial",
    "NoApplicableBound",
    "NormKind",
    "NormSummary",
    "NotHermitian",
    "NotMonic",
    "ParseError",
    "PolyboundError",
    "PolynomialError",
    "PreconditionViolated",
    "ReciprocalQuantities",
    "ShapeError",
    "SingularCoefficient",
    "SingularMatrix",
    "SpectrumSummary",
    "Tolerances",
    "all_bounds",
    "best_enclosure",
    "cauchy_classic",
    "cauchy_disk",
    "companion",
    "datt_govil",
    "dominance_upper",
    "enestrom_kakeya",
    "generate_instance",
    "holder_bounds",
    "jlr_family",
    "monicize",
    "ratio_bounds",
    "read_instance",
    "render",
    "reversal",
    "run_campaign",
    "run_experiment",
    "solve_spectrum",
    "validate",
    "write_instance",
]
