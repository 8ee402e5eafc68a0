"""rapidnets: numerical seminorm asymptotics for eps-indexed nets.

Weighted sup-seminorms of smooth nets on box domains, growth-exponent
fitting over geometric eps grids, moderateness / negligibility verdicts
against regular sequence sets, and empirical checks of the intersection,
Fourier and null characterizations on a builtin net suite.
"""

from .regular_sets import (
    AxiomCheck,
    AxiomReport,
    DominationResult,
    DoubleSeqWindow,
    RegularSetSpec,
    SeqWindow,
    affine_envelope,
    closure_windows,
    dominates,
    project_col_zero,
    project_row_zero,
    verify_axioms,
)
from .nets import (
    Box,
    DeltaNet,
    EpsilonGrid,
    GaussianPeak,
    GridPolicy,
    Monomial,
    Net,
    Oscillatory,
    PolyWeight,
    SampleGrid,
    SeminormProfile,
    SeminormValue,
    SuperSmall,
    Tabulated,
    TensorProductFamily,
    bump,
    bump_deriv,
    compositions,
    derivative,
    evaluate,
    load_tabulated,
    reflect,
    seminorm,
    seminorm_sweep,
)
from .asymptotics import (
    ExponentFit,
    ExponentProfile,
    MembershipVerdict,
    ceil_tenth,
    classify,
    classify_profile,
    fit_exponent,
    fit_profile,
)
from .fourier import (
    FourierUnavailable,
    SpectralSamples,
    dft_quadrature,
    fourier_seminorm,
    fourier_sweep,
    inverse_transform,
    parseval_gap,
    roundtrip_error,
    transform,
)
from .characterize import (
    DEFAULT_CONFIG,
    NULL_THEOREM_BY_SCALE,
    THEOREM_IDS,
    BoundReport,
    CellCheck,
    CheckConfig,
    TaylorSummary,
    TheoremReport,
    builtin_suite,
    check_fourier,
    check_intersection,
    check_null,
    check_taylor,
    fourier_applicable,
    marginal_profile,
    measure_second_derivative_order,
    mixed_profile,
    taylor_derivative_bound,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomCheck",
    "AxiomReport",
    "BoundReport",
    "Box",
    "CellCheck",
    "CheckConfig",
    "DEFAULT_CONFIG",
    "DeltaNet",
    "DominationResult",
    "DoubleSeqWindow",
    "EpsilonGrid",
    "ExponentFit",
    "ExponentProfile",
    "FourierUnavailable",
    "GaussianPeak",
    "GridPolicy",
    "MembershipVerdict",
    "Monomial",
    "NULL_THEOREM_BY_SCALE",
    "Net",
    "Oscillatory",
    "PolyWeight",
    "RegularSetSpec",
    "SampleGrid",
    "SeminormProfile",
    "SeminormValue",
    "SeqWindow",
    "SpectralSamples",
    "SuperSmall",
    "THEOREM_IDS",
    "Tabulated",
    "TaylorSummary",
    "TensorProductFamily",
    "TheoremReport",
    "affine_envelope",
    "builtin_suite",
    "bump",
    "bump_deriv",
    "ceil_tenth",
    "check_fourier",
    "check_intersection",
    "check_null",
    "check_taylor",
    "classify",
    "classify_profile",
    "closure_windows",
    "compositions",
    "derivative",
    "dft_quadrature",
    "dominates",
    "evaluate",
    "fit_exponent",
    "fit_profile",
    "fourier_applicable",
    "fourier_seminorm",
    "fourier_sweep",
    "inverse_transform",
    "load_tabulated",
    "marginal_profile",
    "measure_second_derivative_order",
    "mixed_profile",
    "parseval_gap",
    "project_col_zero",
    "project_row_zero",
    "reflect",
    "roundtrip_error",
    "seminorm",
    "seminorm_sweep",
    "taylor_derivative_bound",
    "transform",
    "verify_axioms",
]
