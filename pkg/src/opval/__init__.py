"""opval: wavelet analysis and norm verification for matrix-valued functions.

Core objects: dyadic step functions (``StepFunction``), wavelet coefficient
fields (Haar exact, sampled Meyer), Littlewood-Paley square functions, the
Hardy/BMO/L_pMO norm suite with certified brackets for the variational
norms, and one checker per proved inequality.  A FastAPI service wraps the
library; the ``opval`` CLI is a thin client of that service.
"""

__version__ = "0.1.0"

from .config import RunConfig
from .dyadic import (
    DyadicInterval,
    SignPattern,
    StepFunction,
    conditional_expectation,
    lp_norm,
    psd_sqrt,
    remove_unit_means,
    trace_pair,
)
from .norms import (
    MaximalSequence,
    NormBracket,
    bmo_col_norm,
    bmo_norm,
    bmo_row_norm,
    hardy_col_norm,
    hardy_norm,
    hardy_row_norm,
    lpmo_col_norm,
    maximal_norm,
    mean_osc_bmo_norm,
)
from .checks import (
    CheckReport,
    bg_equivalence_report,
    bmo_equivalence_report,
    fefferman_check,
    hp_duality_pair,
    hp_lpmo_check,
    operator_lemma_check,
    rademacher_norm,
    sign_flip,
    stein_check,
)
from .squares import SquareProfile, square_fn_col, square_fn_row, tent_norm, truncated_square_fn
from .verify import run_verify
from .wavelets import (
    HAAR,
    CoefficientField,
    HaarBasis,
    MeyerBasis,
    TentField,
    analyze,
    decay_check,
    embed_phi,
    project_psi,
    synthesize,
    wavelet_basis,
    wavelet_eval,
)

__all__ = [
    "__version__",
    "RunConfig",
    "DyadicInterval",
    "StepFunction",
    "SignPattern",
    "lp_norm",
    "psd_sqrt",
    "conditional_expectation",
    "trace_pair",
    "remove_unit_means",
    "NormBracket",
    "MaximalSequence",
    "hardy_col_norm",
    "hardy_row_norm",
    "hardy_norm",
    "bmo_col_norm",
    "bmo_row_norm",
    "bmo_norm",
    "maximal_norm",
    "lpmo_col_norm",
    "mean_osc_bmo_norm",
    "CheckReport",
    "fefferman_check",
    "hp_lpmo_check",
    "hp_duality_pair",
    "stein_check",
    "operator_lemma_check",
    "sign_flip",
    "rademacher_norm",
    "bg_equivalence_report",
    "bmo_equivalence_report",
    "SquareProfile",
    "square_fn_col",
    "square_fn_row",
    "truncated_square_fn",
    "tent_norm",
    "HAAR",
    "HaarBasis",
    "MeyerBasis",
    "CoefficientField",
    "TentField",
    "analyze",
    "synthesize",
    "embed_phi",
    "project_psi",
    "wavelet_basis",
    "wavelet_eval",
    "decay_check",
    "run_verify",
]
