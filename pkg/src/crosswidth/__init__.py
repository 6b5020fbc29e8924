"""Resonance widths from a tangential crossing of two potential curves.

A two-channel 1D Schrodinger operator whose diagonal potentials cross
tangentially to order n at a turning point traps one channel and lets
the other escape.  This package computes the resulting resonance
widths three ways and cross-checks them: the closed-form coefficient
kappa_n built from a generalized Airy function, direct quadrature of
the oscillatory crossing integral, and an exact finite-h transfer
matrix assembled from Wronskian-normalized Airy bases with the
coupling treated by a Neumann series.
"""

from .airy import (
    AiryPair,
    CiPair,
    Y_MAX,
    Y_MIN,
    airy_eval,
    airy_product_integral,
    ci_eval,
)
from .genairy import (
    GenAiryResult,
    N_MAX,
    cn_const,
    gen_airy,
    gen_airy_asymptotic_neg,
    gen_airy_zero,
)
from .potentials import (
    CrossingData,
    Interaction,
    LangerChart,
    PotentialModel,
    SHIPPED_MODELS,
    action,
    detect_contact_order,
    get_model,
    langer_xi,
    load_model,
    turning_point,
)
from .crossing import (
    SemiclassicalPoint,
    TransferMatrix,
    crossing_error_exponent,
    crossing_integral,
    crossing_integral_asymptotic,
    epsilon_exponent,
    kappa_n,
    kappa_n_zero,
    semiclassical_point,
    signed_root,
    transfer_matrix_asymptotic,
    wkb_phase_sigma,
)
from .exactsys import (
    ExactAssembly,
    ScalarBasis,
    assemble,
    coefficient_set,
    microlocal_coefficients,
    neumann_solve,
    scalar_basis,
    transfer_matrix_numeric,
    wkb_basis,
)
from .resonances import (
    ResonancePrediction,
    ResonanceWindow,
    bohr_sommerfeld_points,
    predict_resonances,
    prediction_rows,
    resonance_window,
    width_consistency_check,
)
from .acceptance import CriterionResult, Suite, run_all
from .errors import ModelError, NumericError, RangeError

__version__ = "0.1.0"

__all__ = [
    "AiryPair",
    "CiPair",
    "CriterionResult",
    "CrossingData",
    "ExactAssembly",
    "GenAiryResult",
    "Interaction",
    "LangerChart",
    "ModelError",
    "N_MAX",
    "NumericError",
    "PotentialModel",
    "RangeError",
    "ResonancePrediction",
    "ResonanceWindow",
    "SHIPPED_MODELS",
    "ScalarBasis",
    "SemiclassicalPoint",
    "Suite",
    "TransferMatrix",
    "Y_MAX",
    "Y_MIN",
    "action",
    "airy_eval",
    "airy_product_integral",
    "assemble",
    "bohr_sommerfeld_points",
    "ci_eval",
    "cn_const",
    "coefficient_set",
    "crossing_error_exponent",
    "crossing_integral",
    "crossing_integral_asymptotic",
    "detect_contact_order",
    "epsilon_exponent",
    "gen_airy",
    "gen_airy_asymptotic_neg",
    "gen_airy_zero",
    "get_model",
    "kappa_n",
    "kappa_n_zero",
    "langer_xi",
    "load_model",
    "microlocal_coefficients",
    "neumann_solve",
    "predict_resonances",
    "prediction_rows",
    "resonance_window",
    "run_all",
    "scalar_basis",
    "semiclassical_point",
    "signed_root",
    "transfer_matrix_asymptotic",
    "transfer_matrix_numeric",
    "turning_point",
    "wkb_basis",
    "wkb_phase_sigma",
    "width_consistency_check",
]
