from eigenbound.fields.drift import (
    DriftField,
    DriftKind,
    IsoparametricProfile,
    constant_drift,
    gaussian_soliton,
    partial_isoparametric,
)
from eigenbound.fields.tensor import (
    TensorField,
    TensorKind,
    identity_tensor,
    scaled_tensor,
    diagonal_tensor,
    affine_conformal_tensor,
    constant_symmetric_tensor,
)
from eigenbound.fields.constants import (
    ANALYTIC,
    NUMERIC,
    FieldConstants,
    FieldError,
    compute_eps_delta,
    compute_T0,
    compute_eta0,
    compute_C0,
    compute_C0_terms,
    field_constants,
    soliton_constants,
    verify_isoparametric,
)
