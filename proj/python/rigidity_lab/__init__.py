"""p-Laplacian rigidity laboratory on the round sphere and the flat torus."""

from ._core import (
    ConfigError,
    DegenerateGamma,
    DegenerateGradient,
    ExponentPole,
    Geometry,
    NegativeBranch,
    NonPositiveField,
    NotOnShell,
    ParamSet,
    PoleError,
    PositivityLoss,
    RangeError,
    RigidityError,
    ShapeMismatch,
    SingularOperator,
    StiffnessAbort,
    cdc_certificate,
    certificate_root,
    derive_constants,
    interpolation_check,
    lambda1,
    lambda_star_estimate,
    mu_at_selection,
    named_field,
    named_field_names,
    run_cli,
    run_flow,
    solve_stationary,
    verify_unconditional,
)

__all__ = [name for name in dir() if not name.startswith("_")]
