"""Measurement allocation and minimax linear risk for heteroscedastic Gaussian sequence models."""

from ._core import (
    AdversarialReport,
    EllipsoidSolution,
    HyperrectSolution,
    InequalityCheck,
    InfiniteRisk,
    NoSignChange,
    NumericAllocation,
    SequenceSpec,
    SimReport,
    SubOptimalSolution,
    TruncatedUniform,
    TruncationError,
    adversarial_check,
    beta_inequality_ellipsoid,
    beta_inequality_hyperrect,
    constant,
    constants,
    contour_summary,
    ellipsoid_optimal,
    ellipsoid_risk,
    ellipsoid_suboptimal,
    hyperrect_optimal,
    hyperrect_risk,
    hyperrect_uniform_risk,
    ratio_table,
    rho_ellipsoid,
    rho_hyperrect,
    run_cli,
    simulate,
    solve_t,
    truncated_uniform_best,
)

__version__ = "0.1.0"
