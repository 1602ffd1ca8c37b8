"""Numerical workbench for the Klein-Gordon equation u_xy + u = 0 in
characteristic coordinates."""

from ._core import BACKEND
from .analysis import (
    BoundConstants,
    CoveringSpec,
    Regime,
    anqa_integral,
    bound_constants,
    legendre_conjugate_beta,
    numeric_growth_integral,
    q_covering_check,
    regime_classify,
    u1_envelope_check,
    y_star_min,
)
from .bessel import BesselValue, SeriesParams, asymptotic_J00, eval_biv_bessel, grad_biv_bessel
from .boundary import BoundaryFunction, GrowthBound, parse_function_spec
from .errors import (
    AbscissaError,
    AlignmentError,
    CompatibilityError,
    ContinuityError,
    ConvergenceError,
    DomainError,
    KGError,
    MetadataError,
    PreconditionError,
    SpecError,
    SupportError,
    UsageError,
)
from .field import Field, Grid
from .laplace import GrowthSpec, LaplaceEvaluation, evolution_deviation, laplace, vanishing_region
from .picard import CharacteristicLine, IterationReport, Rectangle, glue_residual, picard_solve, quadrature_residual
from .quadrature import QuadratureSpec
from .riemann import (
    finite_speed_check,
    lorentz_pullback,
    riemann_solve,
    split_solution,
    unilateral_horizontal,
)

__version__ = "0.1.0"
