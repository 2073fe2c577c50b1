"""Neutral Rayleigh numbers for convection under vertically varying gravity.

Two spectral Galerkin discretizations (shifted Chebyshev and shifted
Legendre trial sets) and a finite-difference reference solver for the
free-boundary linear stability problem with gravity H(z) = 1 + eps h(z).
"""

from .analysis import (
    PUBLISHED,
    TABLE_PARAMS,
    BracketError,
    CriticalPoint,
    TableRow,
    calibrated_cheb_spec,
    calibration_info,
    classical_r2,
    critical_point,
    neutral_curve,
    reproduce_table,
    slp_deviation_report,
    solve_neutral,
)
from .assembly import (
    GalerkinMatrices,
    GravityProfile,
    assemble,
    bundled_profile,
    gravity_product_coeffs,
    weighted_inner_product,
)
from .bases import (
    BasisKind,
    ChebBasisSpec,
    LegBasisSpec,
    PolyCoeffs,
    cheb_first_derivative,
    cheb_second_derivative,
    cheb_trial_function,
    eval_shifted_chebyshev,
    eval_shifted_legendre,
    leg_trial_function,
    monomial_times_cheb,
)
from .eigen import (
    NeutralResult,
    NoNeutralValueError,
    PencilProblem,
    ResidualError,
    build_pencil,
    build_pencil_blocks,
    determinant_scan,
    refine_bracket,
    smallest_rayleigh,
)
from .oracle import FdGrid, fd_blocks, fd_reference, fd_smallest_rayleigh

__version__ = "0.1.0"
