"""Bound states of a short-range potential with 1/r, 1/r^2 and 1/r^3 singularities.

A finite square-integrable basis of weighted Jacobi polynomials in
x = coth(lambda r) renders the wave operator tridiagonal; the spectrum comes
from a Gauss-quadrature-assembled generalized eigenproblem and wavefunctions
from finite series whose coefficients obey a three-term recursion.
"""

from .errors import ParameterError, SolverError
from .potential import (
    Crossing,
    Extremum,
    PotentialParams,
    ShapeReport,
    classify_shape,
    max_basis_index,
    potential_value,
    r_of_x,
    u_of_x,
    x_of_r,
)
from .recursion import (
    AssociatedParams,
    BasisParams,
    EnergyParams,
    RecursionCoeffs,
    associated_params,
    auto_nu,
    energy_params,
    expansion_coefficients,
    h_polynomial_sequence,
    nu_energy_independent,
    recursion_coeffs,
)
from .solver import (
    AssembledSystem,
    BoundSpectrum,
    PlateauScan,
    PlateauStat,
    QuadratureRule,
    assemble_system,
    bound_states,
    build_x_matrix,
    generalized_spectrum,
    physical_state_bound,
    plateau_scan,
    quadrature_matrix,
    quadrature_rule,
    solve_bound_states,
    symtridiag_eig,
)
from .special import (
    JacobiPair,
    SignedLogMagnitude,
    jacobi_derivative,
    jacobi_eval,
    jacobi_sequence,
    normalization_c,
    signed_log_gamma,
)
from .oracle import IntegrationResult, direct_matrix, direct_matrix_element
from .wavefunction import (
    WavefunctionTable,
    count_sign_changes,
    default_r_grid,
    sample_wavefunction,
    state_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "AssembledSystem",
    "AssociatedParams",
    "BasisParams",
    "BoundSpectrum",
    "Crossing",
    "EnergyParams",
    "Extremum",
    "IntegrationResult",
    "JacobiPair",
    "ParameterError",
    "PlateauScan",
    "PlateauStat",
    "PotentialParams",
    "QuadratureRule",
    "RecursionCoeffs",
    "ShapeReport",
    "SignedLogMagnitude",
    "SolverError",
    "WavefunctionTable",
    "assemble_system",
    "associated_params",
    "auto_nu",
    "bound_states",
    "build_x_matrix",
    "classify_shape",
    "count_sign_changes",
    "default_r_grid",
    "direct_matrix",
    "direct_matrix_element",
    "energy_params",
    "expansion_coefficients",
    "generalized_spectrum",
    "h_polynomial_sequence",
    "jacobi_derivative",
    "jacobi_eval",
    "jacobi_sequence",
    "max_basis_index",
    "normalization_c",
    "nu_energy_independent",
    "physical_state_bound",
    "plateau_scan",
    "potential_value",
    "quadrature_matrix",
    "quadrature_rule",
    "r_of_x",
    "recursion_coeffs",
    "sample_wavefunction",
    "signed_log_gamma",
    "solve_bound_states",
    "state_coefficients",
    "symtridiag_eig",
    "u_of_x",
    "x_of_r",
]
