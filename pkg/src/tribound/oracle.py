"""Brute-force matrix elements by adaptive integration.

Independent check of the spectral quadrature path: evaluates

    c_n c_m int_1^inf (x-1)^mu (x+1)^nu w(x) P_n(x) P_m(x) dx

directly under the substitution x = 1 + e^t, which tames both the x -> 1
endpoint and the exponential decay at infinity and shares no code with the
production solver's node-based approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ParameterError, SolverError
from .recursion import BasisParams
from .special import JacobiPair, jacobi_sequence, normalization_c

# Integration window in t = ln(x - 1).  Below -43 the variable x - 1 falls
# under extended-precision resolution of x; contributions there are bounded
# by exp(mu * t) and negligible for the integrable kernels this oracle
# targets.  Above 692 every admissible integrand has underflowed.
_T_LO = -43.0
_T_HI = 692.0

# QUADPACK subinterval cap; about 21 evaluations each, well under the
# 1e7-evaluation budget.
_LIMIT = 1500


@dataclass(frozen=True)
class IntegrationResult:
    value: float
    abs_error_estimate: float
    evaluations: int


def direct_matrix_element(basis: BasisParams, w, n: int, m: int,
                          tol: float = 1e-10) -> IntegrationResult:
    """Adaptive-quadrature matrix element of the kernel w between states n, m.

    Raises SolverError when the error estimate cannot be brought below tol
    within the evaluation budget.  Kernels singular at x = 1 need mu large
    enough for an integrable product (mu > 0 for a simple 1/(x-1) pole).
    """
    if basis.N > 8:
        raise ParameterError(
            "direct integration is supported for basis degree <= 8 (cost grows "
            "with the oscillation of the polynomials)")
    if not (0 <= n <= basis.N and 0 <= m <= basis.N):
        raise ParameterError(f"indices must lie in 0..{basis.N}, got ({n}, {m})")
    if tol < 1e-12:
        raise ParameterError(f"tolerance below 1e-12 is not supported, got {tol}")
    mu, nu = basis.mu, basis.nu
    pair = JacobiPair(mu, nu)
    log_c = (math.log(normalization_c(pair, n))
             + math.log(normalization_c(pair, m)))
    n_top = max(n, m)

    def integrand(t: float) -> float:
        # x - 1 = e^t exactly; extended precision keeps x distinguishable
        # from 1 down to t ~ -43 so kernels like 1/(1-x) stay accurate.
        e = np.exp(np.longdouble(t))
        x = np.longdouble(1.0) + e
        log_weight = log_c + mu * t + nu * float(np.log(x + 1.0)) + t
        if log_weight < -745.0:
            return 0.0
        p = jacobi_sequence(pair, n_top, float(x))
        return math.exp(log_weight) * float(w(x)) * float(p[n]) * float(p[m])

    # Peak of the weight at x0 - 1 = (mu + 1)/(-nu - mu - 1) * 2 roughly;
    # hint QUADPACK so narrow concentrated weights are not missed.
    x0 = (mu - nu) / (-mu - nu)
    t0 = math.log(max(x0 - 1.0, 1e-300))
    points = [t for t in (t0 - 8.0, t0 - 2.0, t0, t0 + 2.0, t0 + 8.0)
              if _T_LO < t < _T_HI]
    try:
        value, err, info = integrate.quad(
            integrand, _T_LO, _T_HI, epsabs=tol, epsrel=tol,
            limit=_LIMIT, points=points, full_output=True)[:3]
    except Exception as exc:  # quadpack signals hard failures as exceptions
        raise SolverError(f"direct integration failed: {exc}") from exc
    evaluations = int(info["neval"])
    if not math.isfinite(value) or err > tol * max(1.0, abs(value)):
        raise SolverError(
            f"direct integration did not converge: value = {value}, "
            f"error estimate = {err:.3e} with tol = {tol:.3e}")
    return IntegrationResult(value=float(value), abs_error_estimate=float(err),
                             evaluations=evaluations)


def direct_matrix(basis: BasisParams, w, size: int | None = None,
                  tol: float = 1e-10) -> np.ndarray:
    """Symmetric matrix of direct elements for indices 0..size-1."""
    k = basis.size if size is None else size
    if not 1 <= k <= basis.size:
        raise ParameterError(f"size must lie in 1..{basis.size}, got {k}")
    out = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            out[i, j] = out[j, i] = direct_matrix_element(basis, w, i, j, tol).value
    return out
