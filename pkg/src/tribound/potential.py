"""The three-parameter short-range potential and its shape analysis.

V(r) = (lambda^2/2) [ A (coth(lambda r) - 1) - B / sinh^2(lambda r)
                      + C cosh(lambda r) / sinh^3(lambda r) ],

singular at the origin like A/r - B/r^2 + C/r^3 and decaying like
exp(-2 lambda r).  Under x = coth(lambda r) the same function is the cubic
U(x) = A(x-1) + (1-x^2)(B - Cx) in units lambda^2/2, which factorizes as
U(x) = (x-1)[A + (x+1)(Cx - B)] and makes crossings and extrema elementary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

# x must exceed 1 by this much to count as a physical crossing/extremum
# (x = 1 is r = infinity).
ROOT_ADMISSIBLE_TOL = 1e-12


@dataclass(frozen=True)
class PotentialParams:
    """Strengths (A, B, C) of the 1/r, -1/r^2, 1/r^3 terms and range scale lambda."""

    A: float
    B: float
    C: float
    lam: float = 1.0

    def __post_init__(self):
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise ParameterError(f"lambda must be positive, got {self.lam}")
        for name in ("A", "B", "C"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")

    @property
    def gamma(self) -> float:
        """Shape ratio B/C."""
        self._require_c()
        return self.B / self.C

    @property
    def xi(self) -> float:
        """Shape ratio A/C."""
        self._require_c()
        return self.A / self.C

    def _require_c(self):
        if self.C == 0.0:
            raise ParameterError("shape ratios need C != 0")


@dataclass(frozen=True)
class Crossing:
    """A zero of the potential at finite r."""

    x: float
    r: float


@dataclass(frozen=True)
class Extremum:
    """A local extremum of the potential; value is V in units lambda^2/2."""

    x: float
    r: float
    value: float


@dataclass(frozen=True)
class ShapeReport:
    crossings: list[Crossing] = field(default_factory=list)
    extrema: list[Extremum] = field(default_factory=list)
    admits_bound_states: bool = False
    satisfies_B_ge_C: bool = False


def x_of_r(lam: float, r):
    """x = coth(lambda r); strictly decreasing in r with limit 1 at infinity.

    Resolution note: coth(t) - 1 = 2 e^{-2t}(1 + ...) falls below the spacing
    of floats near 1.0 once lambda r exceeds about 18, where the returned x
    collapses to exactly 1.0 and the inverse map is lost.  Relative round-trip
    accuracy 1e-12 holds for lambda r up to about 6.5.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0) or not np.all(np.isfinite(r)):
        raise ParameterError("r must be positive and finite")
    t = lam * r
    # coth t - 1 = 2 e^{-2t} / (1 - e^{-2t}), stable for all t > 0
    em = -np.expm1(-2.0 * t)
    x = 1.0 + 2.0 * np.exp(-2.0 * t) / em
    return x if x.shape else float(x)


def r_of_x(lam: float, x):
    """Inverse map r = arccoth(x)/lambda for x > 1."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 1.0):
        raise ParameterError("inverse map needs x > 1 (x = 1 is r = infinity)")
    r = 0.5 / lam * np.log((x + 1.0) / (x - 1.0))
    return r if r.shape else float(r)


def u_of_x(p: PotentialParams, x):
    """U(x) = A(x-1) + (1-x^2)(B - Cx): the potential in units lambda^2/2."""
    x = np.asarray(x, dtype=float)
    u = p.A * (x - 1.0) + (1.0 - x * x) * (p.B - p.C * x)
    return u if u.shape else float(u)


def potential_value(p: PotentialParams, r):
    """V(r), vanishing at infinity.

    Evaluated from exp(-2 lambda r) rewrites of the hyperbolic ratios, which
    are exact identities and neither overflow nor lose precision at large
    lambda r (direct sinh^3 overflows near lambda r ~ 237).
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0) or not np.all(np.isfinite(r)):
        raise ParameterError("r must be positive and finite")
    t = p.lam * r
    q = np.exp(-2.0 * t)
    em = -np.expm1(-2.0 * t)          # 1 - e^{-2t}
    coth_m1 = 2.0 * q / em
    inv_sinh2 = 4.0 * q / em**2
    cosh_over_sinh3 = 4.0 * q * (1.0 + q) / em**3
    v = 0.5 * p.lam**2 * (p.A * coth_m1 - p.B * inv_sinh2 + p.C * cosh_over_sinh3)
    return v if v.shape else float(v)


def max_basis_index(A: float) -> int | None:
    """Largest admissible basis index floor(sqrt(-A/2) - 1/2), or None if A > -1/2.

    Bounds both the square-integrable series length and the number of bound
    states (count <= index + 1).
    """
    if A > -0.5:
        return None
    return int(math.floor(math.sqrt(-A / 2.0) - 0.5))


def classify_shape(p: PotentialParams) -> ShapeReport:
    """Crossings, extrema and bound-state admissibility of the potential.

    Crossings solve U(x) = 0 beyond the trivial root x = 1:
        x_pm = [gamma - 1 +- sqrt((gamma+1)^2 - 4 xi)] / 2,
    kept when real and x > 1.  Extrema solve dU/dx = 0:
        x_pm~ = [gamma +- sqrt(gamma^2 + 3(1 - xi))] / 3,
    same admissibility.  Both extrema are reported even when no crossing
    exists (the configuration with a barrier but no negative well).
    """
    gamma, xi = p.gamma, p.xi

    crossings: list[Crossing] = []
    disc = (gamma + 1.0) ** 2 - 4.0 * xi
    if disc >= 0.0:
        root = math.sqrt(disc)
        for x in (0.5 * (gamma - 1.0 - root), 0.5 * (gamma - 1.0 + root)):
            if x >= 1.0 + ROOT_ADMISSIBLE_TOL:
                crossings.append(Crossing(x=x, r=r_of_x(p.lam, x)))

    extrema: list[Extremum] = []
    disc_e = gamma * gamma + 3.0 * (1.0 - xi)
    if disc_e >= 0.0:
        root = math.sqrt(disc_e)
        for x in ((gamma - root) / 3.0, (gamma + root) / 3.0):
            if x >= 1.0 + ROOT_ADMISSIBLE_TOL:
                extrema.append(Extremum(x=x, r=r_of_x(p.lam, x), value=u_of_x(p, x)))

    crossings.sort(key=lambda c: c.x)
    extrema.sort(key=lambda e: e.x)
    return ShapeReport(
        crossings=crossings,
        extrema=extrema,
        admits_bound_states=p.A <= -0.5,
        satisfies_B_ge_C=p.B >= p.C,
    )
