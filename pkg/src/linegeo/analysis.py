"""Radial analysis of the flow: travel time, effective potential, orbits.

For zero angular momentum the radial travel time is an explicit
primitive, computable two independent ways: adaptive quadrature of
sqrt(1-r^2)/(1+r^2)^{3/2}, or the hypergeometric double series
R F1(1/2; -1/2, 3/2; 3/2; R^2, -R^2).  Both give the finite equator
arrival time t = 0.599070... / sqrt(I1) from the pole.

For nonzero angular momentum the radial motion is governed by the
effective potential U(R) = (1+R^2)^3/((1-R^2)R^2): real radial speed
requires U(R) <= I1/I2^2, confining the orbit to an annulus whose edges
are the two roots of U(R) = I1/I2^2 around the potential minimum
6*sqrt(3) at R = sqrt(2-sqrt(3)).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ._backend import kernels
from .errors import ConvergenceError, DomainError, NoOrbitError
from .geodesics import MIN_ORBIT_RATIO, Termination, Trajectory

#: radius of the circular orbit, the minimiser of the effective potential
CRITICAL_RADIUS = math.sqrt(2.0 - math.sqrt(3.0))

#: anti-diagonal tail threshold for the series
SERIES_TAIL_TOL = 1e-14

#: hard cap on the number of anti-diagonals
SERIES_MAX_DIAGONALS = 10_000

#: above this radius the series converges slowly; blowup_time switches
#: to quadrature there
SERIES_RADIUS_LIMIT = 0.95

_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-13, limit=200)


def _integrand(r):
    return math.sqrt(1.0 - r * r) / (1.0 + r * r) ** 1.5


def radial_quadrature(big_r: float) -> float:
    """Travel-time primitive int_0^R sqrt(1-r^2)/(1+r^2)^{3/2} dr.

    Adaptive quadrature, absolute error below 1e-12; the integrand is
    bounded on [0, 1] with a square-root zero at r = 1.
    """
    big_r = float(big_r)
    if not 0.0 <= big_r <= 1.0:
        raise DomainError(f"radius must lie in [0, 1], got {big_r}")
    if big_r == 0.0:
        return 0.0
    value, abserr = quad(_integrand, 0.0, big_r, **_QUAD_OPTS)
    if abserr > 1e-12:
        raise ConvergenceError(f"quadrature error estimate {abserr:.2e} exceeds 1e-12")
    return value


def appell_f1_series(big_r: float) -> float:
    """The same primitive as a hypergeometric double series.

    Evaluates R F1(1/2; -1/2, 3/2; 3/2; R^2, -R^2) by anti-diagonal
    summation with Pochhammer recurrences (see the kernel).  Valid for
    0 <= R < 1 where the double series converges.
    """
    big_r = float(big_r)
    if not 0.0 <= big_r < 1.0:
        raise ConvergenceError(
            f"series converges only for 0 <= R < 1, got {big_r}; "
            "use radial_quadrature at R = 1"
        )
    value, _, converged = kernels.appell_f1(big_r, SERIES_TAIL_TOL, SERIES_MAX_DIAGONALS)
    if not converged:
        raise ConvergenceError(
            f"series did not meet the tail threshold within "
            f"{SERIES_MAX_DIAGONALS} anti-diagonals at R = {big_r}"
        )
    return value


def blowup_time(i1: float, r_start: float = 0.0) -> float:
    """Parameter time for a zero-angular-momentum geodesic to reach the
    equator from radius ``r_start``: (Q(1) - Q(R_start)) / sqrt(I1)."""
    if i1 <= 0.0:
        raise DomainError(f"I1 must be positive, got {i1}")
    if not 0.0 <= r_start < 1.0:
        raise DomainError(f"start radius must lie in [0, 1), got {r_start}")
    if r_start == 0.0:
        travelled = 0.0
    elif r_start <= SERIES_RADIUS_LIMIT:
        travelled = appell_f1_series(r_start)
    else:
        travelled = radial_quadrature(r_start)
    return (radial_quadrature(1.0) - travelled) * i1**-0.5


def effective_potential(big_r: float) -> float:
    """U(R) = (1+R^2)^3 / ((1-R^2) R^2) on 0 < R < 1."""
    big_r = float(big_r)
    if not 0.0 < big_r < 1.0:
        raise DomainError(f"effective potential has poles at 0 and 1; got R = {big_r}")
    r2 = big_r * big_r
    return (1.0 + r2) ** 3 / ((1.0 - r2) * r2)


@dataclass(frozen=True)
class TurningPoints:
    """Orbit annulus [R_min, R_max] at level ratio = I1/I2^2."""

    R_min: float
    R_max: float
    ratio: float


def _bisect(fn, lo, hi, flo):
    # fn changes sign on [lo, hi]; flo = fn(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if (flo > 0.0) == (fmid > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    return 0.5 * (lo + hi)


def turning_points(i1: float, i2: float) -> TurningPoints:
    """Solve U(R) = I1/I2^2 for the two turning radii.

    The potential decreases on (0, R_c) and increases on (R_c, 1) with
    R_c = sqrt(2-sqrt(3)), so each side holds exactly one root, found by
    bisection to 1e-12.  A ratio at the minimum (within 1e-12) collapses
    the annulus to the circular orbit.

    Raises
    ------
    NoOrbitError
        If the ratio lies below the potential minimum 6*sqrt(3).
    DomainError
        If I2 = 0 (radial motion has no turning points; use
        ``blowup_time``).
    """
    if i2 == 0.0:
        raise DomainError("I2 = 0 is radial motion; use blowup_time instead")
    if i1 <= 0.0:
        raise DomainError(f"I1 must be positive, got {i1}")
    ratio = i1 / (i2 * i2)
    if ratio < MIN_ORBIT_RATIO - 1e-12 * max(1.0, ratio):
        raise NoOrbitError(
            f"no orbit: I1/I2^2 = {ratio:.6f} below 6*sqrt(3) = {MIN_ORBIT_RATIO:.6f}"
        )
    if abs(ratio - MIN_ORBIT_RATIO) <= 1e-12 * max(1.0, ratio):
        return TurningPoints(CRITICAL_RADIUS, CRITICAL_RADIUS, ratio)

    def level(big_r):
        return effective_potential(big_r) - ratio

    # walk out from the minimum until the level is bracketed on each side
    lo = CRITICAL_RADIUS
    while level(lo) < 0.0:
        lo *= 0.5
        if lo < 1e-300:  # pragma: no cover - U diverges at 0, cannot happen
            raise ConvergenceError("failed to bracket the inner turning point")
    gap = 1.0 - CRITICAL_RADIUS
    hi = CRITICAL_RADIUS
    while level(hi) < 0.0:
        gap *= 0.5
        hi = 1.0 - gap
        if gap < 1e-300:  # pragma: no cover
            raise ConvergenceError("failed to bracket the outer turning point")
    r_min = _bisect(level, lo, min(2.0 * lo, CRITICAL_RADIUS), level(lo))
    r_max = _bisect(level, 1.0 - 2.0 * gap, hi, level(1.0 - 2.0 * gap))
    return TurningPoints(r_min, r_max, ratio)


@dataclass(frozen=True)
class OscillationReport:
    """Observed radial extremes of a trajectory against the predicted
    annulus.  ``conclusive`` is False when the trajectory span did not
    cover a full radial sweep, so an extreme may not have been attained."""

    observed_min: float
    observed_max: float
    predicted: TurningPoints
    discrepancy_min: float
    discrepancy_max: float
    radial_turnings: int
    conclusive: bool


def oscillation_check(traj: Trajectory) -> OscillationReport:
    """Compare a trajectory's radial extremes to the potential's roots.

    Counts interior sign changes of Rdot along the samples; fewer than
    two means the orbit has not visited both edges of the annulus and
    the report is flagged inconclusive (a near-circular orbit with a
    collapsed annulus is treated as conclusive directly).
    """
    i2 = traj.integrals0.I2
    if i2 == 0.0:
        raise DomainError("oscillation check requires nonzero angular momentum")
    predicted = turning_points(traj.integrals0.I1, i2)

    big_r = traj.radius
    obs_min = float(np.min(big_r))
    obs_max = float(np.max(big_r))

    # Rdot = Re(conj(xi) xidot)/R; R > 0 along orbits with I2 != 0
    rdot = (traj.xi.conjugate() * traj.xidot).real / np.where(big_r > 0.0, big_r, 1.0)
    signs = np.sign(rdot)
    signs = signs[signs != 0.0]
    turnings = int(np.count_nonzero(signs[1:] != signs[:-1])) if len(signs) > 1 else 0

    collapsed = predicted.R_max - predicted.R_min < 1e-6 and obs_max - obs_min < 1e-6
    conclusive = turnings >= 2 or collapsed
    if traj.termination is not Termination.TIME_LIMIT:
        conclusive = False  # the orbit was cut short by the integrator

    return OscillationReport(
        observed_min=obs_min,
        observed_max=obs_max,
        predicted=predicted,
        discrepancy_min=abs(obs_min - predicted.R_min),
        discrepancy_max=abs(obs_max - predicted.R_max),
        radial_turnings=turnings,
        conclusive=conclusive,
    )


def potential_curve(r_lo: float = 0.05, r_hi: float = 0.95, num: int = 181) -> np.ndarray:
    """Sampled (R, U(R)) rows for plotting."""
    if not (0.0 < r_lo < r_hi < 1.0):
        raise DomainError(f"need 0 < r_lo < r_hi < 1, got ({r_lo}, {r_hi})")
    if num < 2:
        raise DomainError(f"need at least 2 samples, got {num}")
    rs = np.linspace(r_lo, r_hi, num)
    return np.column_stack([rs, [effective_potential(r) for r in rs]])


def series_quadrature_table(r_values) -> np.ndarray:
    """Rows (R, series, quadrature, difference) comparing the two
    evaluations of the travel-time primitive."""
    rows = []
    for big_r in r_values:
        s = appell_f1_series(big_r)
        q = radial_quadrature(big_r)
        rows.append((big_r, s, q, s - q))
    return np.array(rows)
