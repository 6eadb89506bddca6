# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels (Cython).

Mirrors ``_kernels_py`` exactly: same signatures, same stepping logic,
same termination codes.  The Dormand-Prince 5(4) stages are unrolled
with C complex arithmetic; sample recording stays at Python level since
it runs once per accepted step only.
"""

from libc.math cimport fabs, fmax, fmin, isnan, sqrt, INFINITY, NAN
from libc.stdlib cimport free, malloc

import numpy as np

IS_COMPILED = True

STATUS_TIME_LIMIT = 0
STATUS_EQUATOR = 1
STATUS_UNDERFLOW = 2
STATUS_MAX_STEPS = 3

# Dormand-Prince 5(4) tableau
cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = B1 - 5179.0 / 57600.0
cdef double E3 = B3 - 7571.0 / 16695.0
cdef double E4 = B4 - 393.0 / 640.0
cdef double E5 = B5 + 92097.0 / 339200.0
cdef double E6 = B6 - 187.0 / 2100.0
cdef double E7 = -1.0 / 40.0


cdef inline double complex _gamma(double complex xi) noexcept nogil:
    cdef double complex xb = xi.conjugate()
    cdef double m = (xi * xb).real
    return -xb / (1.0 - m) - 3.0 * xb / (1.0 + m)


cdef inline double complex _accel(double complex xi, double complex xidot) noexcept nogil:
    return -_gamma(xi) * xidot * xidot


cdef inline double _scaled(double e, double y0, double y1) noexcept nogil:
    return fabs(e) / (1.0 + fmax(fabs(y0), fabs(y1)))


def geod_christoffel(double complex xi):
    """Gamma^xi_xixi of the induced metric, d/dxi of ln[(1-xi xibar)/(1+xi xibar)^3]."""
    return _gamma(xi)


def geod_rhs(double complex xi, double complex xidot):
    """Right-hand side of the first-order system: (xidot, -Gamma * xidot^2)."""
    return xidot, _accel(xi, xidot)


def geod_first_integrals(double complex xi, double complex xidot):
    """Conserved pair (squared speed, angular momentum) of the flow."""
    cdef double m = (xi * xi.conjugate()).real
    cdef double f = (1.0 - m) / ((1.0 + m) * (1.0 + m) * (1.0 + m))
    return (
        f * (xidot * xidot.conjugate()).real,
        f * (xi.conjugate() * xidot).imag,
    )


def geod_integrate(
    double complex xi0,
    double complex xidot0,
    double t_span,
    double tol,
    double equator_cut,
    double h_min,
    long max_steps,
):
    """Adaptive Dormand-Prince 5(4) integration of the geodesic system.

    Same contract as the pure-Python twin: integrates t in [0, t_span],
    records every accepted step, returns (t, xi, xidot, status, t_hit).
    """
    cdef double complex y0 = xi0, y1 = xidot0
    cdef double complex y0n, y1n, y0o
    cdef double complex ka1, kb1, ka2, kb2, ka3, kb3, ka4, kb4
    cdef double complex ka5, kb5, ka6, kb6, ka7, kb7
    cdef double complex e0, e1
    cdef double t = 0.0, h, err, fac, s_new, s_old, t_hit = NAN, t_prev
    cdef long step
    cdef int status = STATUS_MAX_STEPS
    cdef bint clipped

    ts = [0.0]
    xis = [complex(y0)]
    xds = [complex(y1)]

    h = fmin(1e-2, 1e-2 * (1.0 + abs(y0)) / (1.0 + abs(y1)))
    h = fmin(h, t_span)

    ka1 = y1
    kb1 = _accel(y0, y1)

    for step in range(max_steps):
        clipped = t + h >= t_span
        if clipped:
            h = t_span - t

        ka2 = y1 + h * (A21 * kb1)
        kb2 = _accel(y0 + h * (A21 * ka1), ka2)
        ka3 = y1 + h * (A31 * kb1 + A32 * kb2)
        kb3 = _accel(y0 + h * (A31 * ka1 + A32 * ka2), ka3)
        ka4 = y1 + h * (A41 * kb1 + A42 * kb2 + A43 * kb3)
        kb4 = _accel(y0 + h * (A41 * ka1 + A42 * ka2 + A43 * ka3), ka4)
        ka5 = y1 + h * (A51 * kb1 + A52 * kb2 + A53 * kb3 + A54 * kb4)
        kb5 = _accel(y0 + h * (A51 * ka1 + A52 * ka2 + A53 * ka3 + A54 * ka4), ka5)
        ka6 = y1 + h * (A61 * kb1 + A62 * kb2 + A63 * kb3 + A64 * kb4 + A65 * kb5)
        kb6 = _accel(
            y0 + h * (A61 * ka1 + A62 * ka2 + A63 * ka3 + A64 * ka4 + A65 * ka5), ka6
        )
        y0n = y0 + h * (B1 * ka1 + B3 * ka3 + B4 * ka4 + B5 * ka5 + B6 * ka6)
        y1n = y1 + h * (B1 * kb1 + B3 * kb3 + B4 * kb4 + B5 * kb5 + B6 * kb6)
        ka7 = y1n
        kb7 = _accel(y0n, y1n)
        e0 = h * (E1 * ka1 + E3 * ka3 + E4 * ka4 + E5 * ka5 + E6 * ka6 + E7 * ka7)
        e1 = h * (E1 * kb1 + E3 * kb3 + E4 * kb4 + E5 * kb5 + E6 * kb6 + E7 * kb7)

        err = _scaled(e0.real, y0.real, y0n.real)
        err = fmax(err, _scaled(e0.imag, y0.imag, y0n.imag))
        err = fmax(err, _scaled(e1.real, y1.real, y1n.real))
        err = fmax(err, _scaled(e1.imag, y1.imag, y1n.imag))
        err /= tol

        if err <= 1.0:  # nan fails this comparison and rejects the step
            y0o = y0
            t_prev = t
            t = t_span if clipped else t + h
            y0 = y0n
            y1 = y1n
            ka1 = ka7  # FSAL
            kb1 = kb7
            ts.append(t)
            xis.append(complex(y0))
            xds.append(complex(y1))
            s_new = 1.0 - (y0 * y0.conjugate()).real
            if fabs(s_new) <= equator_cut:
                s_old = 1.0 - (y0o * y0o.conjugate()).real
                t_hit = t + s_new * (t - t_prev) / (s_old - s_new)
                status = STATUS_EQUATOR
                break
            if t >= t_span:
                status = STATUS_TIME_LIMIT
                break

        if err == 0.0:
            fac = 5.0
        elif isnan(err):
            fac = 0.2
        else:
            fac = fmin(5.0, fmax(0.2, 0.9 * err ** -0.2))
        h *= fac
        if h < h_min:
            status = STATUS_UNDERFLOW
            break

    return (
        np.asarray(ts, dtype=np.float64),
        np.asarray(xis, dtype=np.complex128),
        np.asarray(xds, dtype=np.complex128),
        status,
        t_hit,
    )


def appell_f1(double big_r, double tail_tol, long max_diagonals):
    """R * F1(1/2; -1/2, 3/2; 3/2; R^2, -R^2) by anti-diagonal summation.

    Pochhammer symbols enter through the stable per-term ratios (see the
    pure-Python twin for the derivation); stops after three consecutive
    non-increasing anti-diagonal contributions below ``tail_tol``.
    Returns (value, diagonals_used, converged).
    """
    cdef double x = big_r * big_r
    cdef double *a = <double *> malloc(max_diagonals * sizeof(double))
    cdef double *b = <double *> malloc(max_diagonals * sizeof(double))
    if a == NULL or b == NULL:
        free(a)
        free(b)
        raise MemoryError("appell_f1 coefficient buffers")
    cdef double ratio = 1.0, total = 0.0, rpow = big_r
    cdef double conv, term, prev = INFINITY
    cdef long m, kk, small = 0, used = max_diagonals
    cdef bint converged = False
    a[0] = 1.0
    b[0] = 1.0
    try:
        for m in range(max_diagonals):
            if m > 0:
                a[m] = a[m - 1] * (-0.5 + m - 1) / m
                b[m] = b[m - 1] * (-(1.5 + m - 1)) / m
                ratio *= (0.5 + m - 1) / (1.5 + m - 1)
                rpow *= x
            conv = 0.0
            for kk in range(m + 1):
                conv += a[kk] * b[m - kk]
            term = ratio * conv * rpow
            total += term
            if fabs(term) <= tail_tol and fabs(term) <= prev:
                small += 1
                if small >= 3:
                    converged = True
                    used = m + 1
                    break
            else:
                small = 0
            prev = fabs(term)
    finally:
        free(a)
        free(b)
    return total, used, converged
