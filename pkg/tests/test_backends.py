"""The compiled and pure-Python kernels must agree."""

import importlib.util
import math

import numpy as np
import pytest

from linegeo import _kernels_py

HAVE_COMPILED = importlib.util.find_spec("linegeo._kernels") is not None
if HAVE_COMPILED:
    from linegeo import _kernels
else:  # pragma: no cover - compiled extension always present in CI
    _kernels = None

needs_compiled = pytest.mark.skipif(not HAVE_COMPILED, reason="no compiled extension")

RNG = np.random.default_rng(91005)


def test_backend_selection_reports_something_valid():
    from linegeo import BACKEND

    assert BACKEND in ("compiled", "python")
    if HAVE_COMPILED:
        assert BACKEND == "compiled"  # preferred when importable


def test_flags():
    assert _kernels_py.IS_COMPILED is False
    if HAVE_COMPILED:
        assert _kernels.IS_COMPILED is True
        for name in ("STATUS_TIME_LIMIT", "STATUS_EQUATOR", "STATUS_UNDERFLOW"):
            assert getattr(_kernels, name) == getattr(_kernels_py, name)


@needs_compiled
def test_scalar_kernels_agree():
    for _ in range(200):
        z = RNG.normal(size=4)
        xi, xd = complex(z[0], z[1]), complex(z[2], z[3])
        if abs(1.0 - abs(xi) ** 2) < 1e-6:
            continue
        g_c = _kernels.geod_christoffel(xi)
        g_p = _kernels_py.geod_christoffel(xi)
        assert abs(g_c - g_p) <= 1e-14 * max(1.0, abs(g_p))
        r_c = _kernels.geod_rhs(xi, xd)
        r_p = _kernels_py.geod_rhs(xi, xd)
        assert abs(r_c[0] - r_p[0]) == 0.0
        assert abs(r_c[1] - r_p[1]) <= 1e-13 * max(1.0, abs(r_p[1]))
        i_c = _kernels.geod_first_integrals(xi, xd)
        i_p = _kernels_py.geod_first_integrals(xi, xd)
        assert abs(i_c[0] - i_p[0]) <= 1e-13 * max(1.0, abs(i_p[0]))
        assert abs(i_c[1] - i_p[1]) <= 1e-13 * max(1.0, abs(i_p[1]))


@needs_compiled
@pytest.mark.parametrize(
    "xi0,xd0,t_span,tol",
    [
        (0.0, 1.0, 10.0, 1e-6),  # radial blow-up
        (0.4, 0.96j, 10.0, 1e-10),  # oscillating orbit
        (0.3 + 0.1j, 0.0, 2.0, 1e-8),  # constant
        (1.5, -1.0, 10.0, 1e-6),  # lower hemisphere
    ],
)
def test_integration_agrees(xi0, xd0, t_span, tol):
    out_c = _kernels.geod_integrate(xi0, xd0, t_span, tol, 1e-8, 1e-14, 5_000_000)
    out_p = _kernels_py.geod_integrate(xi0, xd0, t_span, tol, 1e-8, 1e-14, 5_000_000)
    tc, xc, dc, sc, hc = out_c
    tp_, xp, dp, sp, hp = out_p
    assert sc == sp
    # identical step sequences up to tiny compiler-level rounding drift
    assert abs(len(tc) - len(tp_)) <= max(2, len(tp_) // 100)
    n = min(len(tc), len(tp_))
    assert np.max(np.abs(tc[: n // 2] - tp_[: n // 2])) < 1e-9
    assert abs(tc[-1] - tp_[-1]) < 1e-7
    if sc == _kernels.STATUS_EQUATOR:
        assert abs(hc - hp) < 1e-9
    else:
        assert math.isnan(hc) and math.isnan(hp)


@needs_compiled
def test_series_agrees():
    for big_r in np.linspace(0.0, 0.97, 30):
        v_c, n_c, ok_c = _kernels.appell_f1(big_r, 1e-14, 10_000)
        v_p, n_p, ok_p = _kernels_py.appell_f1(big_r, 1e-14, 10_000)
        assert bool(ok_c) and bool(ok_p)
        assert n_c == n_p
        assert abs(v_c - v_p) <= 1e-14 * max(1.0, abs(v_p))


@needs_compiled
def test_series_non_convergence_flag():
    v_c, n_c, ok_c = _kernels.appell_f1(0.999999, 1e-14, 50)
    v_p, n_p, ok_p = _kernels_py.appell_f1(0.999999, 1e-14, 50)
    assert not bool(ok_c) and not bool(ok_p)
    assert n_c == n_p == 50


def test_env_override_python(monkeypatch):
    # re-importing _backend under the override must pick the fallback
    import importlib
    import sys

    monkeypatch.setenv("LINEGEO_BACKEND", "python")
    saved = {k: sys.modules.pop(k) for k in list(sys.modules) if k == "linegeo._backend"}
    try:
        backend = importlib.import_module("linegeo._backend")
        backend = importlib.reload(backend)
        assert backend.BACKEND == "python"
        assert backend.kernels.IS_COMPILED is False
    finally:
        sys.modules.pop("linegeo._backend", None)
        sys.modules.update(saved)
        importlib.import_module("linegeo._backend")


def test_env_override_rejects_garbage(monkeypatch):
    import importlib
    import sys

    monkeypatch.setenv("LINEGEO_BACKEND", "fortran")
    saved = sys.modules.pop("linegeo._backend")
    try:
        with pytest.raises(ImportError):
            importlib.import_module("linegeo._backend")
    finally:
        sys.modules["linegeo._backend"] = saved
