"""Cross-module invariant suite behind the ``check`` CLI command.

Each check samples randomly (seeded), records the worst observed error
against its threshold, and reports a margin.  The optional ``i2_bias``
is a tampering hook for self-testing the suite: it offsets every
angular-momentum evaluation, which the energy identity detects.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import analysis, geodesics, line_space, sections
from .line_space import ComplexPair, Rotation, TangentVector, Translation

logger = logging.getLogger("linegeo.checks")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    threshold: float
    observed: float
    detail: str = ""

    @property
    def margin(self) -> float:
        return min(self.threshold / max(self.observed, 1e-300), 1e12)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "threshold": self.threshold,
            "observed": self.observed,
            "margin": self.margin,
            "detail": self.detail,
        }


def _random_motion(rng):
    if rng.uniform() < 0.5:
        re, im, a1 = rng.normal(size=3)
        return Translation(complex(re, im), a1)
    z = rng.normal(size=4)
    return Rotation(complex(z[0], z[1]), complex(z[2], z[3]))


def _random_tangent(rng, base):
    z = rng.normal(size=4)
    return TangentVector(base, complex(z[0], z[1]), complex(z[2], z[3]))


def _invariance_check(name, form, samples, rng, threshold):
    worst = 0.0
    for _ in range(samples):
        z = rng.normal(size=4)
        base = ComplexPair(complex(z[0], z[1]), complex(z[2], z[3]))
        u = _random_tangent(rng, base)
        v = _random_tangent(rng, base)
        m = _random_motion(rng)
        before = form(u, v)
        after = form(line_space.push_forward(m, u), line_space.push_forward(m, v))
        worst = max(worst, abs(after - before) / max(abs(before), 1e-30))
    return CheckResult(name, worst < threshold, threshold, worst, f"{samples} samples")


def sample_orbit_state(rng, max_ratio=60.0):
    """A generic oscillating initial condition on the upper hemisphere,
    with the orbit annulus kept away from the degenerate equator."""
    while True:
        big_r = rng.uniform(0.15, 0.8)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        rdot = rng.uniform(-1.0, 1.0)
        thetadot = rng.uniform(-2.0, 2.0)
        state = geodesics.PolarState(big_r, theta, rdot, thetadot).to_state()
        ints = geodesics.first_integrals(state)
        if ints.I2 != 0.0 and ints.I1 / ints.I2**2 <= max_ratio:
            return state


def _conservation_check(trajectories, tol, t_span, rng, threshold, i2_bias):
    sphere = sections.StandardSphere(1.0)
    worst = 0.0
    for _ in range(trajectories):
        state = sample_orbit_state(rng)
        traj = geodesics.integrate(state, sphere, t_span, tol)
        i1s, i2s = traj.integral_series()
        i2s = i2s + i2_bias
        worst = max(
            worst,
            float(np.max(np.abs(i1s - i1s[0])) / max(abs(i1s[0]), 1e-30)),
            float(np.max(np.abs(i2s - i2s[0])) / max(abs(i2s[0]), 1e-30)),
        )
    return CheckResult(
        "conservation_drift",
        worst < threshold,
        threshold,
        worst,
        f"{trajectories} trajectories, tol={tol:g}, span={t_span:g}",
    )


def _triple_agreement_check(threshold_pair, threshold_ode):
    rs = np.linspace(0.05, 0.95, 19)
    worst_pair = max(
        abs(analysis.appell_f1_series(r) - analysis.radial_quadrature(r)) for r in rs
    )
    # one radial blow-up cross-check against the ODE hit time
    state = geodesics.GeodesicState(0.0, 0.0, 1.0)
    traj = geodesics.integrate(state, sections.StandardSphere(1.0), 10.0, 1e-6)
    if traj.termination is not geodesics.Termination.EQUATOR_REACHED:
        return CheckResult(
            "triple_agreement", False, threshold_ode, math.inf,
            f"radial run terminated by {traj.termination.value}",
        )
    predicted = analysis.blowup_time(1.0)
    ode_err = abs(traj.t_hit - predicted) / predicted
    passed = worst_pair < threshold_pair and ode_err < threshold_ode
    return CheckResult(
        "triple_agreement",
        passed,
        threshold_ode,
        max(float(worst_pair), ode_err),
        f"series-quadrature worst {worst_pair:.3e} (limit {threshold_pair:g}), "
        f"ODE hit-time relative error {ode_err:.3e}",
    )


def _energy_identity_check(tol, t_span, rng, threshold, i2_bias):
    sphere = sections.StandardSphere(1.0)
    state = sample_orbit_state(rng)
    traj = geodesics.integrate(state, sphere, t_span, tol)
    i1s, i2s = traj.integral_series()
    i2s = i2s + i2_bias
    big_r = traj.radius
    keep = (big_r >= 1e-3) & (big_r <= 1.0 - 1e-3)
    r2 = big_r[keep] ** 2
    u = (1.0 + r2) ** 3 / ((1.0 - r2) * r2)
    f = (1.0 - r2) / (1.0 + r2) ** 3
    rdot = (traj.xi[keep].conjugate() * traj.xidot[keep]).real / big_r[keep]
    residual = i1s[keep] - u * i2s[keep] ** 2 - f * rdot**2
    worst = float(np.max(np.abs(residual)))
    return CheckResult(
        "energy_identity",
        worst < threshold,
        threshold,
        worst,
        f"{int(np.count_nonzero(keep))} samples",
    )


def _normalization_check(samples, rng, threshold_resid, threshold_inv):
    worst_resid = 0.0
    worst_inv = 0.0
    for _ in range(samples):
        z = rng.uniform(-10.0, 10.0, size=6)
        sec = sections.QuadraticSection(
            complex(z[0], z[1]), complex(z[2], z[3]), complex(z[4], z[5])
        )
        cert = sections.normalize(sec)
        moved = sections.transform_section(
            sections.transform_section(sec, cert.translation), cert.rotation
        )
        worst_resid = max(
            worst_resid,
            abs(moved.beta1),
            abs(moved.beta3),
            abs(moved.beta2.real),
            abs(moved.beta2.imag - cert.result.c),
        )
        invariant = math.sqrt(
            sec.beta2.imag ** 2 + abs(sec.beta1 + sec.beta3.conjugate()) ** 2
        )
        worst_inv = max(worst_inv, abs(cert.result.c - invariant))
    passed = worst_resid < threshold_resid and worst_inv < threshold_inv
    return CheckResult(
        "normalization_residual",
        passed,
        threshold_resid,
        max(worst_resid, worst_inv),
        f"{samples} sections; invariant worst {worst_inv:.3e} (limit {threshold_inv:g})",
    )


def run_checks(
    samples: int = 1000,
    trajectories: int = 6,
    tol: float = 1e-10,
    t_span: float = 6.0,
    seed: int = 2025,
    i2_bias: float = 0.0,
) -> list[CheckResult]:
    """Run the full invariant suite; returns one result per check."""
    rng = np.random.default_rng(seed)
    results = [
        _invariance_check("isometry_metric", line_space.metric, samples, rng, 1e-10),
        _invariance_check(
            "symplectomorphism", line_space.symplectic_form, samples, rng, 1e-10
        ),
        _conservation_check(trajectories, tol, t_span, rng, 1e-8, i2_bias),
        _triple_agreement_check(1e-10, 1e-4),
        _energy_identity_check(tol, t_span, rng, 1e-8, i2_bias),
        _normalization_check(max(samples // 5, 10), rng, 1e-9, 1e-10),
    ]
    for r in results:
        logger.info(
            "check %-24s %s observed=%.3e threshold=%.1e",
            r.name, "PASS" if r.passed else "FAIL", r.observed, r.threshold,
        )
    return results
