"""Command-line front end.

Subcommands: ``normalize`` (sphere to standard form), ``geodesic``
(trajectory integration with CSV export), ``analyze`` (blow-up time,
effective potential, turning points, series cross-check) and ``check``
(the cross-module invariant suite).

Exit codes: 0 success, 1 internal error or failed checks, 2 usage
errors, 3 domain errors (invalid region, no orbit, chart exit).  Set
``GEODESIC_LOG=debug`` or ``info`` for diagnostics on stderr.
"""

import argparse
import json
import logging
import math
import os
import sys
from contextlib import contextmanager

import numpy as np

from . import analysis, checks, geodesics, sections
from ._backend import BACKEND
from .errors import LineGeoError

logger = logging.getLogger("linegeo.cli")


def _fmt(value: float) -> str:
    return f"{value:.17g}"


@contextmanager
def _out_stream(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_json(obj, path, fallback=None):
    text = json.dumps(obj, indent=2) + "\n"
    if path is None or path == "-":
        (fallback if fallback is not None else sys.stdout).write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _complex_flag(values) -> complex:
    return complex(values[0], values[1])


# -- subcommand handlers ------------------------------------------------------


def cmd_normalize(args) -> int:
    sec = sections.QuadraticSection(
        _complex_flag(args.beta1), _complex_flag(args.beta2), _complex_flag(args.beta3)
    )
    cert = sections.normalize(sec)
    logger.info("normalized section to c = %.17g", cert.result.c)
    _write_json(sections.certificate_to_dict(cert), args.output)
    return 0


def _initial_state(args) -> geodesics.GeodesicState:
    given = [args.xi is not None, args.polar is not None, args.integrals is not None]
    if sum(given) != 1:
        raise SystemExit2(
            "give exactly one of --xi/--xidot, --polar or --integrals"
        )
    if args.xi is not None:
        if args.xidot is None:
            raise SystemExit2("--xi requires --xidot")
        return geodesics.GeodesicState(0.0, _complex_flag(args.xi), _complex_flag(args.xidot))
    if args.polar is not None:
        big_r, theta, rdot, thetadot = args.polar
        return geodesics.PolarState(big_r, theta, rdot, thetadot).to_state()
    i1, i2, r0 = args.integrals
    return geodesics.state_from_integrals(
        i1, i2, r0, theta0=args.theta0, outward=not args.inward
    )


class SystemExit2(Exception):
    """Usage error detected after argparse (still exit code 2)."""


def cmd_geodesic(args) -> int:
    if args.xidot is not None and args.xi is None:
        raise SystemExit2("--xidot requires --xi")
    state = _initial_state(args)
    sphere = sections.StandardSphere(args.c)
    traj = geodesics.integrate(state, sphere, args.t_max, args.tol)
    logger.info(
        "integrated %d samples, termination %s", len(traj), traj.termination.value
    )

    with _out_stream(args.output) as fh:
        geodesics.write_csv(traj, fh)

    big_r = traj.radius
    summary = {
        "termination": traj.termination.value,
        "t_hit": traj.t_hit,
        "t_final": float(traj.t[-1]),
        "I1": traj.integrals0.I1,
        "I2": traj.integrals0.I2,
        "max_drift_I1": traj.max_drift[0],
        "max_drift_I2": traj.max_drift[1],
        "n_samples": len(traj),
        "observed_R_min": float(np.min(big_r)),
        "observed_R_max": float(np.max(big_r)),
    }
    # keep the CSV stream clean: summary goes to stderr when the CSV
    # occupies stdout, to stdout once the CSV went to a file
    fallback = sys.stderr if args.output in (None, "-") else sys.stdout
    _write_json(summary, args.summary, fallback=fallback)
    return 0


def cmd_analyze(args) -> int:
    if args.what == "blowup":
        value = analysis.blowup_time(args.I1, args.r_start)
        if args.format == "json":
            _write_json(
                {"t_blowup": value, "I1": args.I1, "r_start": args.r_start}, args.output
            )
        else:
            with _out_stream(args.output) as fh:
                fh.write(_fmt(value) + "\n")
        return 0

    if args.what == "potential":
        rows = analysis.potential_curve(args.r_lo, args.r_hi, args.num)
        with _out_stream(args.output) as fh:
            fh.write("R,U_eff\n")
            for big_r, u in rows:
                fh.write(f"{_fmt(big_r)},{_fmt(u)}\n")
        return 0

    if args.what == "turning-points":
        tp = analysis.turning_points(args.I1, args.I2)
        _write_json(
            {"R_min": tp.R_min, "R_max": tp.R_max, "ratio": tp.ratio}, args.output
        )
        return 0

    # series-check
    rs = np.linspace(args.r_lo, args.r_hi, args.num)
    rows = analysis.series_quadrature_table(rs)
    with _out_stream(args.output) as fh:
        fh.write("R,series,quadrature,diff\n")
        for big_r, s, q, d in rows:
            fh.write(f"{_fmt(big_r)},{_fmt(s)},{_fmt(q)},{_fmt(d)}\n")
    return 0


def cmd_check(args) -> int:
    results = checks.run_checks(
        samples=args.samples,
        trajectories=args.trajectories,
        tol=args.tol,
        t_span=args.t_span,
        seed=args.seed,
        i2_bias=args.inject_i2_bias,
    )
    all_passed = all(r.passed for r in results)
    report = {
        "backend": BACKEND,
        "config": {
            "samples": args.samples,
            "trajectories": args.trajectories,
            "tol": args.tol,
            "t_span": args.t_span,
            "seed": args.seed,
            "inject_i2_bias": args.inject_i2_bias,
        },
        "all_passed": all_passed,
        "checks": [r.to_dict() for r in results],
    }
    _write_json(report, args.output)
    return 0 if all_passed else 1


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linegeo",
        description="Geometry of oriented-line space and geodesics on twisting spheres.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("normalize", help="put a quadratic sphere in standard form")
    for name in ("beta1", "beta2", "beta3"):
        p_norm.add_argument(
            f"--{name}", nargs=2, type=float, required=True, metavar=("RE", "IM")
        )
    p_norm.add_argument("--output", help="write the certificate JSON here (default stdout)")
    p_norm.set_defaults(handler=cmd_normalize)

    p_geo = sub.add_parser("geodesic", help="integrate a geodesic and export CSV")
    p_geo.add_argument("--c", type=float, default=1.0, help="sphere coefficient (c > 0)")
    p_geo.add_argument("--xi", nargs=2, type=float, metavar=("RE", "IM"))
    p_geo.add_argument("--xidot", nargs=2, type=float, metavar=("RE", "IM"))
    p_geo.add_argument(
        "--polar", nargs=4, type=float, metavar=("R", "THETA", "RDOT", "THETADOT")
    )
    p_geo.add_argument(
        "--integrals",
        nargs=3,
        type=float,
        metavar=("I1", "I2", "R0"),
        help="launch at radius R0 with the given first integrals",
    )
    p_geo.add_argument("--theta0", type=float, default=0.0)
    p_geo.add_argument(
        "--inward", action="store_true", help="negative initial radial velocity"
    )
    p_geo.add_argument("--t-max", type=float, default=10.0)
    p_geo.add_argument(
        "--tol",
        type=float,
        default=1e-6,
        help="per-step relative error (default 1e-6; radial blow-up runs "
        "need a moderate tolerance to reach the equator cutoff)",
    )
    p_geo.add_argument("--output", help="trajectory CSV path (default stdout)")
    p_geo.add_argument(
        "--summary",
        help="summary JSON path (default: stderr if the CSV is on stdout, else stdout)",
    )
    p_geo.set_defaults(handler=cmd_geodesic)

    p_ana = sub.add_parser("analyze", help="radial analysis outputs")
    ana_sub = p_ana.add_subparsers(dest="what", required=True)

    p_blow = ana_sub.add_parser("blowup", help="equator arrival time for radial motion")
    p_blow.add_argument("--I1", type=float, required=True)
    p_blow.add_argument("--r-start", type=float, default=0.0)
    p_blow.add_argument("--format", choices=("text", "json"), default="text")
    p_blow.add_argument("--output")
    p_blow.set_defaults(handler=cmd_analyze)

    p_pot = ana_sub.add_parser("potential", help="CSV of the effective potential")
    p_pot.add_argument("--r-lo", type=float, default=0.05)
    p_pot.add_argument("--r-hi", type=float, default=0.95)
    p_pot.add_argument("--num", type=int, default=181)
    p_pot.add_argument("--output")
    p_pot.set_defaults(handler=cmd_analyze)

    p_tp = ana_sub.add_parser("turning-points", help="orbit annulus for given integrals")
    p_tp.add_argument("--I1", type=float, required=True)
    p_tp.add_argument("--I2", type=float, required=True)
    p_tp.add_argument("--output")
    p_tp.set_defaults(handler=cmd_analyze)

    p_sc = ana_sub.add_parser(
        "series-check", help="CSV comparing series and quadrature evaluations"
    )
    p_sc.add_argument("--r-lo", type=float, default=0.05)
    p_sc.add_argument("--r-hi", type=float, default=0.95)
    p_sc.add_argument("--num", type=int, default=19)
    p_sc.add_argument("--output")
    p_sc.set_defaults(handler=cmd_analyze)

    p_chk = sub.add_parser("check", help="run the invariant suite")
    p_chk.add_argument("--samples", type=int, default=1000)
    p_chk.add_argument("--trajectories", type=int, default=6)
    p_chk.add_argument("--tol", type=float, default=1e-10)
    p_chk.add_argument("--t-span", type=float, default=6.0)
    p_chk.add_argument("--seed", type=int, default=2025)
    p_chk.add_argument(
        "--inject-i2-bias",
        type=float,
        default=0.0,
        help="testing hook: offset the angular-momentum evaluations to "
        "demonstrate the suite detects tampering",
    )
    p_chk.add_argument("--output")
    p_chk.set_defaults(handler=cmd_check)

    return parser


def _configure_logging():
    level_name = os.environ.get("GEODESIC_LOG", "").strip().lower()
    level = {"debug": logging.DEBUG, "info": logging.INFO}.get(level_name)
    if level is not None:
        logging.basicConfig(
            stream=sys.stderr, level=level, format="%(name)s %(levelname)s: %(message)s"
        )


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except SystemExit2 as exc:
        parser.print_usage(sys.stderr)
        print(f"linegeo: error: {exc}", file=sys.stderr)
        return 2
    except LineGeoError as exc:
        print(f"linegeo: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # internal failure
        logger.exception("internal error")
        print(f"linegeo: internal error: {exc}", file=sys.stderr)
        return 1


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
