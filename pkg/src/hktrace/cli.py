"""Command-line front end.

Subcommands: constant, table, extremal-eval, ode-shoot, verify, optimality,
flux, specfun.  Exit codes: 0 success, 1 numerical/assertion failure,
2 usage or domain error.  ``HK_LOG`` selects the log level.  Every command
is deterministic given its flags and seed; numeric output uses full
round-trip precision (``repr``) except where a command pins its own format.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from ._core import BACKEND
from .constants import (
    Params,
    hardy_constant,
    interior_coefficient,
    kato_constant,
    optimal_constant,
)
from .errors import (
    BracketError,
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    HkError,
    QuadratureToleranceError,
)
from .extremal import (
    ExtremalProfile,
    PolarPoint,
    f_theta,
    grad_phi,
    phi,
    shoot_alpha,
    w_profile,
)
from .quadrature import QuadratureSpec
from .specfun import (
    Hyp2F1Params,
    beta as beta_fn,
    hyp2f1,
    hyp2f1_at_one,
    hyp2f1_derivative,
    ln_gamma,
)
from .testfunctions import random_family
from .verify import (
    CalibrationField,
    flux_sigma1,
    optimality_sweep,
    sphere_flux,
    trace_term,
    verify_inequality,
)

log = logging.getLogger("hktrace.cli")

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

_DEFAULT_SEED = 0  # documented default for all seeded commands


def _fmt(x) -> str:
    """Full round-trip float formatting."""
    return repr(float(x))


def _setup_logging() -> None:
    level_name = os.environ.get("HK_LOG", "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


# ---------------------------------------------------------------------------
# config file: key = value sections, one section per subcommand; flags win
# ---------------------------------------------------------------------------


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    path = getattr(args, "config", None)
    if not path:
        return
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        parser.error(f"config file not found: {path}")
    section = args.command
    if not cp.has_section(section):
        return
    for key, raw in cp.items(section):
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            parser.error(f"unknown config key [{section}] {key}")
        if getattr(args, attr) is not None:
            continue  # explicit flag wins
        setattr(args, attr, raw)


def _spec_from_args(args) -> QuadratureSpec:
    return QuadratureSpec(
        r_min=float(args.r_min) if args.r_min is not None else 1e-4,
        r_max=float(args.r_max) if args.r_max is not None else 1e4,
        nodes_radial=int(args.nodes_radial) if getattr(args, "nodes_radial", None) else 32,
        nodes_angular=int(args.nodes_angular) if getattr(args, "nodes_angular", None) else 64,
        rel_tol=float(args.rel_tol) if args.rel_tol is not None else 1e-9,
    )


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_constant(args) -> int:
    p = Params(int(args.n), float(args.beta))
    lines = [
        f"H({p.n},{p.beta:g}) = {optimal_constant(p):.15g}",
        f"kato({p.n}) = {kato_constant(p.n):.15g}",
        f"hardy({p.n}) = {hardy_constant(p.n):.15g}",
        f"interior_coeff = {interior_coefficient(p):.15g}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    n_start = int(args.n_start)
    n_end = int(args.n_end) if args.n_end is not None else n_start
    beta_step = float(args.beta_step) if args.beta_step is not None else 0.5
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["n", "beta", "H", "interior_coeff", "kato", "hardy"])
    for n in range(n_start, n_end + 1):
        b = 2.0
        while b < n - 1e-12:
            p = Params(n, b)
            wr.writerow([n, _fmt(b), _fmt(optimal_constant(p)),
                         _fmt(interior_coefficient(p)),
                         _fmt(kato_constant(n)), _fmt(hardy_constant(n))])
            b = round(b + beta_step, 12)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    p = Params(int(args.n), float(args.beta))
    spec = _spec_from_args(args)
    seed = int(args.seed) if args.seed is not None else _DEFAULT_SEED
    count = int(args.count) if args.count is not None else 100
    family = args.family or "mixed"
    funcs = random_family(count, seed=seed, kind=family)
    reports = []
    all_pass = True
    for u in funcs:
        rep = verify_inequality(u, p, spec)
        d = rep.to_dict()
        d["test_function"] = u.name
        reports.append(d)
        all_pass = all_pass and rep.passed
    payload = {
        "params": {"n": p.n, "beta": p.beta},
        "seed": seed,
        "family": family,
        "count": count,
        "all_pass": all_pass,
        "reports": reports,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK if all_pass else EXIT_NUMERICAL


def cmd_optimality(args) -> int:
    p = Params(int(args.n), float(args.beta))
    spec = _spec_from_args(args)
    if args.windows:
        windows = []
        for wspec in args.windows.split(","):
            lo, hi = wspec.split(":")
            windows.append((float(lo), float(hi)))
    else:
        ks = [int(k) for k in (args.k_list or "2,4,6").split(",")]
        windows = [(10.0 ** (-k), 10.0**k) for k in ks]
    h = optimal_constant(p)
    rows = optimality_sweep(p, windows, spec)
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["r", "R", "ratio", "gap", "gap_times_log"])
    for (r_lo, r_hi), ratio in rows:
        gap = ratio - h
        wr.writerow([_fmt(r_lo), _fmt(r_hi), _fmt(ratio), _fmt(gap),
                     _fmt(gap * math.log(r_hi / r_lo))])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_flux(args) -> int:
    p = Params(int(args.n), float(args.beta))
    spec = _spec_from_args(args)
    seed = int(args.seed) if args.seed is not None else _DEFAULT_SEED
    rhos = [float(x) for x in (args.rho_list or "0.1,1,10").split(",")]
    field = CalibrationField.from_params(p)
    fluxes = [sphere_flux(field, rho, spec) for rho in rhos]
    mean = sum(fluxes) / len(fluxes)
    spread = max(abs(f - mean) for f in fluxes) / abs(mean)
    u = random_family(1, seed=seed, kind="bump")[0]
    fs = flux_sigma1(u, p, spec)
    tr = trace_term(u, p.n, spec)
    payload = {
        "params": {"n": p.n, "beta": p.beta},
        "sphere_flux": {_fmt(rho): flux for rho, flux in zip(rhos, fluxes)},
        "sphere_flux_relative_spread": spread,
        "boundary_flux": fs,
        "H_times_trace": optimal_constant(p) * tr,
        "boundary_flux_ratio": fs / (optimal_constant(p) * tr),
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    ok = spread <= 1e-8 and abs(payload["boundary_flux_ratio"] - 1.0) <= 1e-7
    return EXIT_OK if ok else EXIT_NUMERICAL


def cmd_ode_shoot(args) -> int:
    p = Params(int(args.n), float(args.beta))
    tol = float(args.tol) if args.tol is not None else 1e-5
    theta_max = float(args.theta_max) if args.theta_max is not None else None
    alpha = shoot_alpha(p, theta_max=theta_max, tol=tol)
    target = -optimal_constant(p)
    diff = alpha - target
    lines = [
        f"shooting alpha  = {_fmt(alpha)}",
        f"-H({p.n},{p.beta:g})     = {_fmt(target)}",
        f"difference      = {_fmt(diff)}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if abs(diff) <= tol else EXIT_NUMERICAL


def cmd_extremal_eval(args) -> int:
    p = Params(int(args.n), float(args.beta))
    e = ExtremalProfile.from_params(p)
    spec_rows = []
    if args.theta_grid:
        count = int(args.theta_grid)
        thetas = np.linspace(0.0, math.pi / 2.0 - 0.1, count)
    else:
        thetas = [float(args.theta) if args.theta is not None else 0.0]
    rho = float(args.rho) if args.rho is not None else 1.0
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["rho", "theta", "z", "w", "f", "phi", "dphi_drho", "dphi_dtheta_over_rho"])
    for th in thetas:
        pt = PolarPoint(rho, float(th))
        z = math.sin(th) ** 2
        g = grad_phi(e, pt)
        wr.writerow([_fmt(rho), _fmt(th), _fmt(z), _fmt(w_profile(e, z)),
                     _fmt(f_theta(e, float(th))), _fmt(phi(e, pt)),
                     _fmt(g[0]), _fmt(g[1])])
        spec_rows.append(th)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_specfun(args) -> int:
    fn = args.fn
    out = {}
    if fn == "lngamma":
        out["ln_gamma"] = ln_gamma(float(args.x))
    elif fn == "beta":
        out["beta"] = beta_fn(float(args.p), float(args.q))
    elif fn in ("hyp2f1", "hyp2f1-deriv"):
        params = Hyp2F1Params(float(args.a), float(args.b), float(args.c))
        z = float(args.z)
        if fn == "hyp2f1":
            out["hyp2f1"] = hyp2f1(params, z)
        else:
            out["hyp2f1_derivative"] = hyp2f1_derivative(params, z)
    elif fn == "at-one":
        params = Hyp2F1Params(float(args.a), float(args.b), float(args.c))
        lim = hyp2f1_at_one(params)
        out["kind"] = lim.kind.value
        out["value_or_coefficient"] = lim.value_or_coefficient
        if lim.exponent is not None:
            out["exponent"] = lim.exponent
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown specfun operation {fn!r}")
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(sp, *, params=True, quad=False, seed=False):
    sp.add_argument("--config", help="INI config file; sections per subcommand, flags win")
    sp.add_argument("--out", help="write output to PATH instead of stdout")
    sp.add_argument("--format", choices=("csv", "json"), default=None,
                    help="output format where applicable")
    if params:
        sp.add_argument("--n", dest="n", help="dimension (integer >= 3)")
        sp.add_argument("--beta", dest="beta", help="interpolation parameter in [2, n)")
    if quad:
        sp.add_argument("--r-min", dest="r_min", help="inner truncation radius")
        sp.add_argument("--r-max", dest="r_max", help="outer truncation radius")
        sp.add_argument("--rel-tol", dest="rel_tol", help="quadrature relative tolerance")
        sp.add_argument("--nodes-radial", dest="nodes_radial", help="radial nodes per decade")
        sp.add_argument("--nodes-angular", dest="nodes_angular", help="angular nodes")
    if seed:
        sp.add_argument("--seed", help=f"random seed (default {_DEFAULT_SEED})")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hktrace",
        description="Sharp interpolated trace-Hardy inequality: constants, "
                    "extremal profiles, certification, and optimality sweeps.",
    )
    ap.add_argument("--version", action="version",
                    version=f"hktrace {__version__} (backend: {BACKEND})")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("constant", help="print the sharp constants for (n, beta)")
    _add_common(sp)
    sp.set_defaults(func=cmd_constant)

    sp = sub.add_parser("table", help="CSV table of constants over a parameter grid")
    _add_common(sp, params=False)
    sp.add_argument("--n-start", required=True)
    sp.add_argument("--n-end")
    sp.add_argument("--beta-step")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("verify", help="certify the inequality on a seeded test-function family")
    _add_common(sp, quad=True, seed=True)
    sp.add_argument("--count", help="number of test functions (default 100)")
    sp.add_argument("--family", choices=("bump", "gaussian", "mixed", "zero-trace"))
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("optimality", help="annulus Rayleigh sweep of the extremal profile")
    _add_common(sp, quad=True)
    sp.add_argument("--windows", help="comma list of r:R windows, e.g. 1e-2:1e2,1e-4:1e4")
    sp.add_argument("--k-list", help="windows (10^-k, 10^k) from comma list of k (default 2,4,6)")
    sp.set_defaults(func=cmd_optimality)

    sp = sub.add_parser("flux", help="sphere-flux constancy and boundary flux identity")
    _add_common(sp, quad=True, seed=True)
    sp.add_argument("--rho-list", help="comma list of sphere radii (default 0.1,1,10)")
    sp.set_defaults(func=cmd_flux)

    sp = sub.add_parser("ode-shoot", help="recover -H(n,beta) by ODE shooting")
    _add_common(sp)
    sp.add_argument("--tol", help="absolute tolerance on the slope (default 1e-5)")
    sp.add_argument("--theta-max", dest="theta_max", help="shooting end angle")
    sp.set_defaults(func=cmd_ode_shoot)

    sp = sub.add_parser("extremal-eval", help="evaluate the extremal profile and gradient")
    _add_common(sp)
    sp.add_argument("--rho", help="radius (default 1)")
    sp.add_argument("--theta", help="polar angle (default 0)")
    sp.add_argument("--theta-grid", dest="theta_grid",
                    help="number of grid angles on [0, pi/2 - 0.1] instead of --theta")
    sp.set_defaults(func=cmd_extremal_eval)

    sp = sub.add_parser("specfun", help="special-function evaluations")
    _add_common(sp, params=False)
    sp.add_argument("fn", choices=("lngamma", "beta", "hyp2f1", "hyp2f1-deriv", "at-one"))
    sp.add_argument("--x")
    sp.add_argument("--p")
    sp.add_argument("--q")
    sp.add_argument("--a")
    sp.add_argument("--b")
    sp.add_argument("--c")
    sp.add_argument("--z")
    sp.set_defaults(func=cmd_specfun)

    return ap


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser)
        required = {"constant": ("n", "beta"), "verify": ("n", "beta"),
                    "optimality": ("n", "beta"), "flux": ("n", "beta"),
                    "ode-shoot": ("n", "beta"), "extremal-eval": ("n", "beta")}
        for attr in required.get(args.command, ()):
            if getattr(args, attr, None) is None:
                parser.error(f"--{attr} is required for {args.command} (flag or config)")
        return args.func(args)
    except (DomainError, DegenerateInputError, ValueError) as exc:
        log.debug("domain error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, BracketError, QuadratureToleranceError, HkError) as exc:
        log.debug("numerical error", exc_info=True)
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entrypoint() -> None:  # console-script shim
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
