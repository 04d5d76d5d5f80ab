"""Certification of the trace-Hardy inequality and the variational machinery
behind it: Rayleigh reports on trial functions, the divergence-free
calibration field, its boundary and sphere fluxes, the annulus optimality
sweep, and the trace-embedding equality check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .constants import (
    Params,
    escobar_constant,
    interior_coefficient,
    optimal_constant,
    unit_ball_volume,
)
from .errors import DegenerateInputError, DomainError
from .extremal import (
    ExtremalProfile,
    PolarPoint,
    Z_MAX,
    _f_fp_arrays,
    _phi_many,
    grad_phi_rt,
    phi,
)
from .quadrature import (
    QuadratureSpec,
    TestFunction,
    integrate_boundary_detailed,
    integrate_halfspace_box_detailed,
    integrate_halfspace_detailed,
    integrate_hemisphere,
)

__all__ = [
    "InequalityReport",
    "CalibrationField",
    "energy",
    "hardy_term",
    "trace_term",
    "functional_j",
    "verify_inequality",
    "divergence_check",
    "mayer_slope",
    "flux_sigma1",
    "sphere_flux",
    "optimality_sweep",
    "escobar_check",
    "EscobarResult",
]

_TRACE_FLOOR = 1e-250


@dataclass(frozen=True)
class InequalityReport:
    """The three integrals of the inequality plus derived quantities.

    rayleigh = (energy - interior_coeff * hardy_term) / trace_term and
    margin = rayleigh - constant; the report PASSes when the margin is not
    below the negated quadrature error.
    """

    energy: float
    hardy_term: float
    trace_term: float
    constant: float
    interior_coeff: float
    rayleigh: float
    margin: float
    quadrature_error: float
    params: Params
    spec: QuadratureSpec
    passed: bool

    def to_dict(self) -> dict:
        return {
            "energy": self.energy,
            "hardy_term": self.hardy_term,
            "trace_term": self.trace_term,
            "constant": self.constant,
            "interior_coeff": self.interior_coeff,
            "rayleigh": self.rayleigh,
            "margin": self.margin,
            "quadrature_error": self.quadrature_error,
            "params": {"n": self.params.n, "beta": self.params.beta},
            "spec": {
                "r_min": self.spec.r_min,
                "r_max": self.spec.r_max,
                "nodes_radial": self.spec.nodes_radial,
                "nodes_angular": self.spec.nodes_angular,
                "rel_tol": self.spec.rel_tol,
            },
            "pass": self.passed,
        }


def _bulk_detailed(g, u: TestFunction, n: int, spec: QuadratureSpec):
    if u.support.kind == "box":
        # box-aligned tensor grid: spectral convergence for product bumps
        return integrate_halfspace_box_detailed(
            g, spec, n,
            r_range=(u.support.r_lo, u.support.r_hi),
            t_range=(u.support.t_lo, u.support.t_hi),
        )
    return integrate_halfspace_detailed(
        g, spec, n,
        rho_bounds=u.support.rho_bounds(),
        theta_max=u.support.theta_bound(),
        estimate_tail=not u.support.is_bounded(),
    )


def _energy_detailed(u: TestFunction, n: int, spec: QuadratureSpec):
    def g(r, t):
        u_r, u_t = u.grad(r, t)
        return u_r * u_r + u_t * u_t

    return _bulk_detailed(g, u, n, spec)


def _hardy_detailed(u: TestFunction, n: int, spec: QuadratureSpec):
    def g(r, t):
        v = u.value(r, t)
        return v * v / (r * r + t * t)

    return _bulk_detailed(g, u, n, spec)


def _trace_detailed(u: TestFunction, n: int, spec: QuadratureSpec):
    if not u.support.has_boundary_contact():
        return 0.0, 0.0
    lo, hi = u.support.r_bounds()
    lo = max(lo, spec.r_min)
    hi = min(hi, spec.r_max)
    if not lo < hi:
        return 0.0, 0.0

    def g(r):
        v = u.value(r, np.zeros_like(r))
        return v * v / r

    return integrate_boundary_detailed(
        g, (lo, hi), n, spec, estimate_tail=not u.support.is_bounded()
    )


def energy(u: TestFunction, n: int, spec: QuadratureSpec) -> float:
    """Dirichlet energy: the half-space integral of |grad u|^2."""
    return _energy_detailed(u, n, spec)[0]


def hardy_term(u: TestFunction, n: int, spec: QuadratureSpec) -> float:
    """Weighted interior integral of u^2 / (|x|^2 + t^2)."""
    return _hardy_detailed(u, n, spec)[0]


def trace_term(u: TestFunction, n: int, spec: QuadratureSpec) -> float:
    """Boundary integral of u(x,0)^2 / |x|."""
    return _trace_detailed(u, n, spec)[0]


def functional_j(u: TestFunction, p: Params, spec: QuadratureSpec) -> float:
    """energy - ((beta-2)^2/4) * hardy_term: the quadratic form whose
    critical points are the extremal profiles."""
    return energy(u, p.n, spec) - interior_coefficient(p) * hardy_term(u, p.n, spec)


def verify_inequality(u: TestFunction, p: Params, spec: QuadratureSpec) -> InequalityReport:
    """Full Rayleigh report for one trial function.

    Raises :class:`DegenerateInputError` when the trace vanishes (the
    inequality is vacuous there).
    """
    e_val, e_err = _energy_detailed(u, p.n, spec)
    h_val, h_err = _hardy_detailed(u, p.n, spec)
    t_val, t_err = _trace_detailed(u, p.n, spec)
    if t_val <= _TRACE_FLOOR:
        raise DegenerateInputError(
            "test function has zero boundary trace; inequality is vacuous"
        )
    c_int = interior_coefficient(p)
    h_const = optimal_constant(p)
    rayleigh = (e_val - c_int * h_val) / t_val
    margin = rayleigh - h_const
    q_err = (e_err + c_int * h_err + abs(rayleigh) * t_err) / t_val
    return InequalityReport(
        energy=e_val,
        hardy_term=h_val,
        trace_term=t_val,
        constant=h_const,
        interior_coeff=c_int,
        rayleigh=rayleigh,
        margin=margin,
        quadrature_error=q_err,
        params=p,
        spec=spec,
        passed=margin >= -q_err,
    )


# ---------------------------------------------------------------------------
# Calibration field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CalibrationField:
    """The divergence-free field built on the matched extremal profile:

    F(x, t, v) = ( 2 (v/phi) grad phi ,
                   (v/phi)^2 |grad phi|^2 + ((beta-2)^2/4) v^2 / rho^2 ).
    """

    params: Params
    extremal: ExtremalProfile

    @classmethod
    def from_params(cls, params: Params) -> "CalibrationField":
        return cls(params, ExtremalProfile.from_params(params))

    def components(self, r: float, t: float, v: float):
        """(F_x_radial, F_t, F_v) at a point; the x-block is radial with
        scalar component F_x_radial along x/|x|."""
        p = self.extremal
        ph = phi(p, PolarPoint(math.hypot(r, t), math.atan2(t, r)))
        g_r, g_t = grad_phi_rt(p, r, t)
        rho2 = r * r + t * t
        c_int = interior_coefficient(self.params)
        f_x = 2.0 * v / ph * g_r
        f_t = 2.0 * v / ph * g_t
        f_v = (v / ph) ** 2 * (g_r * g_r + g_t * g_t) + c_int * v * v / rho2
        return f_x, f_t, f_v


def divergence_check(c: CalibrationField, pts: Iterable, h: float = 1e-3) -> float:
    """Max normalized |div F| over sample points (r, t, v) by centered
    finite differences of the analytic components.

    The x-divergence of the radial block g(r,t) x/|x| is g_r + (n-2) g / r.
    Exactly zero in exact arithmetic; the return is O(h^2) stencil error.
    """
    if h <= 0.0:
        raise DomainError("h must be positive")
    n = c.params.n
    worst = 0.0
    for (r, t, v) in pts:
        if min(r, t) <= 10.0 * h or v < 0.0:
            raise DomainError(f"point ({r}, {t}, {v}) too close to the domain edge")
        fx, ft, fv = c.components(r, t, v)
        d_fx = (c.components(r + h, t, v)[0] - c.components(r - h, t, v)[0]) / (2 * h)
        d_ft = (c.components(r, t + h, v)[1] - c.components(r, t - h, v)[1]) / (2 * h)
        d_fv = (c.components(r, t, v + h)[2] - c.components(r, t, v - h)[2]) / (2 * h)
        div = d_fx + (n - 2.0) * fx / r + d_ft + d_fv
        scale = math.sqrt(fx * fx + ft * ft + fv * fv) / math.hypot(r, t)
        worst = max(worst, abs(div) / max(scale, 1e-300))
    return worst


def mayer_slope(c: CalibrationField, r: float, t: float, v: float):
    """Slope field p(x, t, v) = (v / phi) grad phi in (r, t) components;
    linear in v, equal to grad phi on the graph v = phi."""
    if v < 0.0:
        raise DomainError("v must be nonnegative")
    ph = phi(c.extremal, PolarPoint(math.hypot(r, t), math.atan2(t, r)))
    g_r, g_t = grad_phi_rt(c.extremal, r, t)
    return v / ph * g_r, v / ph * g_t


def flux_sigma1(u: TestFunction, p: Params, spec: QuadratureSpec) -> float:
    """Outward flux of the calibration field through the bottom face under
    the graph of u:  -int u(x,0)^2 phi_t(x,0)/phi(x,0) dx.

    By the boundary identities phi(x,0) = |x|^(-(n-2)/2) and
    phi_t(x,0) = -H |x|^(-n/2) this equals H(n, beta) * trace_term(u); the
    ratio of the two is the numerical embodiment of the bottom-flux step of
    the divergence-theorem argument.
    """
    e = ExtremalProfile.from_params(p)
    f0, fp0 = _f_fp_arrays(e, np.array([0.0]))
    n = p.n
    if not u.support.has_boundary_contact():
        return 0.0
    lo, hi = u.support.r_bounds()
    lo = max(lo, spec.r_min)
    hi = min(hi, spec.r_max)
    if not lo < hi:
        return 0.0

    def g(r):
        v = u.value(r, np.zeros_like(r))
        # phi_t(x,0) = r^(-n/2) f'(0),  phi(x,0) = r^(-(n-2)/2) f(0)
        phi_t = float(fp0[0]) * r ** (-n / 2.0)
        phi_0 = float(f0[0]) * r ** (-(n - 2.0) / 2.0)
        return -v * v * phi_t / phi_0

    return integrate_boundary_detailed(
        g, (lo, hi), p.n, spec, estimate_tail=not u.support.is_bounded()
    )[0]


def sphere_flux(c: CalibrationField, rho: float,
                spec: QuadratureSpec = QuadratureSpec()) -> float:
    """(n-2)/4 * rho^(n-2) * integral of phi^2 over the unit upper
    hemisphere scaled by rho; independent of rho by homogeneity."""
    return sphere_flux_detailed(c, rho, spec)[0]


def sphere_flux_detailed(c: CalibrationField, rho: float,
                         spec: QuadratureSpec = QuadratureSpec()):
    """(value, sliver_bound): angular nodes falling inside the profile's
    near-axis exclusion zone are extended by the last admissible value and
    the excluded sliver's contribution is bounded and reported."""
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    n = c.params.n
    e = c.extremal
    theta_cut = math.asin(math.sqrt(Z_MAX))
    clipped = {"delta": 0.0, "wmax": 0.0}

    def g(theta):
        th = np.minimum(theta, theta_cut)
        over = theta > theta_cut
        if over.any():
            clipped["delta"] = max(clipped["delta"], float(np.max(theta - theta_cut)))
        vals = _phi_many(e, np.full(th.shape, rho), th)
        clipped["wmax"] = max(clipped["wmax"], float(np.max(np.abs(vals))))
        return vals * vals

    # the surface is the UNIT upper hemisphere; rho enters only through the
    # scaled profile argument and the rho^(n-2) prefactor
    val = (n - 2.0) / 4.0 * rho ** (n - 2.0) * integrate_hemisphere(g, 1.0, n, spec)
    # sliver bound: delta * max phi^2 * surface weight, scaled like the flux
    sliver = (
        (n - 2.0) / 4.0
        * rho ** (n - 2.0)
        * clipped["delta"]
        * clipped["wmax"] ** 2
        * (n - 1)
        * unit_ball_volume(n - 1)
    )
    return val, sliver


def optimality_sweep(p: Params, windows: Sequence, spec: QuadratureSpec):
    """For each annular window (r, R): the Rayleigh quotient of the matched
    profile truncated sharply to the annulus,

        [ int |grad phi|^2 - ((beta-2)^2/4) int phi^2/rho^2 ] /
          int_{r<|x|<R} phi(x,0)^2 / |x| dx ,

    with the numerator integrated from the analytic gradient.  Returns a
    list of ((r, R), ratio) pairs.
    """
    e = ExtremalProfile.from_params(p)
    n = p.n
    c_int = interior_coefficient(p)
    k2 = (n - 2.0) ** 2 / 4.0

    def g_num(rho, theta):
        f, fp = _f_fp_arrays(e, theta)
        ang = (k2 - c_int) * f * f + fp * fp
        return np.outer(rho ** (-float(n)), ang)

    out = []
    for (r_lo, r_hi) in windows:
        if not (0.0 < r_lo < r_hi):
            raise DomainError(f"window must satisfy 0 < r < R, got {(r_lo, r_hi)}")
        w_spec = QuadratureSpec(
            r_min=r_lo, r_max=r_hi,
            nodes_radial=spec.nodes_radial, nodes_angular=spec.nodes_angular,
            rel_tol=spec.rel_tol,
        )
        num, _ = integrate_halfspace_detailed(g_num, w_spec, n, polar_rows=True)

        def g_tr(r):
            return r ** (1.0 - float(n))

        den, _ = integrate_boundary_detailed(g_tr, (r_lo, r_hi), n, w_spec)
        out.append(((r_lo, r_hi), num / den))
    return out


@dataclass(frozen=True)
class EscobarResult:
    """Two sides of the sharp trace embedding evaluated on the extremal
    u_a, with propagated quadrature/tail error estimates."""

    lhs: float
    rhs: float
    lhs_error: float
    rhs_error: float


def escobar_check(a: float, n: int, spec: QuadratureSpec) -> EscobarResult:
    """lhs = escobar_constant(n) * (boundary L^{2(n-1)/(n-2)} norm of u_a),
    rhs = Dirichlet seminorm of u_a.  Equal (u_a is an extremal).

    The integrands decay polynomially, so the radial domain is widened far
    beyond ``spec.r_max`` (slowest tail ~ R^(2-n)) and the remaining tail is
    estimated geometrically and folded into the reported errors.
    """
    if not a > 0.0:
        raise DomainError(f"scale parameter must be positive, got {a}")
    from .testfunctions import make_escobar

    u = make_escobar(a, n)
    decades = math.ceil(8.0 / (n - 2.0))
    wide = QuadratureSpec(
        r_min=min(spec.r_min, 1e-3 * a),
        r_max=max(spec.r_max, a * 10.0**decades),
        nodes_radial=spec.nodes_radial,
        nodes_angular=spec.nodes_angular,
        rel_tol=spec.rel_tol,
    )
    e_val, e_err = _energy_detailed(u, n, wide)
    two_star = 2.0 * (n - 1.0) / (n - 2.0)

    def g_bnd(r):
        return u.value(r, np.zeros_like(r)) ** two_star

    b_val, b_err = integrate_boundary_detailed(
        g_bnd, (wide.r_min, wide.r_max), n, wide, estimate_tail=True
    )
    lhs = escobar_constant(n) * b_val ** (1.0 / two_star)
    rhs = math.sqrt(e_val)
    lhs_error = lhs / two_star * (b_err / b_val)
    rhs_error = 0.5 * rhs * (e_err / e_val)
    return EscobarResult(lhs=lhs, rhs=rhs, lhs_error=lhs_error, rhs_error=rhs_error)
