"""Axisymmetric reduction and tensor Gauss-Legendre integration.

For a function on the half-space depending only on (r, t) = (|x|, t), the
integrals reduce to 2-D weighted ones in polar coordinates
rho in [r_min, r_max], theta in [0, pi/2]:

    integral over half-space   = S_n * int int g(rho cos th, rho sin th)
                                 rho^(n-1) cos^(n-2)(th) drho dth
    integral over the boundary = S_n * int g(r) r^(n-2) dr
    integral over a hemisphere = S_n * rho^(n-1) * int g(th) cos^(n-2)(th) dth

with S_n = (n-1) omega_{n-1}, the surface measure of the unit sphere in the
boundary hyperplane.  Radial panels are logarithmically spaced (all
integrands of interest are powers of rho times smooth angular factors), one
panel per decade; convergence is judged by node-doubling refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .constants import unit_ball_volume
from .errors import DomainError, QuadratureToleranceError, TestFunctionError

__all__ = [
    "QuadratureSpec",
    "Support",
    "TestFunction",
    "integrate_halfspace",
    "integrate_boundary",
    "integrate_hemisphere",
]

_REFINEMENTS = 4  # node-doubling budget beyond the base resolution


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncation and resolution of the half-space quadrature.

    ``nodes_radial`` counts Gauss-Legendre nodes per radial decade panel,
    ``nodes_angular`` the nodes on the angular interval.
    """

    r_min: float = 1e-4
    r_max: float = 1e4
    nodes_radial: int = 32
    nodes_angular: int = 64
    rel_tol: float = 1e-9

    def __post_init__(self):
        if not (0.0 < self.r_min < self.r_max):
            raise DomainError(
                f"need 0 < r_min < r_max, got ({self.r_min}, {self.r_max})"
            )
        if self.nodes_radial < 8 or self.nodes_angular < 8:
            raise DomainError("node counts must be at least 8")
        if not self.rel_tol > 0.0:
            raise DomainError("rel_tol must be positive")


@lru_cache(maxsize=128)
def _gl(npts: int):
    x, w = np.polynomial.legendre.leggauss(npts)
    return x, w


def _gl_on(lo: float, hi: float, npts: int):
    x, w = _gl(npts)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return mid + half * x, half * w


def _radial_panels(lo: float, hi: float):
    """Decade-aligned panel boundaries covering [lo, hi]."""
    edges = [lo]
    e = math.floor(math.log10(lo)) + 1.0
    while 10.0**e < hi * (1.0 - 1e-12):
        if 10.0**e > lo * (1.0 + 1e-12):
            edges.append(10.0**e)
        e += 1.0
    edges.append(hi)
    return list(zip(edges[:-1], edges[1:]))


def _surface_factor(n: int) -> float:
    return (n - 1) * unit_ball_volume(n - 1)


def _halfspace_once(g, n, rho_lo, rho_hi, theta_hi, n_rad, n_ang, polar_rows):
    """One tensor evaluation; returns (value, per-panel radial sums).

    With ``polar_rows`` the integrand receives the 1-D polar node vectors
    (rho, theta) and must return the (len(rho), len(theta)) value grid;
    integrands factorizing over (rho, theta) then avoid redundant work.
    Otherwise it is called with the 2-D half-plane grids (r, t).
    """
    th, wth = _gl_on(0.0, theta_hi, n_ang)
    cos_th = np.cos(th)
    sin_th = np.sin(th)
    ang_w = wth * cos_th ** (n - 2)
    panels = _radial_panels(rho_lo, rho_hi)
    panel_sums = np.empty(len(panels))
    for i, (lo, hi) in enumerate(panels):
        rho, wr = _gl_on(lo, hi, n_rad)
        rw = wr * rho ** (n - 1)
        if polar_rows:
            vals = np.asarray(g(rho, th), dtype=np.float64)
        else:
            r_grid = rho[:, None] * cos_th[None, :]
            t_grid = rho[:, None] * sin_th[None, :]
            vals = np.asarray(g(r_grid, t_grid), dtype=np.float64)
        panel_sums[i] = float(rw @ vals @ ang_w)
    return _surface_factor(n) * float(panel_sums.sum()), _surface_factor(n) * panel_sums


def _geometric_tail(panel_sums: np.ndarray) -> float:
    """Estimate of the mass beyond the last radial panel, assuming the
    per-decade contributions decay geometrically (power-law integrands)."""
    if len(panel_sums) < 3:
        return 0.0
    last = abs(panel_sums[-1])
    prev = abs(panel_sums[-2])
    if last == 0.0:
        return 0.0
    q = last / max(prev, 1e-300)
    if q >= 0.9:
        return math.inf
    return last * q / (1.0 - q)


def integrate_halfspace_detailed(
    g: Callable,
    spec: QuadratureSpec,
    n: int,
    rho_bounds: Optional[tuple] = None,
    theta_max: Optional[float] = None,
    estimate_tail: bool = False,
    polar_rows: bool = False,
):
    """(value, error_estimate) with node-doubling refinement.

    ``rho_bounds`` intersects the integration annulus with a known support
    annulus; ``estimate_tail`` adds a geometric extrapolation of the mass
    beyond r_max (for integrands without compact support) to the error.
    """
    lo, hi = spec.r_min, spec.r_max
    if rho_bounds is not None:
        lo = max(lo, rho_bounds[0])
        hi = min(hi, rho_bounds[1])
        if not lo < hi:
            return 0.0, 0.0
    th_hi = theta_max if theta_max is not None else math.pi / 2.0
    prev, _ = _halfspace_once(g, n, lo, hi, th_hi, spec.nodes_radial,
                              spec.nodes_angular, polar_rows)
    n_rad, n_ang = spec.nodes_radial, spec.nodes_angular
    for _ in range(_REFINEMENTS):
        n_rad *= 2
        n_ang *= 2
        cur, panel_sums = _halfspace_once(g, n, lo, hi, th_hi, n_rad, n_ang, polar_rows)
        err = abs(cur - prev)
        if err <= spec.rel_tol * max(abs(cur), 1e-300):
            tail = _geometric_tail(panel_sums) if estimate_tail else 0.0
            if not math.isfinite(tail):
                raise QuadratureToleranceError(
                    "integrand does not decay: tail beyond r_max not summable",
                    achieved=math.inf,
                    value=cur,
                )
            return cur, err + tail
        prev = cur
    raise QuadratureToleranceError(
        f"half-space quadrature did not reach rel_tol={spec.rel_tol}",
        achieved=err / max(abs(cur), 1e-300),
        value=cur,
    )


def integrate_halfspace(g: Callable, spec: QuadratureSpec, n: int, **kw) -> float:
    """Truncated half-space integral of an axisymmetric integrand g(r, t).

    g must accept NumPy arrays.  Raises
    :class:`~hktrace.errors.QuadratureToleranceError` if node-doubling does
    not reach ``spec.rel_tol`` within the refinement budget.
    """
    return integrate_halfspace_detailed(g, spec, n, **kw)[0]


def integrate_halfspace_box_detailed(
    g: Callable,
    spec: QuadratureSpec,
    n: int,
    r_range: tuple,
    t_range: tuple,
):
    """Half-space integral S_n * int int g(r, t) r^(n-2) dr dt over a box.

    Product-form integrands (the compactly supported trial families) lose
    accuracy on polar grids cutting across their box edges; aligning the
    tensor grid with the box restores spectral convergence.  Same
    refinement/tolerance contract as :func:`integrate_halfspace`.
    """
    r_lo = max(r_range[0], spec.r_min)
    r_hi = min(r_range[1], spec.r_max)
    t_lo, t_hi = t_range
    if not (r_lo < r_hi and t_lo < t_hi):
        return 0.0, 0.0

    def once(npts):
        r, wr = _gl_on(r_lo, r_hi, npts)
        t, wt = _gl_on(t_lo, t_hi, npts)
        vals = np.asarray(g(r[:, None] + 0.0 * t[None, :], 0.0 * r[:, None] + t[None, :]),
                          dtype=np.float64)
        return _surface_factor(n) * float((wr * r ** (n - 2)) @ vals @ wt)

    npts = max(spec.nodes_radial, spec.nodes_angular)
    prev = once(npts)
    for _ in range(_REFINEMENTS):
        npts *= 2
        cur = once(npts)
        err = abs(cur - prev)
        if err <= spec.rel_tol * max(abs(cur), 1e-300):
            return cur, err
        prev = cur
    raise QuadratureToleranceError(
        f"box quadrature did not reach rel_tol={spec.rel_tol}",
        achieved=err / max(abs(cur), 1e-300),
        value=cur,
    )


def _boundary_once(g, n, lo, hi, n_rad):
    panels = _radial_panels(lo, hi)
    panel_sums = np.empty(len(panels))
    for i, (plo, phi_) in enumerate(panels):
        r, w = _gl_on(plo, phi_, n_rad)
        vals = np.asarray(g(r), dtype=np.float64)
        panel_sums[i] = float(np.sum(w * vals * r ** (n - 2)))
    return _surface_factor(n) * float(panel_sums.sum()), _surface_factor(n) * panel_sums


def integrate_boundary_detailed(
    g: Callable,
    r_range: tuple,
    n: int,
    spec: QuadratureSpec = QuadratureSpec(),
    estimate_tail: bool = False,
):
    lo, hi = r_range
    if not (0.0 < lo < hi):
        raise DomainError(f"boundary range must satisfy 0 < lo < hi, got {r_range}")
    prev, _ = _boundary_once(g, n, lo, hi, spec.nodes_radial)
    n_rad = spec.nodes_radial
    for _ in range(_REFINEMENTS):
        n_rad *= 2
        cur, panel_sums = _boundary_once(g, n, lo, hi, n_rad)
        err = abs(cur - prev)
        if err <= spec.rel_tol * max(abs(cur), 1e-300):
            tail = _geometric_tail(panel_sums) if estimate_tail else 0.0
            if not math.isfinite(tail):
                raise QuadratureToleranceError(
                    "boundary integrand does not decay beyond r_max",
                    achieved=math.inf,
                    value=cur,
                )
            return cur, err + tail
        prev = cur
    raise QuadratureToleranceError(
        f"boundary quadrature did not reach rel_tol={spec.rel_tol}",
        achieved=err / max(abs(cur), 1e-300),
        value=cur,
    )


def integrate_boundary(g: Callable, r_range: tuple, n: int,
                       spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Boundary-hyperplane integral of an axisymmetric g(r) over an annulus."""
    return integrate_boundary_detailed(g, r_range, n, spec)[0]


def integrate_hemisphere(g: Callable, rho: float, n: int,
                         spec: QuadratureSpec = QuadratureSpec(),
                         theta_max: Optional[float] = None) -> float:
    """Integral of g(theta) over the upper hemisphere of radius rho."""
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    th_hi = theta_max if theta_max is not None else math.pi / 2.0
    pref = _surface_factor(n) * rho ** (n - 1)

    def once(n_ang):
        th, wth = _gl_on(0.0, th_hi, n_ang)
        vals = np.asarray(g(th), dtype=np.float64)
        return pref * float(np.sum(wth * vals * np.cos(th) ** (n - 2)))

    prev = once(spec.nodes_angular)
    n_ang = spec.nodes_angular
    for _ in range(_REFINEMENTS):
        n_ang *= 2
        cur = once(n_ang)
        if abs(cur - prev) <= spec.rel_tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    raise QuadratureToleranceError(
        f"hemisphere quadrature did not reach rel_tol={spec.rel_tol}",
        achieved=abs(cur - prev) / max(abs(cur), 1e-300),
        value=cur,
    )


# ---------------------------------------------------------------------------
# Test functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Support:
    """Declared support of a test function.

    kind "box": r in [r_lo, r_hi], t in [t_lo, t_hi];
    kind "annulus": rho in [r_lo, r_hi];
    kind "all": unbounded (polynomially decaying families).
    """

    kind: str
    r_lo: float = 0.0
    r_hi: float = math.inf
    t_lo: float = 0.0
    t_hi: float = math.inf

    @staticmethod
    def box(r_lo, r_hi, t_lo, t_hi) -> "Support":
        return Support("box", r_lo, r_hi, t_lo, t_hi)

    @staticmethod
    def annulus(lo, hi) -> "Support":
        return Support("annulus", lo, hi)

    @staticmethod
    def unbounded() -> "Support":
        return Support("all")

    def rho_bounds(self) -> tuple:
        if self.kind == "box":
            lo = math.hypot(self.r_lo, self.t_lo)
            hi = math.hypot(self.r_hi, self.t_hi)
            return lo, hi
        if self.kind == "annulus":
            return self.r_lo, self.r_hi
        return 0.0, math.inf

    def r_bounds(self) -> tuple:
        """Radial extent of the boundary trace."""
        if self.kind in ("box", "annulus"):
            return self.r_lo, self.r_hi
        return 0.0, math.inf

    def theta_bound(self) -> float:
        """Upper bound on the polar angle met by the support."""
        if self.kind == "box" and math.isfinite(self.t_hi):
            rho_lo = max(self.rho_bounds()[0], 1e-300)
            s = min(1.0, self.t_hi / rho_lo)
            return math.asin(s)
        return math.pi / 2.0

    def has_boundary_contact(self) -> bool:
        return self.kind == "all" or self.t_lo == 0.0

    def is_bounded(self) -> bool:
        return self.kind != "all"

    def sample_box(self) -> tuple:
        """A finite box for gradient validation sampling."""
        if self.kind == "box":
            return self.r_lo, self.r_hi, self.t_lo, self.t_hi
        if self.kind == "annulus":
            w = self.r_hi / math.sqrt(2.0)
            return 0.05 * w, w, 0.05 * w, w
        return 0.3, 3.0, 0.1, 3.0


_GRAD_CHECK_POINTS = 8
_GRAD_CHECK_TOL = 1e-6


@dataclass(frozen=True)
class TestFunction:
    """Axisymmetric trial function with value and gradient access.

    ``value(r, t)`` and ``grad(r, t) -> (u_r, u_t)`` must be vectorised over
    NumPy arrays and vanish outside ``support``.  Construction validates the
    declared gradient against centered finite differences at interior
    sample points.
    """

    __test__ = False  # not a pytest collection target

    value: Callable
    grad: Callable
    support: Support
    name: str = ""

    def __post_init__(self):
        rng = np.random.default_rng(171)
        r_lo, r_hi, t_lo, t_hi = self.support.sample_box()
        margin_r = 0.05 * (r_hi - r_lo)
        margin_t = 0.05 * (t_hi - t_lo)
        r = rng.uniform(r_lo + margin_r, r_hi - margin_r, _GRAD_CHECK_POINTS)
        t = rng.uniform(t_lo + margin_t, t_hi - margin_t, _GRAD_CHECK_POINTS)
        h = 1e-6 * max(1.0, r_hi)
        gr, gt = self.grad(r, t)
        fd_r = (self.value(r + h, t) - self.value(r - h, t)) / (2.0 * h)
        fd_t = (self.value(r, t + h) - self.value(r, t - h)) / (2.0 * h)
        scale = np.max(np.abs(np.concatenate([np.atleast_1d(gr), np.atleast_1d(gt)]))) + 1e-30
        err = max(np.max(np.abs(gr - fd_r)), np.max(np.abs(gt - fd_t))) / scale
        if err > _GRAD_CHECK_TOL:
            raise TestFunctionError(
                f"declared gradient disagrees with finite differences "
                f"(relative error {err:.2e}) for test function {self.name!r}"
            )
