"""Extremal candidate profiles: hypergeometric closed form, ODE shooting,
and (for beta = 2) the harmonic integral representation.

Geometry: a point of the half-space is (x, t) with r = |x|, written in
polar form rho = sqrt(r^2 + t^2), theta = arctan(t/r) in [0, pi/2].  The
profile factorizes as

    phi(x, t) = rho^(-(n-2)/2) * f(theta),      f(theta) = w(sin^2 theta),

    w(z) = F(a1, b1, 1/2; z) + alpha sqrt(z) F(a1+1/2, b1+1/2, 3/2; z)

with a1 = (n+beta)/4 - 1, b1 = (n-beta)/4 and alpha = -H(n, beta), the
unique slope for which w stays bounded as z -> 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._core import impl, STATUS_OK
from .constants import Params, optimal_constant
from .errors import AxisProximityError, BracketError, DomainError
from .specfun import _hyp2f1_raw, _hyp2f1_raw_many

__all__ = [
    "PolarPoint",
    "ExtremalProfile",
    "w_profile",
    "w_general",
    "f_theta",
    "phi",
    "grad_phi",
    "grad_phi_rt",
    "shoot_alpha",
    "default_theta_max",
    "harmonic_rep",
    "pde_residual",
]

# Hard guard: beyond this z the combination of two individually divergent
# hypergeometric terms has no accurate double-precision representation even
# through the stable bounded-branch series (1 - z underflows in ln/pow).
Z_MAX = 1.0 - 1e-12

# Above this z the two-term form loses digits to cancellation (each term
# grows like (1-z)^((3-n)/2)); switch to the bounded branch at z = 1, which
# is proportional to F(a1, b1, 1 - d; 1 - z) with d = c - a - b = (3-n)/2.
_Z_STABLE = 0.995

_ALPHA_RTOL = 1e-12


@dataclass(frozen=True)
class PolarPoint:
    """Polar coordinates rho > 0, 0 <= theta <= pi/2 on the half-space."""

    rho: float
    theta: float

    def __post_init__(self):
        if not self.rho > 0.0:
            raise DomainError(f"rho must be positive, got {self.rho}")
        if not (0.0 <= self.theta <= math.pi / 2.0):
            raise DomainError(f"theta must lie in [0, pi/2], got {self.theta}")

    @property
    def r(self) -> float:
        return self.rho * math.cos(self.theta)

    @property
    def t(self) -> float:
        return self.rho * math.sin(self.theta)


@dataclass(frozen=True)
class ExtremalProfile:
    """A profile with the matched slope alpha = -H(n, beta)."""

    params: Params
    alpha: float

    def __post_init__(self):
        h = optimal_constant(self.params)
        if abs(self.alpha + h) > _ALPHA_RTOL * max(1.0, h):
            raise DomainError(
                f"profile slope {self.alpha} is not the matched value {-h}"
            )

    @classmethod
    def from_params(cls, params: Params) -> "ExtremalProfile":
        return cls(params, -optimal_constant(params))


def _hyp_params(params: Params):
    n, b = float(params.n), float(params.beta)
    a1 = (n + b) / 4.0 - 1.0
    b1 = (n - b) / 4.0
    return a1, b1


def w_general(params: Params, alpha: float, z: float) -> float:
    """w(z) for an arbitrary slope alpha (no boundedness matching).

    Used by the shooting diagnostics and the wrong-slope divergence tests;
    the matched-profile path is :func:`w_profile`.
    """
    if not (0.0 <= z < 1.0):
        raise DomainError(f"z must lie in [0, 1), got {z}")
    a1, b1 = _hyp_params(params)
    f1 = _hyp2f1_raw(a1, b1, 0.5, z)
    f2 = _hyp2f1_raw(a1 + 0.5, b1 + 0.5, 1.5, z)
    return f1 + alpha * math.sqrt(z) * f2


_kappa_cache: dict = {}


def _axis_kappa(e: ExtremalProfile) -> float:
    """Limit value w(1) of the matched profile (bounded-branch amplitude)."""
    key = (e.params.n, e.params.beta)
    k = _kappa_cache.get(key)
    if k is None:
        a1, b1 = _hyp_params(e.params)
        d = 0.5 - a1 - b1  # = (3 - n)/2
        z0 = 0.9
        k = w_general(e.params, e.alpha, z0) / _hyp2f1_raw(a1, b1, 1.0 - d, 1.0 - z0)
        _kappa_cache[key] = k
    return k


def _check_profile_z(z) -> None:
    zmax = np.max(z) if not np.isscalar(z) else z
    zmin = np.min(z) if not np.isscalar(z) else z
    if zmin < 0.0:
        raise DomainError(f"z must be nonnegative, got {zmin}")
    if zmax > Z_MAX:
        raise AxisProximityError(
            f"profile evaluation restricted to z <= {Z_MAX!r}, got {zmax}"
        )


def w_profile(e: ExtremalProfile, z: float) -> float:
    """Matched profile w(z) on [0, 1 - 1e-12]."""
    _check_profile_z(z)
    if z <= _Z_STABLE:
        return w_general(e.params, e.alpha, z)
    a1, b1 = _hyp_params(e.params)
    d = 0.5 - a1 - b1
    return _axis_kappa(e) * _hyp2f1_raw(a1, b1, 1.0 - d, 1.0 - z)


def _w_many(e: ExtremalProfile, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    _check_profile_z(z)
    a1, b1 = _hyp_params(e.params)
    out = np.empty(z.shape)
    low = z <= _Z_STABLE
    if low.any():
        zl = z[low]
        f1 = _hyp2f1_raw_many(a1, b1, 0.5, zl)
        f2 = _hyp2f1_raw_many(a1 + 0.5, b1 + 0.5, 1.5, zl)
        out[low] = f1 + e.alpha * np.sqrt(zl) * f2
    if (~low).any():
        d = 0.5 - a1 - b1
        out[~low] = _axis_kappa(e) * _hyp2f1_raw_many(a1, b1, 1.0 - d, 1.0 - z[~low])
    return out


def f_theta(e: ExtremalProfile, theta: float) -> float:
    """f(theta) = w(sin^2 theta) on [0, pi/2)."""
    if not (0.0 <= theta < math.pi / 2.0):
        raise DomainError(f"theta must lie in [0, pi/2), got {theta}")
    s = math.sin(theta)
    return w_profile(e, s * s)


def _f_fp_arrays(e: ExtremalProfile, theta: np.ndarray):
    """(f, f') on an array of angles; f' via the contiguous-derivative
    relation dF/dz = (ab/c) F(a+1,b+1,c+1;z) and the chain rule.

    With s = sin(theta):  f  = F1(s^2) + alpha s F2(s^2)
                          f' = cos(theta) [2 s F1' + alpha F2 + 2 alpha s^2 F2'].
    """
    theta = np.asarray(theta, dtype=np.float64)
    s = np.sin(theta)
    co = np.cos(theta)
    z = s * s
    _check_profile_z(z)
    a1, b1 = _hyp_params(e.params)
    a2, b2 = a1 + 0.5, b1 + 0.5
    f = np.empty(theta.shape)
    fp = np.empty(theta.shape)
    low = z <= _Z_STABLE
    if low.any():
        zl = z[low]
        f1 = _hyp2f1_raw_many(a1, b1, 0.5, zl)
        f2 = _hyp2f1_raw_many(a2, b2, 1.5, zl)
        f1p = 2.0 * a1 * b1 * _hyp2f1_raw_many(a1 + 1.0, b1 + 1.0, 1.5, zl)
        f2p = (a2 * b2 / 1.5) * _hyp2f1_raw_many(a2 + 1.0, b2 + 1.0, 2.5, zl)
        sl, col = s[low], co[low]
        f[low] = f1 + e.alpha * sl * f2
        fp[low] = col * (2.0 * sl * f1p + e.alpha * f2 + 2.0 * e.alpha * zl * f2p)
    if (~low).any():
        d = 0.5 - a1 - b1
        kap = _axis_kappa(e)
        wt = 1.0 - z[~low]
        g = _hyp2f1_raw_many(a1, b1, 1.0 - d, wt)
        gp = (a1 * b1 / (1.0 - d)) * _hyp2f1_raw_many(a1 + 1.0, b1 + 1.0, 2.0 - d, wt)
        f[~low] = kap * g
        # f = kappa g(cos^2 theta), so f' = -kappa g' sin(2 theta)
        fp[~low] = -kap * gp * 2.0 * s[~low] * co[~low]
    return f, fp


def phi(e: ExtremalProfile, p: PolarPoint) -> float:
    """phi = rho^(-(n-2)/2) w(sin^2 theta); boundary value rho^(-(n-2)/2)."""
    n = e.params.n
    s = math.sin(p.theta)
    return p.rho ** (-(n - 2.0) / 2.0) * w_profile(e, s * s)


def _phi_many(e: ExtremalProfile, rho: np.ndarray, theta: np.ndarray) -> np.ndarray:
    n = e.params.n
    s = np.sin(theta)
    return rho ** (-(n - 2.0) / 2.0) * _w_many(e, s * s)


def grad_phi(e: ExtremalProfile, p: PolarPoint):
    """Polar gradient components (d phi/d rho, (1/rho) d phi/d theta).

    The radial logarithmic derivative is exactly -(n-2)/(2 rho) everywhere.
    """
    if p.theta >= math.pi / 2.0:
        raise DomainError("gradient requires theta < pi/2")
    n = e.params.n
    f, fp = _f_fp_arrays(e, np.array([p.theta]))
    pref = p.rho ** (-n / 2.0)
    d_rho = -(n - 2.0) / 2.0 * pref * float(f[0])
    d_theta_over_rho = pref * float(fp[0])
    return d_rho, d_theta_over_rho


def grad_phi_rt(e: ExtremalProfile, r: float, t: float):
    """Gradient in half-plane coordinates (d phi/dr, d phi/dt)."""
    rho = math.hypot(r, t)
    theta = math.atan2(t, r)
    d_rho, d_th = grad_phi(e, PolarPoint(rho, theta))
    co, si = math.cos(theta), math.sin(theta)
    return d_rho * co - d_th * si, d_rho * si + d_th * co


# ---------------------------------------------------------------------------
# ODE shooting: independent recovery of the matched slope
# ---------------------------------------------------------------------------


def default_theta_max(params: Params, tol: float) -> float:
    """End angle for the shooting integration.

    The sign of f'(theta_max) resolves the critical slope to within roughly
    50 cos^(n-1)(theta_max) (the bounded branch has f' ~ cos theta while a
    mismatched slope diverges like cos^(2-n) theta, or tan theta when n=3),
    so cos(theta_max) = (tol/50)^(1/(n-1)) gives an order-of-magnitude
    safety margin; capped so theta_max stays within (pi/2 - 0.1, pi/2).
    """
    n = params.n
    cmax = min(0.09, (max(tol, 1e-12) / 50.0) ** (1.0 / (n - 1.0)))
    return math.acos(cmax)


def _divergence_sign(params: Params, alpha: float, theta_max: float,
                     rtol: float = 1e-10) -> float:
    lam = params.n - 2.0
    kap = ((params.n - 2.0) ** 2 - (params.beta - 2.0) ** 2) / 4.0
    f, fp, th, status, _ = impl.shoot_profile(
        lam, kap, alpha, theta_max, rtol, 1e-12, 1e10, 10_000_000
    )
    return 1.0 if fp > 0.0 else -1.0


def shoot_alpha(params: Params, theta_max: float | None = None,
                tol: float = 1e-5) -> float:
    """Recover the matched slope by bisection on the shot trajectory.

    Integrates f'' = (n-2) tan(theta) f' + ((n-2)^2 - (beta-2)^2)/4 f with
    f(0) = 1, f'(0) = alpha adaptively (Dormand-Prince 5(4), relative step
    tolerance 1e-10) and bisects on the divergence sign of the trajectory
    near theta_max: slopes above/below the critical value blow up with
    opposite signs, read off f' which diverges fastest (for n = 3 the blow-up
    of f itself is only logarithmic, too slow to resolve 1e-5).

    Contract: |shoot_alpha(p) + optimal_constant(p)| <= tol.
    """
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    if theta_max is None:
        theta_max = default_theta_max(params, tol)
    if not (math.pi / 2.0 - 0.1 < theta_max < math.pi / 2.0):
        raise DomainError(
            f"theta_max must lie in (pi/2 - 0.1, pi/2), got {theta_max}"
        )
    h_formula = optimal_constant(params)
    for lo, hi in ((-2.0 * h_formula, 0.0), (-float(params.n), 0.0)):
        s_lo = _divergence_sign(params, lo, theta_max)
        s_hi = _divergence_sign(params, hi, theta_max)
        if s_lo != s_hi:
            break
    else:
        raise BracketError(
            "no divergence sign change on either slope bracket",
            endpoints={lo: s_lo, hi: s_hi},
        )
    width_target = max(0.5 * tol, 1e-13)
    for _ in range(200):
        if hi - lo <= width_target:
            break
        mid = 0.5 * (lo + hi)
        if _divergence_sign(params, mid, theta_max) == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def integrate_profile_ode(params: Params, alpha: float, thetas,
                          rtol: float = 1e-10):
    """f and f' along ascending checkpoint angles, by direct ODE integration.

    The independent cross-check for the hypergeometric profile.
    """
    lam = params.n - 2.0
    kap = ((params.n - 2.0) ** 2 - (params.beta - 2.0) ** 2) / 4.0
    f, fp, status = impl.shoot_profile_checkpoints(
        lam, kap, alpha, np.asarray(thetas, dtype=np.float64), rtol, 1e-13, 1e12
    )
    if status != STATUS_OK:
        raise BracketError("profile ODE integration failed before the last checkpoint")
    return f, fp


# ---------------------------------------------------------------------------
# Harmonic integral representation (beta = 2)
# ---------------------------------------------------------------------------


def _gl_nodes(npts: int):
    x, w = np.polynomial.legendre.leggauss(npts)
    return x, w


def harmonic_rep(n: int, p: PolarPoint, rel_tol: float = 1e-10) -> float:
    """The harmonic superposition integral

        int_0^inf  a^(n/2-2) / [ (a+t)^2 + |x|^2 ]^(n/2-1)  da

    at (|x|, t) = (rho cos theta, rho sin theta).  Substituting a = |x| s,
    splitting at s = 1, mapping the tail via s -> 1/s and regularising the
    s^(n/2-2) endpoint by s = q^2 leaves two smooth integrals on [0, 1],
    evaluated by Gauss-Legendre under node-doubling refinement.
    """
    if not (isinstance(n, int) and n >= 3):
        raise DomainError(f"dimension must be an integer >= 3, got {n!r}")
    r = p.rho * math.cos(p.theta)
    t = p.rho * math.sin(p.theta)
    if r == 0.0:
        # on the axis the integral collapses to a Beta function
        ex = n / 2.0 - 1.0
        return t ** (-(n - 2.0) / 2.0) * math.exp(
            impl.ln_gamma(ex) + impl.ln_gamma(ex) - impl.ln_gamma(2.0 * ex)
        )

    nu = n / 2.0 - 1.0  # also the power of the kernel denominator

    def halves(npts: int) -> float:
        x, wts = _gl_nodes(npts)
        q = 0.5 * (x + 1.0)  # [0, 1]
        w2 = 0.5 * wts
        s = q * q
        # s = q^2 regularises the s^(nu-1) endpoint: s^(nu-1) ds = 2 q^(2nu-1) dq
        base = 2.0 * q ** (2.0 * nu - 1.0)
        f_lo = ((r * s + t) ** 2 + r * r) ** (-nu)
        f_hi = ((r + t * s) ** 2 + (r * s) ** 2) ** (-nu)
        return r**nu * float(np.sum(w2 * base * (f_lo + f_hi)))

    prev = halves(48)
    for npts in (96, 192, 384):
        cur = halves(npts)
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    from .errors import QuadratureToleranceError

    raise QuadratureToleranceError(
        "harmonic representation quadrature did not converge",
        achieved=abs(cur - prev) / max(abs(cur), 1e-300),
        value=cur,
    )


# ---------------------------------------------------------------------------
# Finite-difference residual of the defining PDE
# ---------------------------------------------------------------------------


def pde_residual(e: ExtremalProfile, p: PolarPoint, h: float = 1e-3) -> float:
    """Centered second-order residual of

        Lap phi + ((beta-2)^2/4) phi / rho^2 ,

    with the axisymmetric Laplacian
    phi_rr + (n-1)/rho phi_r + rho^-2 [phi_tt - (n-2) tan(theta) phi_t]
    (subscripts r, t here meaning rho, theta).  Exactly zero for the
    matched profile; the returned value is pure discretisation error,
    O(h^2) relative to |phi| / rho^2.
    """
    if h <= 0.0:
        raise DomainError("h must be positive")
    n = e.params.n
    c_int = (e.params.beta - 2.0) ** 2 / 4.0
    if p.rho - h <= 0.0 or p.theta - h < 0.0 or p.theta + h >= math.pi / 2.0:
        raise DomainError("stencil leaves the admissible domain")

    def ev(rho, theta):
        return phi(e, PolarPoint(rho, theta))

    f0 = ev(p.rho, p.theta)
    frp = ev(p.rho + h, p.theta)
    frm = ev(p.rho - h, p.theta)
    ftp = ev(p.rho, p.theta + h)
    ftm = ev(p.rho, p.theta - h)
    d_rr = (frp - 2.0 * f0 + frm) / (h * h)
    d_r = (frp - frm) / (2.0 * h)
    d_tt = (ftp - 2.0 * f0 + ftm) / (h * h)
    d_t = (ftp - ftm) / (2.0 * h)
    lap = d_rr + (n - 1.0) / p.rho * d_r + (d_tt - (n - 2.0) * math.tan(p.theta) * d_t) / (
        p.rho * p.rho
    )
    return lap + c_int * f0 / (p.rho * p.rho)
