"""Gamma/Beta functions and the Gauss hypergeometric function on [0, 1).

``hyp2f1`` sums the defining power series directly away from the unit
argument.  Close to z = 1 the partial sums saturate only after O(1/(1-z))
terms, so the evaluation switches to the classical connection formulas in
the variable w = 1 - z (the non-integer, zero, positive-integer and
negative-integer cases of c-a-b; see Abramowitz & Stegun 15.3.6 and
15.3.10-15.3.12).  Those w-series converge geometrically, which is what
makes the z -> 1 behavior classification numerically observable at
z = 1 - 1e-8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ._core import impl, STATUS_OK
from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "Hyp2F1Params",
    "Hyp2F1Limit",
    "LimitKind",
    "ln_gamma",
    "gamma",
    "beta",
    "digamma",
    "hyp2f1",
    "hyp2f1_many",
    "hyp2f1_derivative",
    "hyp2f1_at_one",
]

DEFAULT_TOL = 1e-15
DEFAULT_MAX_TERMS = 100_000

# direct series below, connection formulas above
_Z_SWITCH = 0.75
# |d - round(d)| below this treats c-a-b as the integer case
_INT_EPS = 1e-9


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------


def ln_gamma(x: float) -> float:
    """log Gamma(x) for x > 0."""
    if not x > 0.0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return impl.ln_gamma(float(x))


def gamma(x: float) -> float:
    """Gamma(x) for x > 0, via exp(ln_gamma)."""
    return math.exp(ln_gamma(x))


def beta(p: float, q: float) -> float:
    """Euler Beta: Gamma(p) Gamma(q) / Gamma(p+q), p, q > 0."""
    if not (p > 0.0 and q > 0.0):
        raise DomainError(f"beta requires positive arguments, got ({p}, {q})")
    return math.exp(impl.ln_gamma(p) + impl.ln_gamma(q) - impl.ln_gamma(p + q))


def digamma(x: float) -> float:
    """psi(x) for x > 0."""
    if not x > 0.0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    return impl.digamma(float(x))


def _is_nonpos_int(x: float, eps: float = _INT_EPS) -> bool:
    return x < 0.5 and abs(x - round(x)) < eps


def _sinpi(x: float) -> float:
    n = math.floor(x)
    s = math.sin(math.pi * (x - n))
    return s if int(n) % 2 == 0 else -s


def _ln_gamma_signed(x: float) -> tuple[float, float]:
    """(log|Gamma(x)|, sign) for real non-pole x, reflection below zero."""
    if x > 0.0:
        return impl.ln_gamma(x), 1.0
    if _is_nonpos_int(x):
        raise PoleError(f"Gamma pole at {x}")
    s = _sinpi(x)
    lg = math.log(math.pi) - math.log(abs(s)) - impl.ln_gamma(1.0 - x)
    return lg, 1.0 if s > 0.0 else -1.0


def _gamma_ratio(nums, dens) -> float:
    """prod Gamma(nums) / prod Gamma(dens).

    A pole in a denominator annihilates the ratio (reciprocal-Gamma
    semantics); a pole in a numerator raises :class:`PoleError`.
    """
    for d in dens:
        if _is_nonpos_int(d):
            return 0.0
    ln = 0.0
    sg = 1.0
    for u in nums:
        l, s = _ln_gamma_signed(u)
        ln += l
        sg *= s
    for d in dens:
        l, s = _ln_gamma_signed(d)
        ln -= l
        sg *= s
    return sg * math.exp(ln)


# ---------------------------------------------------------------------------
# Parameter / limit types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hyp2F1Params:
    """Parameters (a, b, c) of F(a,b,c;z); c must avoid 0, -1, -2, ..."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if _is_nonpos_int(self.c):
            raise DomainError(f"c = {self.c} is a nonpositive integer; series undefined")


class LimitKind(Enum):
    FINITE = "finite"
    LOG_DIVERGENT = "log_divergent"
    POWER_DIVERGENT = "power_divergent"


@dataclass(frozen=True)
class Hyp2F1Limit:
    """Classified z -> 1 behavior of F(a,b,c;z).

    ``value_or_coefficient`` is the finite limit, the coefficient of
    ln(1-z), or the coefficient of (1-z)^(c-a-b); ``exponent`` is set only
    in the power-divergent case and equals c-a-b.
    """

    kind: LimitKind
    value_or_coefficient: float
    exponent: Optional[float] = None


# ---------------------------------------------------------------------------
# Unit-argument connection machinery
# ---------------------------------------------------------------------------


def _series(a, b, c, z, tol, max_terms, arr):
    if arr:
        vals, status = impl.hyp2f1_series_arr(a, b, c, z, tol, max_terms)
        if np.any(status != STATUS_OK):
            bad = np.flatnonzero(status != STATUS_OK)
            raise ConvergenceError(
                f"hyp2f1 series cap of {max_terms} terms hit for "
                f"(a,b,c)=({a},{b},{c}) at z={np.asarray(z).ravel()[bad[0]]}",
                partial_sum=vals,
                terms=max_terms,
            )
        return vals
    val, n, status = impl.hyp2f1_series(a, b, c, z, tol, max_terms)
    if status != STATUS_OK:
        raise ConvergenceError(
            f"hyp2f1 series cap of {max_terms} terms hit for "
            f"(a,b,c)=({a},{b},{c}) at z={z}",
            partial_sum=val,
            terms=n,
        )
    return val


def _lnseries(a, b, m, w, tol, max_terms, arr):
    if arr:
        vals, status = impl.hyp2f1_lnseries_arr(a, b, m, w, tol, max_terms)
        if np.any(status != STATUS_OK):
            raise ConvergenceError(
                f"hyp2f1 logarithmic series cap hit for (a,b,m)=({a},{b},{m})",
                partial_sum=vals,
                terms=max_terms,
            )
        return vals
    val, n, status = impl.hyp2f1_lnseries(a, b, m, w, tol, max_terms)
    if status != STATUS_OK:
        raise ConvergenceError(
            f"hyp2f1 logarithmic series cap hit for (a,b,m)=({a},{b},{m}) at w={w}",
            partial_sum=val,
            terms=n,
        )
    return val


def _finite_prefix_sum(a0, b0, m, w):
    """sum_{k=0}^{m-1} (a0)_k (b0)_k / (k! (1-m)_k) w^k  (empty sum -> 0)."""
    s = 0.0 * w if not np.isscalar(w) else 0.0
    t = 1.0 + 0.0 * w if not np.isscalar(w) else 1.0
    for k in range(m):
        if k > 0:
            t = t * (a0 + k - 1.0) * (b0 + k - 1.0) / (k * (k - m)) * w
        s = s + t
    return s


def _near_one(a, b, c, w, tol, max_terms, arr):
    """F(a,b,c;1-w) via the w-expansion; w in (0, 1-_Z_SWITCH]."""
    d = c - a - b
    md = round(d)
    if abs(d - md) < _INT_EPS:
        m = int(md)
        if m == 0:
            pref = _gamma_ratio([a + b], [a, b])
            return -pref * _lnseries(a, b, 0, w, tol, max_terms, arr)
        if m > 0:
            # c = a + b + m
            s1 = _finite_prefix_sum(a, b, m, w)
            p = _gamma_ratio([float(m), c], [a + m, b + m])
            q = _gamma_ratio([c], [a, b])
            sgn = -1.0 if m % 2 else 1.0
            tail = 0.0
            if q != 0.0:
                tail = q * w**m * _lnseries(a + m, b + m, m, w, tol, max_terms, arr)
            return p * s1 - sgn * tail
        m = -m
        # c = a + b - m
        s1 = _finite_prefix_sum(a - m, b - m, m, w)
        p = _gamma_ratio([float(m), c], [a, b])
        q = _gamma_ratio([c], [a - m, b - m])
        sgn = -1.0 if m % 2 else 1.0
        tail = 0.0
        if q != 0.0:
            tail = q * _lnseries(a, b, m, w, tol, max_terms, arr)
        return p * w ** (-m) * s1 - sgn * tail
    g1 = _gamma_ratio([c, d], [c - a, c - b])
    g2 = _gamma_ratio([c, -d], [a, b])
    v1 = _series(a, b, 1.0 - d, w, tol, max_terms, arr) if g1 != 0.0 else 0.0
    v2 = _series(c - a, c - b, 1.0 + d, w, tol, max_terms, arr) if g2 != 0.0 else 0.0
    return g1 * v1 + w**d * g2 * v2


def _hyp2f1_raw(a, b, c, z, tol=DEFAULT_TOL, max_terms=DEFAULT_MAX_TERMS):
    """Scalar F(a,b,c;z) on 0 <= z < 1 without parameter-object overhead."""
    if z == 0.0:
        return 1.0
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        # terminating polynomial; the direct series is exact at any z
        return _series(a, b, c, z, tol, max_terms, arr=False)
    if z < _Z_SWITCH:
        return _series(a, b, c, z, tol, max_terms, arr=False)
    return _near_one(a, b, c, 1.0 - z, tol, max_terms, arr=False)


def _hyp2f1_raw_many(a, b, c, z, tol=DEFAULT_TOL, max_terms=DEFAULT_MAX_TERMS):
    """Vectorised F(a,b,c;z) over an array of arguments in [0, 1)."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty(z.shape)
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        return np.asarray(_series(a, b, c, z.ravel(), tol, max_terms, arr=True)).reshape(z.shape)
    flat = z.ravel()
    res = np.empty(flat.shape)
    low = flat < _Z_SWITCH
    if low.any():
        res[low] = _series(a, b, c, flat[low], tol, max_terms, arr=True)
    if (~low).any():
        res[~low] = _near_one(a, b, c, 1.0 - flat[~low], tol, max_terms, arr=True)
    out[...] = res.reshape(z.shape)
    return out


def _check_z(z):
    if not (0.0 <= z < 1.0):
        raise DomainError(f"hyp2f1 requires 0 <= z < 1, got {z}")


def hyp2f1(p: Hyp2F1Params, z: float, tol: float = DEFAULT_TOL,
           max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """F(a,b,c;z) on [0, 1).

    Away from z = 1 the power series is summed until the current term drops
    below ``tol`` times the partial sum (hard cap ``max_terms``, exceeding it
    raises :class:`ConvergenceError` carrying the partial sum).  Near z = 1
    the connection formulas in 1-z take over.
    """
    _check_z(z)
    return _hyp2f1_raw(p.a, p.b, p.c, float(z), tol, max_terms)


def hyp2f1_many(p: Hyp2F1Params, z, tol: float = DEFAULT_TOL,
                max_terms: int = DEFAULT_MAX_TERMS) -> np.ndarray:
    """Vectorised :func:`hyp2f1` over an array of arguments in [0, 1)."""
    z = np.asarray(z, dtype=np.float64)
    if z.size and (z.min() < 0.0 or z.max() >= 1.0):
        raise DomainError("hyp2f1_many requires all z in [0, 1)")
    return _hyp2f1_raw_many(p.a, p.b, p.c, z, tol, max_terms)


def hyp2f1_derivative(p: Hyp2F1Params, z: float, tol: float = DEFAULT_TOL,
                      max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """dF/dz = (a b / c) F(a+1, b+1, c+1; z)."""
    _check_z(z)
    return p.a * p.b / p.c * _hyp2f1_raw(p.a + 1.0, p.b + 1.0, p.c + 1.0,
                                         float(z), tol, max_terms)


def hyp2f1_at_one(p: Hyp2F1Params) -> Hyp2F1Limit:
    """Classify the z -> 1 behavior of F(a,b,c;z) for a, b > 0.

    c-a-b > 0: finite limit Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b));
    c-a-b = 0: F ~ coeff * ln(1-z) with coeff = -Gamma(a+b)/(Gamma(a)Gamma(b));
    c-a-b < 0: F ~ coeff * (1-z)^(c-a-b) with
    coeff = Gamma(c)Gamma(a+b-c) / (Gamma(a)Gamma(b)).
    """
    a, b, c = p.a, p.b, p.c
    if not (a > 0.0 and b > 0.0):
        raise DomainError("hyp2f1_at_one classification requires a, b > 0")
    d = c - a - b
    if abs(d - round(d)) < _INT_EPS and round(d) == 0:
        coeff = -_pole_checked_ratio([a + b], [a, b])
        return Hyp2F1Limit(LimitKind.LOG_DIVERGENT, coeff)
    if d > 0.0:
        value = _pole_checked_ratio([c, d], [c - a, c - b])
        return Hyp2F1Limit(LimitKind.FINITE, value)
    coeff = _pole_checked_ratio([c, -d], [a, b])
    return Hyp2F1Limit(LimitKind.POWER_DIVERGENT, coeff, exponent=d)


def _pole_checked_ratio(nums, dens):
    for x in list(nums) + list(dens):
        if _is_nonpos_int(x, 1e-12):
            raise PoleError(f"Gamma argument {x} sits on a pole in the limit formula")
    return _gamma_ratio(nums, dens)
