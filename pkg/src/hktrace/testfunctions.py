"""Trial-function families for certifying the inequality.

All families are axisymmetric in x and built from the standard smooth
compactly supported profile B(s) = exp(-1/(1-s^2)) on |s| < 1 (extended by
zero), a Gaussian-tapered variant, and the inverse-power trace extremals.
Random families draw parameters from a seeded generator so every
certification run is reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from .quadrature import Support, TestFunction

__all__ = [
    "bump_profile",
    "bump_profile_prime",
    "make_radial_bump",
    "make_gaussian_bump",
    "make_escobar",
    "make_interior_bump",
    "random_family",
]


def bump_profile(s):
    """exp(-1/(1-s^2)) on |s| < 1, zero outside; C-infinity on the line."""
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros(s.shape)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = np.exp(-1.0 / (1.0 - si * si))
    return out


def bump_profile_prime(s):
    """Derivative of :func:`bump_profile`: B(s) * (-2 s / (1-s^2)^2)."""
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros(s.shape)
    inside = np.abs(s) < 1.0
    si = s[inside]
    g = 1.0 - si * si
    out[inside] = np.exp(-1.0 / g) * (-2.0 * si / (g * g))
    return out


def make_radial_bump(r0: float, w_r: float, w_t: float,
                     amplitude: float = 1.0) -> TestFunction:
    """u(r, t) = A B((r - r0)/w_r) B(t/w_t), positive trace at t = 0."""
    if not (r0 - w_r > 0.0 and w_r > 0.0 and w_t > 0.0):
        raise ValueError("bump support must stay inside {r > 0}")

    def value(r, t):
        return amplitude * bump_profile((r - r0) / w_r) * bump_profile(t / w_t)

    def grad(r, t):
        br = bump_profile((r - r0) / w_r)
        bt = bump_profile(t / w_t)
        u_r = amplitude * bump_profile_prime((r - r0) / w_r) / w_r * bt
        u_t = amplitude * br * bump_profile_prime(t / w_t) / w_t
        return u_r, u_t

    return TestFunction(
        value, grad, Support.box(r0 - w_r, r0 + w_r, 0.0, w_t),
        name=f"bump(r0={r0:.3g},wr={w_r:.3g},wt={w_t:.3g})",
    )


def make_gaussian_bump(r0: float, s_r: float, s_t: float,
                       amplitude: float = 1.0, cut: float = 6.0) -> TestFunction:
    """Gaussian profile tapered to exact compact support at ``cut`` sigmas."""
    if not (r0 - cut * s_r > 0.0):
        raise ValueError("tapered Gaussian support must stay inside {r > 0}")

    def value(r, t):
        sr = (r - r0) / s_r
        st = t / s_t
        return (amplitude * np.exp(-sr * sr - st * st)
                * bump_profile(sr / cut) * bump_profile(st / cut))

    def grad(r, t):
        sr = (r - r0) / s_r
        st = t / s_t
        g = amplitude * np.exp(-sr * sr - st * st)
        br = bump_profile(sr / cut)
        bt = bump_profile(st / cut)
        u_r = (g * (-2.0 * sr / s_r) * br + g * bump_profile_prime(sr / cut) / (cut * s_r)) * bt
        u_t = (g * (-2.0 * st / s_t) * bt + g * bump_profile_prime(st / cut) / (cut * s_t)) * br
        return u_r, u_t

    return TestFunction(
        value, grad, Support.box(r0 - cut * s_r, r0 + cut * s_r, 0.0, cut * s_t),
        name=f"gauss(r0={r0:.3g})",
    )


def make_escobar(a: float, n: int) -> TestFunction:
    """Trace-embedding extremal u_a(x, t) = [(a+t)^2 + |x|^2]^(-n/2+1)."""
    if not a > 0.0:
        raise ValueError("scale parameter a must be positive")
    ex = 1.0 - n / 2.0

    def value(r, t):
        return ((a + t) ** 2 + r * r) ** ex

    def grad(r, t):
        d = ((a + t) ** 2 + r * r) ** (ex - 1.0)
        return 2.0 * ex * r * d, 2.0 * ex * (a + t) * d

    return TestFunction(value, grad, Support.unbounded(), name=f"escobar(a={a:g},n={n})")


def make_interior_bump(r0: float, w_r: float, t0: float, w_t: float,
                       amplitude: float = 1.0) -> TestFunction:
    """Bump supported strictly inside {t > 0}: identically zero trace."""
    if not (t0 - w_t > 0.0 and r0 - w_r > 0.0):
        raise ValueError("interior bump must stay away from the boundary")

    def value(r, t):
        return amplitude * bump_profile((r - r0) / w_r) * bump_profile((t - t0) / w_t)

    def grad(r, t):
        br = bump_profile((r - r0) / w_r)
        bt = bump_profile((t - t0) / w_t)
        return (
            amplitude * bump_profile_prime((r - r0) / w_r) / w_r * bt,
            amplitude * br * bump_profile_prime((t - t0) / w_t) / w_t,
        )

    return TestFunction(
        value, grad, Support.box(r0 - w_r, r0 + w_r, t0 - w_t, t0 + w_t),
        name="interior-bump",
    )


def random_family(count: int, seed: int, kind: str = "bump") -> list:
    """Reproducible list of trial functions.

    kind: "bump", "gaussian", "mixed" (alternating), or "zero-trace".
    """
    rng = np.random.default_rng(seed)
    funcs = []
    for i in range(count):
        r0 = rng.uniform(0.8, 2.5)
        w_t = rng.uniform(0.3, 1.2)
        amp = rng.uniform(0.5, 2.0)
        pick = kind if kind != "mixed" else ("bump" if i % 2 == 0 else "gaussian")
        if pick == "bump":
            w_r = rng.uniform(0.15, min(0.6, 0.8 * (r0 - 0.2)))
            funcs.append(make_radial_bump(r0, w_r, w_t, amp))
        elif pick == "gaussian":
            s_r = rng.uniform(0.03, (r0 - 0.2) / 6.0)
            s_t = rng.uniform(0.05, 0.25)
            funcs.append(make_gaussian_bump(r0, s_r, s_t, amp))
        elif pick == "zero-trace":
            w_r = rng.uniform(0.15, min(0.6, 0.8 * (r0 - 0.2)))
            t0 = rng.uniform(1.5, 2.5)
            funcs.append(make_interior_bump(r0, w_r, t0, rng.uniform(0.2, 0.8), amp))
        else:
            raise ValueError(f"unknown family kind {kind!r}")
    return funcs
