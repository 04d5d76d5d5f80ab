"""Sharp constants of the interpolated trace-Hardy inequality family.

Every Gamma ratio is evaluated as exp of log-Gamma differences so that the
constants stay finite-precision-stable for large dimension (naive Gamma
products overflow well before n = 400).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._core import impl
from .errors import DomainError

__all__ = [
    "Params",
    "optimal_constant",
    "kato_constant",
    "hardy_constant",
    "interior_coefficient",
    "escobar_constant",
    "sobolev_constant",
    "unit_ball_volume",
    "unit_sphere_area",
]


@dataclass(frozen=True)
class Params:
    """Dimension n >= 3 and interpolation parameter 2 <= beta < n."""

    n: int
    beta: float

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 3):
            raise DomainError(f"dimension must be an integer >= 3, got {self.n!r}")
        if not (2.0 <= self.beta < self.n):
            raise DomainError(
                f"interpolation parameter must satisfy 2 <= beta < n, got beta={self.beta}, n={self.n}"
            )


def optimal_constant(p: Params) -> float:
    """Sharp trace coefficient H(n, beta).

    H = 2 Gamma((n+beta)/4 - 1/2) Gamma((n-beta)/4 + 1/2)
          / [Gamma((n+beta)/4 - 1) Gamma((n-beta)/4)].

    Tends to the Kato constant at beta = 2 and vanishes linearly as
    beta -> n (where the plain Hardy inequality is recovered).
    """
    n, b = float(p.n), float(p.beta)
    lg = impl.ln_gamma
    ln_h = (
        math.log(2.0)
        + lg((n + b) / 4.0 - 0.5)
        + lg((n - b) / 4.0 + 0.5)
        - lg((n + b) / 4.0 - 1.0)
        - lg((n - b) / 4.0)
    )
    return math.exp(ln_h)


def _check_dim(n: int) -> int:
    if not (isinstance(n, int) and n >= 3):
        raise DomainError(f"dimension must be an integer >= 3, got {n!r}")
    return n


def kato_constant(n: int) -> float:
    """Sharp boundary-term constant 2 Gamma^2(n/4) / Gamma^2((n-2)/4)."""
    _check_dim(n)
    lg = impl.ln_gamma
    return math.exp(math.log(2.0) + 2.0 * (lg(n / 4.0) - lg((n - 2.0) / 4.0)))


def hardy_constant(n: int) -> float:
    """(n-2)^2 / 4, the sharp half-space Hardy constant."""
    _check_dim(n)
    return (n - 2.0) ** 2 / 4.0


def interior_coefficient(p: Params) -> float:
    """(beta-2)^2 / 4, the weight of the interior inverse-square term."""
    return (p.beta - 2.0) ** 2 / 4.0


def unit_ball_volume(m: int) -> float:
    """Lebesgue measure of the unit ball in R^m: pi^(m/2) / Gamma(m/2 + 1)."""
    if not (isinstance(m, int) and m >= 1):
        raise DomainError(f"ball dimension must be an integer >= 1, got {m!r}")
    return math.exp(0.5 * m * math.log(math.pi) - impl.ln_gamma(0.5 * m + 1.0))


def unit_sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n: n * omega_n."""
    if not (isinstance(n, int) and n >= 1):
        raise DomainError(f"sphere ambient dimension must be an integer >= 1, got {n!r}")
    return n * unit_ball_volume(n)


def escobar_constant(n: int) -> float:
    """Sharp trace-embedding constant, attained by the inverse-power extremals.

    ((n-2)/2)^(1/2) * |S^{n-1}|^(1/(2(n-1))), with |S^{n-1}| = n omega_n the
    surface measure of the unit sphere in R^n.  The sphere measure (not the
    ball volume) is the normalization under which equality holds on the
    extremal family u_a; verified against closed-form Beta integrals.
    """
    _check_dim(n)
    return math.sqrt((n - 2.0) / 2.0) * unit_sphere_area(n) ** (1.0 / (2.0 * (n - 1.0)))


def sobolev_constant(n: int) -> float:
    """Sharp Sobolev constant sqrt(pi n (n-2)) (Gamma(n/2)/Gamma(n))^(1/n)."""
    _check_dim(n)
    lg = impl.ln_gamma
    return math.sqrt(math.pi * n * (n - 2.0)) * math.exp((lg(n / 2.0) - lg(float(n))) / n)
