"""Contraction bounds for one step of the relaxed proximal point iteration.

All bounds are functions of the relaxation factor ``gamma`` in (0, 2) and the
ratio ``t = a / c`` between the inverse modulus of the operator and the
proximal parameter. Each returns a bound on ``||z+ - z*||^2 / ||z - z*||^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "BOUNDARY_TOL",
    "Regime",
    "StepParams",
    "RateBundle",
    "classify",
    "rho_upper",
    "rho_lower",
    "rho_opt",
    "rho_ty",
    "bound_gap",
    "rate_bundle",
    "khat",
]

BOUNDARY_TOL = 1e-14


class Regime(str, Enum):
    UPPER = "Upper"
    LOWER = "Lower"
    BOUNDARY = "Boundary"

    @property
    def binding(self) -> "Regime":
        """Branch whose formula gives the bound; the boundary counts as upper."""
        return Regime.LOWER if self is Regime.LOWER else Regime.UPPER


def _check_gamma(gamma: float) -> None:
    if not 0.0 < gamma < 2.0:
        raise ValueError(f"relaxation factor gamma must lie in (0, 2), got {gamma}")


def _check(gamma: float, t: float) -> None:
    _check_gamma(gamma)
    if not t >= 0.0 or math.isinf(t):
        raise ValueError(f"ratio t = a/c must be finite and >= 0, got {t}")


@dataclass(frozen=True)
class StepParams:
    gamma: float
    c: float
    a: float = 1.0

    def __post_init__(self):
        _check_gamma(self.gamma)
        if not self.c > 0:
            raise ValueError(f"proximal parameter c must be > 0, got {self.c}")
        if not self.a >= 0:
            raise ValueError(f"inverse modulus a must be >= 0, got {self.a}")

    @property
    def t(self) -> float:
        return self.a / self.c


def classify(gamma: float, t: float) -> Regime:
    s = t * t + gamma - 1.0
    if abs(s) <= BOUNDARY_TOL:
        return Regime.BOUNDARY
    return Regime.UPPER if s > 0 else Regime.LOWER


def rho_upper(gamma: float, t: float) -> float:
    _check(gamma, t)
    return 1.0 - gamma * (2.0 - gamma) / (t * t + 1.0)


def rho_lower(gamma: float, t: float) -> float:
    _check(gamma, t)
    return (1.0 - gamma / (t + 1.0)) ** 2


def rho_opt(gamma: float, t: float) -> tuple[float, Regime]:
    """Tight bound ``max(rho_upper, rho_lower)`` and the regime that attains it."""
    return max(rho_upper(gamma, t), rho_lower(gamma, t)), classify(gamma, t)


def rho_ty(gamma: float, t: float) -> float:
    """The earlier bound ``1 - min(gamma, 2 gamma - gamma^2) / (t^2 + 1)``."""
    _check(gamma, t)
    # same product form as rho_upper so the two agree bit-for-bit when gamma >= 1
    return 1.0 - min(gamma, gamma * (2.0 - gamma)) / (t * t + 1.0)


def bound_gap(gamma: float, t: float) -> float:
    """How much looser ``rho_ty`` is than the tight bound; zero for gamma in [1, 2)."""
    return rho_ty(gamma, t) - rho_opt(gamma, t)[0]


@dataclass(frozen=True)
class RateBundle:
    gamma: float
    t: float
    rho_u: float
    rho_l: float
    rho_opt: float
    rho_ty: float
    regime: Regime

    @property
    def gap(self) -> float:
        return self.rho_ty - self.rho_opt

    def as_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "t": self.t,
            "rho_u": self.rho_u,
            "rho_l": self.rho_l,
            "rho_opt": self.rho_opt,
            "rho_ty": self.rho_ty,
            "gap": self.gap,
            "regime": self.regime.value,
        }


def rate_bundle(gamma: float, t: float) -> RateBundle:
    ru, rl = rho_upper(gamma, t), rho_lower(gamma, t)
    return RateBundle(gamma, t, ru, rl, max(ru, rl), rho_ty(gamma, t), classify(gamma, t))


def khat(z0_dist: float, gamma: float, tau: float, c: float) -> float:
    """Iteration count after which ``||z^k - J(z^k)|| / c <= tau`` is guaranteed for constant ``c``."""
    _check_gamma(gamma)
    if not z0_dist >= 0:
        raise ValueError(f"initial distance must be >= 0, got {z0_dist}")
    if not tau > 0 or not c > 0:
        raise ValueError(f"tau and c must be > 0, got tau={tau}, c={c}")
    return z0_dist**2 / (gamma * (2.0 - gamma) * tau**2 * c**2)
