"""Numerical check of the multiplier certificate behind the contraction bounds.

The bound ``||u+||^2 <= rho ||u||^2`` is proved by adding nonnegative
multiples of the two constraints on ``(u, ut)``

    t^2 ||u - ut||^2 - ||ut||^2 >= 0,      <u - ut, ut> >= 0

to ``||(1 - g) u + g ut||^2`` and collecting coefficients of ``||u||^2``,
``<u, ut>`` and ``||ut||^2``. The functions here evaluate those coefficient
identities and return their residuals.

Identities are evaluated in ``numpy.longdouble``: the lower-regime multiplier
has a ``1/t`` term whose cancellation costs about ``eps/t`` in absolute
accuracy, which float64 cannot keep below 1e-12 as ``t`` approaches 1e-6.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rates import Regime, classify, rho_lower, rho_upper

__all__ = [
    "Multipliers",
    "IdentityResidual",
    "multipliers",
    "identity_upper",
    "identity_lower",
    "identity_sweep",
    "sos_decomposition_check",
    "sample_upper",
    "sample_lower",
    "certify",
]

_LD = np.longdouble


def _check_gamma(gamma: float) -> None:
    if not 0.0 < gamma < 2.0:
        raise ValueError(f"relaxation factor gamma must lie in (0, 2), got {gamma}")


@dataclass(frozen=True)
class Multipliers:
    gamma: float
    t: float
    mu: float
    nu: float
    lam: float  # nan when t == 0

    @property
    def regime(self) -> Regime:
        return classify(self.gamma, self.t)

    @property
    def feasible(self) -> bool:
        """Sign conditions the proof needs in the active regime."""
        if self.regime.binding is Regime.UPPER:
            return self.mu >= 0.0 and 0.0 < self.nu < 1.0
        rl = rho_lower(self.gamma, self.t)
        return self.lam > 0.0 and 0.0 < rl < 1.0


def _upper_coeffs(g, t):
    mu = 2 * g * (t * t + g - 1) / (t * t + 1)
    nu = g * (2 - g) / (t * t + 1)
    return mu, nu


def _lam(g, t):
    return g * (1 - g) / t + g * g / (t + 1)


def multipliers(gamma: float, t: float) -> Multipliers:
    _check_gamma(gamma)
    if not t >= 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0.0 and classify(gamma, t) is Regime.LOWER:
        raise ValueError("lambda has a 1/t term and is undefined at t = 0 in the lower regime")
    mu, nu = _upper_coeffs(gamma, t)
    lam = _lam(gamma, t) if t > 0 else math.nan
    return Multipliers(gamma, t, mu, nu, lam)


@dataclass(frozen=True)
class IdentityResidual:
    c11: float
    c12: float
    c22: float

    @property
    def max_abs(self) -> float:
        return max(abs(self.c11), abs(self.c12), abs(self.c22))


def _upper_residuals(g, t):
    mu, nu = _upper_coeffs(g, t)
    rho_u = 1 - g * (2 - g) / (t * t + 1)
    c11 = (1 - g) ** 2 + nu * t * t - rho_u
    c12 = g * (1 - g) + mu / 2 - t * t * nu
    c22 = g * g - mu + (t * t - 1) * nu
    return c11, c12, c22


def _lower_residuals(g, t):
    lam = _lam(g, t)
    rho_l = (1 - g / (t + 1)) ** 2
    f = g * (t * t + g - 1)
    # c11 target is f * t/(t+1)^2; the completed square that follows relies on it
    c11 = (1 - g) ** 2 + lam * t * t - rho_l - f * t / ((t + 1) ** 2)
    c12 = g * (1 - g) - lam * t * t + f / (t + 1)
    c22 = g * g + lam * (t * t - 1) - f / t
    return c11, c12, c22


def identity_upper(gamma: float, t: float) -> IdentityResidual:
    """Residuals of the upper-regime coefficient identities (all should vanish)."""
    _check_gamma(gamma)
    if not t >= 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return IdentityResidual(*(float(r) for r in _upper_residuals(_LD(gamma), _LD(t))))


def identity_lower(gamma: float, t: float) -> IdentityResidual:
    """Residuals of the lower-regime coefficient identities (all should vanish)."""
    _check_gamma(gamma)
    if not t > 0:
        raise ValueError(f"the lower-regime identities have a 1/t term; need t > 0, got {t}")
    return IdentityResidual(*(float(r) for r in _lower_residuals(_LD(gamma), _LD(t))))


def identity_sweep(gammas, ts, regime: Regime) -> np.ndarray:
    """Vectorized ``max_abs`` residual for arrays of ``(gamma, t)``."""
    g = np.asarray(gammas, dtype=_LD)
    t = np.asarray(ts, dtype=_LD)
    fn = _lower_residuals if regime is Regime.LOWER else _upper_residuals
    res = np.abs(np.stack(fn(g, t)))
    return res.max(axis=0).astype(float)


def sos_decomposition_check(gamma: float, t: float, u, utilde) -> float:
    """Value of the completed square ``g (t^2 + g - 1) ||sqrt(t)/(t+1) u - ut/sqrt(t)||^2``.

    Nonpositive whenever ``t^2 + g < 1``.
    """
    _check_gamma(gamma)
    if not t > 0:
        raise ValueError(f"need t > 0, got {t}")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    ut = np.atleast_1d(np.asarray(utilde, dtype=float))
    if u.shape != ut.shape:
        raise ValueError(f"u and utilde differ in shape: {u.shape} vs {ut.shape}")
    w = math.sqrt(t) / (t + 1) * u - ut / math.sqrt(t)
    return gamma * (t * t + gamma - 1) * float(w @ w)


def sample_upper(rng: np.random.Generator, n: int, t_max: float = 10.0) -> tuple[np.ndarray, np.ndarray]:
    """``n`` uniform draws from ``{gamma in (0,2), 0 <= t <= t_max, t^2 + gamma >= 1}``."""
    gs, ts = [], []
    need = n
    while need > 0:
        g = rng.uniform(0.0, 2.0, 2 * need + 16)
        t = rng.uniform(0.0, t_max, 2 * need + 16)
        keep = (g > 0) & (t * t + g >= 1)
        gs.append(g[keep][:need])
        ts.append(t[keep][:need])
        need -= len(gs[-1])
    return np.concatenate(gs), np.concatenate(ts)


def sample_lower(rng: np.random.Generator, n: int, t_min: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
    """``n`` uniform draws from ``{gamma in (0,1), t_min <= t < 1, t^2 + gamma < 1}``."""
    gs, ts = [], []
    need = n
    while need > 0:
        g = rng.uniform(0.0, 1.0, 3 * need + 16)
        t = rng.uniform(t_min, 1.0, 3 * need + 16)
        keep = (g > 0) & (t * t + g < 1)
        gs.append(g[keep][:need])
        ts.append(t[keep][:need])
        need -= len(gs[-1])
    return np.concatenate(gs), np.concatenate(ts)


def _multiplier_feasibility(gu, tu, gl, tl) -> bool:
    mu, nu = _upper_coeffs(gu, tu)
    ok_upper = bool(np.all(mu >= 0) and np.all((nu > 0) & (nu < 1)))
    lam = _lam(gl, tl)
    rl = (1 - gl / (tl + 1)) ** 2
    ok_lower = bool(np.all(lam > 0) and np.all((rl > 0) & (rl < 1)))
    return ok_upper and ok_lower


def certify(samples: int, seed: int = 42, tol: float = 1e-12) -> dict:
    """Sweep both regimes with random ``(gamma, t)`` and summarize the certificate."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    gu, tu = sample_upper(rng, samples)
    gl, tl = sample_lower(rng, samples)
    max_u = float(identity_sweep(gu, tu, Regime.UPPER).max())
    max_l = float(identity_sweep(gl, tl, Regime.LOWER).max())
    feasible = _multiplier_feasibility(gu, tu, gl, tl)
    return {
        "region": {
            "upper": "gamma in (0,2), 0 <= t <= 10, t^2 + gamma >= 1",
            "lower": "gamma in (0,1), 1e-6 <= t < 1, t^2 + gamma < 1",
        },
        "samples": samples,
        "seed": seed,
        "max_residual_eq8": max_u,
        "max_residual_eq9": max_l,
        "tolerance": tol,
        "multiplier_feasibility": "pass" if feasible else "fail",
        "pass": bool(max_u <= tol and max_l <= tol and feasible),
    }
