"""Parameter sweeps behind the ``regionmap`` and ``examples`` commands."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rates
from .engine import RunConfig, run
from .operators import OperatorSpec, scalar, skew

DEFAULT_GAMMAS = tuple(round(0.1 * i, 1) for i in range(1, 20))
DEFAULT_TSQ = (0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0)

UPPER_TOL = 1e-10
LOWER_TOL = 1e-12


@dataclass(frozen=True)
class RegionCell:
    gamma: float
    t_sq: float
    regime: rates.Regime
    rho_opt: float
    rho_ty: float
    gap: float
    rho_u: float
    rho_l: float


def gamma_grid(steps: int | None = None, gamma_max: float = 2.0) -> tuple[float, ...]:
    """Interior grid ``gamma_max * i / (steps + 1)``; the default is 0.1, ..., 1.9."""
    if steps is None:
        return DEFAULT_GAMMAS
    if steps < 2:
        raise ValueError(f"gamma steps must be >= 2, got {steps}")
    if not 0 < gamma_max <= 2:
        raise ValueError(f"gamma_max must lie in (0, 2], got {gamma_max}")
    return tuple(gamma_max * i / (steps + 1) for i in range(1, steps + 1))


def tsq_grid(steps: int | None = None, tsq_max: float = 4.0) -> tuple[float, ...]:
    if steps is None:
        return DEFAULT_TSQ
    if steps < 2:
        raise ValueError(f"t_sq steps must be >= 2, got {steps}")
    if not tsq_max > 0:
        raise ValueError(f"tsq_max must be > 0, got {tsq_max}")
    return tuple(float(v) for v in np.linspace(0.0, tsq_max, steps))


def region_map(gammas, tsqs) -> list[RegionCell]:
    cells = []
    for g in gammas:
        for tsq in tsqs:
            b = rates.rate_bundle(g, math.sqrt(tsq))
            cells.append(RegionCell(g, tsq, b.regime, b.rho_opt, b.rho_ty, b.gap, b.rho_u, b.rho_l))
    return cells


@dataclass(frozen=True)
class ExampleCell:
    operator: str
    gamma: float
    t_sq: float
    regime: rates.Regime
    expected: float  # closed-form ratio for this operator
    rho_opt: float
    observed_min: float
    observed_max: float
    asserted: bool
    passed: bool

    @property
    def deviation(self) -> float:
        return max(abs(self.observed_max - self.expected), abs(self.observed_min - self.expected))


def _sweep_one(name: str, spec: OperatorSpec, z0, gamma: float, t_sq: float, iters: int) -> ExampleCell:
    c = spec.a / math.sqrt(t_sq)
    t = spec.a / c
    trace = run(spec, RunConfig(gamma=gamma, c=c, max_iters=iters), z0)
    obs = trace.column("step_ratio_sq")
    obs = obs[~np.isnan(obs)]
    rho, regime = rates.rho_opt(gamma, t)
    if name == "skew":
        expected = rates.rho_upper(gamma, t)
        asserted = regime.binding is rates.Regime.UPPER
        tol = UPPER_TOL
    else:
        expected = rates.rho_lower(gamma, t)
        asserted = regime is rates.Regime.LOWER
        tol = LOWER_TOL
    if asserted:
        passed = bool(np.all(np.abs(obs - expected) <= tol) and abs(expected - rho) <= tol)
    else:
        passed = bool(np.all(obs <= rho + UPPER_TOL))
    return ExampleCell(name, gamma, t_sq, regime, expected, rho,
                       float(obs.min()), float(obs.max()), asserted, passed)


def example_sweep(gammas=DEFAULT_GAMMAS, tsqs=DEFAULT_TSQ, iters: int = 20, a: float = 1.0) -> list[ExampleCell]:
    """Run both worst-case operators on every grid cell.

    The skew rotation must attain the upper bound wherever
    ``t^2 + gamma >= 1`` and the scalar operator the lower bound wherever
    ``t^2 + gamma < 1``. Other cells are recorded and only checked against
    the tight bound.
    """
    cells = []
    for name, spec, z0 in (("skew", skew(a), [1.0, 0.0]), ("scalar", scalar(a), [1.0])):
        for g in gammas:
            for tsq in tsqs:
                cells.append(_sweep_one(name, spec, z0, g, tsq, iters))
    return cells
