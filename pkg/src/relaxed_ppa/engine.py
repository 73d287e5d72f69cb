"""Relaxed proximal point iteration with per-step bound tracking.

Each step computes ``zt = J_{c_k T}(z)`` and ``z+ = (1 - gamma) z + gamma zt``,
and records the observed squared contraction next to the bounds predicted
from ``t_k = a / c_k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import rates
from .operators import OperatorSpec, resolvent

__all__ = [
    "RunConfig",
    "StepRecord",
    "Trace",
    "NonFiniteIterate",
    "step",
    "run",
    "TightnessRow",
    "TightnessReport",
    "tightness_report",
    "regularity_window",
]

DIST_FLOOR = 1e-300
THEOREM_TOL = 1e-10
ATTAINED_TOL = 1e-10


class NonFiniteIterate(ArithmeticError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Iteration settings.

    ``c`` is either a constant or a finite schedule ``c_0, c_1, ...``; a
    schedule shorter than ``max_iters`` ends the run when it runs out.
    """

    gamma: float
    c: float | Sequence[float]
    max_iters: int = 100
    stop_tol: float = 0.0
    tau: float = math.inf

    def __post_init__(self):
        if not 0.0 < self.gamma < 2.0:
            raise ValueError(f"relaxation factor gamma must lie in (0, 2), got {self.gamma}")
        if isinstance(self.c, (int, float)):
            cs = [float(self.c)]
        else:
            cs = [float(v) for v in self.c]
            object.__setattr__(self, "c", tuple(cs))
            if not cs:
                raise ValueError("c schedule is empty")
        if not all(v > 0 and math.isfinite(v) for v in cs):
            raise ValueError(f"every c_k must be finite and > 0, got {self.c}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.stop_tol >= 0:
            raise ValueError(f"stop_tol must be >= 0, got {self.stop_tol}")
        if not self.tau > 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")

    @property
    def constant(self) -> bool:
        return not isinstance(self.c, tuple)

    @property
    def n_steps(self) -> int:
        return self.max_iters if self.constant else min(self.max_iters, len(self.c))

    def c_at(self, k: int) -> float:
        return float(self.c) if self.constant else self.c[k]


@dataclass(frozen=True, eq=False)
class StepRecord:
    k: int
    c: float
    z: np.ndarray = field(repr=False)
    z_tilde: np.ndarray = field(repr=False)
    residual: float
    dist: float
    step_ratio_sq: float  # nan when dist <= DIST_FLOOR
    predicted_rho: float
    rho_ty: float
    regime: rates.Regime
    in_window: bool

    @property
    def checked(self) -> bool:
        """Whether the theorem applies to this step and the ratio is defined."""
        return self.in_window and not math.isnan(self.step_ratio_sq)


@dataclass(frozen=True)
class Trace:
    records: tuple[StepRecord, ...]
    final: np.ndarray = field(repr=False)
    gamma: float
    a: float
    tau: float

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, k):
        return self.records[k]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    def aggregate_bound(self) -> float:
        """Product of the per-step bounds over in-window steps.

        Informational only: it bounds the total squared contraction across
        the window but is not claimed to be tight.
        """
        return math.prod(r.predicted_rho for r in self.records if r.in_window)

    def max_violation(self) -> float:
        """Largest ``ratio - predicted`` over checked steps (negative when all hold)."""
        vals = [r.step_ratio_sq - r.predicted_rho for r in self.records if r.checked]
        return max(vals, default=-math.inf)


def step(spec: OperatorSpec, gamma: float, c: float, z) -> tuple[np.ndarray, np.ndarray]:
    if not 0.0 < gamma < 2.0:
        raise ValueError(f"relaxation factor gamma must lie in (0, 2), got {gamma}")
    z = np.atleast_1d(np.asarray(z, dtype=float))
    zt = resolvent(spec, c, z)
    return zt, (1.0 - gamma) * z + gamma * zt


def run(spec: OperatorSpec, config: RunConfig, z0) -> Trace:
    z = np.atleast_1d(np.asarray(z0, dtype=float))
    if z.shape != (spec.dimension,):
        raise ValueError(f"z0 must have dimension {spec.dimension}, got shape {z.shape}")
    zstar = spec.zero
    a = spec.a
    records = []
    for k in range(config.n_steps):
        c = config.c_at(k)
        with np.errstate(invalid="ignore", over="ignore"):
            zt, z_next = step(spec, config.gamma, c, z)
        if not (np.all(np.isfinite(zt)) and np.all(np.isfinite(z_next))):
            raise NonFiniteIterate(f"nonfinite iterate at k={k} (c={c}, |z|={np.linalg.norm(z):.3e})")
        residual = float(np.linalg.norm(z - zt)) / c
        dist = float(np.linalg.norm(z - zstar))
        dist_next = float(np.linalg.norm(z_next - zstar))
        ratio = (dist_next / dist) ** 2 if dist > DIST_FLOOR else math.nan
        t = a / c
        rho, regime = rates.rho_opt(config.gamma, t)
        records.append(
            StepRecord(
                k=k,
                c=c,
                z=z,
                z_tilde=zt,
                residual=residual,
                dist=dist,
                step_ratio_sq=ratio,
                predicted_rho=rho,
                rho_ty=rates.rho_ty(config.gamma, t),
                regime=regime,
                in_window=residual <= config.tau,
            )
        )
        z = z_next
        if residual <= config.stop_tol:
            break
    return Trace(tuple(records), z, config.gamma, a, config.tau)


@dataclass(frozen=True)
class TightnessRow:
    k: int
    observed: float
    rho_opt: float
    rho_ty: float
    in_window: bool

    @property
    def slack_opt(self) -> float:
        return self.rho_opt - self.observed

    @property
    def slack_ty(self) -> float:
        return self.rho_ty - self.observed


@dataclass(frozen=True)
class TightnessReport:
    rows: tuple[TightnessRow, ...]
    verdict: str  # "attained" | "not attained" | "no checked steps"

    @property
    def max_slack_opt(self) -> float:
        return max((r.slack_opt for r in self.rows if r.in_window), default=math.nan)

    @property
    def min_slack_opt(self) -> float:
        return min((r.slack_opt for r in self.rows if r.in_window), default=math.nan)

    @property
    def attained(self) -> bool:
        return self.verdict == "attained"


def tightness_report(spec: OperatorSpec, config: RunConfig, z0, tol: float = ATTAINED_TOL) -> TightnessReport:
    """Compare each observed contraction with both bounds.

    The verdict is ``"attained"`` when every in-window step matches the tight
    bound to within ``tol``.
    """
    trace = run(spec, config, z0)
    rows = tuple(
        TightnessRow(r.k, r.step_ratio_sq, r.predicted_rho, r.rho_ty, r.in_window)
        for r in trace
        if not math.isnan(r.step_ratio_sq)
    )
    slacks = [abs(r.slack_opt) for r in rows if r.in_window]
    if not slacks:
        verdict = "no checked steps"
    elif max(slacks) <= tol:
        verdict = "attained"
    else:
        verdict = "not attained"
    return TightnessReport(rows, verdict)


def regularity_window(trace: Trace, tau: float) -> int | None:
    """First index from which every recorded residual stays ``<= tau``.

    Returns ``None`` when the last recorded step is still outside the window.
    """
    if len(trace) == 0:
        raise ValueError("empty trace")
    if not tau > 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    k = len(trace)
    for r in reversed(trace.records):
        if r.residual > tau:
            break
        k = r.k
    return None if k == len(trace) else k
