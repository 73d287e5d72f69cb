"""Brute-force worst case of a single relaxed proximal step.

Writing ``u = z - z*`` and ``ut = J(z) - z*``, every maximal monotone ``T``
whose inverse is ``a``-Lipschitz at the origin forces

    ||ut|| <= t ||u - ut||        and        <u - ut, ut> >= 0,

and the next iterate is ``(1 - g) u + g ut``. This module searches all pairs
``(u, ut)`` allowed by those two inequalities for the largest value of
``||(1 - g) u + g ut||^2 / ||u||^2``, without using any closed-form bound.

Reduction to the plane: the objective and both constraints depend on
``(u, ut)`` only through ``||u||``, ``||ut||`` and ``<u, ut>``, so a rotation
puts ``u = ||u|| e1`` and ``ut`` in ``span(e1, e2)``. All three quantities are
jointly 2-homogeneous, so ``||u|| = 1``. Reflecting ``e2`` leaves everything
unchanged, so ``ut = (x, y)`` with ``y >= 0`` suffices. The monotonicity
constraint is the disk ``(x - 1/2)^2 + y^2 <= 1/4``, which bounds the search
box to ``[0, 1] x [0, 1/2]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["FEASIBILITY_TOL", "FeasiblePoint", "OracleResult", "feasibility", "worst_case_ratio"]

FEASIBILITY_TOL = 1e-14


@dataclass(frozen=True)
class FeasiblePoint:
    x: float
    y: float


@dataclass(frozen=True)
class OracleResult:
    sup_ratio: float
    argmax: FeasiblePoint
    grid_resolution: float
    rounds: int


def _check(gamma: float, t: float) -> None:
    if not 0.0 < gamma < 2.0:
        raise ValueError(f"relaxation factor gamma must lie in (0, 2), got {gamma}")
    if not t > 0.0 or not np.isfinite(t):
        raise ValueError(f"t must be finite and > 0, got {t}")


def _feasible_mask(t, x, y):
    sq = x * x + y * y
    lip = t * t * ((1.0 - x) ** 2 + y * y) - sq
    mono = x - sq
    return (lip >= -FEASIBILITY_TOL) & (mono >= -FEASIBILITY_TOL)


def feasibility(gamma: float, t: float, x: float, y: float) -> bool:
    """Whether ``ut = (x, y)`` is admissible against ``u = (1, 0)``.

    ``gamma`` does not enter the constraints; it is accepted so call sites
    can pass a full parameter point.
    """
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    return bool(_feasible_mask(t, np.float64(x), np.float64(y)))


def _objective(gamma, x, y):
    return ((1.0 - gamma) + gamma * x) ** 2 + (gamma * y) ** 2


def _grid_max(gamma, t, x0, x1, y0, y1, n):
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    val = np.where(_feasible_mask(t, X, Y), _objective(gamma, X, Y), -np.inf)
    # argmax on a fixed grid picks the first maximal index, so the result is deterministic
    i = int(np.argmax(val))
    ix, iy = np.unravel_index(i, val.shape)
    hx = (x1 - x0) / (n - 1)
    hy = (y1 - y0) / (n - 1)
    return float(val.flat[i]), float(X[ix, iy]), float(Y[ix, iy]), max(hx, hy), val


def _column_top(t, x):
    """Largest admissible ``y`` in each column ``x`` (nan if the column is empty).

    For fixed ``x`` both constraints are linear in ``y^2``, so the admissible
    ``y^2`` form an interval and its right end is found exactly. The objective
    grows with ``y^2``, so this is the best point of the column.
    """
    x = np.asarray(x, dtype=float)
    mono = x - x * x
    A = 1.0 - t * t
    B = t * t * (1.0 - x) ** 2 - x * x
    if A > 0.0:
        y2 = np.minimum(mono, B / A)
        ok = y2 >= 0.0
    elif A < 0.0:
        y2 = mono
        ok = (mono >= 0.0) & (mono >= B / A)
    else:
        y2 = mono
        ok = (mono >= 0.0) & (B >= 0.0)
    y = np.sqrt(np.where(ok, np.maximum(y2, 0.0), 0.0))
    # rounding in sqrt can step just outside; pull such points inward
    for _ in range(4):
        bad = ok & ~_feasible_mask(t, x, y)
        if not bad.any():
            break
        y = np.where(bad, y * (1.0 - 4e-16) - 1e-300, y)
    ok &= _feasible_mask(t, x, y)
    return np.where(ok, y, np.nan)


def _refine(gamma, t, sx, width, n, target, max_steps):
    """1-D pattern search over columns near ``sx``: recentre while the best
    column sits on the window edge, shrink once it is interior."""
    cx, w = sx, width
    best, bx, by, h = -np.inf, sx, 0.0, width
    shrinks = 0
    for _ in range(max_steps):
        x0, x1 = max(0.0, cx - w), min(1.0, cx + w)
        xs = np.linspace(x0, x1, n)
        ys = _column_top(t, xs)
        val = np.where(np.isnan(ys), -np.inf, _objective(gamma, xs, np.nan_to_num(ys)))
        i = int(np.argmax(val))
        h = (x1 - x0) / (n - 1)
        if not np.isfinite(val[i]):
            break
        if val[i] > best:
            best, bx, by = float(val[i]), float(xs[i]), float(ys[i])
        on_edge = (i == 0 and x0 > 0.0) or (i == n - 1 and x1 < 1.0)
        cx = float(xs[i])
        if not on_edge:
            w *= 0.2
            shrinks += 1
            if w <= target:
                break
    return best, bx, by, h, shrinks


def worst_case_ratio(
    gamma: float,
    t: float,
    resolution: int = 1000,
    rounds: int = 3,
    refine_resolution: int = 101,
    candidates: int = 4,
    target: float = 1e-10,
) -> OracleResult:
    """Largest one-step squared contraction over every admissible geometry.

    A ``resolution x resolution`` grid covers the search box. The columns of
    the best ``candidates`` well-separated grid points then seed a 1-D
    pattern search along the top edge of the admissible set, on
    ``refine_resolution``-point grids, each shrinking its window at least
    ``rounds`` times and until the half-width drops below ``target``.
    """
    _check(gamma, t)
    if resolution < 100:
        raise ValueError(f"resolution must be >= 100, got {resolution}")
    if rounds < 3:
        raise ValueError(f"at least 3 refinement rounds are required, got {rounds}")

    best, bx, by, h, val = _grid_max(gamma, t, 0.0, 1.0, 0.0, 0.5, resolution)

    xs = np.linspace(0.0, 1.0, resolution)
    ys = np.linspace(0.0, 0.5, resolution)
    order = np.argsort(val, axis=None, kind="stable")[::-1]
    seeds: list[tuple[float, float]] = []
    for idx in order[: 50 * candidates]:
        if not np.isfinite(val.flat[idx]):
            break
        ix, iy = np.unravel_index(idx, val.shape)
        p = (float(xs[ix]), float(ys[iy]))
        if all(max(abs(p[0] - q[0]), abs(p[1] - q[1])) > 8 * h for q in seeds):
            seeds.append(p)
        if len(seeds) == candidates:
            break

    final_h = h
    min_shrinks = rounds
    for sx, _ in seeds:
        v, px, py, ch, shrinks = _refine(
            gamma, t, sx, 4.0 * h, refine_resolution,
            min(target, 0.2**rounds * 4.0 * h), 2000,
        )
        # strict comparison: ties keep the earlier seed
        if v > best:
            best, bx, by = v, px, py
        final_h = min(final_h, ch)
        min_shrinks = min(min_shrinks, shrinks)
    return OracleResult(best, FeasiblePoint(bx, by), final_h, min_shrinks)
