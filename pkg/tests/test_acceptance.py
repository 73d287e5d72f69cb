"""Exit criteria. Each test prints one PASS/FAIL line, collected again in the terminal summary."""
import csv
import io
import math
import time

import numpy as np
import pytest

from relaxed_ppa import certificate, experiments, oracle, rates
from relaxed_ppa.cli import main as cli_main
from relaxed_ppa.engine import RunConfig, regularity_window, run
from relaxed_ppa.operators import dense, scalar, skew

from conftest import ACCEPTANCE_LINES, random_monotone


def report(n, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {n}. {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _grid_cells():
    for g in experiments.DEFAULT_GAMMAS:
        for tsq in experiments.DEFAULT_TSQ:
            yield g, tsq


def test_1_skew_attains_upper_bound():
    start = time.perf_counter()
    worst, cells = 0.0, 0
    for g, tsq in _grid_cells():
        c = 1.0 / math.sqrt(tsq)
        t = 1.0 / c
        if t * t + g < 1 - rates.BOUNDARY_TOL:
            continue
        tr = run(skew(1.0), RunConfig(gamma=g, c=c, max_iters=20), [1.0, 0.0])
        expected = 1 - g * (2 - g) / (t * t + 1)
        worst = max(worst, float(np.max(np.abs(tr.column("step_ratio_sq") - expected))))
        cells += 1
    elapsed = time.perf_counter() - start
    report(1, "skew rotation attains rho_u", worst <= 1e-10 and elapsed < 1.0 and cells > 0,
           f"{cells} cells, max |ratio - rho_u| = {worst:.2e} (tol 1e-10), {elapsed:.3f}s (< 1s)")


def test_2_scalar_attains_lower_bound():
    start = time.perf_counter()
    worst, cells = 0.0, 0
    for g, tsq in _grid_cells():
        c = 1.0 / math.sqrt(tsq)
        t = 1.0 / c
        if t * t + g >= 1 - rates.BOUNDARY_TOL:
            continue
        tr = run(scalar(1.0), RunConfig(gamma=g, c=c, max_iters=20), [1.0])
        expected = (1 - g / (t + 1)) ** 2
        worst = max(worst, float(np.max(np.abs(tr.column("step_ratio_sq") - expected))))
        cells += 1
    elapsed = time.perf_counter() - start
    report(2, "scalar operator attains rho_l", worst <= 1e-12 and elapsed < 1.0 and cells > 0,
           f"{cells} cells, max |ratio - rho_l| = {worst:.2e} (tol 1e-12), {elapsed:.3f}s (< 1s)")


def test_3_proof_identities():
    rng = np.random.default_rng(42)
    start = time.perf_counter()
    gu, tu = certificate.sample_upper(rng, 10_000)
    gl, tl = certificate.sample_lower(rng, 10_000, t_min=1e-6)
    ru = float(certificate.identity_sweep(gu, tu, rates.Regime.UPPER).max())
    rl = float(certificate.identity_sweep(gl, tl, rates.Regime.LOWER).max())
    elapsed = time.perf_counter() - start
    ok = ru <= 1e-12 and rl <= 1e-12 and elapsed < 1.0
    report(3, "certificate identities", ok,
           f"upper max residual {ru:.2e}, lower max residual {rl:.2e} (tol 1e-12), {elapsed:.3f}s (< 1s)")


ORACLE_POINTS = [
    # lower regime
    (0.1, 0.1), (0.3, 0.5), (0.5, 0.25), (0.9, 0.2), (0.05, 0.9),
    # upper regime
    (1.0, 1.0), (1.5, 1.0), (0.5, 1.5), (1.9, 0.3), (1.2, 4.0), (0.2, 2.0), (1.99, 0.05),
    # on t^2 + gamma = 1
    (0.75, 0.5), (0.36, 0.8), (0.99, 0.1),
]


def test_4_oracle_matches_tight_bound():
    start = time.perf_counter()
    worst_gap, worst_excess = 0.0, -math.inf
    for g, t in ORACLE_POINTS:
        res = oracle.worst_case_ratio(g, t, resolution=1000)
        rho = rates.rho_opt(g, t)[0]
        worst_gap = max(worst_gap, abs(rho - res.sup_ratio))
        worst_excess = max(worst_excess, res.sup_ratio - rho)
    elapsed = time.perf_counter() - start
    boundary = sum(abs(t * t + g - 1) <= 1e-14 for g, t in ORACLE_POINTS)
    ok = worst_gap <= 5e-4 and worst_excess <= 1e-12 and elapsed < 30.0 and boundary == 3
    report(4, "brute-force oracle vs rho_opt", ok,
           f"{len(ORACLE_POINTS)} points ({boundary} on boundary), max |sup - rho| = {worst_gap:.2e} (tol 5e-4), "
           f"max excess = {worst_excess:.2e} (tol 1e-12), {elapsed:.2f}s (< 30s)")


def test_5_dominance_over_earlier_bound():
    failures = []
    for g, tsq in _grid_cells():
        t = math.sqrt(tsq)
        rho, rty = rates.rho_opt(g, t)[0], rates.rho_ty(g, t)
        gap = rty - rho
        if rho > rty + 1e-14:
            failures.append((g, tsq, "rho_opt > rho_ty"))
        if g >= 1 and abs(gap) > 1e-14:
            failures.append((g, tsq, "nonzero gap for gamma >= 1"))
        if g < 1 and abs(gap) <= 1e-14:
            failures.append((g, tsq, "zero gap for gamma < 1"))
        if g < 1 and t * t + g >= 1 and gap < g * (1 - g) / (t * t + 1) - 1e-14:
            failures.append((g, tsq, "gap below gamma(1-gamma)/(t^2+1)"))
        if g < 1 and t * t + g < 1 and not gap > 0:
            failures.append((g, tsq, "nonpositive gap in lower regime"))
    report(5, "rho_opt <= rho_ty with the stated gaps", not failures,
           f"{19 * 8} cells, {len(failures)} violation(s) {failures[:3]}")


def test_6_random_dense_operators():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst_fejer, worst_thm, steps = -math.inf, -math.inf, 0
    for _ in range(100):
        n = int(rng.integers(1, 9))
        spec = dense(random_monotone(rng, n))
        z0 = rng.standard_normal(n)
        c = float(np.exp(rng.uniform(-1.5, 1.5)))
        for g in (0.3, 1.0, 1.7):
            tr = run(spec, RunConfig(gamma=g, c=c, max_iters=200), z0)
            d = tr.column("dist")
            worst_fejer = max(worst_fejer, float(np.max(np.diff(d))) if len(d) > 1 else -math.inf)
            worst_thm = max(worst_thm, tr.max_violation())
            steps += sum(r.checked for r in tr)
    elapsed = time.perf_counter() - start
    ok = worst_fejer <= 1e-12 and worst_thm <= 1e-10 and elapsed < 10.0
    report(6, "Fejer monotonicity and per-step bound on random dense operators", ok,
           f"{steps} checked steps, max dist increase {worst_fejer:.2e} (tol 1e-12), "
           f"max ratio - rho_opt {worst_thm:.2e} (tol 1e-10), {elapsed:.2f}s (< 10s)")


def test_7_regularity_window_by_khat():
    configs, failures = 0, []
    for spec, z0 in [(skew(1.0), [1.0, 0.0]), (skew(0.25), [3.0, -4.0]), (scalar(1.0), [2.0]), (scalar(4.0), [-1.0])]:
        d0 = float(np.linalg.norm(z0))
        for g in (0.1, 0.5, 1.0, 1.5, 1.9):
            for c in (0.25, 1.0, 4.0):
                for tau in (0.01, 0.1, 1.0):
                    kh = rates.khat(d0, g, tau, c)
                    bound = math.ceil(kh)
                    # the residual decays linearly, so a capped trace still finds the window
                    tr = run(spec, RunConfig(gamma=g, c=c, max_iters=min(bound, 3000) + 2, tau=tau), z0)
                    k = regularity_window(tr, tau)
                    configs += 1
                    if k is None or k > bound:
                        failures.append((spec.kind.value, g, c, tau, k, bound))
    report(7, "regularity window entered by ceil(khat)", not failures,
           f"{configs} configurations, {len(failures)} failure(s) {failures[:3]}")


def _regionmap_rows(*argv):
    buf = io.StringIO()
    assert cli_main(["regionmap", *argv], out=buf) == 0
    return list(csv.DictReader(io.StringIO(buf.getvalue())))


def test_8_region_map():
    rows = _regionmap_rows() + _regionmap_rows("--gamma-steps", "39", "--tsq-steps", "41", "--tsq-max", "2")
    bad = []
    for r in rows:
        g, tsq, gap = float(r["gamma"]), float(r["t_sq"]), float(r["gap"])
        side = g + tsq - 1
        if (g >= 1) != (abs(gap) <= 1e-14):
            bad.append((g, tsq, "gap band"))
        if side > 1e-13 and r["regime"] != "Upper":
            bad.append((g, tsq, r["regime"]))
        elif side < -1e-13 and r["regime"] != "Lower":
            bad.append((g, tsq, r["regime"]))
        elif abs(side) <= 1e-15 and r["regime"] != "Boundary":
            bad.append((g, tsq, r["regime"]))
    on_line = sum(abs(float(r["gamma"]) + float(r["t_sq"]) - 1) <= 1e-15 for r in rows)
    report(8, "region map: zero-gap band and regime line", not bad and on_line > 0,
           f"{len(rows)} cells ({on_line} on the line), {len(bad)} mismatch(es) {bad[:3]}")
