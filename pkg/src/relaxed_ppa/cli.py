"""Command-line entry point: ``relaxed-ppa <command> ...``.

Exit codes: 0 when every check passes, 1 on an invariant violation, 2 on a
usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import certificate, experiments, oracle, rates
from .engine import THEOREM_TOL, NonFiniteIterate, RunConfig, run
from .operators import load_config

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

ORACLE_TIGHTNESS = 5e-4
ORACLE_SOUNDNESS = 1e-12


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _emit_json(doc, out) -> None:
    json.dump(doc, out, indent=2)
    out.write("\n")


def _seed() -> int:
    raw = os.environ.get("PPA_SEED", "42")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PPA_SEED must be an integer, got {raw!r}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_bounds(args, out) -> int:
    p = rates.StepParams(gamma=args.gamma, c=args.c, a=args.a)
    b = rates.rate_bundle(p.gamma, p.t)
    doc = {"a": p.a, "c": p.c, **b.as_dict()}
    if args.format == "json":
        _emit_json(doc, out)
    else:
        width = max(map(len, doc))
        for k, v in doc.items():
            out.write(f"{k:<{width}}  {fmt(v)}\n")
    return EXIT_OK


def cmd_regionmap(args, out) -> int:
    gammas = experiments.gamma_grid(args.gamma_steps, args.gamma_max)
    tsqs = experiments.tsq_grid(args.tsq_steps, args.tsq_max)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["gamma", "t_sq", "regime", "rho_opt", "rho_ty", "gap"])
    for cell in experiments.region_map(gammas, tsqs):
        w.writerow([fmt(cell.gamma), fmt(cell.t_sq), cell.regime.value,
                    fmt(cell.rho_opt), fmt(cell.rho_ty), fmt(cell.gap)])
    return EXIT_OK


def cmd_run(args, out) -> int:
    try:
        spec = load_config(args.op)
    except OSError as exc:
        raise UsageError(f"cannot read operator config: {exc}") from None
    cs = _floats(args.c)
    if not cs:
        raise UsageError("--c needs at least one value")
    cfg = RunConfig(
        gamma=args.gamma,
        c=cs[0] if len(cs) == 1 else cs,
        max_iters=args.iters,
        stop_tol=args.stop_tol,
        tau=args.tau if args.tau is not None else spec.modulus.tau,
    )
    try:
        trace = run(spec, cfg, _floats(args.z0))
    except NonFiniteIterate as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["k", "residual", "dist", "ratio_sq", "rho_opt", "rho_ty", "in_window"])
    for r in trace:
        w.writerow([r.k, fmt(r.residual), fmt(r.dist), fmt(r.step_ratio_sq),
                    fmt(r.predicted_rho), fmt(r.rho_ty), fmt(r.in_window)])
    viol = trace.max_violation()
    if viol > THEOREM_TOL:
        print(f"bound violated by {viol:.3e}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_examples(args, out) -> int:
    cells = experiments.example_sweep(iters=args.iters)
    failed = [c for c in cells if not c.passed]
    out.write(f"{'operator':<8} {'gamma':>5} {'t_sq':>5} {'regime':<8} {'expected':>12} "
              f"{'rho_opt':>12} {'max_dev':>9}  status\n")
    for c in cells:
        if c.asserted:
            status = "attained" if c.passed else "FAILED"
        else:
            status = "recorded" if c.passed else "FAILED"
        out.write(f"{c.operator:<8} {c.gamma:>5.2f} {c.t_sq:>5.2f} {c.regime.value:<8} "
                  f"{c.expected:>12.9f} {c.rho_opt:>12.9f} {c.deviation:>9.2e}  {status}\n")
    n_assert = sum(c.asserted for c in cells)
    out.write(f"\n{n_assert - sum(c.asserted and not c.passed for c in cells)}/{n_assert} "
              f"attainment checks passed, {len(failed)} failure(s)\n")
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_certify(args, out) -> int:
    report = certificate.certify(args.samples, seed=_seed())
    _emit_json(report, out)
    return EXIT_OK if report["pass"] else EXIT_VIOLATION


def cmd_worstcase(args, out) -> int:
    res = oracle.worst_case_ratio(args.gamma, args.t, args.resolution)
    rho, regime = rates.rho_opt(args.gamma, args.t)
    gap = rho - res.sup_ratio
    doc = {
        "gamma": args.gamma,
        "t": args.t,
        "resolution": args.resolution,
        "sup_ratio": res.sup_ratio,
        "argmax": [res.argmax.x, res.argmax.y],
        "rho_opt": rho,
        "regime": regime.value,
        "gap": gap,
    }
    _emit_json(doc, out)
    ok = res.sup_ratio <= rho + ORACLE_SOUNDNESS and gap <= ORACLE_TIGHTNESS
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaxed-ppa",
        description="Relaxed proximal point iteration and its tight linear rates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="contraction bounds at one (gamma, a, c)")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--a", type=float, required=True, help="inverse modulus of the operator")
    p.add_argument("--c", type=float, required=True, help="proximal parameter")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("regionmap", help="CSV grid of bounds over (gamma, t^2)")
    p.add_argument("--gamma-steps", type=int, default=None)
    p.add_argument("--tsq-steps", type=int, default=None)
    p.add_argument("--gamma-max", type=float, default=2.0)
    p.add_argument("--tsq-max", type=float, default=4.0)
    p.set_defaults(func=cmd_regionmap)

    p = sub.add_parser("run", help="iterate on an operator and print the trace as CSV")
    p.add_argument("--op", required=True, help="operator config JSON file")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--c", required=True, help="constant c or comma-separated schedule")
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--z0", required=True, help="comma-separated starting point")
    p.add_argument("--tau", type=float, default=None, help="regularity radius (default: from config)")
    p.add_argument("--stop-tol", type=float, default=0.0)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("examples", help="check that the two worst-case operators attain the bounds")
    p.add_argument("--iters", type=int, default=20)
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("certify", help="random sweep of the certificate identities")
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("worstcase", help="brute-force worst one-step contraction")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--resolution", type=int, default=1000)
    p.set_defaults(func=cmd_worstcase)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
