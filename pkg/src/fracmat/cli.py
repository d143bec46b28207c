"""Command-line front end: ``fracmat example N``, ``fracmat solve``, ``fracmat verify SUITE``.

Exit status is 0 on success, 1 for usage errors and invalid parameters,
2 for numerical failures (singular systems, failed acceptance checks).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

import numpy as np

from .assembly import solve_problem, unstack
from .linsolve import SingularMatrixError
from .presets import RunConfig, TAU_RULES, example_config
from .verify import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, help="order of the time derivative, 0 < alpha <= 1")
    p.add_argument("--beta", type=float, help="order of the Riesz space derivative, 1 < beta <= 2")
    p.add_argument("--gamma", type=float, help="order of the delayed time derivative")
    p.add_argument("--k", type=int, help="delay in time steps")
    space = p.add_mutually_exclusive_group()
    space.add_argument("--h", type=float, help="spatial step on [0, 1]")
    space.add_argument("--m", type=int, help="number of spatial intervals")
    step = p.add_mutually_exclusive_group()
    step.add_argument("--tau", type=float, help="time step")
    step.add_argument("--tau-rule", choices=TAU_RULES, help="time step rule (h2over6: tau = h^2/6)")
    p.add_argument("--n", type=int, help="number of time steps")
    p.add_argument("--riesz", choices=("centered", "halfsum"), help="Riesz matrix variant (default centered)")
    p.add_argument("--solver", choices=("global", "marching"), help="solution path (default global)")
    p.add_argument("--output", help="output file (default: standard output)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracmat", description="Matrix approach to fractional diffusion equations.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver diagnostics")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ex = sub.add_parser("example", help="run one of the five preset examples")
    ex.add_argument("number", type=int, choices=range(1, 6), metavar="{1..5}")
    _add_run_options(ex)

    solve = sub.add_parser("solve", help="solve D_t^alpha y - chi d^beta y/d|x|^beta = rhs with zero data")
    _add_run_options(solve)
    solve.add_argument("--chi", type=float, default=1.0, help="diffusion coefficient (default 1)")
    solve.add_argument("--rhs", type=float, default=8.0, help="constant source term (default 8)")

    verify = sub.add_parser("verify", help="run an acceptance suite")
    verify.add_argument("suite", choices=sorted(SUITES) + ["all"])
    return parser


def _overrides(args) -> dict:
    return dict(alpha=args.alpha, beta=args.beta, gamma=args.gamma, k=args.k, h=args.h, m=args.m,
                tau=args.tau, tau_rule=args.tau_rule, n=args.n, riesz_variant=args.riesz,
                solver=args.solver, output=args.output, format=args.format)


def config_from_args(args) -> RunConfig:
    overrides = _overrides(args)
    if args.command == "example":
        return example_config(args.number, **overrides)
    fields = {key: value for key, value in overrides.items() if value is not None}
    if "h" not in fields and "m" not in fields:
        raise UsageError("solve needs --h or --m")
    if "tau" not in fields:
        fields.setdefault("tau_rule", "h2over6")
    return RunConfig(chi=args.chi, rhs=args.rhs, **fields)


def render_csv(solution) -> str:
    """Rows ``x,t,y[,u]`` in ascending x, then ascending t."""
    g = solution.grid
    y = unstack(solution.y)
    u = unstack(solution.u) if solution.reconstructed else None
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "t", "y", "u"] if u is not None else ["x", "t", "y"])
    x, t = g.x, g.t
    for i in range(g.m + 1):
        for j in range(g.n + 1):
            row = [repr(float(x[i])), repr(float(t[j])), repr(float(y[j, i]))]
            if u is not None:
                row.append(repr(float(u[j, i])))
            writer.writerow(row)
    return buf.getvalue()


def render_json(solution, config: RunConfig) -> str:
    """``field_y[j][i]`` is ``y(x_i, t_j)``; ``field_u`` is null unless reconstruction applies."""
    g = solution.grid
    doc = {
        "config": config.to_dict(),
        "grid": {"a": g.a, "b": g.b, "T": g.T, "m": g.m, "n": g.n, "h": g.h, "tau": g.tau},
        "residual_inf": solution.report.residual_inf_norm,
        "elapsed_ms": 1e3 * solution.report.elapsed,
        "field_y": unstack(solution.y).tolist(),
        "field_u": unstack(solution.u).tolist() if solution.reconstructed else None,
    }
    return json.dumps(doc, indent=1) + "\n"


def run(config: RunConfig) -> int:
    solution = solve_problem(config.problem(), config.grid(), config.solver)
    text = render_csv(solution) if config.format == "csv" else render_json(solution, config)
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    g = solution.grid
    print(f"m={g.m} n={g.n} h={g.h:g} tau={g.tau:.6g} T={g.T:.6g} unknowns={(g.m - 1) * g.n} "
          f"residual={solution.report.residual_inf_norm:.3e} "
          f"time={1e3 * solution.report.elapsed:.1f}ms solver={config.solver}", file=sys.stderr)
    return EXIT_OK


def verify(suite: str) -> int:
    checks = run_suite(suite)
    for check in checks:
        print(check.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            return verify(args.suite)
        return run(config_from_args(args))
    except (UsageError, ValueError, OSError) as exc:
        print(f"fracmat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularMatrixError, np.linalg.LinAlgError) as exc:
        print(f"fracmat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
