"""Command-line front end.

Subcommands:
  convert       one-shot conversion between (alpha, gamma) and (eps, delta)
  compose       epsilon after T compositions, ours versus moments accountant
  max-t         largest T within an epsilon budget, both accountants
  variance      noise variance needed for a target budget, both accountants
  curve         CSV/JSON sweeps, including figure presets
  oracle-check  brute-force validation of the conversion frontier

Exit codes: 0 success, 2 usage, 3 infeasible domain, 4 I/O failure,
5 validation failure.  Output is a single JSON record per invocation
(curve emits a CSV or JSON table instead), deterministic for fixed flags
and seed apart from the wall-time field.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

from . import __version__
from .conversion import (
    ConversionResult,
    balle_epsilon,
    baseline_delta,
    baseline_epsilon,
    delta_bound,
    delta_exact,
    epsilon_bound,
    epsilon_exact,
    gamma_bound,
    gamma_exact,
)
from .errors import AccountingError, DomainError
from .gaussian import (
    GaussianConfig,
    acct_epsilon,
    ma_epsilon,
    ma_max_iterations,
    ma_required_variance,
    max_iterations,
    privacy_curve,
    required_variance,
)
from .optimize import ScalarSearchConfig
from .oracle import DEFAULT_SEED, GridSpec, brute_force_gamma, joint_range_containment, verify_q_star

TOOL_NAME = "rdpopt"

_EXIT_USAGE = 2
_EXIT_INFEASIBLE = 3
_EXIT_IO = 4
_EXIT_VALIDATION = 5


class UsageError(Exception):
    """Bad flag combination; maps to exit code 2."""


class ValidationFailure(Exception):
    """An oracle check exceeded its tolerance; maps to exit code 5."""


def _search_config(tol: float | None) -> ScalarSearchConfig:
    if tol is None:
        return ScalarSearchConfig()
    return ScalarSearchConfig(abs_tol=tol)


def _record(command: str, query: dict, results: dict, seed: int | None, started: float) -> dict:
    return {
        "command": command,
        "query": query,
        "results": results,
        "metadata": {
            "tool": TOOL_NAME,
            "version": __version__,
            "seed": seed,
            "wall_time_s": time.perf_counter() - started,
        },
    }


def _emit(record: dict, stream=None) -> None:
    out = stream if stream is not None else sys.stdout
    json.dump(record, out, indent=2)
    out.write("\n")


def _conversion_payload(result: ConversionResult) -> dict:
    return {
        "value": result.value,
        "method": result.method,
        "argmin_p": result.argmin_p,
        "active_branch": result.active_branch,
    }


def cmd_convert(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    given = {"gamma": args.gamma, "eps": args.eps, "delta": args.delta}
    missing = [name for name, value in given.items() if value is None]
    if len(missing) != 1:
        raise UsageError("exactly two of --gamma, --eps, --delta must be supplied")
    target = missing[0]
    cfg = _search_config(args.tol)
    applicable = {
        "gamma": ("exact", "bound"),
        "eps": ("exact", "bound", "baseline", "balle"),
        "delta": ("exact", "bound", "baseline"),
    }[target]
    methods = list(applicable) if args.method == "all" else [args.method]
    if args.method != "all" and args.method not in applicable:
        raise UsageError(f"method {args.method!r} cannot produce {target}; choose from {applicable}")
    results: dict = {}
    for method in methods:
        if target == "gamma":
            fn = {"exact": gamma_exact, "bound": gamma_bound}[method]
            value = fn(args.alpha, args.eps, args.delta, cfg) if method == "exact" else fn(args.alpha, args.eps, args.delta)
            results[method] = _conversion_payload(value)
        elif target == "eps":
            if method == "exact":
                results[method] = _conversion_payload(epsilon_exact(args.alpha, args.gamma, args.delta, cfg))
            elif method == "bound":
                results[method] = _conversion_payload(epsilon_bound(args.alpha, args.gamma, args.delta))
            elif method == "baseline":
                results[method] = {"value": baseline_epsilon(args.alpha, args.gamma, args.delta)}
            else:
                results[method] = {"value": balle_epsilon(args.alpha, args.gamma, args.delta)}
        else:
            if method == "exact":
                results[method] = _conversion_payload(delta_exact(args.alpha, args.gamma, args.eps, cfg))
            elif method == "bound":
                results[method] = _conversion_payload(delta_bound(args.alpha, args.gamma, args.eps, cfg))
            else:
                results[method] = {"value": baseline_delta(args.alpha, args.gamma, args.eps)}
    query = {
        "alpha": args.alpha,
        "gamma": args.gamma,
        "eps": args.eps,
        "delta": args.delta,
        "target": target,
        "method": args.method,
        "abs_tol": cfg.abs_tol,
        "max_iters": cfg.max_iters,
        "coarse_grid": cfg.coarse_grid,
    }
    _emit(_record("convert", query, results, None, started))
    return 0


def _mechanism(args: argparse.Namespace) -> GaussianConfig:
    return GaussianConfig(sigma=args.sigma, subsampling_q=args.q)


def cmd_compose(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    if args.T < 1:
        raise UsageError(f"--T must be >= 1, got {args.T}")
    mechanism = _mechanism(args)
    rho = mechanism.rho
    cfg = _search_config(args.tol)
    ours = acct_epsilon(rho, args.T, args.delta, args.mode, cfg)
    eps_ma = ma_epsilon(rho, args.T, args.delta)
    query = {
        "sigma": args.sigma,
        "q": args.q,
        "T": args.T,
        "delta": args.delta,
        "mode": args.mode,
        "abs_tol": cfg.abs_tol,
    }
    results = {
        "rho": rho,
        "eps_ma": eps_ma,
        "eps_ours": {
            "epsilon": ours.epsilon,
            "eps0": ours.eps0,
            "eps1": ours.eps1,
            "eps_third": ours.eps_third,
            "argmin_alpha": ours.argmin_alpha,
            "mode": ours.mode,
        },
        "gap": eps_ma - ours.epsilon,
    }
    _emit(_record("compose", query, results, None, started))
    return 0


def cmd_max_t(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    mechanism = _mechanism(args)
    rho = mechanism.rho
    cfg = _search_config(args.tol)
    t_ours = max_iterations(rho, args.eps, args.delta, args.mode, cfg)
    t_ma = ma_max_iterations(rho, args.eps, args.delta)
    query = {
        "sigma": args.sigma,
        "q": args.q,
        "eps": args.eps,
        "delta": args.delta,
        "mode": args.mode,
        "abs_tol": cfg.abs_tol,
    }
    results = {
        "rho": rho,
        "T_ours": t_ours,
        "T_ma": t_ma,
        "advantage": t_ours - t_ma,
    }
    if args.q is not None:
        results["epochs_ours"] = args.q * t_ours
        results["epochs_ma"] = args.q * t_ma
    _emit(_record("max-t", query, results, None, started))
    return 0


def cmd_variance(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    if args.T < 1:
        raise UsageError(f"--T must be >= 1, got {args.T}")
    cfg = _search_config(args.tol)
    ours = required_variance(args.T, args.eps, args.delta, cfg)
    ma_value = ma_required_variance(args.T, args.eps, args.delta)
    query = {"T": args.T, "eps": args.eps, "delta": args.delta, "abs_tol": cfg.abs_tol}
    results = {
        "sigma_sq": ours.sigma_sq,
        "argmin_alpha": ours.argmin_alpha,
        "alpha_star": ours.alpha_star,
        "sigma_sq_at_alpha_star": ours.sigma_sq_at_alpha_star,
        "ma_sigma_sq": ma_value,
        "reduction": ma_value - ours.sigma_sq,
    }
    _emit(_record("variance", query, results, None, started))
    return 0


def _parse_float_list(text: str | None) -> list[float]:
    if text is None:
        return []
    return [float(part) for part in text.split(",") if part.strip() != ""]


def _curve_rows(args: argparse.Namespace) -> tuple[list[str], list[list], dict]:
    modes = ("closed_form", "exact") if args.mode == "both" else (args.mode,)
    cfg = _search_config(args.tol)
    if args.fig == 1:
        alphas = _parse_float_list(args.alpha)
        epss = _parse_float_list(args.eps)
        if not alphas or len(alphas) != len(epss):
            raise UsageError("--fig 1 needs matching --alpha and --eps lists")
        lo, hi, n = args.delta_from, args.delta_to, args.delta_points
        if not (0.0 <= lo < hi < 1.0):
            raise UsageError(f"delta sweep must satisfy 0 <= from < to < 1, got [{lo}, {hi}]")
        if n < 2:
            raise UsageError(f"--delta-points must be >= 2, got {n}")
        header = ["alpha", "eps", "delta", "gamma_exact", "gamma_bound"]
        rows = []
        for alpha, eps in zip(alphas, epss):
            for i in range(n):
                d = lo + (hi - lo) * i / (n - 1)
                rows.append([alpha, eps, d, gamma_exact(alpha, eps, d, cfg).value, gamma_bound(alpha, eps, d).value])
        query = {"fig": 1, "alphas": alphas, "epss": epss, "delta_from": lo, "delta_to": hi, "delta_points": n}
        return header, rows, query

    if args.fig == 2:
        mechanism = GaussianConfig(sigma=20.0)
        delta = 1e-5
        t_values = list(range(1, 1001))
        query = {"fig": 2, "sigma": 20.0, "q": None, "delta": delta, "t_from": 1, "t_to": 1000, "t_step": 1}
    elif args.fig == 3:
        mechanism = GaussianConfig(sigma=4.0, subsampling_q=0.001)
        delta = 1e-5
        t_values = list(range(1000, 400001, 1000))
        query = {"fig": 3, "sigma": 4.0, "q": 0.001, "delta": delta, "t_from": 1000, "t_to": 400000, "t_step": 1000}
    else:
        for name in ("sigma", "delta", "t_from", "t_to"):
            if getattr(args, name) is None:
                raise UsageError(f"--{name.replace('_', '-')} is required without --fig")
        if args.t_from > args.t_to:
            raise UsageError(f"empty sweep: --t-from {args.t_from} > --t-to {args.t_to}")
        if args.t_from < 1 or args.t_step < 1:
            raise UsageError("--t-from and --t-step must be >= 1")
        mechanism = _mechanism(args)
        delta = args.delta
        t_values = list(range(args.t_from, args.t_to + 1, args.t_step))
        query = {
            "fig": None,
            "sigma": args.sigma,
            "q": args.q,
            "delta": delta,
            "t_from": args.t_from,
            "t_to": args.t_to,
            "t_step": args.t_step,
        }
    query["mode"] = args.mode
    points = privacy_curve(mechanism, delta, t_values, modes=modes, cfg=cfg)
    q = mechanism.subsampling_q
    header = ["T"]
    if q is not None:
        header.append("epochs")
    header += ["eps_ma", "eps_ours"]
    if "exact" in modes:
        header.append("eps_ours_exact")
    header.append("gap")
    rows = []
    for point in points:
        row: list = [int(point.T)]
        if q is not None:
            row.append(q * point.T)
        row += [point.eps_ma, point.eps_ours]
        if "exact" in modes:
            row.append(point.eps_ours_exact)
        row.append(point.gap)
        rows.append(row)
    return header, rows, query


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def cmd_curve(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    header, rows, query = _curve_rows(args)
    if args.format == "csv":
        text_rows = [[_format_cell(v) for v in row] for row in rows]
        if args.out is None:
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(text_rows)
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(header)
                writer.writerows(text_rows)
    else:
        record = _record(
            "curve",
            query,
            {"columns": header, "rows": [dict(zip(header, row)) for row in rows]},
            None,
            started,
        )
        if args.out is None:
            _emit(record)
        else:
            with open(args.out, "w", encoding="utf-8") as handle:
                _emit(record, handle)
    return 0


def cmd_oracle_check(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    grid = GridSpec() if args.grid_n is None else GridSpec(n_coarse=args.grid_n, n_refine=args.grid_n)
    exact = gamma_exact(args.alpha, args.eps, args.delta).value
    brute = brute_force_gamma(args.alpha, args.eps, args.delta, grid)
    gap = brute - exact
    q_report = verify_q_star(args.alpha, args.eps, args.delta, grid)
    containment = joint_range_containment(args.alpha, args.eps, n_samples=args.samples, seed=args.seed)
    failures = []
    if not abs(gap) <= args.tol:
        failures.append(f"frontier gap |{gap!r}| > {args.tol!r}")
    if not q_report["max_gap"] <= args.tol:
        failures.append(f"q_star max_gap {q_report['max_gap']!r} > {args.tol!r}")
    if containment["violations"] != 0:
        failures.append(f"containment violations = {containment['violations']}")
    report = {
        "alpha": args.alpha,
        "eps": args.eps,
        "delta": args.delta,
        "grid": {"n_coarse": grid.n_coarse, "n_refine": grid.n_refine, "refine_window": grid.refine_window},
        "seed": args.seed,
        "samples": args.samples,
        "tolerance": args.tol,
        "gamma_exact": exact,
        "brute_force_gamma": brute,
        "gap": gap,
        "q_star_max_gap": q_report["max_gap"],
        "q_star_points": q_report["n_p_checked"],
        "containment_violations": containment["violations"],
        "containment_min_margin": containment["min_margin"],
        "passed": not failures,
        "failures": failures,
    }
    if args.out is not None:
        # the report file carries no timing, so fixed seeds reproduce it byte for byte
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(report, handle, indent=2, sort_keys=True)
            handle.write("\n")
    query = {
        "alpha": args.alpha,
        "eps": args.eps,
        "delta": args.delta,
        "grid_n": args.grid_n,
        "samples": args.samples,
        "seed": args.seed,
        "tol": args.tol,
    }
    _emit(_record("oracle-check", query, report, args.seed, started))
    if failures:
        raise ValidationFailure("; ".join(failures))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Optimal Renyi-DP to approximate-DP conversion and Gaussian composition accounting.",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser("convert", help="convert between (alpha, gamma) and (eps, delta)")
    convert.add_argument("--config", default=None, help="key=value file mirroring flags; flags override")
    convert.add_argument("--alpha", type=float, required=True)
    convert.add_argument("--gamma", type=float, default=None)
    convert.add_argument("--eps", type=float, default=None)
    convert.add_argument("--delta", type=float, default=None)
    convert.add_argument("--method", choices=("exact", "bound", "baseline", "balle", "all"), default="exact")
    convert.add_argument("--tol", type=float, default=None, help="absolute search tolerance")
    convert.set_defaults(func=cmd_convert)

    compose = sub.add_parser("compose", help="epsilon after T compositions")
    compose.add_argument("--config", default=None)
    compose.add_argument("--sigma", type=float, required=True)
    compose.add_argument("--q", type=float, default=None)
    compose.add_argument("--T", type=int, required=True)
    compose.add_argument("--delta", type=float, required=True)
    compose.add_argument("--mode", choices=("closed_form", "exact"), default="closed_form")
    compose.add_argument("--tol", type=float, default=None)
    compose.set_defaults(func=cmd_compose)

    max_t = sub.add_parser("max-t", help="largest T within an epsilon budget")
    max_t.add_argument("--config", default=None)
    max_t.add_argument("--sigma", type=float, required=True)
    max_t.add_argument("--q", type=float, default=None)
    max_t.add_argument("--eps", type=float, required=True)
    max_t.add_argument("--delta", type=float, required=True)
    max_t.add_argument("--mode", choices=("closed_form", "exact"), default="closed_form")
    max_t.add_argument("--tol", type=float, default=None)
    max_t.set_defaults(func=cmd_max_t)

    variance = sub.add_parser("variance", help="noise variance needed for a target budget")
    variance.add_argument("--config", default=None)
    variance.add_argument("--T", type=int, required=True)
    variance.add_argument("--eps", type=float, required=True)
    variance.add_argument("--delta", type=float, required=True)
    variance.add_argument("--tol", type=float, default=None)
    variance.set_defaults(func=cmd_variance)

    curve = sub.add_parser("curve", help="emit an epsilon-versus-T or frontier sweep")
    curve.add_argument("--config", default=None)
    curve.add_argument("--fig", type=int, choices=(1, 2, 3), default=None)
    curve.add_argument("--sigma", type=float, default=None)
    curve.add_argument("--q", type=float, default=None)
    curve.add_argument("--delta", type=float, default=None)
    curve.add_argument("--t-from", dest="t_from", type=int, default=None)
    curve.add_argument("--t-to", dest="t_to", type=int, default=None)
    curve.add_argument("--t-step", dest="t_step", type=int, default=1)
    curve.add_argument("--alpha", default=None, help="comma-separated orders for --fig 1")
    curve.add_argument("--eps", default=None, help="comma-separated epsilons for --fig 1")
    curve.add_argument("--delta-from", dest="delta_from", type=float, default=0.0)
    curve.add_argument("--delta-to", dest="delta_to", type=float, default=0.5)
    curve.add_argument("--delta-points", dest="delta_points", type=int, default=51)
    curve.add_argument("--mode", choices=("closed_form", "exact", "both"), default="closed_form")
    curve.add_argument("--tol", type=float, default=None)
    curve.add_argument("--out", default=None)
    curve.add_argument("--format", choices=("csv", "json"), default="csv")
    curve.set_defaults(func=cmd_curve)

    oracle = sub.add_parser("oracle-check", help="validate the frontier against brute force")
    oracle.add_argument("--config", default=None)
    oracle.add_argument("--alpha", type=float, required=True)
    oracle.add_argument("--eps", type=float, required=True)
    oracle.add_argument("--delta", type=float, required=True)
    oracle.add_argument("--grid-n", dest="grid_n", type=int, default=None)
    oracle.add_argument("--samples", type=int, default=10000)
    oracle.add_argument("--seed", type=int, default=DEFAULT_SEED)
    oracle.add_argument("--tol", type=float, default=1e-4)
    oracle.add_argument("--out", default=None)
    oracle.set_defaults(func=cmd_oracle_check)

    return parser


_COMMANDS = ("convert", "compose", "max-t", "variance", "curve", "oracle-check")


def _apply_config(argv: list[str]) -> list[str]:
    """Splice config-file key=value pairs in as flags; explicit flags override."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise UsageError("--config needs a file path")
    path = argv[idx + 1]
    rest = argv[:idx] + argv[idx + 2 :]
    if not rest or rest[0] not in _COMMANDS:
        raise UsageError("--config is only valid after a subcommand")
    with open(path, "r", encoding="utf-8") as handle:
        pairs = []
        for line_no, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{line_no}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            flag = "--" + key.strip().replace("_", "-")
            pairs += [flag, value.strip()]
    return [rest[0]] + pairs + rest[1:]


def main(argv: list[str] | None = None) -> int:
    raw_argv = list(sys.argv[1:] if argv is None else argv)
    try:
        full_argv = _apply_config(raw_argv)
    except UsageError as exc:
        print(f"{TOOL_NAME}: usage error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except OSError as exc:
        print(f"{TOOL_NAME}: I/O error: {exc}", file=sys.stderr)
        return _EXIT_IO

    parser = _build_parser()
    try:
        args = parser.parse_args(full_argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0

    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{TOOL_NAME}: usage error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except ValidationFailure as exc:
        print(f"{TOOL_NAME}: validation failure: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except AccountingError as exc:
        print(f"{TOOL_NAME}: infeasible: {exc}", file=sys.stderr)
        return _EXIT_INFEASIBLE
    except OSError as exc:
        print(f"{TOOL_NAME}: I/O error: {exc}", file=sys.stderr)
        return _EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
