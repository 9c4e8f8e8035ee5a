"""Command-line driver.

Exit codes: 0 success, 2 invalid input, 3 infeasible configuration,
4 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .analytic import expected_explanation_time, time_pmf
from .belief import CostFunction, classify_trend, myopic_stop_time, benefit_trajectory
from .config import CONFIG_SCHEMA, ConfigError, experiment_to_dict, load_config
from .errors import BeliefStateError, InfeasiblePlacementError, InvalidArgumentError
from .experiments import (
    build_prior,
    compare_strategies,
    monte_carlo,
    reproduce_figure1,
    reproduce_figure2,
    PointPrior,
    TruncatedNormalPrior,
    UniformPrior,
)
from .graph import Complete
from .output import line_chart_svg, write_atomic, write_manifest
from .search import SearchStrategy

log = logging.getLogger("explainsim")

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_INTERNAL = 0, 2, 3, 4


class UsageError(InvalidArgumentError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _emit(text: str, stream=None) -> None:
    (stream or sys.stdout).write(text)


# ---------------------------------------------------------------------------
# expected-time


def cmd_expected_time(args: argparse.Namespace) -> int:
    et = expected_explanation_time(args.n_r, args.n_k)
    dist = time_pmf(args.n_r, args.n_k)
    lines = [
        f"expected_time {et!r}",
        f"pmf_support 1..{dist.pmf.size}",
        f"pmf_mean {dist.mean()!r}",
        f"pmf_variance {dist.variance()!r}",
        f"pmf_first {float(dist.pmf[0])!r}",
    ]
    _emit("\n".join(lines) + "\n")
    if args.pmf_csv:
        rows = ["t,probability"] + [f"{t},{float(p)!r}" for t, p in zip(dist.support, dist.pmf)]
        write_atomic(args.pmf_csv, "\n".join(rows) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# trajectory


def _prior_spec_from_flags(args: argparse.Namespace):
    kind = args.prior
    if kind != "point" and args.point_at is not None:
        raise UsageError("--point-at only applies to --prior point")
    if kind != "truncnorm" and any(
        v is not None for v in (args.mean, args.variance, args.ratio, args.m)
    ):
        raise UsageError("--mean/--variance/--ratio/--m only apply to --prior truncnorm")
    if kind == "uniform":
        return UniformPrior()
    if kind == "point":
        if args.point_at is None:
            raise UsageError("--prior point needs --point-at")
        return PointPrior(args.point_at)
    if args.mean is None:
        raise UsageError("--prior truncnorm needs --mean")
    if (args.variance is None) == (args.ratio is None):
        raise UsageError("give exactly one of --variance or --ratio")
    variance = args.variance if args.variance is not None else args.ratio * args.mean
    return TruncatedNormalPrior(args.mean, variance, args.m)


def cmd_trajectory(args: argparse.Namespace) -> int:
    prior = build_prior(_prior_spec_from_flags(args), args.n_r)
    cost = CostFunction(args.cost_kind, args.cost)
    traj = benefit_trajectory(prior, args.n_r, args.b, args.t_max)
    stop = myopic_stop_time(prior, args.n_r, args.b, cost)
    mean, var = prior.mean, prior.variance
    report = [
        f"prior_mean {mean!r}",
        f"prior_variance {var!r}",
        f"trend {classify_trend(prior, args.n_r).value if mean > 0 else 'undefined'}",
        f"stop_time {stop if stop is not None else 'none'}",
    ]
    if traj.truncated:
        report.append(f"truncated {traj.truncated}")
    text = traj.to_csv(cost)
    if args.out:
        write_atomic(args.out, text)
        _emit("\n".join(report) + "\n")
    else:
        _emit(text)
        _emit("\n".join(report) + "\n", sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate / compare


def _load(args: argparse.Namespace):
    cfg = load_config(args.config)
    exp = cfg.experiment
    try:
        if args.reps is not None:
            exp = replace(exp, reps=args.reps)
        if args.seed is not None:
            exp = replace(exp, seed=args.seed)
    except InvalidArgumentError as exc:
        raise ConfigError(str(exc)) from None
    out_dir = args.out or cfg.out_dir
    formats = tuple(args.formats) if args.formats else cfg.formats
    return cfg, exp, out_dir, formats


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg, exp, out_dir, formats = _load(args)
    summary = monte_carlo(exp, workers=args.workers)
    for k, v in summary.as_rows():
        _emit(f"{k} {v!r}\n")
    if not out_dir:
        return EXIT_OK
    out = Path(out_dir)
    written = []
    if "csv" in formats:
        write_atomic(out / "summary.csv", summary.to_csv())
        write_atomic(out / "histogram.csv", summary.histogram_csv())
        written += ["summary.csv", "histogram.csv"]
        if cfg.episodes:
            write_atomic(out / "episodes.csv", summary.episodes_csv())
            written.append("episodes.csv")
    if "svg" in formats and summary.time_counts:
        ts = sorted(summary.time_counts)
        n = summary.n_explained
        series = [("simulated", ts, [summary.time_counts[t] / summary.reps for t in ts])]
        if isinstance(exp.graph, Complete):
            dist = time_pmf(exp.graph.n, exp.n_k)
            series.append(("analytic pmf", dist.support.tolist(), dist.pmf.tolist()))
        write_atomic(out / "success_time.svg", line_chart_svg(
            series, title=f"Success step ({n} of {summary.reps} explained)",
            xlabel="step t", ylabel="probability"))
        written.append("success_time.svg")
    write_manifest(out, "simulate", experiment_to_dict(exp), exp.seed, written)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    cfg, exp, out_dir, _ = _load(args)
    try:
        strategies = [SearchStrategy(s) for s in args.strategies.split(",")]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results = compare_strategies(exp, strategies, workers=args.workers)
    names = [k for k, _ in next(iter(results.values())).as_rows()]
    lines = ["strategy," + ",".join(names)]
    for s, summ in results.items():
        vals = []
        for _, v in summ.as_rows():
            vals.append("" if v is None else (repr(v) if isinstance(v, float) else str(v)))
        lines.append(s.value + "," + ",".join(vals))
    text = "\n".join(lines) + "\n"
    _emit(text)
    if out_dir:
        write_atomic(Path(out_dir) / "compare.csv", text)
        doc = experiment_to_dict(exp)
        doc["strategies"] = [s.value for s in strategies]
        write_manifest(out_dir, "compare", doc, exp.seed, ["compare.csv"])
    return EXIT_OK


# ---------------------------------------------------------------------------
# figures


def cmd_figures(args: argparse.Namespace) -> int:
    if args.which == 1:
        if args.mean is not None or args.ratios is not None:
            raise UsageError("--mean/--ratios only apply to figure 2")
        n_rs = args.n_r or [50, 100, 200, 300]
        if any(n < 2 for n in n_rs):
            raise UsageError("every --n-r value must be >= 2")
        fig = reproduce_figure1(n_rs, args.b, args.t_max)
        params = {"n_r": n_rs, "b": args.b, "t_max": args.t_max}
    else:
        if args.n_r is not None and len(args.n_r) != 1:
            raise UsageError("figure 2 takes a single --n-r value")
        n_r = args.n_r[0] if args.n_r else 300
        mean = 10.0 if args.mean is None else args.mean
        ratios = args.ratios or [0.5, 1.0, 2.0, 5.0]
        if args.t_max is not None and not 1 <= args.t_max <= n_r - 1:
            raise UsageError(f"--t-max must lie in 1..{n_r - 1}")
        fig = reproduce_figure2(n_r, mean, ratios, args.b, args.t_max)
        params = {"n_r": n_r, "mean": mean, "ratios": ratios, "b": args.b, "t_max": args.t_max}

    out = Path(args.out)
    written = [f"{fig.name}.csv"]
    write_atomic(out / f"{fig.name}.csv", fig.to_csv())
    for c in fig.curves:
        name = f"{fig.name}_{c.label.replace('=', '_')}.csv"
        write_atomic(out / name, c.trajectory.to_csv())
        written.append(name)
        peak_t, peak_v = c.trajectory.peak()
        extra = f" trend={c.trend.value}" if c.trend is not None else ""
        _emit(f"{c.label} steps={len(c.trajectory)} first={c.trajectory.steps[0].expected_benefit!r}"
              f" peak_t={peak_t} peak={peak_v!r}{extra}\n")
    if not args.no_svg:
        series = [(c.label, c.trajectory.t.tolist(), c.trajectory.expected_benefit.tolist())
                  for c in fig.curves]
        write_atomic(out / f"{fig.name}.svg",
                     line_chart_svg(series, title=fig.title, xlabel="step t", ylabel="E(B_t)"))
        written.append(f"{fig.name}.svg")
    write_manifest(out, f"figures {args.which}", params, None, written)
    return EXIT_OK


def cmd_schema(args: argparse.Namespace) -> int:
    _emit(json.dumps(CONFIG_SCHEMA, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="explainsim", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("expected-time", help="expected steps to find an overlap node")
    s.add_argument("--n-r", type=int, required=True)
    s.add_argument("--n-k", type=int, required=True)
    s.add_argument("--pmf-csv", help="also write the success-step pmf here")
    s.set_defaults(func=cmd_expected_time)

    s = sub.add_parser("trajectory", help="belief and expected benefit step by step")
    s.add_argument("--prior", choices=["uniform", "point", "truncnorm"], default="uniform")
    s.add_argument("--point-at", type=int)
    s.add_argument("--mean", type=float)
    s.add_argument("--variance", type=float)
    s.add_argument("--ratio", type=float, help="variance as a multiple of --mean")
    s.add_argument("--m", type=int, help="largest overlap size in the prior (default n_r - 1)")
    s.add_argument("--n-r", type=int, required=True)
    s.add_argument("--b", type=float, default=1.0)
    s.add_argument("--cost-kind", choices=["constant", "linear"], default="constant")
    s.add_argument("--cost", type=float, default=0.0)
    s.add_argument("--t-max", type=int)
    s.add_argument("--out", help="CSV path (default: stdout)")
    s.set_defaults(func=cmd_trajectory)

    for name, func, helptext in (
        ("simulate", cmd_simulate, "Monte Carlo episodes from a JSON config"),
        ("compare", cmd_compare, "paired comparison of search strategies"),
    ):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("config")
        s.add_argument("--out", help="output directory (overrides the config)")
        s.add_argument("--reps", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--workers", type=int, default=1)
        s.add_argument("--formats", type=lambda x: x.split(","))
        if name == "compare":
            s.add_argument("--strategies", default="bfs,dfs,random_neighbor")
        s.set_defaults(func=func)

    s = sub.add_parser("figures", help="reproduce the benefit-dynamics figures")
    s.add_argument("which", type=int, choices=[1, 2])
    s.add_argument("--n-r", type=_int_list)
    s.add_argument("--b", type=float, default=1.0)
    s.add_argument("--t-max", type=int)
    s.add_argument("--mean", type=float)
    s.add_argument("--ratios", type=_float_list)
    s.add_argument("--out", default="figures")
    s.add_argument("--no-svg", action="store_true")
    s.set_defaults(func=cmd_figures)

    s = sub.add_parser("schema", help="print the JSON schema for config files")
    s.set_defaults(func=cmd_schema)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InfeasiblePlacementError as exc:
        print(f"explainsim: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InvalidArgumentError, BeliefStateError) as exc:
        print(f"explainsim: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"explainsim: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
