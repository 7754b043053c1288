"""Command-line interface: estimate, path, kselect, simulate, compare.

Exit codes: 0 success, 2 usage error, 3 data/config error, 4 numerical
failure (estimator undefined on the given data).
"""

from __future__ import annotations

import argparse
import json
import sys

from .asymptotics import confidence_interval
from .estimators import (
    AllCensoredTailError,
    DegenerateEstimateError,
    ESTIMATOR_KINDS,
    EstimatorSpec,
    evaluate,
    path as estimate_path,
    p_hat,
)
from .io import ConfigError, DataError, format_float, ingest, load_run_config
from .kselect import KSelectConfig, NoAdmissibleKError, reiss_thomas
from .montecarlo import McConfig, figure_table, format_table, run
from .sampling import Seed
from .survival import rank

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

_BETA_REQUIRED = ("weighted-na", "weighted-km", "bw")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="censtail",
        description="Tail index estimation for right-censored Pareto-type data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_est_flags(p, with_k=True):
        p.add_argument("--est", required=True, choices=ESTIMATOR_KINDS,
                       help="estimator kind")
        p.add_argument("--beta", type=float, default=None,
                       help="tuning parameter (required for weighted-na/weighted-km/bw)")
        if with_k:
            p.add_argument("--k-min", type=int, default=None, help="smallest k (default 2)")
            p.add_argument("--k-max", type=int, default=None, help="largest k (default n-1)")

    p_est = sub.add_parser("estimate", help="point estimate at a fixed or selected k")
    add_est_flags(p_est, with_k=False)
    group = p_est.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="number of top order statistics")
    group.add_argument("--auto-k", action="store_true",
                       help="select k by the adaptive deviation-minimising rule")
    p_est.add_argument("--nu", type=float, default=0.3,
                       help="exponent of the selection weights (default 0.3)")
    p_est.add_argument("--k-min", type=int, default=None,
                       help="lower bound of the --auto-k search (default 2)")
    p_est.add_argument("--k-max", type=int, default=None,
                       help="upper bound of the --auto-k search (default n-1)")
    p_est.add_argument("--ci", type=float, default=None, metavar="LEVEL",
                       help="append a Gaussian confidence interval at this level")
    p_est.add_argument("--json", metavar="FILE", default=None,
                       help="also write the report as JSON to FILE ('-' for stdout)")
    p_est.add_argument("file", help="CSV dataset with header z,delta[,id]")

    p_path = sub.add_parser("path", help="estimate as a function of k (CSV)")
    add_est_flags(p_path)
    p_path.add_argument("--out", default=None, help="output file (default stdout)")
    p_path.add_argument("file")

    p_ks = sub.add_parser("kselect", help="adaptive choice of k (CSV)")
    add_est_flags(p_ks)
    p_ks.add_argument("--nu", type=float, default=0.3)
    p_ks.add_argument("--out", default=None)
    p_ks.add_argument("file")

    p_sim = sub.add_parser("simulate", help="Monte Carlo bias/MSE table from a JSON config")
    p_sim.add_argument("--config", required=True, help="run configuration (JSON)")
    p_sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_sim.add_argument("--workers", type=int, default=None,
                       help="worker processes (capped by CENSTAIL_THREADS)")
    p_sim.add_argument("--out", default=None)

    p_cmp = sub.add_parser("compare", help="side-by-side estimator paths (CSV)")
    p_cmp.add_argument("--est", action="append", default=None, metavar="KIND[:BETA]",
                       help="estimator to include (repeatable); default "
                            "efg, mns-na, weighted-na:1.01, weighted-na:1.5, weighted-na:2")
    p_cmp.add_argument("--k-min", type=int, default=None)
    p_cmp.add_argument("--k-max", type=int, default=None)
    p_cmp.add_argument("--out", default=None)
    p_cmp.add_argument("file")
    return parser


def _spec_from_flags(parser, kind: str, beta) -> EstimatorSpec:
    if kind in _BETA_REQUIRED and beta is None:
        parser.error(f"--est {kind} requires --beta")
    if kind not in _BETA_REQUIRED and beta is not None:
        parser.error(f"--est {kind} does not take --beta")
    return EstimatorSpec(kind, beta)


def _parse_compare_spec(parser, text: str) -> EstimatorSpec:
    kind, _, beta = text.partition(":")
    if kind not in ESTIMATOR_KINDS:
        parser.error(f"unknown estimator {kind!r} in --est {text}")
    if kind in _BETA_REQUIRED and not beta:
        parser.error(f"--est {text}: {kind} needs an explicit :BETA suffix")
    if kind not in _BETA_REQUIRED and beta:
        parser.error(f"--est {text}: {kind} does not take a beta")
    return EstimatorSpec(kind, float(beta) if beta else None)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _auto_k(ranked, spec: EstimatorSpec, nu: float, k_min=None, k_max=None):
    hi = k_max if k_max is not None else ranked.n - 1
    pth = estimate_path(ranked, spec, k_min=spec.min_k, k_max=hi)
    lo = max(2, k_min) if k_min is not None else 2
    return reiss_thomas(pth, KSelectConfig(nu=nu, k_min=lo, k_max=hi))


def _cmd_estimate(args) -> int:
    sample = ingest(args.file, quiet=False)
    ranked = rank(sample)
    spec = args.spec
    if args.auto_k:
        sel = _auto_k(ranked, spec, args.nu, args.k_min, args.k_max)
        k = sel.k_opt
    else:
        k = args.k
    value = evaluate(ranked, spec, k)
    pk = p_hat(ranked, min(k, ranked.n))
    lines = [
        f"estimator: {spec.label()}",
        f"k: {k}" + (" (selected)" if args.auto_k else ""),
        f"estimate: {format_float(value)}",
        f"p-hat: {format_float(pk)}",
    ]
    report = {"estimator": spec.label(), "kind": spec.kind, "beta": spec.beta,
              "k": int(k), "auto_k": bool(args.auto_k), "estimate": value, "p_hat": pk}
    if args.ci is not None:
        beta_ci = spec.beta if spec.beta is not None else 1.0
        p_ci = 1.0 if spec.kind == "hill" else pk
        ci = confidence_interval(value, k, p_ci, beta_ci, args.ci)
        lines.append(
            f"ci-{args.ci:g}: [{format_float(ci.lower)}, {format_float(ci.upper)}] "
            f"(se {format_float(ci.se)})"
        )
        report["ci"] = {"level": args.ci, "lower": ci.lower, "upper": ci.upper, "se": ci.se}
    print("\n".join(lines))
    if args.json is not None:
        payload = json.dumps(report, indent=2) + "\n"
        if args.json == "-":
            sys.stdout.write(payload)
        else:
            with open(args.json, "w") as fh:
                fh.write(payload)
    return EXIT_OK


def _cmd_path(args) -> int:
    sample = ingest(args.file, quiet=False)
    ranked = rank(sample)
    pth = estimate_path(ranked, args.spec, k_min=args.k_min, k_max=args.k_max)
    reasons = dict(pth.failures)
    values = dict(zip(pth.k_values.tolist(), pth.estimates.tolist()))
    all_k = sorted(set(values) | set(reasons))
    lines = ["k,estimate,reason"]
    for k in all_k:
        if k in values:
            lines.append(f"{k},{format_float(values[k])},")
        else:
            lines.append(f"{k},,{reasons[k]}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_kselect(args) -> int:
    sample = ingest(args.file, quiet=False)
    ranked = rank(sample)
    spec = args.spec
    lo = args.k_min if args.k_min is not None else 2
    hi = args.k_max if args.k_max is not None else ranked.n - 1
    pth = estimate_path(ranked, spec, k_min=spec.min_k, k_max=hi)
    sel = reiss_thomas(pth, KSelectConfig(nu=args.nu, k_min=max(lo, 2), k_max=hi))
    _emit(f"k_opt,criterion\n{sel.k_opt},{format_float(sel.criterion)}\n", args.out)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    cfg = load_run_config(args.config)
    mc = cfg.mc
    if args.seed is not None:
        mc = McConfig(mc.scenario, mc.n, mc.replications, mc.estimators,
                      mc.k_grid, Seed(args.seed))
    summary = run(mc, workers=args.workers)
    _emit(format_table(figure_table(summary)), args.out)
    return EXIT_OK


def _cmd_compare(args) -> int:
    sample = ingest(args.file, quiet=False)
    ranked = rank(sample)
    specs = args.specs
    k_lo = args.k_min if args.k_min is not None else 2
    k_hi = args.k_max if args.k_max is not None else ranked.n - 1
    columns = []
    for spec in specs:
        pth = estimate_path(ranked, spec, k_min=max(k_lo, spec.min_k), k_max=k_hi)
        columns.append(dict(zip(pth.k_values.tolist(), pth.estimates.tolist())))
    header = "k," + ",".join(spec.label() for spec in specs)
    lines = [header]
    for k in range(k_lo, k_hi + 1):
        cells = [format_float(col[k]) if k in col else "" for col in columns]
        lines.append(f"{k}," + ",".join(cells))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("estimate", "path", "kselect"):
            args.spec = _spec_from_flags(parser, args.est, args.beta)
        if args.command == "compare":
            raw = args.est or ["efg", "mns-na", "weighted-na:1.01",
                               "weighted-na:1.5", "weighted-na:2"]
            args.specs = [_parse_compare_spec(parser, t) for t in raw]
        handler = {
            "estimate": _cmd_estimate,
            "path": _cmd_path,
            "kselect": _cmd_kselect,
            "simulate": _cmd_simulate,
            "compare": _cmd_compare,
        }[args.command]
        return handler(args)
    except (DataError, ConfigError) as exc:
        print(f"censtail: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (AllCensoredTailError, DegenerateEstimateError, NoAdmissibleKError) as exc:
        print(f"censtail: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"censtail: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
