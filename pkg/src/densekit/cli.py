"""Command-line front end.

Subcommands: ``peel``, ``greedypp``, ``exact``, ``mwu``, ``certify``,
``bench``, ``oracle``.  Input is a SNAP-style edge list; output is a JSON
report (default) or CSV convergence rows on stdout.

Exit codes: 0 success, 1 input error (bad flags, unreadable file, parse
error), 2 solver refusal (exact/oracle declining an instance, e.g. the
exact solver on a signed graph).

Passing ``--seed`` makes runs fully reproducible: solvers are already
deterministic, so the flag's effect is to suppress wall-clock fields,
which are the only nondeterministic bytes in a report.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .bench import (
    DEFAULT_ITERATIONS,
    ExperimentReport,
    convergence_report,
    graph_metadata,
    run_bench,
)
from .duality import certify, greedy_pp_until_certified
from .flow import SignedGraphError, WeightScaleError, exact_densest, scale_to_integer
from .graph import (
    DensityValue,
    EmptyGraphError,
    Graph,
    GraphParseError,
    OracleSizeError,
    brute_force_densest,
    parse_edge_list,
)
from .mwu import mwu_solve
from .peeling import greedy_pp

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_REFUSED = 2


class UsageError(Exception):
    """Bad command line; mapped to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("file", help="edge-list file (SNAP style)")
    sub.add_argument("--weighted", action="store_true", help="lines carry a third weight token")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--seed", type=int, default=None,
                     help="deterministic mode: fixes the report byte-for-byte")
    sub.add_argument("--tracker", choices=("auto", "bucket", "heap"), default="auto",
                     help="min-tracker for peeling passes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="densekit", description="Densest subgraph toolkit")
    parser.add_argument("--version", action="version", version=f"densekit {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("peel", help="single greedy peel (2-approximation)")
    _add_common(p)

    p = subs.add_parser("greedypp", help="iterated load-carrying peeling")
    _add_common(p)
    p.add_argument("--iters", type=int, default=DEFAULT_ITERATIONS,
                   help=f"number of passes (default {DEFAULT_ITERATIONS})")

    p = subs.add_parser("exact", help="exact optimum via max-flow binary search")
    _add_common(p)
    p.add_argument("--scale", type=float, default=None,
                   help="multiply real weights by this factor to make them integers")

    p = subs.add_parser("mwu", help="multiplicative-weights dual bound")
    _add_common(p)
    p.add_argument("--eps", type=float, default=0.1, help="target accuracy factor (0, 1)")
    p.add_argument("--iters", type=int, default=None, help="cap on rounds")

    p = subs.add_parser("certify", help="peel until the duality gap closes")
    _add_common(p)
    p.add_argument("--delta", type=float, default=0.01,
                   help="stop once density/dual-bound >= 1 - delta")
    p.add_argument("--iters", type=int, default=100, help="iteration cap")

    p = subs.add_parser("bench", help="exact-vs-peeling timing comparison")
    _add_common(p)
    p.add_argument("--iters", type=int, default=100, help="peeling iteration cap")
    p.add_argument("--runs", type=int, default=5, help="timed repetitions per solver")

    p = subs.add_parser("oracle", help="exhaustive optimum for tiny graphs")
    _add_common(p)
    p.add_argument("--max-n", type=int, default=24, help="enumeration guard")

    return parser


def _load_graph(args) -> Graph:
    with open(args.file, "r", encoding="utf-8") as handle:
        return parse_edge_list(handle, weighted=args.weighted)


def _base_config(args, **extra) -> dict[str, Any]:
    config: dict[str, Any] = {"seed": args.seed, "tracker": args.tracker}
    config.update(extra)
    return config


def _density_result(g: Graph, dv: DensityValue, subset) -> dict[str, Any]:
    return {
        "density": dv.value,
        "density_exact": [dv.numerator, dv.denominator] if dv.exact else None,
        "subset_size": len(subset),
        "subset": g.subset_labels(subset),
    }


def _certificate_dict(cert) -> dict[str, Any]:
    return {
        "lower": cert.lower.value,
        "upper": cert.upper.value,
        "ratio": cert.ratio,
        "iterations": cert.iterations,
    }


def _cmd_peel(args) -> ExperimentReport:
    g = _load_graph(args)
    record_time = args.seed is None
    rows, (best, subset, loads) = convergence_report(
        g, 1, tracker=args.tracker, record_time=record_time
    )
    report = ExperimentReport(
        solver="peel",
        graph=graph_metadata(g, args.file),
        config=_base_config(args),
        result={**_density_result(g, best, subset), "iterations": 1},
        convergence=rows,
    )
    if not g.signed:
        report.certificate = _certificate_dict(certify(best, loads, 1))
    return report


def _cmd_greedypp(args) -> ExperimentReport:
    g = _load_graph(args)
    if args.iters < 1:
        raise UsageError("--iters must be >= 1")
    record_time = args.seed is None
    rows, (best, subset, loads) = convergence_report(
        g, args.iters, tracker=args.tracker, record_time=record_time
    )
    report = ExperimentReport(
        solver="greedypp",
        graph=graph_metadata(g, args.file),
        config=_base_config(args, iters=args.iters),
        result={**_density_result(g, best, subset), "iterations": args.iters},
        convergence=rows,
    )
    if not g.signed:
        report.certificate = _certificate_dict(certify(best, loads, loads.iteration))
    return report


def _cmd_exact(args) -> ExperimentReport:
    g = _load_graph(args)
    config = _base_config(args, scale=args.scale)
    if args.scale is not None:
        scaled = scale_to_integer(g, args.scale)
        subset, dv = exact_densest(scaled)
        result = {
            "density": dv.value / args.scale,
            "density_exact": None,
            "scaled_density_exact": [dv.numerator, dv.denominator],
            "subset_size": len(subset),
            "subset": g.subset_labels(subset),
        }
    else:
        subset, dv = exact_densest(g)
        result = _density_result(g, dv, subset)
    return ExperimentReport(
        solver="exact",
        graph=graph_metadata(g, args.file),
        config=config,
        result=result,
    )


def _cmd_mwu(args) -> ExperimentReport:
    g = _load_graph(args)
    res = mwu_solve(g, args.eps, max_iters=args.iters)
    return ExperimentReport(
        solver="mwu",
        graph=graph_metadata(g, args.file),
        config=_base_config(args, eps=args.eps, iters=args.iters),
        result={
            "dual_value_avg": res.value,
            "dual_bound": res.dual_bound,
            "iterations": res.iterations,
            "iteration_bound": res.iteration_bound,
            "eta": res.eta,
            "certified": res.certified,
        },
    )


def _cmd_certify(args) -> ExperimentReport:
    g = _load_graph(args)
    if g.signed:
        raise SignedGraphError(
            "negative edge weights: the duality certificate does not apply"
        )
    result, cert = greedy_pp_until_certified(
        g, args.delta, max_iterations=args.iters, tracker=args.tracker
    )
    rows = [
        {
            "iter": st.iteration,
            "density": st.best_density.value,
            "accuracy": None,
            "ratio": min(st.best_density.value / st.dual_bound, 1.0),
            "dual_bound": st.dual_bound,
            "ms": None,
        }
        for st in result.per_iteration
    ]
    return ExperimentReport(
        solver="certify",
        graph=graph_metadata(g, args.file),
        config=_base_config(args, delta=args.delta, iters=args.iters),
        result={
            **_density_result(g, result.best_density, result.best_subset),
            "iterations": result.iterations,
            "certified": cert.ratio >= 1.0 - args.delta,
        },
        certificate=_certificate_dict(cert),
        convergence=rows,
    )


def _cmd_bench(args) -> ExperimentReport:
    g = _load_graph(args)
    timing = run_bench(
        g,
        iterations_cap=args.iters,
        timing_runs=args.runs,
        suppress_timing=args.seed is not None,
        tracker=args.tracker,
    )
    return ExperimentReport(
        solver="bench",
        graph=graph_metadata(g, args.file),
        config=_base_config(args, iters=args.iters, runs=args.runs),
        result={"rho_star": timing.get("rho_star")},
        timing=timing,
    )


def _cmd_oracle(args) -> ExperimentReport:
    g = _load_graph(args)
    subset, dv = brute_force_densest(g, max_vertices=args.max_n)
    return ExperimentReport(
        solver="oracle",
        graph=graph_metadata(g, args.file),
        config=_base_config(args, max_n=args.max_n),
        result=_density_result(g, dv, subset),
    )


_HANDLERS = {
    "peel": _cmd_peel,
    "greedypp": _cmd_greedypp,
    "exact": _cmd_exact,
    "mwu": _cmd_mwu,
    "certify": _cmd_certify,
    "bench": _cmd_bench,
    "oracle": _cmd_oracle,
}


def run_cli(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run the requested solver, print the report.

    Returns the process exit code instead of raising SystemExit, so it is
    directly testable.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    try:
        report = _HANDLERS[args.command](args)
    except (SignedGraphError, WeightScaleError, OracleSizeError) as exc:
        print(f"densekit: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (GraphParseError, EmptyGraphError, UsageError, OSError, ValueError) as exc:
        print(f"densekit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        sys.stdout.write(report.to_json())
    return EXIT_OK


def main():
    sys.exit(run_cli())
