"""Experiment harness: convergence traces, accuracy reporting, timing.

Reports are plain JSON-typed dictionaries wrapped in a dataclass so they
round-trip losslessly through ``json``.  Accuracy is the achieved density
divided by the optimum; when the optimum is unknown the certificate ratio
is reported instead as a guaranteed lower bound on accuracy (the ``ratio``
column, kept distinct from ``accuracy``).

Timing uses the monotonic clock, covers solver work only (no parsing), and
reports the median of repeated runs.  Graphs below ``TIMING_MIN_VERTICES``
vertices get ``None`` instead of meaningless sub-resolution numbers, and
deterministic mode (``--seed``) suppresses times entirely so seeded runs
are byte-identical.
"""

from __future__ import annotations

import json
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .duality import certify
from .flow import SignedGraphError, WeightScaleError, exact_densest
from .graph import DensityValue, Graph, density
from .peeling import LoadVector, greedy_pp, peel_iteration

SCHEMA = "densekit-report/1"
TIMING_MIN_VERTICES = 50
DEFAULT_ITERATIONS = 12  # enough for convergence on typical graphs
CSV_COLUMNS = ("iter", "density", "accuracy", "dual_bound", "ms")


def harness_threads() -> int:
    """Worker cap for concurrent solver configurations (DENSEKIT_THREADS)."""
    raw = os.environ.get("DENSEKIT_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"DENSEKIT_THREADS must be an integer, got {raw!r}") from None
    return max(1, value)


@dataclass
class ExperimentReport:
    """A solver run in JSON-ready form; every value is a JSON-native type."""

    solver: str
    graph: dict[str, Any]
    config: dict[str, Any]
    result: dict[str, Any]
    certificate: dict[str, Any] | None = None
    convergence: list[dict[str, Any]] = field(default_factory=list)
    timing: dict[str, Any] | None = None
    schema: str = SCHEMA

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": self.schema,
            "solver": self.solver,
            "graph": self.graph,
            "config": self.config,
            "result": self.result,
            "certificate": self.certificate,
            "convergence": self.convergence,
            "timing": self.timing,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentReport":
        return cls(
            solver=data["solver"],
            graph=data["graph"],
            config=data["config"],
            result=data["result"],
            certificate=data.get("certificate"),
            convergence=data.get("convergence", []),
            timing=data.get("timing"),
            schema=data.get("schema", SCHEMA),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        if self.convergence:
            for row in self.convergence:
                lines.append(
                    ",".join(_csv_cell(row.get(col)) for col in CSV_COLUMNS)
                )
        else:
            summary = {
                "iter": self.result.get("iterations", 1),
                "density": self.result.get("density"),
                "accuracy": None,
                "dual_bound": self.result.get("dual_bound"),
                "ms": None,
            }
            lines.append(",".join(_csv_cell(summary[col]) for col in CSV_COLUMNS))
        return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def graph_metadata(g: Graph, source: str | None = None) -> dict[str, Any]:
    meta: dict[str, Any] = {
        "n": g.n,
        "m": g.m,
        "weighted": g.weighted,
        "signed": g.signed,
    }
    if source is not None:
        meta["source"] = source
    return meta


def _density_fields(g: Graph, dv: DensityValue, subset) -> dict[str, Any]:
    fields: dict[str, Any] = {"density": dv.value}
    if dv.exact:
        fields["density_exact"] = [dv.numerator, dv.denominator]
    else:
        fields["density_exact"] = None
    fields["subset_size"] = len(subset)
    fields["subset"] = g.subset_labels(subset)
    return fields


def convergence_report(
    g: Graph,
    iterations: int,
    rho_star: DensityValue | None = None,
    *,
    tracker: str = "auto",
    record_time: bool = True,
) -> tuple[list[dict[str, Any]], Any]:
    """Per-iteration rows for an iterated peel run.

    Each row carries the best density after that many passes, its accuracy
    against ``rho_star`` when known, the dual upper bound from the loads,
    the certificate ratio, and cumulative solver milliseconds (``None``
    when ``record_time`` is false).

    Returns the rows plus the final :class:`~densekit.peeling.GreedyPPResult`-like
    state as ``(rows, (best_density, best_subset, loads))``.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    rows: list[dict[str, Any]] = []
    loads = LoadVector.zeros(g.n, weighted=g.weighted)
    best: DensityValue | None = None
    best_subset: tuple[int, ...] = ()
    elapsed = 0.0
    for i in range(1, iterations + 1):
        start = time.perf_counter()
        step = peel_iteration(g, loads, tracker=tracker)
        elapsed += time.perf_counter() - start
        loads = step.loads
        if best is None or step.result.best_density > best:
            best = step.result.best_density
            best_subset = step.result.best_subset
        dual_bound = max(loads.loads) / i
        ratio = min(best.value / dual_bound, 1.0) if dual_bound > 0 else 1.0
        row: dict[str, Any] = {
            "iter": i,
            "density": best.value,
            "accuracy": (best.value / rho_star.value) if rho_star is not None else None,
            "ratio": ratio,
            "dual_bound": dual_bound,
            "ms": (elapsed * 1000.0) if record_time else None,
        }
        rows.append(row)
    return rows, (best, best_subset, loads)


def _median_ms(fn: Callable[[], Any], runs: int) -> tuple[float, Any]:
    times = []
    value = None
    for _ in range(runs):
        start = time.perf_counter()
        value = fn()
        times.append((time.perf_counter() - start) * 1000.0)
    return statistics.median(times), value


def iterations_to_fraction(
    g: Graph,
    rho_star: DensityValue,
    fraction: Fraction,
    *,
    cap: int,
    tracker: str = "auto",
) -> int | None:
    """Passes needed for the running best to reach ``fraction * rho_star``.

    Exact arithmetic when the optimum is exact; ``None`` if the cap is hit
    first.
    """
    if rho_star.exact:
        target_frac = fraction * rho_star.as_fraction()
        target = DensityValue(target_frac.numerator, target_frac.denominator)
    else:
        target = DensityValue(float(fraction) * rho_star.value, 1)
    result = greedy_pp(g, cap, tracker=tracker, target=target)
    if result.best_density < target:
        return None
    return result.iterations


def run_bench(
    g: Graph,
    *,
    iterations_cap: int = 100,
    timing_runs: int = 5,
    target_fraction: Fraction = Fraction(9, 10),
    suppress_timing: bool = False,
    tracker: str = "auto",
) -> dict[str, Any]:
    """Compare the exact solver against peeling run to a target accuracy.

    Reports (never asserts) the speedup of iterated peeling reaching
    ``target_fraction`` of the optimum over the exact max-flow solver, plus
    the iteration counts needed for 90% and 99% accuracy.  When the exact
    solver refuses the instance (signed or fractional weights), only the
    peeling side is reported together with its certificate gap.

    Timing rules: median of ``timing_runs`` runs of each side; graphs with
    fewer than ``TIMING_MIN_VERTICES`` vertices report ``None`` times
    (below timer resolution), as does ``suppress_timing``.
    """
    timed = not suppress_timing and g.n >= TIMING_MIN_VERTICES
    out: dict[str, Any] = {
        "rho_star": None,
        "exact_ms": None,
        "greedy_ms": None,
        "speedup": None,
        "iterations_to_90": None,
        "iterations_to_99": None,
        "note": None,
    }

    def exact_side():
        return exact_densest(g)

    try:
        if timed:
            exact_ms, (subset, rho_star) = _median_ms(exact_side, timing_runs)
            out["exact_ms"] = exact_ms
        else:
            subset, rho_star = exact_side()
    except (SignedGraphError, WeightScaleError) as exc:
        result = greedy_pp(g, iterations_cap, tracker=tracker)
        cert = certify(result.best_density, result.final_loads, result.iterations)
        out["note"] = f"exact solver refused: {exc}; reporting peeling side only"
        out["greedy_density"] = result.best_density.value
        out["certificate_ratio"] = cert.ratio
        return out

    out["rho_star"] = rho_star.value

    if rho_star.exact:
        t90 = iterations_to_fraction(
            g, rho_star, target_fraction, cap=iterations_cap, tracker=tracker
        )
        t99 = iterations_to_fraction(
            g, rho_star, Fraction(99, 100), cap=iterations_cap, tracker=tracker
        )
    else:
        t90 = iterations_to_fraction(
            g, rho_star, target_fraction, cap=iterations_cap, tracker=tracker
        )
        t99 = None
    out["iterations_to_90"] = t90
    out["iterations_to_99"] = t99

    if timed and t90 is not None:
        target_frac = target_fraction * rho_star.as_fraction() if rho_star.exact else None

        def greedy_side():
            if target_frac is not None:
                target = DensityValue(target_frac.numerator, target_frac.denominator)
            else:
                target = DensityValue(float(target_fraction) * rho_star.value, 1)
            return greedy_pp(g, iterations_cap, tracker=tracker, target=target)

        greedy_ms, _ = _median_ms(greedy_side, timing_runs)
        out["greedy_ms"] = greedy_ms
        if greedy_ms > 0:
            out["speedup"] = out["exact_ms"] / greedy_ms
    elif not timed:
        out["note"] = "below timer resolution" if g.n < TIMING_MIN_VERTICES else "timing suppressed"

    return out


def run_bench_concurrent(
    graphs: Sequence[tuple[str, Graph]], **kwargs
) -> list[tuple[str, dict[str, Any]]]:
    """Benchmark several instances, up to DENSEKIT_THREADS at a time."""
    workers = harness_threads()
    if workers == 1 or len(graphs) == 1:
        return [(name, run_bench(g, **kwargs)) for name, g in graphs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [(name, pool.submit(run_bench, g, **kwargs)) for name, g in graphs]
        return [(name, fut.result()) for name, fut in futures]
