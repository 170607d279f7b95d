"""Duality-based optimality certificates for peeling runs.

Each peeling pass charges every edge to exactly one endpoint, so after
``T`` passes the per-vertex loads divided by ``T`` are the vertex loads of
a feasible fractional edge-to-endpoint assignment.  The maximum average
load therefore upper-bounds the optimum density, while the best density
found lower-bounds it; the ratio of the two is an a-posteriori guarantee
on how close the run got, with ratio 1 certifying exact optimality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import DensityValue, Graph
from .peeling import GreedyPPResult, LoadVector, _peel_pass, _best_suffix, _require_edges, _resolve_tracker, IterationStats


@dataclass(frozen=True)
class DualAssignment:
    """A fractional assignment of each edge to its two endpoints.

    ``values[e] = (f_u, f_v)`` is the fraction of edge ``e`` routed to its
    smaller/larger endpoint; feasibility means ``f_u + f_v >= 1`` with both
    non-negative.  ``loads[v]`` is the total (weight-scaled) mass routed to
    vertex ``v``; its maximum upper-bounds the optimum density whenever the
    assignment is feasible and weights are non-negative.
    """

    values: np.ndarray  # shape (m, 2)
    loads: np.ndarray  # shape (n,)

    @classmethod
    def from_edge_values(cls, g: Graph, values: np.ndarray) -> "DualAssignment":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (g.m, 2):
            raise ValueError(f"expected shape ({g.m}, 2), got {values.shape}")
        loads = np.zeros(g.n, dtype=np.float64)
        for eid, (u, v, w) in enumerate(g.edges):
            loads[u] += w * values[eid, 0]
            loads[v] += w * values[eid, 1]
        return cls(values, loads)

    @property
    def max_load(self) -> float:
        return float(self.loads.max())

    def pair_sums(self) -> np.ndarray:
        return self.values.sum(axis=1)


@dataclass(frozen=True)
class DualCertificate:
    """Sandwich certificate: achieved density <= optimum <= max average load."""

    lower: DensityValue
    upper: DensityValue
    iterations: int

    @property
    def ratio(self) -> float:
        # Clamp: rounding the two values independently can nudge an exactly
        # tight certificate a few ulp above 1.
        return min(self.lower.value / self.upper.value, 1.0)

    @property
    def tight(self) -> bool:
        """True when lower == upper, i.e. the subgraph is provably optimal."""
        return not (self.lower < self.upper)


def dual_upper_bound(loads: LoadVector, iterations: int) -> DensityValue:
    """Maximum average load ``max_v loads[v] / iterations``.

    This is the objective of a feasible point of the load-balancing dual,
    hence an upper bound on the optimum density (for non-negative weights).
    Kept as an exact ratio on unweighted graphs.

    Raises:
        ValueError: if ``iterations`` is not positive or does not match the
            number of passes that produced ``loads``.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if loads.iteration != iterations:
        raise ValueError(
            f"load vector was produced by {loads.iteration} passes, not {iterations}"
        )
    return DensityValue(max(loads.loads), iterations)


def certify(
    best: DensityValue, loads: LoadVector, iterations: int
) -> DualCertificate:
    """Package the weak-duality sandwich for a finished peeling run.

    ``best`` must be the best density achieved by the same run that
    produced ``loads``; the certificate's ratio is then a lower bound on
    the run's approximation factor.  Only meaningful for non-negative
    weights (the load bound is not a valid dual objective on signed
    graphs).

    Raises:
        ValueError: on inconsistent inputs, including ``best`` exceeding
            the upper bound (impossible for a genuine run).
    """
    upper = dual_upper_bound(loads, iterations)
    if best > upper:
        raise ValueError(
            f"achieved density {best.value} exceeds the dual bound {upper.value}; "
            "inputs are not from the same run"
        )
    return DualCertificate(lower=best, upper=upper, iterations=iterations)


def averaged_dual(g: Graph, charge_counts: Sequence[int], iterations: int) -> DualAssignment:
    """Reconstruct the averaged edge assignment from recorded charge counts.

    ``charge_counts[eid]`` counts the passes that charged edge ``eid`` to
    its smaller endpoint; every pass charges each edge exactly once, so the
    averaged pair always sums to one and the vertex loads equal the final
    load vector divided by the iteration count.
    """
    if len(charge_counts) != g.m:
        raise ValueError("need one charge count per edge")
    counts = np.asarray(charge_counts, dtype=np.float64)
    if counts.min(initial=0.0) < 0 or counts.max(initial=0.0) > iterations:
        raise ValueError("charge counts must lie in [0, iterations]")
    values = np.empty((g.m, 2), dtype=np.float64)
    values[:, 0] = counts / iterations
    values[:, 1] = 1.0 - values[:, 0]
    return DualAssignment.from_edge_values(g, values)


def greedy_pp_until_certified(
    g: Graph,
    delta: float,
    *,
    max_iterations: int = 100,
    tracker: str = "auto",
) -> tuple[GreedyPPResult, DualCertificate]:
    """Run iterated peeling until the certificate ratio reaches ``1 - delta``.

    Stops as soon as ``best_density / dual_upper_bound >= 1 - delta`` (for
    ``delta == 0`` the comparison is exact, so it certifies true
    optimality) or after ``max_iterations`` passes, whichever comes first.
    """
    _require_edges(g)
    if not (0.0 <= delta < 1.0):
        raise ValueError("delta must lie in [0, 1)")
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    kind = _resolve_tracker(g, tracker)

    n = g.n
    loads = [0.0] * n if g.weighted else [0] * n
    best_density: DensityValue | None = None
    best_order: list[int] = []
    best_index = 0
    stats: list[IterationStats] = []

    for i in range(1, max_iterations + 1):
        order, nums, loads, _ = _peel_pass(g, loads, kind, False)
        idx = _best_suffix(nums, n)
        pass_density = DensityValue(nums[idx], n - idx)
        if best_density is None or pass_density > best_density:
            best_density = pass_density
            best_order = order
            best_index = idx
        stats.append(IterationStats(i, pass_density, best_density, max(loads)))
        upper = DensityValue(max(loads), i)
        if delta == 0.0:
            certified = not (best_density < upper)
        else:
            certified = best_density.value >= (1.0 - delta) * upper.value
        if certified:
            break

    assert best_density is not None
    result = GreedyPPResult(
        iterations=len(stats),
        per_iteration=stats,
        best_density=best_density,
        final_loads=LoadVector(loads, len(stats)),
        _best_order=best_order,
        _best_index=best_index,
    )
    cert = certify(best_density, result.final_loads, result.iterations)
    return result, cert
