"""Greedy peeling and its load-carrying iterative refinement.

One *pass* repeatedly deletes the vertex minimizing ``load + residual
degree`` and records the densest suffix subgraph it sees.  With zero loads
this is the classic linear-time greedy 2-approximation; re-running passes
while accumulating each vertex's removal charge into its load is the
iterative algorithm that converges toward the optimum and yields a dual
bound (see :mod:`densekit.duality`).

Two interchangeable min-trackers are provided: integer bucket lists with a
rewinding scan cursor (unweighted graphs only; keys are bounded by
``2*T*m``) and a lazy priority queue that also handles float keys.  Both
break ties toward the smallest vertex id, so they produce identical peel
orders.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .graph import DensityValue, EmptyGraphError, Graph

Number = Union[int, float]


@dataclass
class LoadVector:
    """Per-vertex accumulated removal charges after ``iteration`` passes.

    Unweighted loads are exact machine integers; each pass charges every
    edge to exactly one endpoint, so ``sum(loads) == iteration * m`` holds
    exactly (up to float accumulation on weighted graphs).
    """

    loads: list[Number]
    iteration: int = 0

    @classmethod
    def zeros(cls, n: int, *, weighted: bool = False) -> "LoadVector":
        fill: Number = 0.0 if weighted else 0
        return cls([fill] * n, 0)

    def total(self) -> Number:
        return sum(self.loads)

    def max_load(self) -> Number:
        return max(self.loads)

    def copy(self) -> "LoadVector":
        return LoadVector(list(self.loads), self.iteration)


@dataclass(frozen=True)
class PeelResult:
    """Outcome of a single peeling pass.

    ``order`` is the removal permutation; suffix ``i`` of the pass is the
    subgraph on ``order[i:]``.  ``density_trace[i]`` is that suffix's
    density (``i = 0`` is the full graph), and ``best_index`` points at the
    densest one, earliest wins on ties.  The best subset is reconstructed
    from the order on demand rather than stored.
    """

    order: list[int]
    best_index: int
    best_density: DensityValue
    density_trace: list[DensityValue]

    @property
    def best_subset(self) -> tuple[int, ...]:
        return tuple(sorted(self.order[self.best_index :]))


@dataclass(frozen=True)
class PeelPass:
    """One pass over a graph carrying loads: result, updated loads, charges."""

    result: PeelResult
    loads: LoadVector
    # charge_sides[eid] is 0 if the pass charged the edge to its smaller
    # endpoint, 1 otherwise; only recorded on request.
    charge_sides: list[int] | None = None


@dataclass(frozen=True)
class IterationStats:
    """Summary of one pass inside an iterated run."""

    iteration: int
    pass_density: DensityValue  # best suffix density within this pass
    best_density: DensityValue  # running best across passes so far
    max_load: Number  # max cumulative load after this pass

    @property
    def dual_bound(self) -> float:
        return self.max_load / self.iteration


@dataclass
class GreedyPPResult:
    """Result of an iterated load-carrying peel run."""

    iterations: int
    per_iteration: list[IterationStats]
    best_density: DensityValue
    final_loads: LoadVector
    _best_order: list[int] = field(repr=False, default_factory=list)
    _best_index: int = 0
    # charge_counts[eid] counts passes that charged the edge to its smaller
    # endpoint; present only when charges were recorded.
    charge_counts: list[int] | None = None

    @property
    def best_subset(self) -> tuple[int, ...]:
        return tuple(sorted(self._best_order[self._best_index :]))


class _BucketTracker:
    """Integer-key min structure: heapified id buckets plus a scan cursor.

    The cursor only moves down when a key decreases, mirroring the
    observation that deleting a minimum vertex can lower its neighbors'
    keys by at most one; buckets are allocated lazily in a dict so key
    range does not cost memory.
    """

    __slots__ = ("key", "alive", "buckets", "cursor")

    def __init__(self, keys: Sequence[int]):
        self.key = list(keys)
        self.alive = [True] * len(self.key)
        self.buckets: dict[int, list[int]] = {}
        for v, k in enumerate(self.key):
            self.buckets.setdefault(k, []).append(v)
        for bucket in self.buckets.values():
            heapq.heapify(bucket)
        self.cursor = min(self.key) if self.key else 0

    def pop_min(self) -> int:
        while True:
            bucket = self.buckets.get(self.cursor)
            while bucket:
                v = heapq.heappop(bucket)
                if self.alive[v] and self.key[v] == self.cursor:
                    self.alive[v] = False
                    return v
            self.cursor += 1

    def update(self, v: int, new_key: int):
        self.key[v] = new_key
        heapq.heappush(self.buckets.setdefault(new_key, []), v)
        if new_key < self.cursor:
            self.cursor = new_key


class _HeapTracker:
    """Lazy (key, id) min-heap; handles float (and negative) keys."""

    __slots__ = ("key", "alive", "heap")

    def __init__(self, keys: Sequence[Number]):
        self.key = list(keys)
        self.alive = [True] * len(self.key)
        self.heap = [(k, v) for v, k in enumerate(self.key)]
        heapq.heapify(self.heap)

    def pop_min(self) -> int:
        while True:
            k, v = heapq.heappop(self.heap)
            if self.alive[v] and self.key[v] == k:
                self.alive[v] = False
                return v

    def update(self, v: int, new_key: Number):
        self.key[v] = new_key
        heapq.heappush(self.heap, (new_key, v))


def _resolve_tracker(g: Graph, tracker: str) -> str:
    if tracker == "auto":
        return "heap" if g.weighted else "bucket"
    if tracker not in ("bucket", "heap"):
        raise ValueError(f"unknown tracker {tracker!r}")
    if tracker == "bucket" and g.weighted:
        raise ValueError("bucket tracker requires integer keys; use 'heap' on weighted graphs")
    return tracker


def _peel_pass(
    g: Graph,
    loads: Sequence[Number],
    tracker: str,
    record_charges: bool,
) -> tuple[list[int], list[Number], list[Number], list[int] | None]:
    """Run one pass; returns (order, suffix numerators, new loads, charges).

    ``suffix_nums[i]`` is the induced edge weight of the suffix after ``i``
    removals, for ``i`` in ``0 .. n-1``.
    """
    n = g.n
    adjacency = g.adjacency
    edges = g.edges
    weighted = g.weighted

    if weighted:
        residual: list[Number] = [
            sum(edges[eid][2] for _, eid in adjacency[v]) for v in range(n)
        ]
    else:
        residual = [len(adjacency[v]) for v in range(n)]

    keys = [loads[v] + residual[v] for v in range(n)]
    t = _BucketTracker(keys) if tracker == "bucket" else _HeapTracker(keys)

    new_loads = list(loads)
    alive = [True] * n
    order: list[int] = []
    charges: list[int] | None = [0] * g.m if record_charges else None

    remaining: Number = g.total_weight
    suffix_nums: list[Number] = [remaining]

    for step in range(n):
        u = t.pop_min()
        alive[u] = False
        order.append(u)
        if weighted:
            # Charge is re-summed in ascending edge-id order so weighted
            # loads accumulate reproducibly.
            increment: Number = sum(
                edges[eid][2] for nbr, eid in adjacency[u] if alive[nbr]
            )
        else:
            increment = residual[u]
        new_loads[u] = new_loads[u] + increment
        for nbr, eid in adjacency[u]:
            if alive[nbr]:
                w = edges[eid][2]
                residual[nbr] -= w
                t.update(nbr, t.key[nbr] - w)
                if charges is not None:
                    charges[eid] = 0 if u == edges[eid][0] else 1
        remaining -= increment
        if step < n - 1:
            suffix_nums.append(remaining)

    return order, suffix_nums, new_loads, charges


def _best_suffix(suffix_nums: Sequence[Number], n: int) -> int:
    """Index of the densest suffix; earliest (largest subgraph) wins ties.

    Cross-multiplied comparison: exact for integer numerators, and avoids
    dividing on the hot path either way.
    """
    best = 0
    for i in range(1, n):
        if suffix_nums[i] * (n - best) > suffix_nums[best] * (n - i):
            best = i
    return best


def _require_edges(g: Graph):
    if g.m == 0:
        raise EmptyGraphError("peeling requires at least one edge")


def peel_iteration(
    g: Graph,
    loads: LoadVector,
    *,
    tracker: str = "auto",
    record_charges: bool = False,
) -> PeelPass:
    """Run a single load-weighted peeling pass.

    Every removed vertex is charged its residual degree at removal time
    (weighted: residual weighted degree), so the pass distributes the whole
    edge mass exactly once across vertices.
    """
    _require_edges(g)
    if len(loads.loads) != g.n:
        raise ValueError("load vector length does not match the graph")
    kind = _resolve_tracker(g, tracker)
    order, nums, new_loads, charges = _peel_pass(g, loads.loads, kind, record_charges)
    best = _best_suffix(nums, g.n)
    trace = [DensityValue(nums[i], g.n - i) for i in range(g.n)]
    result = PeelResult(order, best, trace[best], trace)
    return PeelPass(result, LoadVector(new_loads, loads.iteration + 1), charges)


def greedy_peel(g: Graph, *, tracker: str = "auto") -> PeelResult:
    """Single greedy peel: always remove a minimum-residual-degree vertex.

    Returns the densest suffix subgraph of the removal order.  The result
    is deterministic (ties go to the smallest vertex id) and its density is
    at least half the optimum on non-negatively weighted graphs.
    """
    _require_edges(g)
    return peel_iteration(g, LoadVector.zeros(g.n, weighted=g.weighted),
                          tracker=tracker).result


def greedy_pp(
    g: Graph,
    iterations: int,
    *,
    tracker: str = "auto",
    target: DensityValue | None = None,
    record_charges: bool = False,
) -> GreedyPPResult:
    """Iterated peeling that carries per-vertex loads between passes.

    Pass ``i`` removes vertices by minimum ``load + residual degree`` and
    adds each removal charge to the vertex's load, so later passes peel
    historically overloaded regions first.  The first pass is exactly
    :func:`greedy_peel`; the running best subgraph only improves strictly.

    Args:
        iterations: number of passes to run (``T >= 1``).
        tracker: ``"bucket"``, ``"heap"``, or ``"auto"`` (buckets when
            unweighted, heap otherwise).
        target: optional density; stop early once the running best reaches
            it (used by benchmarks hunting a known threshold).
        record_charges: keep per-edge charge counts for reconstructing the
            averaged dual assignment (costs O(m) memory).

    Returns:
        A :class:`GreedyPPResult` with per-pass summaries, the best subset
        found, and the final loads (a scaled feasible dual point).
    """
    _require_edges(g)
    if iterations < 1:
        raise ValueError("iteration count must be >= 1")
    kind = _resolve_tracker(g, tracker)

    n = g.n
    loads: list[Number] = [0.0] * n if g.weighted else [0] * n
    counts: list[int] | None = [0] * g.m if record_charges else None

    best_density: DensityValue | None = None
    best_order: list[int] = []
    best_index = 0
    stats: list[IterationStats] = []
    completed = 0

    for i in range(1, iterations + 1):
        order, nums, loads, charges = _peel_pass(g, loads, kind, record_charges)
        completed = i
        if counts is not None and charges is not None:
            for eid, side in enumerate(charges):
                if side == 0:
                    counts[eid] += 1
        idx = _best_suffix(nums, n)
        pass_density = DensityValue(nums[idx], n - idx)
        if best_density is None or pass_density > best_density:
            best_density = pass_density
            best_order = order
            best_index = idx
        stats.append(IterationStats(i, pass_density, best_density, max(loads)))
        if target is not None and not (best_density < target):
            break

    assert best_density is not None
    return GreedyPPResult(
        iterations=completed,
        per_iteration=stats,
        best_density=best_density,
        final_loads=LoadVector(loads, completed),
        _best_order=best_order,
        _best_index=best_index,
        charge_counts=counts,
    )
