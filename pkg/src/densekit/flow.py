"""Exact densest subgraph via binary search over a dual-feasibility network.

A candidate density ``D = p/q`` is feasible exactly when every edge can
split one unit of load between its endpoints without any vertex exceeding
``D``.  That test is a bipartite max-flow instance: source -> one node per
vertex (capacity ``D``) -> one node per incident edge -> sink (unit
demand).  Scaling all capacities by ``q`` keeps them integral, so the
whole search runs in exact arithmetic; the answer interval shrinks below
the minimum spacing ``1/(n(n-1))`` of distinct densities, at which point
the best cut-extracted subset is provably optimal.

The max-flow kernel is push-relabel with highest-label selection, the gap
heuristic, and periodic global relabeling, run to completion so the final
flow satisfies conservation everywhere.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

from .graph import DensityValue, EmptyGraphError, Graph, density
from .peeling import greedy_pp


class SignedGraphError(ValueError):
    """Exact solving refused: negative weights make the problem NP-hard."""


class WeightScaleError(ValueError):
    """Non-integer weights need an explicit scaling factor to become exact."""


class FlowNetwork:
    """Directed flow network with integer capacities.

    Arcs are stored as residual pairs (arc ``2k`` forward, ``2k + 1``
    reverse), so ``flow = original capacity - residual``.  ``max_flow``
    runs push-relabel to completion: afterwards every node except the
    source and sink conserves flow exactly, and the source side of a
    minimum cut is available from residual reachability.
    """

    def __init__(self, num_nodes: int, source: int, sink: int):
        if not (0 <= source < num_nodes and 0 <= sink < num_nodes):
            raise ValueError("source/sink out of range")
        if source == sink:
            raise ValueError("source and sink must differ")
        self.num_nodes = num_nodes
        self.source = source
        self.sink = sink
        self._to: list[int] = []
        self._res: list[int] = []
        self._adj: list[list[int]] = [[] for _ in range(num_nodes)]
        self._orig: list[tuple[int, int, int]] = []
        self._value: int | None = None

    def add_arc(self, u: int, v: int, capacity: int) -> int:
        """Add a directed arc; returns its index into :meth:`arcs`."""
        if self._value is not None:
            raise RuntimeError("cannot add arcs after max_flow has run")
        if not (0 <= u < self.num_nodes and 0 <= v < self.num_nodes):
            raise ValueError(f"arc ({u}, {v}) out of range")
        if u == v:
            raise ValueError("self-arcs are not supported")
        capacity = int(capacity)
        if capacity < 0:
            raise ValueError("capacity must be non-negative")
        aid = len(self._to)
        self._to.extend((v, u))
        self._res.extend((capacity, 0))
        self._adj[u].append(aid)
        self._adj[v].append(aid + 1)
        self._orig.append((u, v, capacity))
        return len(self._orig) - 1

    def arcs(self) -> list[tuple[int, int, int]]:
        """Original arcs as ``(u, v, capacity)`` tuples."""
        return list(self._orig)

    def arc_flow(self, index: int) -> int:
        u, v, cap = self._orig[index]
        return cap - self._res[2 * index]

    @property
    def value(self) -> int:
        if self._value is None:
            raise RuntimeError("run max_flow first")
        return self._value

    def node_balance(self, v: int) -> int:
        """Net flow into ``v`` minus flow out; zero everywhere but s/t."""
        balance = 0
        for k, (a, b, _) in enumerate(self._orig):
            f = self.arc_flow(k)
            if b == v:
                balance += f
            if a == v:
                balance -= f
        return balance

    def max_flow(self) -> int:
        """Compute the maximum s-t flow; idempotent after the first call."""
        if self._value is not None:
            return self._value

        n = self.num_nodes
        s, t = self.source, self.sink
        to, res, adj = self._to, self._res, self._adj

        height = [0] * n
        excess = [0] * n
        count = [0] * (2 * n + 1)  # nodes per height, for the gap heuristic
        cur = [0] * n
        limit = 2 * n

        buckets: list[list[int]] = [[] for _ in range(2 * n + 1)]
        highest = 0

        def activate(v: int):
            nonlocal highest
            if v != s and v != t and excess[v] > 0:
                h = height[v]
                buckets[h].append(v)
                if h > highest:
                    highest = h

        def _bfs_heights(root: int, dist: list[int]):
            dist[root] = 0
            queue = deque([root])
            while queue:
                x = queue.popleft()
                dx = dist[x] + 1
                for a in adj[x]:
                    y = to[a]
                    # Arc (a ^ 1) runs y -> x; usable if it has residual cap.
                    if dist[y] < 0 and res[a ^ 1] > 0:
                        dist[y] = dx
                        queue.append(y)

        def global_relabel():
            """Reset heights to exact residual distances (to t, else via s).

            Valid labelings are dominated by true distances, so this never
            lowers a height; buckets and gap counts are rebuilt.
            """
            nonlocal highest
            dist_t = [-1] * n
            dist_s = [-1] * n
            _bfs_heights(t, dist_t)
            _bfs_heights(s, dist_s)
            for v in range(n):
                if v == s:
                    height[v] = n
                elif dist_t[v] >= 0:
                    height[v] = dist_t[v]
                elif dist_s[v] >= 0:
                    height[v] = n + dist_s[v]
                else:
                    # No residual path anywhere relevant; park out of the way.
                    height[v] = limit
            for i in range(len(count)):
                count[i] = 0
            for v in range(n):
                count[height[v]] += 1
                cur[v] = 0
            for b in buckets:
                b.clear()
            highest = 0
            for v in range(n):
                activate(v)

        # Saturate the source's arcs, then take exact initial distances.
        height[s] = n
        for a in adj[s]:
            c = res[a]
            if c > 0:
                res[a] = 0
                res[a ^ 1] += c
                excess[to[a]] += c
                excess[s] -= c
        global_relabel()

        relabels = 0
        relabel_budget = max(n, 32)

        while highest >= 0:
            bucket = buckets[highest]
            if not bucket:
                highest -= 1
                continue
            v = bucket.pop()
            if v == s or v == t or excess[v] == 0 or height[v] != highest:
                continue  # stale entry

            # Discharge v: push along admissible arcs, relabel when stuck.
            while excess[v] > 0:
                if cur[v] == len(adj[v]):
                    # Relabel: lift to one above the lowest residual head.
                    old = height[v]
                    mh = -1
                    for a in adj[v]:
                        if res[a] > 0:
                            h = height[to[a]]
                            if mh < 0 or h < mh:
                                mh = h
                    assert mh >= 0, "positive excess but no residual arc"
                    count[old] -= 1
                    height[v] = mh + 1
                    count[mh + 1] += 1
                    cur[v] = 0
                    if height[v] > limit:
                        raise AssertionError("height exceeded 2n; invariant broken")
                    if count[old] == 0 and 0 < old < n:
                        # Gap: no node is left at `old`, so every height in
                        # (old, n) is cut off from the sink; lift those nodes
                        # past n and requeue any that still carry excess.
                        lifted_v = False
                        for u in range(n):
                            hu = height[u]
                            if old < hu < n:
                                count[hu] -= 1
                                height[u] = n + 1
                                count[n + 1] += 1
                                cur[u] = 0
                                activate(u)
                                if u == v:
                                    lifted_v = True
                        if lifted_v:
                            break  # v was requeued at its new height
                    relabels += 1
                    if relabels >= relabel_budget:
                        relabels = 0
                        global_relabel()  # requeues every excess node, v included
                        break
                else:
                    a = adj[v][cur[v]]
                    u = to[a]
                    if res[a] > 0 and height[v] == height[u] + 1:
                        amt = excess[v] if excess[v] < res[a] else res[a]
                        res[a] -= amt
                        res[a ^ 1] += amt
                        excess[v] -= amt
                        was_idle = excess[u] == 0
                        excess[u] += amt
                        if was_idle:
                            activate(u)
                        if res[a] == 0:
                            cur[v] += 1
                    else:
                        cur[v] += 1

        self._value = excess[t]
        return self._value

    def min_cut_source_side(self) -> frozenset[int]:
        """Nodes reachable from the source in the final residual network."""
        if self._value is None:
            self.max_flow()
        seen = [False] * self.num_nodes
        seen[self.source] = True
        queue = deque([self.source])
        while queue:
            x = queue.popleft()
            for a in self._adj[x]:
                y = self._to[a]
                if not seen[y] and self._res[a] > 0:
                    seen[y] = True
                    queue.append(y)
        return frozenset(v for v in range(self.num_nodes) if seen[v])

    def cut_capacity(self, source_side: Iterable[int]) -> int:
        side = set(source_side)
        return sum(c for u, v, c in self._orig if u in side and v not in side)


def max_flow(net: FlowNetwork) -> tuple[int, frozenset[int]]:
    """Run the solver; returns the flow value and a minimum cut's source side."""
    value = net.max_flow()
    return value, net.min_cut_source_side()


@dataclass(frozen=True)
class FeasibilityQuery:
    """Candidate density ``p/q`` in lowest terms, both positive."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be positive")
        g = gcd(self.p, self.q)
        if g > 1:
            object.__setattr__(self, "p", self.p // g)
            object.__setattr__(self, "q", self.q // g)

    @classmethod
    def from_fraction(cls, frac: Fraction) -> "FeasibilityQuery":
        return cls(frac.numerator, frac.denominator)

    @property
    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def _integer_weights(g: Graph) -> list[int]:
    if g.signed:
        raise SignedGraphError(
            "negative edge weights: exact solving is refused (NP-hard); "
            "the greedy solvers still apply"
        )
    if not g.weighted:
        return [1] * g.m
    weights = []
    for _, _, w in g.edges:
        if isinstance(w, int):
            weights.append(w)
        elif float(w).is_integer():
            weights.append(int(w))
        else:
            raise WeightScaleError(
                f"non-integer weight {w}; rescale first (see scale_to_integer)"
            )
    return weights


def scale_to_integer(g: Graph, factor: Union[int, float]) -> Graph:
    """Multiply all weights by ``factor`` and require the results integral.

    Densities of the scaled graph are ``factor`` times the original ones.
    Raises :class:`WeightScaleError` when some scaled weight is farther
    than 1e-9 from an integer.
    """
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    edges = []
    for u, v, w in g.edges:
        scaled = w * factor
        nearest = round(scaled)
        if abs(scaled - nearest) > 1e-9 * max(1.0, abs(scaled)):
            raise WeightScaleError(
                f"weight {w} * {factor} = {scaled} is not integral"
            )
        edges.append((u, v, int(nearest)))
    return Graph(g.n, edges, weighted=True, labels=g.labels)


# Node layout of feasibility networks: source, sink, vertices, then edges.
SOURCE_NODE = 0
SINK_NODE = 1
VERTEX_OFFSET = 2


def vertex_node(v: int) -> int:
    return VERTEX_OFFSET + v


def edge_node(g: Graph, eid: int) -> int:
    return VERTEX_OFFSET + g.n + eid


def build_feasibility_network(g: Graph, query: FeasibilityQuery) -> FlowNetwork:
    """Build the scaled load-assignment network for density ``p/q``.

    Arcs: source -> vertex with capacity ``p``; vertex -> incident edge and
    edge -> sink with capacity ``q * w_e``.  The density is feasible (i.e.
    at least the optimum) exactly when the max flow saturates every
    edge-to-sink arc, totalling ``q * total_weight``.
    """
    weights = _integer_weights(g)
    net = FlowNetwork(VERTEX_OFFSET + g.n + g.m, SOURCE_NODE, SINK_NODE)
    for v in range(g.n):
        net.add_arc(SOURCE_NODE, vertex_node(v), query.p)
    for eid, (u, v, _) in enumerate(g.edges):
        cap = query.q * weights[eid]
        net.add_arc(vertex_node(u), edge_node(g, eid), cap)
        net.add_arc(vertex_node(v), edge_node(g, eid), cap)
        net.add_arc(edge_node(g, eid), SINK_NODE, cap)
    return net


@dataclass(frozen=True)
class QueryOutcome:
    """Result of one feasibility probe at density ``query``."""

    query: FeasibilityQuery
    feasible: bool
    flow_value: int
    required: int
    network: FlowNetwork
    # Denser-than-query subset extracted from the cut when infeasible.
    subset: tuple[int, ...] | None


def run_feasibility_query(g: Graph, query: FeasibilityQuery) -> QueryOutcome:
    """Probe one candidate density; extract a denser subset when infeasible.

    When the flow falls short, the vertices on the sink side of a minimum
    cut induce a subgraph of density strictly above ``p/q``; that subset is
    returned and doubles as a new lower bound for the search.
    """
    weights = _integer_weights(g)
    required = query.q * sum(weights)
    net = build_feasibility_network(g, query)
    value = net.max_flow()
    if value > required:
        raise AssertionError("flow exceeded total demand; capacities are wrong")
    if value == required:
        return QueryOutcome(query, True, value, required, net, None)
    source_side = net.min_cut_source_side()
    subset = tuple(
        v for v in range(g.n) if vertex_node(v) not in source_side
    )
    return QueryOutcome(query, False, value, required, net, subset)


def exact_densest(
    g: Graph, *, seed_iterations: int = 2
) -> tuple[tuple[int, ...], DensityValue]:
    """Exact maximum-density subset for integer-weighted graphs.

    Binary search over candidate densities, seeded below by a short
    load-carrying peel run and above by the maximum degree.  Every probe
    uses exact integer capacities; the search stops once the remaining
    interval is narrower than ``1/(n(n-1))``, the minimum gap between
    distinct subgraph densities, which pins the best extracted subset as
    optimal.

    Raises:
        SignedGraphError: on negative weights.
        WeightScaleError: on fractional weights (rescale first).
        EmptyGraphError: when there are no edges.
    """
    if g.m == 0:
        raise EmptyGraphError("exact solver requires at least one edge")
    weights = _integer_weights(g)

    seeded = greedy_pp(g, seed_iterations, tracker="heap" if g.weighted else "auto")
    best_subset = seeded.best_subset
    lo = Fraction(int(seeded.best_density.numerator), seeded.best_density.denominator)

    if g.weighted:
        hi = Fraction(max(
            sum(weights[eid] for _, eid in g.adjacency[v]) for v in range(g.n)
        ))
    else:
        hi = Fraction(g.max_degree())

    gap = Fraction(1, g.n * (g.n - 1))
    while hi - lo >= gap:
        mid = (lo + hi) / 2
        outcome = run_feasibility_query(g, FeasibilityQuery.from_fraction(mid))
        if outcome.feasible:
            hi = mid
        else:
            assert outcome.subset, "infeasible query must yield a subset"
            found = density(g, outcome.subset)
            found_frac = Fraction(int(found.numerator), found.denominator)
            if found_frac <= mid:
                raise AssertionError(
                    "cut-extracted subset is not denser than the query"
                )
            lo = found_frac
            best_subset = tuple(sorted(outcome.subset))

    return best_subset, density(g, best_subset)


def to_dimacs(net: FlowNetwork, comment: str | None = None) -> str:
    """Render the network in DIMACS max-flow format (1-based node ids)."""
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"c {part}")
    arcs = net.arcs()
    lines.append(f"p max {net.num_nodes} {len(arcs)}")
    lines.append(f"n {net.source + 1} s")
    lines.append(f"n {net.sink + 1} t")
    for u, v, cap in arcs:
        lines.append(f"a {u + 1} {v + 1} {cap}")
    return "\n".join(lines) + "\n"
