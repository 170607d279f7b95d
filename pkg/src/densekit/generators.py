"""Small deterministic graph constructors used by tests, demos, and benchmarks."""

from __future__ import annotations

import random
from itertools import combinations

from .graph import Graph


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(combinations(range(n), 2), n=n)


def complete_bipartite(left: int, right: int) -> Graph:
    """K_{left,right}: left side ids 0..left-1, right side follows."""
    edges = [(a, left + b) for a in range(left) for b in range(right)]
    return Graph.from_edges(edges, n=left + right)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(((i, i + 1) for i in range(n - 1)), n=n)


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(((i, (i + 1) % n) for i in range(n)), n=n)


def star_graph(leaves: int) -> Graph:
    """A center vertex 0 joined to ``leaves`` leaf vertices."""
    return Graph.from_edges(((0, i + 1) for i in range(leaves)), n=leaves + 1)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(outer + spokes + inner, n=10)


def disjoint_union(*graphs: Graph) -> Graph:
    """Disjoint union; vertex ids of later graphs are shifted up."""
    edges: list[tuple[int, int, object]] = []
    offset = 0
    weighted = any(g.weighted for g in graphs)
    for g in graphs:
        for u, v, w in g.edges:
            edges.append((u + offset, v + offset, w))
        offset += g.n
    return Graph.from_edges(edges, n=offset, weighted=weighted)


def bipartite_plus_cliques(
    left: int, right: int, num_cliques: int, clique_size: int | None = None
) -> Graph:
    """A complete bipartite core with disjoint clique decoys attached.

    The bipartite block K_{left,right} is the densest part, but each clique
    (default size ``left + 2``) has higher minimum degree, which is exactly
    what misleads plain greedy peeling.  Vertex ids: left side first, then
    the right side, then the cliques.
    """
    if clique_size is None:
        clique_size = left + 2
    parts = [complete_bipartite(left, right)]
    parts.extend(complete_graph(clique_size) for _ in range(num_cliques))
    return disjoint_union(*parts)


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with a seeded RNG; may contain isolated vertices or no edges."""
    rng = random.Random(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(edges, n=n)


def erdos_renyi_weighted(
    n: int, p: float, seed: int, *, integer: bool = True, max_weight: int = 9
) -> Graph:
    """G(n, p) with random positive weights (integers by default)."""
    rng = random.Random(seed)
    edges = []
    for u, v in combinations(range(n), 2):
        if rng.random() < p:
            if integer:
                w: object = rng.randint(1, max_weight)
            else:
                w = rng.uniform(0.1, float(max_weight))
            edges.append((u, v, w))
    return Graph.from_edges(edges, n=n, weighted=True)
