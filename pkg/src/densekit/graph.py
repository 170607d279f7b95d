"""Undirected graph representation, edge-list parsing, and density arithmetic.

The graph type is deliberately minimal: dense integer vertex ids, a flat
edge list with ``u < v`` per edge, and an adjacency view of
``(neighbor, edge_id)`` pairs.  Construction validates simplicity (no
self-loops, no duplicate edges) so every solver downstream can assume it.
Instances are treated as immutable after construction and may be shared
freely across concurrently running solvers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import IO, Iterable, Iterator, Sequence, Union

import numpy as np

Label = Union[int, str]


class GraphError(ValueError):
    """Base class for graph construction/parsing problems."""


class GraphParseError(GraphError):
    """Malformed edge-list input; carries the offending 1-based line number."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class EmptyGraphError(GraphError):
    """Raised when an operation needs at least one edge (or vertex) and has none."""


class EmptySubsetError(GraphError):
    """Density of the empty vertex set is undefined."""


class OracleSizeError(GraphError):
    """Exhaustive enumeration refused: the instance exceeds the oracle guard."""


class DuplicateEdgeWarning(UserWarning):
    """A duplicate weighted edge was dropped (first occurrence kept)."""


@total_ordering
@dataclass(frozen=True, eq=False)
class DensityValue:
    """A ratio ``numerator / denominator`` kept in exact form when possible.

    For unweighted graphs the numerator is an integer edge count, so two
    densities compare exactly via cross-multiplication; float numerators
    (weighted graphs) compare with relative tolerance 1e-12.  This is what
    keeps best-subgraph tracking immune to float ties.
    """

    numerator: Union[int, float]
    denominator: int

    def __post_init__(self):
        num = self.numerator
        if isinstance(num, (bool, np.bool_)):
            raise TypeError("numerator must be numeric, not bool")
        if isinstance(num, (int, np.integer)):
            object.__setattr__(self, "numerator", int(num))
        else:
            object.__setattr__(self, "numerator", float(num))
        den = self.denominator
        if isinstance(den, np.integer):
            den = int(den)
            object.__setattr__(self, "denominator", den)
        if not isinstance(den, int) or den < 1:
            raise ValueError(f"denominator must be a positive integer, got {den!r}")

    @property
    def value(self) -> float:
        return self.numerator / self.denominator

    @property
    def exact(self) -> bool:
        return isinstance(self.numerator, int)

    def as_fraction(self) -> Fraction:
        if not self.exact:
            raise ValueError("density has a float numerator; no exact form")
        return Fraction(self.numerator, self.denominator)

    @staticmethod
    def _coerce(other) -> tuple[Union[int, float], int]:
        if isinstance(other, DensityValue):
            return other.numerator, other.denominator
        if isinstance(other, Fraction):
            return other.numerator, other.denominator
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return int(other), 1
        if isinstance(other, (float, np.floating)):
            return float(other), 1
        return NotImplemented, 0

    def _cmp(self, other) -> Union[int, None]:
        """Sign of self - other via cross-multiplication; None if incomparable."""
        num, den = self._coerce(other)
        if num is NotImplemented:
            return None
        lhs = self.numerator * den
        rhs = num * self.denominator
        if isinstance(lhs, int) and isinstance(rhs, int):
            return (lhs > rhs) - (lhs < rhs)
        if math.isclose(lhs, rhs, rel_tol=1e-12, abs_tol=0.0):
            return 0
        return 1 if lhs > rhs else -1

    def __eq__(self, other) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __repr__(self) -> str:
        return f"DensityValue({self.numerator}/{self.denominator} = {self.value:.6g})"


class Graph:
    """Immutable undirected simple graph with contiguous vertex ids.

    Attributes:
        n: vertex count; ids are exactly ``0 .. n-1``.
        m: edge count.
        edges: list of ``(u, v, w)`` with ``u < v``; ``w`` is the int 1 on
            unweighted graphs.
        adjacency: per-vertex list of ``(neighbor, edge_id)`` pairs, in
            ascending edge-id order.
        weighted: whether the graph carries explicit weights.
        signed: True when any weight is negative (greedy solvers still run;
            the exact solver refuses such inputs).
        labels: original input label per vertex id, for reporting.
    """

    __slots__ = ("n", "m", "edges", "adjacency", "weighted", "signed", "labels")

    def __init__(
        self,
        n: int,
        edges: Sequence[tuple],
        *,
        weighted: bool = False,
        labels: Sequence[Label] | None = None,
    ):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        if labels is not None and len(labels) != n:
            raise GraphError("labels must have one entry per vertex")

        norm: list[tuple[int, int, Union[int, float]]] = []
        seen: set[tuple[int, int]] = set()
        for entry in edges:
            if len(entry) == 2:
                u, v = entry
                w: Union[int, float] = 1
            else:
                u, v, w = entry
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            if not weighted and w != 1:
                raise GraphError("unweighted graphs must have all weights equal to 1")
            if not weighted:
                w = 1
            elif isinstance(w, (int, np.integer)) and not isinstance(w, bool):
                w = int(w)
            else:
                w = float(w)
            norm.append((u, v, w))

        self.n = n
        self.m = len(norm)
        self.edges = norm
        self.weighted = weighted
        self.signed = any(w < 0 for _, _, w in norm)
        self.labels = list(labels) if labels is not None else list(range(n))

        adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for eid, (u, v, _) in enumerate(norm):
            adjacency[u].append((v, eid))
            adjacency[v].append((u, eid))
        self.adjacency = adjacency

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple],
        *,
        n: int | None = None,
        weighted: bool = False,
    ) -> "Graph":
        """Build a graph from ``(u, v)`` or ``(u, v, w)`` tuples with int ids."""
        edges = list(edges)
        if n is None:
            n = 1 + max((max(e[0], e[1]) for e in edges), default=-1)
        return cls(n, edges, weighted=weighted)

    @property
    def total_weight(self) -> Union[int, float]:
        """Sum of all edge weights; equals ``m`` on unweighted graphs."""
        if not self.weighted:
            return self.m
        return sum(w for _, _, w in self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def weighted_degree(self, v: int) -> Union[int, float]:
        if not self.weighted:
            return len(self.adjacency[v])
        return sum(self.edges[eid][2] for _, eid in self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def max_weighted_degree(self) -> Union[int, float]:
        if not self.weighted:
            return self.max_degree()
        return max((self.weighted_degree(v) for v in range(self.n)), default=0)

    def subset_labels(self, subset: Iterable[int]) -> list[Label]:
        """Translate internal ids back to the original input labels."""
        return [self.labels[v] for v in subset]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.weighted == other.weighted
            and self.edges == other.edges
            and self.labels == other.labels
        )

    def __hash__(self):
        return hash((self.n, self.m, self.weighted))

    def __repr__(self) -> str:
        kind = "weighted" if self.weighted else "unweighted"
        if self.signed:
            kind = "signed " + kind
        return f"Graph(n={self.n}, m={self.m}, {kind})"


def _iter_lines(source: Union[str, IO, Iterable[str]]) -> Iterator[str]:
    if isinstance(source, str):
        return iter(source.splitlines())
    return iter(source)


def parse_edge_list(
    source: Union[str, IO, Iterable[str]],
    *,
    weighted: bool = False,
    comment_prefix: str = "#",
) -> Graph:
    """Parse a SNAP-style edge list into a cleaned simple undirected graph.

    Each non-comment, non-blank line holds ``u v`` (or ``u v w`` when
    ``weighted``) separated by arbitrary whitespace.  Labels may be any
    integers or strings; they are remapped to dense ids in first-occurrence
    order and retained for reporting.  Cleaning rules: self-loops are
    dropped, duplicate undirected edges collapse to the first occurrence
    (a warning is emitted for weighted duplicates, where information is
    lost), and direction is ignored.

    Raises:
        GraphParseError: on a malformed line (wrong token count or a
            non-numeric weight), with its line number.
        EmptyGraphError: if no edges survive cleaning.
    """
    label_ids: dict[Label, int] = {}
    labels: list[Label] = []

    def as_label(token: str) -> Label:
        try:
            return int(token)
        except ValueError:
            return token

    def vid(label: Label) -> int:
        if label not in label_ids:
            label_ids[label] = len(labels)
            labels.append(label)
        return label_ids[label]

    want = 3 if weighted else 2
    edge_weights: dict[tuple[int, int], Union[int, float]] = {}
    for lineno, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith(comment_prefix):
            continue
        tokens = line.split()
        if len(tokens) != want:
            raise GraphParseError(
                f"expected {want} tokens, found {len(tokens)}", lineno
            )
        lu = as_label(tokens[0])
        lv = as_label(tokens[1])
        if lu == lv:
            continue  # self-loop; dropped before ids are assigned
        u = vid(lu)
        v = vid(lv)
        if weighted:
            try:
                w: Union[int, float] = float(tokens[2])
            except ValueError:
                raise GraphParseError(f"bad weight {tokens[2]!r}", lineno) from None
        else:
            w = 1
        key = (u, v) if u < v else (v, u)
        if key in edge_weights:
            if weighted:
                warnings.warn(
                    f"duplicate edge {labels[key[0]]!r}-{labels[key[1]]!r}: "
                    "keeping first occurrence",
                    DuplicateEdgeWarning,
                    stacklevel=2,
                )
            continue
        edge_weights[key] = w

    if not edge_weights:
        raise EmptyGraphError("no edges remain after cleaning")

    edges = [(u, v, w) for (u, v), w in edge_weights.items()]
    return Graph(len(labels), edges, weighted=weighted, labels=labels)


def to_edge_list(g: Graph) -> str:
    """Serialize a graph back to edge-list text using its original labels."""
    lines = []
    for u, v, w in g.edges:
        if g.weighted:
            lines.append(f"{g.labels[u]} {g.labels[v]} {w}")
        else:
            lines.append(f"{g.labels[u]} {g.labels[v]}")
    return "\n".join(lines) + "\n"


def density(g: Graph, subset: Iterable[int]) -> DensityValue:
    """Degree density of a vertex subset: induced edge weight over subset size.

    Only edges with both endpoints inside the subset count.  The result is
    exact (integer numerator) on unweighted graphs.

    Raises:
        EmptySubsetError: for an empty subset.
        GraphError: for out-of-range vertex ids.
    """
    sset = set(subset)
    if not sset:
        raise EmptySubsetError("density of the empty set is undefined")
    for v in sset:
        if not (0 <= v < g.n):
            raise GraphError(f"vertex {v} out of range for n={g.n}")
    if g.weighted:
        total: Union[int, float] = 0.0
        for u, v, w in g.edges:
            if u in sset and v in sset:
                total += w
    else:
        total = sum(1 for u, v, _ in g.edges if u in sset and v in sset)
    return DensityValue(total, len(sset))


def _popcounts(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values).astype(np.int64)


def _induced_weight_table(g: Graph, n: int) -> np.ndarray:
    """Induced edge weight (or count) for every subset bitmask of [0, n).

    Peels one vertex at a time: ``e[S] = e[S \\ {v}] + w(v, S \\ {v})`` where
    ``v`` is the top-set bit, so each block of masks extends the previous ones.
    """
    size = 1 << n
    if g.weighted:
        table = np.zeros(size, dtype=np.float64)
        below: list[list[tuple[int, Union[int, float]]]] = [[] for _ in range(n)]
        for u, v, w in g.edges:
            below[v].append((u, w))  # u < v by normalization
        for v in range(n):
            block = np.s_[1 << v : 2 << v]
            rest = np.arange(1 << v, dtype=np.int64)
            acc = table[: 1 << v].copy()
            for u, w in below[v]:
                acc += w * ((rest >> u) & 1)
            table[block] = acc
    else:
        table = np.zeros(size, dtype=np.int64)
        below_mask = [0] * n
        for u, v, _ in g.edges:
            below_mask[v] |= 1 << u
        for v in range(n):
            block = np.s_[1 << v : 2 << v]
            rest = np.arange(1 << v, dtype=np.int64)
            table[block] = table[: 1 << v] + _popcounts(rest & below_mask[v])
    return table


def brute_force_densest(
    g: Graph, *, max_vertices: int = 24
) -> tuple[tuple[int, ...], DensityValue]:
    """Exhaustive densest-subset search; the independent oracle for testing.

    Enumerates all non-empty vertex subsets (time and memory grow as 2^n,
    which is why the guard exists) and returns a maximizer.  Ties break
    toward smaller cardinality, then the lexicographically smallest sorted
    vertex tuple.  On non-negative weights the returned value is the true
    optimum density.

    Raises:
        OracleSizeError: if ``g.n`` exceeds ``max_vertices``.
        EmptyGraphError: if the graph has no vertices.
    """
    if g.n > max_vertices:
        raise OracleSizeError(
            f"n={g.n} exceeds the enumeration guard ({max_vertices}); "
            "raise max_vertices explicitly to force it"
        )
    if g.n == 0:
        raise EmptyGraphError("no vertices to enumerate")

    n = g.n
    table = _induced_weight_table(g, n)
    sizes = _popcounts(np.arange(1 << n, dtype=np.int64))
    dens = table[1:] / sizes[1:]
    best = float(dens.max())
    slack = max(1e-9, abs(best) * 1e-9)
    candidates = (np.nonzero(dens >= best - slack)[0] + 1).tolist()

    def subset_of(mask: int) -> tuple[int, ...]:
        return tuple(v for v in range(n) if mask >> v & 1)

    if g.weighted:
        # Float values: group ties at relative tolerance 1e-12.
        exact_best = max(float(table[c]) / int(sizes[c]) for c in candidates)
        ties = [
            c
            for c in candidates
            if math.isclose(float(table[c]) / int(sizes[c]), exact_best, rel_tol=1e-12)
        ]
    else:
        frac_best = max(Fraction(int(table[c]), int(sizes[c])) for c in candidates)
        ties = [
            c for c in candidates if Fraction(int(table[c]), int(sizes[c])) == frac_best
        ]

    winner = min(ties, key=lambda c: (int(sizes[c]), subset_of(c)))
    subset = subset_of(winner)
    num = table[winner]
    return subset, DensityValue(float(num) if g.weighted else int(num), len(subset))
