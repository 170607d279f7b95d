"""Multiplicative-weights solver for the load-balancing dual.

The minimum achievable maximum vertex load equals the optimum density, and
can be written as a max-min game: an adversary picks a distribution ``x``
over vertices, the responder routes each edge entirely to whichever
endpoint has the smaller ``x`` (an O(m) oracle whose answer is a 0/1
assignment).  Multiplicative weight updates on ``x`` drive the averaged
responder assignment toward feasible near-optimal loads: after enough
rounds its maximum load is within a ``(1 + eps)`` factor of the optimum.

Every round's oracle value lower-bounds the optimum, and the running
average assignment's maximum load upper-bounds it, so the solver can stop
early the moment those two self-certify the requested accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import EmptyGraphError, Graph
from .duality import DualAssignment

DEFAULT_GROWTH_CONSTANT = 8


@dataclass
class MwuState:
    """Mutable solver state across rounds.

    ``weights`` are the positive per-vertex multiplicative weights (the
    played distribution is ``weights / weights.sum()``); ``choice_counts``
    tracks, per edge, how many rounds sent it to its smaller endpoint, and
    ``load_sum`` accumulates each round's 0/1-assignment vertex loads.
    """

    weights: np.ndarray
    eta: float
    rounds: int = 0
    value_sum: float = 0.0
    choice_counts: np.ndarray | None = None
    load_sum: np.ndarray | None = None

    @property
    def x(self) -> np.ndarray:
        return self.weights / self.weights.sum()


@dataclass(frozen=True)
class MwuResult:
    """Outcome of a multiplicative-weights run.

    ``value`` is the average oracle value over rounds (a lower estimate of
    the optimum density); ``dual_bound`` is the maximum load of the
    averaged assignment, a genuine upper bound on the optimum.
    ``certified`` reports whether the run stopped because
    ``dual_bound <= (1 + eps) * value`` held, which proves the bound is
    within ``(1 + eps)`` of optimal.
    """

    value: float
    assignment: DualAssignment
    iterations: int
    iteration_bound: int
    dual_bound: float
    max_round_value: float
    eta: float
    certified: bool


def _edge_arrays(g: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    us = np.fromiter((e[0] for e in g.edges), dtype=np.int64, count=g.m)
    vs = np.fromiter((e[1] for e in g.edges), dtype=np.int64, count=g.m)
    ws = np.fromiter((e[2] for e in g.edges), dtype=np.float64, count=g.m)
    return us, vs, ws


def _oracle_kernel(
    x: np.ndarray, us: np.ndarray, vs: np.ndarray, ws: np.ndarray, n: int
) -> tuple[np.ndarray, np.ndarray, float]:
    """Route each edge to its smaller-x endpoint (ties to the smaller id)."""
    xu = x[us]
    xv = x[vs]
    take_u = xu <= xv  # us < vs, so equality keeps the smaller id
    winners = np.where(take_u, us, vs)
    loads = np.bincount(winners, weights=ws, minlength=n)
    value = float(np.minimum(xu, xv) @ ws)
    return take_u, loads, value


def oracle_min(g: Graph, x) -> tuple[DualAssignment, float]:
    """Best response to a vertex distribution: the cheapest edge routing.

    Sends each edge's full unit to the endpoint with the smaller ``x``
    entry (smaller id on ties) and returns the resulting 0/1 assignment
    together with its cost ``sum_e w_e * min(x_u, x_v)``.  The cost never
    exceeds the optimum density when ``x`` lies in the simplex.

    Raises:
        ValueError: if ``x`` has negative entries or the wrong length.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (g.n,):
        raise ValueError(f"x must have {g.n} entries")
    if (x < 0).any():
        raise ValueError("x must be non-negative")
    us, vs, ws = _edge_arrays(g)
    take_u, _, value = _oracle_kernel(x, us, vs, ws, g.n)
    values = np.empty((g.m, 2), dtype=np.float64)
    values[:, 0] = take_u
    values[:, 1] = ~take_u
    return DualAssignment.from_edge_values(g, values), value


def iteration_bound(g: Graph, eps: float, constant: int = DEFAULT_GROWTH_CONSTANT) -> int:
    """Round budget ``ceil(constant * width * ln(n) / eps^2)``.

    The width is the maximum (weighted) degree: the most load one oracle
    response can place on a single vertex.
    """
    width = float(g.max_weighted_degree())
    return max(1, math.ceil(constant * width * math.log(g.n) / (eps * eps)))


def mwu_solve(
    g: Graph,
    eps: float,
    max_iters: int | None = None,
    *,
    growth_constant: int = DEFAULT_GROWTH_CONSTANT,
    renormalize_every: int = 64,
) -> MwuResult:
    """Approximate the optimum density from the dual side.

    Runs multiplicative weight updates with step size
    ``eta = eps / (2 * width)`` for at most
    ``min(max_iters, iteration_bound(g, eps, growth_constant))`` rounds,
    stopping early once the averaged assignment self-certifies a
    ``(1 + eps)`` factor.  Weights are renormalized periodically so the
    exponential growth cannot overflow.

    Raises:
        ValueError: for ``eps`` outside (0, 1) or negative edge weights.
        EmptyGraphError: when the graph has no edges.
    """
    if g.m == 0:
        raise EmptyGraphError("the dual solver requires at least one edge")
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie strictly between 0 and 1")
    if g.signed:
        raise ValueError("negative weights: the dual formulation does not apply")
    if max_iters is not None and max_iters < 1:
        raise ValueError("max_iters must be >= 1 when given")

    n, m = g.n, g.m
    us, vs, ws = _edge_arrays(g)
    width = float(g.max_weighted_degree())
    eta = eps / (2.0 * width)
    bound = iteration_bound(g, eps, growth_constant)
    total = bound if max_iters is None else min(max_iters, bound)

    state = MwuState(
        weights=np.ones(n, dtype=np.float64),
        eta=eta,
        choice_counts=np.zeros(m, dtype=np.int64),
        load_sum=np.zeros(n, dtype=np.float64),
    )
    max_round_value = -math.inf
    certified = False

    for t in range(1, total + 1):
        x = state.weights / state.weights.sum()
        take_u, loads, value = _oracle_kernel(x, us, vs, ws, n)
        state.rounds = t
        state.value_sum += value
        if value > max_round_value:
            max_round_value = value
        state.choice_counts += take_u
        state.load_sum += loads
        state.weights *= 1.0 + eta * loads
        if t % renormalize_every == 0:
            state.weights /= state.weights.max()
        lower = state.value_sum / t
        upper = float(state.load_sum.max()) / t
        if upper <= (1.0 + eps) * lower:
            certified = True
            break

    t = state.rounds
    values = np.empty((m, 2), dtype=np.float64)
    values[:, 0] = state.choice_counts / t
    values[:, 1] = 1.0 - values[:, 0]
    assignment = DualAssignment.from_edge_values(g, values)
    return MwuResult(
        value=state.value_sum / t,
        assignment=assignment,
        iterations=t,
        iteration_bound=bound,
        dual_bound=assignment.max_load,
        max_round_value=max_round_value,
        eta=eta,
        certified=certified,
    )
