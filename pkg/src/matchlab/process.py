"""The random graph process and its percolation coupling.

One draw of independent uniform edge weights couples the whole family of
percolated subgraphs with the edge-by-edge reconstruction process: the
subgraph at retention probability p keeps exactly the edges of weight at
most p, and revealing edges in increasing weight order reproduces the
uniformly random process. Hitting times are extracted from a single pass:

* tau_I: first step at which no vertex is isolated,
* tau_M: first step at which the revealed graph has a perfect matching.

Ties between equal weights are broken by edge id so every trace is a total
order (reproducibility over measure-zero pedantry).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .graphs import BipartiteGraph, Side, VertexRef, subgraph_from_edge_ids
from .matching import MatchingState
from .rng import RandomStream


@dataclass(frozen=True)
class EdgeWeights:
    """Per-edge weights in [0,1], indexed by edge id."""

    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if len(v) and (v.min() < 0.0 or v.max() > 1.0):
            raise ValueError("weights must lie in [0,1]")

    def __len__(self) -> int:
        return len(self.values)

    def order(self) -> np.ndarray:
        """Edge ids in increasing weight order, ties broken by edge id."""
        return np.argsort(self.values, kind="stable")


def draw_weights(g: BipartiteGraph, rng: RandomStream) -> EdgeWeights:
    """Independent U[0,1] weight per edge; deterministic given the stream state."""
    return EdgeWeights(rng.uniforms(g.n_edges))


def slice_at(g: BipartiteGraph, w: EdgeWeights, p: float) -> BipartiteGraph:
    """The percolated subgraph keeping edges of weight <= p (same vertex set).

    Monotone in p: a lower threshold yields a subgraph of a higher one.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0,1]")
    ids = np.nonzero(w.values <= p)[0]
    return subgraph_from_edge_ids(g, ids)


def isolated_vertices(g: BipartiteGraph) -> list[VertexRef]:
    """All degree-zero vertices, left side first."""
    out = [VertexRef(Side.LEFT, int(i)) for i in np.nonzero(g.left_degrees == 0)[0]]
    out += [VertexRef(Side.RIGHT, int(i)) for i in np.nonzero(g.right_degrees == 0)[0]]
    return out


@dataclass(frozen=True)
class ProcessTrace:
    """One realized edge ordering with its two hitting times."""

    order: np.ndarray
    tau_I: int
    tau_M: int
    n_edges: int

    @property
    def equal(self) -> bool:
        return self.tau_I == self.tau_M

    def to_json(self, g: BipartiteGraph, seed: int | None = None, dump_order: bool = False) -> str:
        doc = {
            "n": g.n_left,
            "k": g.regular_degree(),
            "tau_I": self.tau_I,
            "tau_M": self.tau_M,
            "equal": self.equal,
            "seed": seed,
        }
        if dump_order:
            doc["order"] = [int(e) for e in self.order]
        return json.dumps(doc, sort_keys=True)


def _first_coverage_step(order_endpoints: np.ndarray, side_size: int) -> int:
    """0-based position after which every vertex of one side has appeared."""
    values, first = np.unique(order_endpoints, return_index=True)
    if len(values) != side_size:
        raise ValueError("graph has an isolated vertex, so no perfect matching")
    return int(first.max())


def hitting_times(g: BipartiteGraph, w: EdgeWeights) -> ProcessTrace:
    """Hitting times for "no isolated vertices" and "has a perfect matching".

    Works in one pass over the weight-sorted edge order: tau_I falls out of
    per-vertex first appearances; the matching is then computed in bulk on
    the prefix of length tau_I and grown one augmentation per insertion
    until perfect (a prefix matching is maximum regardless of how it was
    reached, so this equals the step-by-step reconstruction exactly).
    """
    if not g.is_balanced:
        raise ValueError(f"graph is unbalanced ({g.n_left} vs {g.n_right})")
    if len(w.values) != g.n_edges:
        raise ValueError("weight vector does not match the edge list")
    n = g.n_left
    if n == 0:
        return ProcessTrace(np.zeros(0, dtype=np.int64), 0, 0, 0)
    order = w.order()
    tau_i = 1 + max(
        _first_coverage_step(g.lefts[order], n),
        _first_coverage_step(g.rights[order], n),
    )
    state = MatchingState.from_prefix(g, order[:tau_i])
    tau_m = tau_i
    while state.size < n:
        if tau_m == g.n_edges:
            raise ValueError("graph has no perfect matching")
        state.insert(int(order[tau_m]))
        tau_m += 1
    assert tau_m >= tau_i
    return ProcessTrace(order, tau_i, tau_m, g.n_edges)


class ThresholdPair(NamedTuple):
    """The two percolation thresholds around log(n)/k, plus a validity flag.

    ``warned`` is True when the iterated logarithm log log log log n is
    undefined or non-positive at this n (the case for every desk-scale n);
    an undefined term is evaluated as 0, collapsing both thresholds to
    log(n)/k. Experiments should sweep explicit p values in that regime.
    """

    p1: float
    p2: float
    warned: bool


def p1_p2(n: int, k: int) -> ThresholdPair:
    """Threshold pair (log n -/+ log log log log n)/k, clamped to [0,1]."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    log_n = math.log(n)
    t = log_n
    defined = True
    for _ in range(3):
        if t <= 0:
            defined = False
            break
        t = math.log(t)
    if not defined:
        t = 0.0
    warned = (not defined) or t <= 0

    def clamp(x: float) -> float:
        return min(1.0, max(0.0, x))

    return ThresholdPair(clamp((log_n - t) / k), clamp((log_n + t) / k), warned)
