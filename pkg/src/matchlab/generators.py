"""Graph families under study: complete bipartite graphs, random regular
bipartite graphs, and the resistor gadgets whose matching and isolation
thresholds separate.

A *k-resistor* between terminals x and y is K_{k,k} with one edge x'y'
removed and pendant edges xx', yy' added; any perfect matching of a spanning
subgraph must use both terminal edges. A *(k, ell, r)-series* chains ``ell``
K_{k,k} stages through r pass-through terminals per stage. Graphs built from
series gadgets carry layer metadata in ``graph.meta`` so the layer census in
:mod:`matchlab.experiments` can evaluate the matching necessary condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import BipartiteGraph, Side, VertexRef, load_graph, nearest_int
from .rng import RandomStream


class GenerationError(RuntimeError):
    """Random generation exhausted its attempt budget."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


@dataclass(frozen=True)
class Gadget:
    """A two-terminal gadget: a bipartite graph with designated terminals.

    All vertices except the terminals have the gadget's internal degree k;
    the terminal degrees depend on the construction (1 for a plain resistor,
    r for a series of resistors).
    """

    graph: BipartiteGraph
    terminal_x: VertexRef
    terminal_y: VertexRef
    k: int


@dataclass(frozen=True)
class SeriesParams:
    """Parameters of a series of resistors: stage size k, stage count ell,
    pass-through terminals per stage r."""

    k: int
    ell: int
    r: int

    def validate(self) -> None:
        if self.ell < 1:
            raise ValueError("ell must be >= 1")
        if not 1 <= self.r <= self.k:
            raise ValueError("need 1 <= r <= k")


def complete_bipartite(n: int) -> BipartiteGraph:
    """K_{n,n}: the n-regular bipartite graph with n^2 edges."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pairs = [(i, j) for i in range(n) for j in range(n)]
    return BipartiteGraph(n, n, pairs, validate=False)


# -- random regular graphs ----------------------------------------------------


def _repair_multiedges(rows: np.ndarray, rng: RandomStream, max_passes: int) -> bool:
    """Make the k superposed permutations pairwise collision-free by swapping.

    A collision is two rows sharing a value in the same column (a repeated
    edge). Colliding entries are swapped with a random column of the same
    row, as many passes as needed. Returns True once collision-free.
    """
    k, n = rows.shape
    for _ in range(max_passes):
        fixes = 0
        for i in range(n):
            seen: dict[int, int] = {}
            for j in range(k):
                v = int(rows[j, i])
                if v in seen:
                    i2 = int(rng.integers(0, n))
                    rows[j, i], rows[j, i2] = rows[j, i2], rows[j, i]
                    fixes += 1
                else:
                    seen[v] = j
        if fixes == 0:
            return True
    # final scan: the last pass may have ended clean
    for i in range(rows.shape[1]):
        col = rows[:, i]
        if len(set(col.tolist())) != len(col):
            return False
    return True


def random_regular_bipartite(
    n: int,
    k: int,
    rng: RandomStream,
    max_attempts: int = 100,
    max_repair_passes: int = 500,
) -> BipartiteGraph:
    """Random simple k-regular bipartite graph on n+n vertices.

    Superposes k uniformly random permutations of [n] and repairs repeated
    edges with random in-row swaps; an attempt that fails to become simple
    within the pass budget is discarded wholesale. The output is always
    simple and k-regular; the distribution is not exactly uniform.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if k == n:
        # the only simple n-regular graph on n+n vertices is K_{n,n}
        rows = np.stack([(np.arange(n) + j) % n for j in range(k)])
    else:
        rows = None
        for _ in range(max_attempts):
            cand = np.stack([rng.permutation(n) for _ in range(k)])
            if _repair_multiedges(cand, rng, max_repair_passes):
                rows = cand
                break
        if rows is None:
            raise GenerationError(
                f"could not build a simple {k}-regular graph on {n}+{n} vertices "
                f"after {max_attempts} attempts",
                attempts=max_attempts,
            )
    pairs = [(i, int(rows[j, i])) for j in range(k) for i in range(n)]
    g = BipartiteGraph(n, n, pairs, validate=True)
    assert g.is_k_regular(k)
    return g


# -- resistor gadgets ---------------------------------------------------------
#
# Layout conventions (deterministic; "special" vertices are index 0 of their
# stage): within each K_{k,k} stage, the left part holds the y-side vertices
# and the right part holds the x-side vertices, because terminal x (a left
# vertex) attaches to x-side vertices and terminal y (a right vertex) to
# y-side vertices.


def k_resistor(k: int) -> Gadget:
    """Resistor gadget on 2k+2 vertices; terminals have degree 1.

    Left part: x at index 0, then the k y-side vertices (y' first).
    Right part: y at index 0, then the k x-side vertices (x' first).
    Edges: xx', y'y, and the complete block minus x'y'.
    """
    if k < 2:
        raise ValueError("k must be >= 2 (k=1 would isolate x' after the removal)")
    pairs = [(0, 1), (1, 0)]
    pairs += [
        (1 + a, 1 + b) for a in range(k) for b in range(k) if not (a == 0 and b == 0)
    ]
    g = BipartiteGraph(k + 1, k + 1, pairs, validate=False)
    return Gadget(g, VertexRef(Side.LEFT, 0), VertexRef(Side.RIGHT, 0), k)


def parallel_resistor_graph(k: int) -> BipartiteGraph:
    """k distinct k-resistors in parallel between x and y: k-regular on
    2k^2+2 vertices.

    ``meta['resistor_terminal_edges']`` lists, per resistor, the ids of its
    two terminal edges (xx'_t, y'_t y).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    pairs: list[tuple[int, int]] = []
    terminal_edges = []
    for t in range(k):
        base = 1 + t * k  # first index of this resistor's block, both sides
        e_xx = len(pairs)
        pairs.append((0, base))
        e_yy = len(pairs)
        pairs.append((base, 0))
        terminal_edges.append((e_xx, e_yy))
        pairs += [
            (base + a, base + b)
            for a in range(k)
            for b in range(k)
            if not (a == 0 and b == 0)
        ]
    g = BipartiteGraph(
        1 + k * k,
        1 + k * k,
        pairs,
        meta={"resistor_terminal_edges": terminal_edges, "k": k},
        validate=False,
    )
    assert g.is_k_regular(k)
    return g


def _emit_series(
    pairs: list[tuple[int, int]],
    k: int,
    ell: int,
    r: int,
    left_base: int,
    right_base: int,
    x_left: int,
    y_right: int,
) -> list[tuple[int, ...]]:
    """Append one (k, ell, r)-series between x and y to ``pairs``.

    Stage i occupies left indices left_base+(i-1)k .. and right indices
    right_base+(i-1)k ..; stage terminals are the first r indices of each
    stage. Returns the ell+1 edge-id layers whose joint occupancy is
    necessary for a perfect matching (x-attachment, the ell-1 inter-stage
    links, y-attachment).
    """
    layers: list[list[int]] = [[] for _ in range(ell + 1)]
    for j in range(r):  # x x_1^j
        layers[0].append(len(pairs))
        pairs.append((x_left, right_base + j))
    for i in range(ell):
        sl = left_base + i * k  # y-side (left) block of stage i+1
        sr = right_base + i * k  # x-side (right) block of stage i+1
        for a in range(k):
            for b in range(k):
                if a == b and a < r:
                    continue  # removed x_i^j y_i^j
                pairs.append((sl + a, sr + b))
        if i + 1 < ell:
            for j in range(r):  # y_i^j x_{i+1}^j
                layers[i + 1].append(len(pairs))
                pairs.append((sl + j, sr + k + j))
    last = left_base + (ell - 1) * k
    for j in range(r):  # y_ell^j y
        layers[ell].append(len(pairs))
        pairs.append((last + j, y_right))
    return [tuple(layer) for layer in layers]


def series_of_resistors(params: SeriesParams) -> Gadget:
    """A single (k, ell, r)-series gadget on 2*k*ell + 2 vertices.

    Terminals x (left 0) and y (right 0) have degree r; every internal
    vertex has degree k. With ell=1, r=1 this is exactly the k-resistor.
    The gadget graph carries the same series-layer metadata as the full
    counterexample graphs.
    """
    params.validate()
    k, ell, r = params.k, params.ell, params.r
    pairs: list[tuple[int, int]] = []
    layers = _emit_series(pairs, k, ell, r, 1, 1, 0, 0)
    g = BipartiteGraph(
        1 + k * ell,
        1 + k * ell,
        pairs,
        meta={"series_layers": [layers], "series_r": [r], "ell": ell, "k": k},
        validate=False,
    )
    return Gadget(g, VertexRef(Side.LEFT, 0), VertexRef(Side.RIGHT, 0), k)


def series_counterexample_graph(
    k: int,
    series_count: int | None = None,
    ell: int | None = None,
    r: int | None = None,
) -> BipartiteGraph:
    """k-regular graph made of series-of-resistor gadgets joined at x and y.

    Defaults follow the asymptotic recipe with nearest-integer rounding:
    series_count = round(log k), ell = max(1, round(10 log log k)), and the
    per-series terminal counts r_j = floor(k / series_count) with the
    remainder spread one slot each over the first (k mod series_count)
    series, so that x and y end up exactly k-regular. Explicit overrides
    sidestep the rounding; with an explicit r, series_count * r must equal
    k. ``meta['series_layers']`` holds one list of ell+1 edge-id layers per
    series.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    s = nearest_int(math.log(k)) if series_count is None else int(series_count)
    if s < 1:
        raise ValueError(f"series_count must be >= 1, got {s}")
    if ell is None:
        ell = max(1, nearest_int(10 * math.log(math.log(k)))) if k > 2 else 1
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if r is None:
        base, rem = divmod(k, s)
        r_values = [base + 1 if j < rem else base for j in range(s)]
    else:
        if s * r != k:
            raise ValueError(
                f"terminals cannot be made {k}-regular: series_count*r = {s}*{r} "
                f"= {s * r} != k; adjust the overrides"
            )
        r_values = [r] * s
    for j, rj in enumerate(r_values):
        if not 1 <= rj <= k:
            raise ValueError(
                f"series {j} needs r={rj}, outside [1, k={k}]; "
                f"choose a different series_count"
            )
    pairs: list[tuple[int, int]] = []
    all_layers = []
    for j in range(s):
        base = 1 + j * k * ell
        all_layers.append(_emit_series(pairs, k, ell, r_values[j], base, base, 0, 0))
    g = BipartiteGraph(
        1 + s * k * ell,
        1 + s * k * ell,
        pairs,
        meta={
            "series_layers": all_layers,
            "series_r": r_values,
            "ell": ell,
            "k": k,
            "series_count": s,
        },
        validate=False,
    )
    assert g.is_k_regular(k), "terminal rounding failed to produce a regular graph"
    return g


# -- generator spec strings ---------------------------------------------------
#
#   knn:n=200                      complete bipartite K_{n,n}
#   rrb:n=200,k=12,seed=7          random regular bipartite
#   parres:k=30                    parallel resistor counterexample
#   serres:k=16,series=2,ell=3,r=8 series-of-resistors counterexample
#   file:PATH                      edge-list file


def from_spec(spec: str) -> BipartiteGraph:
    """Build the graph described by a generator spec string."""
    name, _, rest = spec.partition(":")
    name = name.strip()
    if name == "file":
        if not rest:
            raise ValueError("file: spec needs a path")
        return load_graph(rest)
    kwargs: dict[str, int] = {}
    if rest:
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"malformed spec item {item!r} in {spec!r}")
            kwargs[key.strip()] = int(val)
    def done():
        if kwargs:
            raise ValueError(f"unknown keys {sorted(kwargs)} in {spec!r}")

    try:
        if name == "knn":
            n = kwargs.pop("n")
            done()
            return complete_bipartite(n)
        if name == "rrb":
            n = kwargs.pop("n")
            k = kwargs.pop("k")
            seed = kwargs.pop("seed", 0)
            done()
            return random_regular_bipartite(n, k, RandomStream(seed))
        if name == "parres":
            k = kwargs.pop("k")
            done()
            return parallel_resistor_graph(k)
        if name == "serres":
            k = kwargs.pop("k")
            series = kwargs.pop("series", None)
            ell = kwargs.pop("ell", None)
            r = kwargs.pop("r", None)
            done()
            return series_counterexample_graph(k, series_count=series, ell=ell, r=r)
    except KeyError as exc:
        raise ValueError(f"spec {spec!r} is missing required key {exc}") from None
    raise ValueError(f"unknown generator {name!r} (try knn/rrb/parres/serres/file)")
