"""Immutable bipartite graphs with an indexed edge list, plus partite-set algebra.

Conventions used across the package:

* A graph has a Left part of size ``n_left`` and a Right part of size
  ``n_right``; "balanced" means the sizes agree, and ``n`` then refers to
  the size of one side (the graph has ``2n`` vertices).
* Edge ids are positions in the canonical edge list, which is construction
  order. All randomness over edges is expressed through explicit
  permutations or weights, never through storage order.
* Logarithms are natural throughout; real-valued parameters are rounded to
  the nearest integer (``nearest_int``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np


def nearest_int(x: float) -> int:
    """Round to the nearest integer, halves up (avoids banker's rounding)."""
    import math

    return int(math.floor(x + 0.5))


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def opposite(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


@dataclass(frozen=True)
class VertexRef:
    """A vertex addressed by its side of the bipartition and its index there."""

    side: Side
    index: int


@dataclass(frozen=True)
class Edge:
    """An edge of the host graph; ``id`` is its position in the canonical list."""

    left: int
    right: int
    id: int

    @property
    def left_ref(self) -> VertexRef:
        return VertexRef(Side.LEFT, self.left)

    @property
    def right_ref(self) -> VertexRef:
        return VertexRef(Side.RIGHT, self.right)


@dataclass(frozen=True)
class PartiteSet:
    """A set of vertices contained in one part, stored as a bit mask.

    Bit ``i`` of ``mask`` is set iff vertex ``i`` of ``side`` belongs to the
    set. The side tag is kept even for the empty set, so complements are
    unambiguous.
    """

    side: Side
    mask: int = 0

    @classmethod
    def from_indices(cls, side: Side, indices: Iterable[int]) -> "PartiteSet":
        m = 0
        for i in indices:
            m |= 1 << i
        return cls(side, m)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def __len__(self) -> int:
        return self.size

    def __contains__(self, index: int) -> bool:
        return bool((self.mask >> index) & 1)

    def indices(self) -> tuple[int, ...]:
        out = []
        m = self.mask
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return tuple(out)

    def union(self, other: "PartiteSet") -> "PartiteSet":
        self._check_side(other)
        return PartiteSet(self.side, self.mask | other.mask)

    def intersection(self, other: "PartiteSet") -> "PartiteSet":
        self._check_side(other)
        return PartiteSet(self.side, self.mask & other.mask)

    def difference(self, other: "PartiteSet") -> "PartiteSet":
        self._check_side(other)
        return PartiteSet(self.side, self.mask & ~other.mask)

    def _check_side(self, other: "PartiteSet") -> None:
        if self.side is not other.side:
            raise ValueError("partite sets live on different sides")

    def to_bool_array(self, side_size: int) -> np.ndarray:
        out = np.zeros(side_size, dtype=bool)
        for i in self.indices():
            out[i] = True
        return out


class BipartiteGraph:
    """A simple bipartite graph, immutable after construction.

    Edges are ``(u, v)`` pairs with ``u`` indexing the Left part and ``v``
    the Right part; the edge id is the position in the construction-order
    list. Parallel edges are rejected. Instances are safe to share across
    threads; none of the methods mutate.
    """

    __slots__ = (
        "n_left",
        "n_right",
        "lefts",
        "rights",
        "adj_left",
        "adj_right",
        "left_degrees",
        "right_degrees",
        "meta",
        "_nbr_masks",
        "_edge_cache",
    )

    def __init__(
        self,
        n_left: int,
        n_right: int,
        pairs: Iterable[tuple[int, int]],
        meta: Optional[dict] = None,
        validate: bool = True,
    ):
        if n_left < 0 or n_right < 0:
            raise ValueError("part sizes must be nonnegative")
        pair_list = list(pairs)
        lefts = np.fromiter((p[0] for p in pair_list), dtype=np.int64, count=len(pair_list))
        rights = np.fromiter((p[1] for p in pair_list), dtype=np.int64, count=len(pair_list))
        if validate:
            if len(pair_list) and (
                lefts.min(initial=0) < 0
                or rights.min(initial=0) < 0
                or lefts.max(initial=-1) >= n_left
                or rights.max(initial=-1) >= n_right
            ):
                raise ValueError("edge endpoint out of range")
            if len(set(pair_list)) != len(pair_list):
                raise ValueError("duplicate edge in input (simple graphs only)")
        self.n_left = n_left
        self.n_right = n_right
        self.lefts = lefts
        self.rights = rights
        adj_left: list[list[int]] = [[] for _ in range(n_left)]
        adj_right: list[list[int]] = [[] for _ in range(n_right)]
        for eid, (u, v) in enumerate(pair_list):
            adj_left[u].append(eid)
            adj_right[v].append(eid)
        self.adj_left = adj_left
        self.adj_right = adj_right
        self.left_degrees = np.bincount(lefts, minlength=n_left).astype(np.int64)
        self.right_degrees = np.bincount(rights, minlength=n_right).astype(np.int64)
        self.meta = meta
        self._nbr_masks: dict[Side, list[int]] = {}
        self._edge_cache: Optional[list[Edge]] = None

    # -- basic queries ----------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.lefts)

    @property
    def n_vertices(self) -> int:
        return self.n_left + self.n_right

    @property
    def is_balanced(self) -> bool:
        return self.n_left == self.n_right

    def edge(self, eid: int) -> Edge:
        return Edge(int(self.lefts[eid]), int(self.rights[eid]), eid)

    @property
    def edges(self) -> list[Edge]:
        if self._edge_cache is None:
            self._edge_cache = [
                Edge(int(u), int(v), i)
                for i, (u, v) in enumerate(zip(self.lefts, self.rights))
            ]
        return self._edge_cache

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in zip(self.lefts, self.rights)]

    def degree(self, v: VertexRef) -> int:
        """Number of edges incident to ``v``."""
        degs = self.left_degrees if v.side is Side.LEFT else self.right_degrees
        if not 0 <= v.index < len(degs):
            raise ValueError(f"vertex index {v.index} out of range for {v.side}")
        return int(degs[v.index])

    def is_k_regular(self, k: int) -> bool:
        """True iff both parts have equal size and every degree equals ``k``."""
        if not self.is_balanced:
            return False
        return bool((self.left_degrees == k).all() and (self.right_degrees == k).all())

    def regular_degree(self) -> Optional[int]:
        """The common degree if the graph is regular and balanced, else None."""
        if not self.is_balanced or self.n_left == 0:
            return None
        k = int(self.left_degrees[0])
        return k if self.is_k_regular(k) else None

    def density(self) -> float:
        """k/n for a k-regular balanced graph (the process density parameter)."""
        k = self.regular_degree()
        if k is None:
            raise ValueError("density is defined for regular balanced graphs only")
        return k / self.n_left

    # -- partite-set algebra ----------------------------------------------

    def side_size(self, side: Side) -> int:
        return self.n_left if side is Side.LEFT else self.n_right

    def full_set(self, side: Side) -> PartiteSet:
        return PartiteSet(side, (1 << self.side_size(side)) - 1)

    def part_complement(self, a: PartiteSet) -> PartiteSet:
        """Complement of a partite set within its own part."""
        full = (1 << self.side_size(a.side)) - 1
        return PartiteSet(a.side, full & ~a.mask)

    def neighbor_masks(self, side: Side) -> list[int]:
        """Per-vertex neighborhood bit masks over the opposite side (cached)."""
        if side not in self._nbr_masks:
            size = self.side_size(side)
            masks = [0] * size
            if side is Side.LEFT:
                for u, v in zip(self.lefts, self.rights):
                    masks[u] |= 1 << int(v)
            else:
                for u, v in zip(self.lefts, self.rights):
                    masks[v] |= 1 << int(u)
            self._nbr_masks[side] = masks
        return self._nbr_masks[side]

    def neighbors(self, a: PartiteSet) -> PartiteSet:
        """N(a) on the opposite side (excludes ``a`` itself automatically)."""
        masks = self.neighbor_masks(a.side)
        out = 0
        for i in a.indices():
            out |= masks[i]
        return PartiteSet(a.side.opposite, out)

    # -- misc ---------------------------------------------------------------

    def __repr__(self) -> str:
        return (
            f"BipartiteGraph(n_left={self.n_left}, n_right={self.n_right}, "
            f"edges={self.n_edges})"
        )

    def same_edge_set(self, other: "BipartiteGraph") -> bool:
        return (
            self.n_left == other.n_left
            and self.n_right == other.n_right
            and set(self.edge_pairs()) == set(other.edge_pairs())
        )


def subgraph_from_edge_ids(g: BipartiteGraph, edge_ids: Iterable[int]) -> BipartiteGraph:
    """Spanning subgraph of ``g`` keeping the given host edge ids, in id order."""
    ids = sorted(int(i) for i in edge_ids)
    pairs = [(int(g.lefts[i]), int(g.rights[i])) for i in ids]
    return BipartiteGraph(g.n_left, g.n_right, pairs, validate=False)


# -- edge-list text format ---------------------------------------------------
#
#   bipartite <n_left> <n_right> <edge_count>
#   u v        (0-based; u on the left, v on the right)
#
# '#' starts a comment; blank lines are ignored.


def format_edge_list(g: BipartiteGraph, comment: str = "") -> str:
    lines = []
    if comment:
        for c in comment.splitlines():
            lines.append(f"# {c}")
    lines.append(f"bipartite {g.n_left} {g.n_right} {g.n_edges}")
    for u, v in zip(g.lefts, g.rights):
        lines.append(f"{int(u)} {int(v)}")
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> BipartiteGraph:
    header = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 4 or parts[0] != "bipartite":
                raise ValueError(f"line {lineno}: expected 'bipartite <n_left> <n_right> <edges>'")
            header = (int(parts[1]), int(parts[2]), int(parts[3]))
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v'")
        pairs.append((int(parts[0]), int(parts[1])))
    if header is None:
        raise ValueError("missing header line")
    n_left, n_right, n_edges = header
    if len(pairs) != n_edges:
        raise ValueError(f"header declares {n_edges} edges, file has {len(pairs)}")
    return BipartiteGraph(n_left, n_right, pairs, validate=True)


def save_graph(g: BipartiteGraph, path, comment: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g, comment))


def load_graph(path) -> BipartiteGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())
