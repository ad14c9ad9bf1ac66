"""Maximum bipartite matching, incremental augmentation under edge
insertion, and Hall-cut witness extraction.

The static solver is Hopcroft-Karp (phased shortest augmenting paths,
O(E sqrt(V))). The incremental path used by process simulation maintains a
maximum matching across single-edge insertions with one alternating search
per insertion: inserting one edge raises the maximum matching size by at
most one, so one augmentation restores maximality.

All searches are deterministic: queues are seeded with exposed vertices in
ascending index order and adjacency is scanned in ascending edge-id order.
"""

from __future__ import annotations

import json
from bisect import insort
from collections import deque
from dataclasses import dataclass

from .graphs import BipartiteGraph, PartiteSet, Side

NONE = -1


@dataclass
class Matching:
    """A matching as a pair of mutually inverse partial maps."""

    mate_of_left: list[int]
    mate_of_right: list[int]

    @property
    def size(self) -> int:
        return sum(1 for m in self.mate_of_left if m != NONE)

    def pairs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in enumerate(self.mate_of_left) if v != NONE]

    def verify(self, g: BipartiteGraph) -> None:
        """Check the mutual-inverse and edge-membership invariants."""
        edge_set = set(g.edge_pairs())
        for u, v in enumerate(self.mate_of_left):
            if v != NONE:
                assert self.mate_of_right[v] == u, "mate maps disagree"
                assert (u, v) in edge_set, f"matched pair ({u},{v}) is not an edge"
        for v, u in enumerate(self.mate_of_right):
            if u != NONE:
                assert self.mate_of_left[u] == v, "mate maps disagree"


def _hopcroft_karp(n_left: int, n_right: int, adj: list[list[int]]) -> tuple[list[int], list[int]]:
    """Maximum matching on adjacency lists of right-indices; returns mates."""
    INF = float("inf")
    mate_l = [NONE] * n_left
    mate_r = [NONE] * n_right
    dist = [INF] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if mate_l[u] == NONE:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = mate_r[v]
                if w == NONE:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(root: int) -> bool:
        # iterative so deep augmenting paths cannot overflow the stack;
        # frames are [left vertex, next adjacency index, descent edge target]
        frames = [[root, 0, NONE]]
        while frames:
            fr = frames[-1]
            u = fr[0]
            descended = False
            while fr[1] < len(adj[u]):
                v = adj[u][fr[1]]
                fr[1] += 1
                w = mate_r[v]
                if w == NONE:
                    mate_l[u] = v
                    mate_r[v] = u
                    for d in range(len(frames) - 2, -1, -1):
                        pu, _, pv = frames[d]
                        mate_l[pu] = pv
                        mate_r[pv] = pu
                    return True
                if dist[w] == dist[u] + 1:
                    fr[2] = v
                    frames.append([w, 0, NONE])
                    descended = True
                    break
            if not descended:
                dist[u] = INF
                frames.pop()
        return False

    while bfs():
        for u in range(n_left):
            if mate_l[u] == NONE:
                dfs(u)
    return mate_l, mate_r


def max_matching(g: BipartiteGraph) -> Matching:
    """A maximum-cardinality matching of ``g`` (deterministic)."""
    adj = [[int(g.rights[e]) for e in g.adj_left[u]] for u in range(g.n_left)]
    mate_l, mate_r = _hopcroft_karp(g.n_left, g.n_right, adj)
    return Matching(mate_l, mate_r)


def has_perfect_matching(g: BipartiteGraph) -> bool:
    """True iff the graph is balanced and a matching covers every vertex."""
    if not g.is_balanced:
        return False
    return max_matching(g).size == g.n_left


@dataclass(frozen=True)
class HallWitness:
    """A certified Hall cut: S on the left with N(S) = T and |S| > |T|."""

    s: PartiteSet
    t: PartiteSet

    @property
    def deficiency(self) -> int:
        return self.s.size - self.t.size

    def verify(self, g: BipartiteGraph) -> None:
        assert self.s.side is Side.LEFT and self.t.side is Side.RIGHT
        assert self.s.size > self.t.size, "witness is not deficient"
        nbrs = g.neighbors(self.s)
        assert nbrs.mask & ~self.t.mask == 0, "N(S) not contained in T"

    def to_json(self) -> str:
        return json.dumps(
            {
                "S": list(self.s.indices()),
                "T": list(self.t.indices()),
                "deficiency": self.deficiency,
            },
            sort_keys=True,
        )


def extract_hall_witness(g: BipartiteGraph) -> HallWitness | None:
    """None iff the balanced graph has a perfect matching; otherwise the
    maximal-deficiency Hall cut given by alternating reachability from the
    exposed left vertices under a maximum matching.
    """
    if not g.is_balanced:
        raise ValueError("Hall witnesses are defined for balanced graphs")
    m = max_matching(g)
    if m.size == g.n_left:
        return None
    seen_l = [False] * g.n_left
    seen_r = [False] * g.n_right
    queue = deque(u for u in range(g.n_left) if m.mate_of_left[u] == NONE)
    for u in queue:
        seen_l[u] = True
    while queue:
        u = queue.popleft()
        for e in g.adj_left[u]:
            v = int(g.rights[e])
            if not seen_r[v]:
                seen_r[v] = True
                w = m.mate_of_right[v]
                # v is matched: an exposed v would complete an augmenting path
                if w != NONE and not seen_l[w]:
                    seen_l[w] = True
                    queue.append(w)
    witness = HallWitness(
        PartiteSet.from_indices(Side.LEFT, (u for u in range(g.n_left) if seen_l[u])),
        PartiteSet.from_indices(Side.RIGHT, (v for v in range(g.n_right) if seen_r[v])),
    )
    witness.verify(g)
    return witness


class MatchingState:
    """A growing edge view of a host graph plus a maximum matching of the view.

    Single-owner mutable; the maintained contract is that ``matching`` is
    maximum for the inserted view after every :meth:`insert`.
    """

    def __init__(self, g: BipartiteGraph):
        self.graph = g
        self.present = bytearray(g.n_edges)
        self.view_adj = [[] for _ in range(g.n_left)]  # edge ids, kept sorted
        self.mate_l = [NONE] * g.n_left
        self.mate_r = [NONE] * g.n_right
        self.size = 0
        self.n_inserted = 0

    @classmethod
    def from_prefix(cls, g: BipartiteGraph, edge_ids) -> "MatchingState":
        """State for a given view, with the matching computed in bulk."""
        st = cls(g)
        for e in edge_ids:
            e = int(e)
            if st.present[e]:
                raise ValueError(f"edge {e} inserted twice")
            st.present[e] = 1
            insort(st.view_adj[int(g.lefts[e])], e)
            st.n_inserted += 1
        adj = [[int(g.rights[e]) for e in st.view_adj[u]] for u in range(g.n_left)]
        st.mate_l, st.mate_r = _hopcroft_karp(g.n_left, g.n_right, adj)
        st.size = sum(1 for m in st.mate_l if m != NONE)
        return st

    @property
    def matching(self) -> Matching:
        return Matching(list(self.mate_l), list(self.mate_r))

    def exposed_left(self) -> list[int]:
        return [u for u in range(self.graph.n_left) if self.mate_l[u] == NONE]

    def insert(self, edge_id: int) -> bool:
        """Insert one host edge into the view; True iff the matching grew."""
        e = int(edge_id)
        if self.present[e]:
            raise ValueError(f"edge {e} already in the view")
        self.present[e] = 1
        self.n_inserted += 1
        g = self.graph
        u0 = int(g.lefts[e])
        insort(self.view_adj[u0], e)
        if self.size == g.n_left:
            return False
        return self._augment_once()

    def _augment_once(self) -> bool:
        """One BFS alternating search from every exposed left vertex; flip the
        first augmenting path discovered (scan order makes this deterministic).
        """
        g = self.graph
        mate_l, mate_r = self.mate_l, self.mate_r
        parent_edge = {}  # right index -> edge id it was first reached by
        queue = deque()
        for u in range(g.n_left):
            if mate_l[u] == NONE:
                queue.append(u)
        seen_l = set(queue)
        end = NONE
        while queue and end == NONE:
            u = queue.popleft()
            for e in self.view_adj[u]:
                v = int(g.rights[e])
                if v in parent_edge:
                    continue
                parent_edge[v] = e
                w = mate_r[v]
                if w == NONE:
                    end = v
                    break
                if w not in seen_l:
                    seen_l.add(w)
                    queue.append(w)
        if end == NONE:
            return False
        v = end
        while v != NONE:
            e = parent_edge[v]
            u = int(g.lefts[e])
            prev_v = mate_l[u]
            mate_l[u] = v
            mate_r[v] = u
            v = prev_v
        self.size += 1
        return True


def insert_edge_and_augment(state: MatchingState, edge_id: int) -> tuple[MatchingState, bool]:
    """Functional-style wrapper over :meth:`MatchingState.insert`."""
    grew = state.insert(edge_id)
    return state, grew
