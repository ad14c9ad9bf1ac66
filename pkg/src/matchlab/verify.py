"""Built-in oracle suite: cross-checks the fast paths against independent
brute-force computations on small random instances.

Each check returns (name, ok, detail); the CLI ``verify`` verb runs them all
and exits nonzero on any mismatch. The brute-force sides here are written
against raw edge lists, not against the library's own cut or matching code.
"""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple

from .cuts import Cut, check_regularity_identity
from .generators import complete_bipartite, random_regular_bipartite
from .graphs import BipartiteGraph, PartiteSet, Side
from .matching import MatchingState, has_perfect_matching, max_matching
from .process import EdgeWeights, slice_at
from .rng import RandomStream


class CheckResult(NamedTuple):
    name: str
    ok: bool
    detail: str


def _random_balanced_graph(rng: RandomStream, n_max: int = 6) -> BipartiteGraph:
    n = int(rng.integers(1, n_max + 1))
    p = float(rng.uniforms(1)[0])
    keep = rng.uniforms(n * n) <= p
    pairs = [(i, j) for idx, (i, j) in enumerate((a, b) for a in range(n) for b in range(n)) if keep[idx]]
    return BipartiteGraph(n, n, pairs)


def _brute_force_no_hall_cut(g: BipartiteGraph) -> bool:
    """Independent nested-loop scan of all subset pairs."""
    left = list(range(g.n_left))
    right = list(range(g.n_right))
    nbrs = [set() for _ in left]
    for u, v in zip(g.lefts, g.rights):
        nbrs[int(u)].add(int(v))
    for s_size in range(g.n_left + 1):
        for s in combinations(left, s_size):
            reach = set()
            for u in s:
                reach |= nbrs[u]
            for t_size in range(g.n_right + 1):
                if s_size <= t_size:
                    continue
                for t in combinations(right, t_size):
                    if reach <= set(t):
                        return False
    return True


def check_hall_oracle(rng: RandomStream, instances: int = 40) -> CheckResult:
    """has_perfect_matching must agree with 'no Hall cut exists' exactly."""
    for i in range(instances):
        g = _random_balanced_graph(rng.spawn(i), n_max=5)
        if has_perfect_matching(g) != _brute_force_no_hall_cut(g):
            return CheckResult("hall-oracle", False, f"mismatch on instance {i}: {g!r}")
    return CheckResult("hall-oracle", True, f"{instances} instances")


def check_incremental_matching(rng: RandomStream, instances: int = 15) -> CheckResult:
    """Incremental matching size must equal scratch recomputation per prefix."""
    for i in range(instances):
        sub = rng.spawn(i)
        n = int(sub.integers(2, 9))
        k = int(sub.integers(1, min(4, n) + 1))
        g = random_regular_bipartite(n, k, sub)
        order = sub.permutation(g.n_edges)
        state = MatchingState(g)
        prefix = []
        for e in order:
            state.insert(int(e))
            prefix.append((int(g.lefts[e]), int(g.rights[e])))
            scratch = max_matching(BipartiteGraph(g.n_left, g.n_right, prefix)).size
            if state.size != scratch:
                return CheckResult(
                    "incremental-matching",
                    False,
                    f"instance {i}: size {state.size} != scratch {scratch} at prefix {len(prefix)}",
                )
    return CheckResult("incremental-matching", True, f"{instances} instances")


def check_regularity(rng: RandomStream, instances: int = 20, cuts_per: int = 50) -> CheckResult:
    """The counting identity must hold for every cut of a regular graph."""
    for i in range(instances):
        sub = rng.spawn(i)
        n = int(sub.integers(2, 11))
        k = int(sub.integers(1, min(5, n) + 1))
        g = random_regular_bipartite(n, k, sub)
        for _ in range(cuts_per):
            cut = Cut(
                PartiteSet(Side.LEFT, int(sub.integers(0, 1 << n))),
                PartiteSet(Side.RIGHT, int(sub.integers(0, 1 << n))),
            )
            if not check_regularity_identity(g, k, cut):
                return CheckResult("regularity-identity", False, f"violated on instance {i}")
    return CheckResult("regularity-identity", True, f"{instances * cuts_per} cuts")


def check_coupling(rng: RandomStream, instances: int = 30) -> CheckResult:
    """Percolation slice must equal the matching prefix of the weight order."""
    for i in range(instances):
        sub = rng.spawn(i)
        n = int(sub.integers(2, 9))
        g = complete_bipartite(n)
        w = EdgeWeights(sub.uniforms(g.n_edges))
        p = float(sub.uniforms(1)[0])
        sliced = set(slice_at(g, w, p).edge_pairs())
        t = int((w.values <= p).sum())
        prefix = {
            (int(g.lefts[e]), int(g.rights[e])) for e in w.order()[:t]
        }
        if sliced != prefix:
            return CheckResult("coupling-prefix", False, f"instance {i}: slice != prefix")
    return CheckResult("coupling-prefix", True, f"{instances} instances")


def run_all(seed: int) -> list[CheckResult]:
    rng = RandomStream(seed)
    return [
        check_hall_oracle(rng.spawn(1)),
        check_incremental_matching(rng.spawn(2)),
        check_regularity(rng.spawn(3)),
        check_coupling(rng.spawn(4)),
    ]
