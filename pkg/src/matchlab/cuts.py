"""Exact cut analysis on small graphs: Hall cuts, cross/parallel edge
statistics, the regular-graph counting identity, internal cuts, the
symmetric-difference metric, closeness classes, class intersection, and the
atom refinement process.

Everything here is brute force by design: cut enumeration is capped at 24
vertices total, and class structure is recomputed exactly rather than
approximated. The asymptotic dichotomy that makes closeness a transitive
relation in large dense graphs can fail at this scale, so classes are
defined as connected components of the closeness graph (always an
equivalence relation, and identical to the radius relation whenever the
dichotomy holds). The atom process may stall at this scale; it runs under a
step budget and reports exhaustion instead of asserting termination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .graphs import BipartiteGraph, PartiteSet, Side, nearest_int
from .rng import RandomStream

ENUMERATION_CAP = 24  # max n_left + n_right for exhaustive cut enumeration


class ProcessBudgetError(RuntimeError):
    """The atom process exceeded its step budget without reaching an atom."""

    def __init__(self, message: str, steps: int):
        super().__init__(message)
        self.steps = steps


@dataclass(frozen=True)
class Cut:
    """A cut (S, T): a left subset paired with a right subset."""

    s: PartiteSet
    t: PartiteSet

    def __post_init__(self):
        if self.s.side is not Side.LEFT or self.t.side is not Side.RIGHT:
            raise ValueError("a cut is (S on the left, T on the right)")

    @classmethod
    def from_masks(cls, s_mask: int, t_mask: int) -> "Cut":
        return cls(PartiteSet(Side.LEFT, s_mask), PartiteSet(Side.RIGHT, t_mask))

    @property
    def key(self) -> tuple[int, int]:
        """Canonical (bitmask) sort key."""
        return (self.s.mask, self.t.mask)

    @property
    def is_empty(self) -> bool:
        return self.s.mask == 0 and self.t.mask == 0

    def intersection(self, other: "Cut") -> "Cut":
        return Cut(self.s.intersection(other.s), self.t.intersection(other.t))

    def complement_in(self, g: BipartiteGraph) -> "Cut":
        return Cut(g.part_complement(self.s), g.part_complement(self.t))


@dataclass(frozen=True)
class CutStats:
    """Edge statistics of a graph relative to a cut.

    ``outgoing`` counts edges from S to the right complement of T,
    ``incoming`` those from the left complement of S into T; together they
    are the cross edges (exactly one endpoint inside S union T), and
    everything else is parallel.
    """

    outgoing: int
    incoming: int
    cross_total: int
    parallel_total: int
    cross_degree_left: np.ndarray
    cross_degree_right: np.ndarray
    parallel_degree_left: np.ndarray
    parallel_degree_right: np.ndarray


def cut_stats(g: BipartiteGraph, cut: Cut) -> CutStats:
    in_s = cut.s.to_bool_array(g.n_left)[g.lefts] if g.n_edges else np.zeros(0, bool)
    in_t = cut.t.to_bool_array(g.n_right)[g.rights] if g.n_edges else np.zeros(0, bool)
    outgoing = int((in_s & ~in_t).sum())
    incoming = int((~in_s & in_t).sum())
    cross_mask = in_s ^ in_t
    cross_left = np.bincount(g.lefts[cross_mask], minlength=g.n_left).astype(np.int64)
    cross_right = np.bincount(g.rights[cross_mask], minlength=g.n_right).astype(np.int64)
    cross_total = outgoing + incoming
    return CutStats(
        outgoing=outgoing,
        incoming=incoming,
        cross_total=cross_total,
        parallel_total=g.n_edges - cross_total,
        cross_degree_left=cross_left,
        cross_degree_right=cross_right,
        parallel_degree_left=g.left_degrees - cross_left,
        parallel_degree_right=g.right_degrees - cross_right,
    )


def cross_total(g: BipartiteGraph, cut: Cut) -> int:
    """Number of cross edges only (cheaper than full stats)."""
    if g.n_edges == 0:
        return 0
    in_s = cut.s.to_bool_array(g.n_left)[g.lefts]
    in_t = cut.t.to_bool_array(g.n_right)[g.rights]
    return int((in_s ^ in_t).sum())


def check_regularity_identity(g: BipartiteGraph, k: int, cut: Cut) -> bool:
    """Degree counting forces e(S, T^c) = k(|S| - |T|) + e(S^c, T) in any
    k-regular graph; returns whether this cut satisfies it (it must)."""
    if not g.is_k_regular(k):
        raise ValueError(f"graph is not {k}-regular")
    st = cut_stats(g, cut)
    return st.outgoing == k * (cut.s.size - cut.t.size) + st.incoming


def hall_probability_bound(cross: int, p: float) -> float:
    """Upper bound (1-p)^(C/2) on the chance a deficient cut survives as a
    Hall cut when each edge is retained with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0,1]")
    return (1.0 - p) ** (cross / 2.0)


def is_hall_cut(g: BipartiteGraph, cut: Cut) -> bool:
    """|S| > |T| and N(S) contained in T."""
    if cut.s.size <= cut.t.size:
        return False
    return g.neighbors(cut.s).mask & ~cut.t.mask == 0


def cut_distance(a: Cut, b: Cut) -> int:
    """Symmetric-difference metric |S1^S2| + |T1^T2|."""
    return (a.s.mask ^ b.s.mask).bit_count() + (a.t.mask ^ b.t.mask).bit_count()


def internality_bound(n: int, k: int, c: float) -> float:
    """The cross-edge budget 4cnk/log(n) of a c-internal cut (kept real)."""
    if n < 2:
        raise ValueError("internality needs n >= 2 (log n must be positive)")
    return 4.0 * c * n * k / math.log(n)


def is_internal(stats: CutStats, n: int, k: int, c: float) -> bool:
    """A cut is c-internal when it has at most 4cnk/log(n) cross edges."""
    return stats.cross_total <= internality_bound(n, k, c)


def enumerate_cuts(
    g: BipartiteGraph, predicate: Optional[Callable[[Cut], bool]] = None
) -> list[Cut]:
    """All cuts of ``g`` passing the predicate, in canonical bitmask order."""
    if g.n_vertices > ENUMERATION_CAP:
        raise ValueError(
            f"cut enumeration capped at {ENUMERATION_CAP} vertices, graph has {g.n_vertices}"
        )
    out = []
    for s_mask in range(1 << g.n_left):
        for t_mask in range(1 << g.n_right):
            cut = Cut.from_masks(s_mask, t_mask)
            if predicate is None or predicate(cut):
                out.append(cut)
    return out


def gamma_set(
    g: BipartiteGraph,
    cut: Cut,
    threshold: float | None = None,
    k: int | None = None,
    gamma_exponent: float = 0.05,
) -> tuple[PartiteSet, PartiteSet]:
    """Vertices (on both sides) whose cross degree is at least threshold*k.

    ``threshold`` defaults to n^(-gamma_exponent) with n the left part size.
    """
    if threshold is None:
        threshold = float(g.n_left) ** (-gamma_exponent)
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    if k is None:
        k = _infer_k(g)
    st = cut_stats(g, cut)
    bar = threshold * k
    left = PartiteSet.from_indices(
        Side.LEFT, (int(i) for i in np.nonzero(st.cross_degree_left >= bar)[0])
    )
    right = PartiteSet.from_indices(
        Side.RIGHT, (int(i) for i in np.nonzero(st.cross_degree_right >= bar)[0])
    )
    return left, right


# -- diagnostics ---------------------------------------------------------------


def epsilon_parameter(n: int, k: int) -> float:
    """The density slack n / (k * log(n)^(1/3)); small when the graph is
    dense enough for the structure theory to bite."""
    if n < 2:
        raise ValueError("need n >= 2")
    return n / (k * math.log(n) ** (1.0 / 3.0))


def structure_count_scale(n: int, k: int) -> float:
    """The 2^(n/k) scale of the covering-family size (diagnostic only)."""
    return 2.0 ** (n / k)


def _infer_k(g: BipartiteGraph) -> int:
    k = g.regular_degree()
    if k is not None:
        return k
    return int(max(g.left_degrees.max(initial=0), g.right_degrees.max(initial=0), 1))


@dataclass(frozen=True)
class ThresholdConfig:
    """Explicit thresholds for the class machinery.

    ``c`` is the internality constant, ``closeness`` the equivalence radius
    (the asymptotic recipe is epsilon*k/100, which rounds to 0 at desk
    scale), and ``gamma_exponent`` the exponent in the high-cross-degree
    cutoff n^(-gamma_exponent)*k.
    """

    c: float = 1.0
    closeness: int = 0
    gamma_exponent: float = 0.05

    def __post_init__(self):
        if self.c <= 0 or self.gamma_exponent <= 0 or self.closeness < 0:
            raise ValueError("c and gamma_exponent must be positive, closeness >= 0")

    @classmethod
    def defaults(cls, n: int, k: int) -> "ThresholdConfig":
        """The asymptotic formulas evaluated at (n, k), radius floored at 0."""
        radius = max(0, nearest_int(epsilon_parameter(n, k) * k / 100.0))
        return cls(c=1.0, closeness=radius, gamma_exponent=0.05)


@dataclass(frozen=True)
class CutClass:
    """A closeness class of cuts: the members of one connected component of
    the closeness graph, with the canonically least member as representative
    and the internality budget it was classified at."""

    members: tuple[Cut, ...]
    representative: Cut
    budget: float = 1.0

    @property
    def is_trivial(self) -> bool:
        """Trivial means the class contains the empty cut (which is always
        internal, and is the canonical least cut)."""
        return self.representative.is_empty

    def __contains__(self, cut: Cut) -> bool:
        return cut in self.members


def closeness_classes(cuts: Iterable[Cut], radius: int, budget: float = 1.0) -> list[CutClass]:
    """Connected components of the graph on cuts with edges at distance <= radius.

    Components are returned in canonical order of their representatives.
    """
    cl = sorted(set(cuts), key=lambda c: c.key)
    parent = list(range(len(cl)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(cl)):
        for j in range(i + 1, len(cl)):
            if cut_distance(cl[i], cl[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[Cut]] = {}
    for i, cut in enumerate(cl):
        groups.setdefault(find(i), []).append(cut)
    classes = [
        CutClass(tuple(g_), g_[0], budget) for g_ in groups.values()
    ]  # each group is already key-sorted, so [0] is the least member
    classes.sort(key=lambda c: c.representative.key)
    return classes


class CutSpace:
    """Exhaustive cut/class workspace for one small balanced graph.

    Caches per-cut cross-edge counts and the class decomposition at every
    internality budget encountered, which keeps the atom process and the
    exhaustive acceptance checks tractable.
    """

    def __init__(self, g: BipartiteGraph, config: ThresholdConfig | None = None, k: int | None = None):
        if not g.is_balanced:
            raise ValueError("cut-class analysis expects a balanced graph")
        if g.n_left < 2:
            raise ValueError("need at least 2 vertices per side (log n > 0)")
        if g.n_vertices > ENUMERATION_CAP:
            raise ValueError("graph too large for exhaustive cut analysis")
        self.g = g
        self.n = g.n_left
        self.k = _infer_k(g) if k is None else k
        self.config = config or ThresholdConfig()
        self._cuts = enumerate_cuts(g)
        self._cross = {cut.key: cross_total(g, cut) for cut in self._cuts}
        self._classes: dict[float, list[CutClass]] = {}
        self._class_of: dict[tuple[float, tuple[int, int]], CutClass] = {}

    def cross(self, cut: Cut) -> int:
        got = self._cross.get(cut.key)
        return got if got is not None else cross_total(self.g, cut)

    def internal_cuts(self, c: float) -> list[Cut]:
        bound = internality_bound(self.n, self.k, c)
        return [cut for cut in self._cuts if self._cross[cut.key] <= bound]

    def classes(self, c: float) -> list[CutClass]:
        if c not in self._classes:
            cls = closeness_classes(self.internal_cuts(c), self.config.closeness, budget=c)
            self._classes[c] = cls
            for cc in cls:
                for member in cc.members:
                    self._class_of[(c, member.key)] = cc
        return self._classes[c]

    def class_of(self, cut: Cut, c: float) -> CutClass:
        self.classes(c)
        got = self._class_of.get((c, cut.key))
        if got is None:
            raise ValueError(f"cut {cut.key} is not {c}-internal here")
        return got

    def intersection(self, a: CutClass, b: CutClass) -> CutClass:
        """Class of the representatives' elementwise intersection, classified
        at the summed budget (a cross edge of the intersection is a cross
        edge of at least one operand, so the intersection is internal there).
        """
        budget = a.budget + b.budget
        return self.class_of(a.representative.intersection(b.representative), budget)

    def complement_class(self, a: CutClass) -> CutClass:
        # a cut and its complement have the same cross edges
        return self.class_of(a.representative.complement_in(self.g), a.budget)

    def disjoint(self, a: CutClass, b: CutClass) -> bool:
        return self.intersection(a, b).is_trivial

    def contains(self, outer: CutClass, inner: CutClass) -> bool:
        return self.intersection(self.complement_class(outer), inner).is_trivial

    def unit_classes(self) -> list[CutClass]:
        """The classes at the configured unit internality budget; the atom
        process intersects against these."""
        return self.classes(self.config.c)

    def atom_violation(self, cls: CutClass) -> CutClass | None:
        """First unit-budget class neither disjoint from nor containing
        ``cls`` (canonical order); None when ``cls`` is an atom."""
        for z in self.unit_classes():
            if not self.disjoint(z, cls) and not self.contains(z, cls):
                return z
        return None

    def is_atom(self, cls: CutClass) -> bool:
        return self.atom_violation(cls) is None

    def run_atom_process(
        self,
        start: CutClass,
        rng: RandomStream,
        step_budget: int | None = None,
    ) -> tuple[CutClass, int]:
        """Repeatedly intersect with a qualifying unit-budget class until none
        qualifies; the candidate scanned first at each step is randomized.

        Returns (atom, steps). Raises ProcessBudgetError past the budget
        (default 10n): the finite-scale process is not guaranteed to halt.
        """
        if start.is_trivial:
            raise ValueError("atom process must start from a non-trivial class")
        if step_budget is None:
            step_budget = 10 * self.n
        unit = self.unit_classes()
        current = start
        steps = 0
        while True:
            order = list(range(len(unit)))
            rng.shuffle(order)
            chosen = None
            for idx in order:
                z = unit[idx]
                if not self.disjoint(z, current) and not self.contains(z, current):
                    chosen = z
                    break
            if chosen is None:
                return current, steps
            if steps >= step_budget:
                raise ProcessBudgetError(
                    f"atom process did not stabilize within {step_budget} steps",
                    steps=steps,
                )
            current = self.intersection(current, chosen)
            steps += 1


def class_intersection(
    g: BipartiteGraph,
    a: CutClass,
    b: CutClass,
    config: ThresholdConfig | None = None,
    k: int | None = None,
) -> CutClass:
    """One-shot wrapper over :meth:`CutSpace.intersection`."""
    return CutSpace(g, config, k).intersection(a, b)


def run_atom_process(
    g: BipartiteGraph,
    config: ThresholdConfig,
    start: CutClass,
    rng: RandomStream,
    k: int | None = None,
    step_budget: int | None = None,
) -> tuple[CutClass, int]:
    """One-shot wrapper over :meth:`CutSpace.run_atom_process`."""
    return CutSpace(g, config, k).run_atom_process(start, rng, step_budget)


def intersection_well_defined(
    space: CutSpace, a: CutClass, b: CutClass
) -> bool:
    """Diagnostic: does the class intersection come out the same for every
    choice of representatives? Guaranteed asymptotically, can fail at desk
    scale; the operation itself is pinned to canonical representatives."""
    expected = space.intersection(a, b)
    budget = a.budget + b.budget
    for ca in a.members:
        for cb in b.members:
            if space.class_of(ca.intersection(cb), budget) is not expected:
                return False
    return True


def census_rows(g: BipartiteGraph, k: int | None = None):
    """Yield one row per cut: masks, edge statistics, Hall flag, internality
    at c=1. Requires a balanced graph with at least two vertices per side."""
    if not g.is_balanced or g.n_left < 2:
        raise ValueError("cut census expects a balanced graph with n >= 2")
    if k is None:
        k = _infer_k(g)
    bound = internality_bound(g.n_left, k, 1.0)
    for cut in enumerate_cuts(g):
        st = cut_stats(g, cut)
        yield {
            "S_mask": cut.s.mask,
            "T_mask": cut.t.mask,
            "outgoing": st.outgoing,
            "incoming": st.incoming,
            "cross_total": st.cross_total,
            "is_hall": int(is_hall_cut(g, cut)),
            "is_internal_c1": int(st.cross_total <= bound),
        }
