"""Seedable Monte Carlo experiments over graph processes and percolated
subgraphs, with Wilson confidence intervals.

Determinism contract: a trial's stream seed is derived from the master seed
and the trial/cell indices alone (see :mod:`matchlab.rng`), aggregation is
integer counting, and reports are emitted in trial order; so the outputs of
an experiment are bit-identical across reruns and across worker counts.

Sweeps default to *coupled* mode: one weight draw per trial is reused for
every retention probability, which reduces variance and makes empirical
curves of monotone events exactly monotone.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import generators
from .graphs import BipartiteGraph
from .cuts import Cut
from .matching import _hopcroft_karp
from .process import EdgeWeights, hitting_times
from .rng import RandomStream, derive_seed

Z_95 = 1.96  # fixed: Wilson score interval at the 95% level


def wilson_interval(successes: int, trials: int, z: float = Z_95) -> tuple[float, float]:
    """Wilson score interval; valid near 0 and 1 unlike the normal interval."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes out of range")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class ProportionEstimate:
    successes: int
    trials: int
    point: float
    ci_low: float
    ci_high: float
    ci_method: str = "wilson-1.96"

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> "ProportionEstimate":
        lo, hi = wilson_interval(successes, trials)
        return cls(successes, trials, successes / trials, lo, hi)


@dataclass(frozen=True)
class TrialReport:
    trial_index: int
    trial_seed: int
    tau_I: int
    tau_M: int

    @property
    def equal(self) -> bool:
        return self.tau_I == self.tau_M


@dataclass(frozen=True)
class ExperimentConfig:
    """A reproducible experiment: what graph, how many trials, which seed."""

    graph_spec: str
    trials: int
    master_seed: int
    p_values: tuple[float, ...] = ()
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for p in self.p_values:
            if not 0.0 <= p <= 1.0:
                raise ValueError("p values must lie in [0,1]")


@dataclass(frozen=True)
class EventSpec:
    """An exactly evaluable event on a percolated subgraph."""

    kind: str  # "perfect_matching" | "no_isolated" | "hall_cut"
    cut: Optional[Cut] = None

    def __post_init__(self):
        if self.kind not in ("perfect_matching", "no_isolated", "hall_cut"):
            raise ValueError(f"unknown event kind {self.kind!r}")
        if (self.kind == "hall_cut") != (self.cut is not None):
            raise ValueError("hall_cut events need a cut; others must not have one")

    @property
    def label(self) -> str:
        if self.kind == "hall_cut":
            return f"hall_cut[s={self.cut.s.mask:#x},t={self.cut.t.mask:#x}]"
        return self.kind


PERFECT_MATCHING = EventSpec("perfect_matching")
NO_ISOLATED = EventSpec("no_isolated")


def hall_cut_event(cut: Cut) -> EventSpec:
    return EventSpec("hall_cut", cut)


def evaluate_event(g: BipartiteGraph, present: np.ndarray, event: EventSpec) -> bool:
    """Evaluate an event exactly on the subgraph given by a present-edge mask."""
    if event.kind == "no_isolated":
        return isolated_count_in_slice(g, present) == 0
    if event.kind == "perfect_matching":
        if not g.is_balanced:
            return False
        adj: list[list[int]] = [[] for _ in range(g.n_left)]
        for e in np.nonzero(present)[0]:
            adj[int(g.lefts[e])].append(int(g.rights[e]))
        mate_l, _ = _hopcroft_karp(g.n_left, g.n_right, adj)
        return all(m != -1 for m in mate_l)
    # hall_cut: the slice keeps the same vertex set, so only the cut's
    # outgoing edges can break N(S) <= T
    cut = event.cut
    if cut.s.size <= cut.t.size:
        return False
    in_s = cut.s.to_bool_array(g.n_left)[g.lefts]
    in_t = cut.t.to_bool_array(g.n_right)[g.rights]
    return not bool((present & in_s & ~in_t).any())


def isolated_count_in_slice(g: BipartiteGraph, present: np.ndarray) -> int:
    """Number of vertices with no present incident edge."""
    left_touched = np.zeros(g.n_left, dtype=bool)
    right_touched = np.zeros(g.n_right, dtype=bool)
    left_touched[g.lefts[present]] = True
    right_touched[g.rights[present]] = True
    return int((~left_touched).sum() + (~right_touched).sum())


# -- layer census on series graphs --------------------------------------------


def necessary_condition_census(g: BipartiteGraph, present: np.ndarray) -> bool:
    """True iff some series of ``g`` has every one of its ell+1 terminal or
    inter-stage layers hit by a present edge. A perfect matching of the
    subgraph forces this condition, never the converse."""
    if not g.meta or "series_layers" not in g.meta:
        raise ValueError("graph carries no series layer metadata")
    for series in g.meta["series_layers"]:
        if all(any(present[e] for e in layer) for layer in series):
            return True
    return False


def series_condition_probability(g: BipartiteGraph, p: float) -> float:
    """Exact probability that the layer census passes at retention p: the
    layers are disjoint edge sets, so the per-layer hits are independent."""
    if not g.meta or "series_layers" not in g.meta:
        raise ValueError("graph carries no series layer metadata")
    miss_all = 1.0
    for series in g.meta["series_layers"]:
        q = 1.0
        for layer in series:
            q *= 1.0 - (1.0 - p) ** len(layer)
        miss_all *= 1.0 - q
    return 1.0 - miss_all


def parallel_condition_probability(k: int, p: float) -> float:
    """Exact probability that some resistor keeps both terminal edges: the
    necessary condition for a perfect matching in the parallel-resistor graph."""
    return 1.0 - (1.0 - p * p) ** k


# -- trial execution -----------------------------------------------------------

_GRAPH_CACHE: dict[str, BipartiteGraph] = {}


def _graph_for(spec: str) -> BipartiteGraph:
    g = _GRAPH_CACHE.get(spec)
    if g is None:
        g = generators.from_spec(spec)
        _GRAPH_CACHE[spec] = g
    return g


def _hitting_trial(args: tuple[str, int]) -> tuple[int, int]:
    spec, seed = args
    g = _graph_for(spec)
    w = EdgeWeights(RandomStream(seed).uniforms(g.n_edges))
    trace = hitting_times(g, w)
    return trace.tau_I, trace.tau_M


def _event_trial(args: tuple[str, int, float, EventSpec]) -> bool:
    spec, seed, p, event = args
    g = _graph_for(spec)
    present = RandomStream(seed).uniforms(g.n_edges) <= p
    return evaluate_event(g, present, event)


def _sweep_trial(args: tuple[str, int, tuple[float, ...], EventSpec]) -> tuple[bool, ...]:
    spec, seed, p_values, event = args
    g = _graph_for(spec)
    weights = RandomStream(seed).uniforms(g.n_edges)
    return tuple(evaluate_event(g, weights <= p, event) for p in p_values)


def _map_trials(fn, payloads, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in payloads]
    chunk = max(1, len(payloads) // (jobs * 8))
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, payloads, chunksize=chunk))


class ExperimentError(RuntimeError):
    pass


def estimate_hitting_equality(
    config: ExperimentConfig, jobs: int = 1
) -> tuple[ProportionEstimate, list[TrialReport]]:
    """P[tau_M == tau_I] over independent uniformly random processes."""
    _graph_for(config.graph_spec)  # validate the spec before spawning workers
    seeds = [derive_seed(config.master_seed, i) for i in range(config.trials)]
    payloads = [(config.graph_spec, s) for s in seeds]
    try:
        results = _map_trials(_hitting_trial, payloads, jobs)
    except ValueError as exc:
        raise ExperimentError(f"trial execution failed: {exc}") from exc
    reports = [
        TrialReport(i, seeds[i], tau_i, tau_m)
        for i, (tau_i, tau_m) in enumerate(results)
    ]
    equal = sum(1 for r in reports if r.equal)
    return ProportionEstimate.from_counts(equal, config.trials), reports


def estimate_event_probability(
    config: ExperimentConfig,
    event: EventSpec,
    p: float,
    p_index: int = 0,
    jobs: int = 1,
) -> ProportionEstimate:
    """P[event holds in the percolated subgraph at retention p]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0,1]")
    _graph_for(config.graph_spec)
    seeds = [derive_seed(config.master_seed, i, p_index) for i in range(config.trials)]
    payloads = [(config.graph_spec, s, p, event) for s in seeds]
    results = _map_trials(_event_trial, payloads, jobs)
    return ProportionEstimate.from_counts(sum(results), config.trials)


def _parallel_trial(args: tuple[str, int, float]) -> tuple[bool, int]:
    spec, seed, p = args
    g = _graph_for(spec)
    present = RandomStream(seed).uniforms(g.n_edges) <= p
    return (
        evaluate_event(g, present, PERFECT_MATCHING),
        isolated_count_in_slice(g, present),
    )


def _series_trial(args: tuple[str, int, float]) -> tuple[bool, bool]:
    spec, seed, p = args
    g = _graph_for(spec)
    present = RandomStream(seed).uniforms(g.n_edges) <= p
    return (
        evaluate_event(g, present, PERFECT_MATCHING),
        necessary_condition_census(g, present),
    )


@dataclass(frozen=True)
class ParallelCalibration:
    """Parallel-resistor check at one p: the matching probability must stay
    under the exact both-terminal-edges bound, and the mean isolated count
    must track (2k^2+2)(1-p)^k."""

    p: float
    trials: int
    pm: ProportionEstimate
    pm_bound: float
    isolated_mean: float
    isolated_se: float
    isolated_expected: float

    def passes(self, sigmas: float = 4.0) -> bool:
        bound_sigma = math.sqrt(self.pm_bound * (1 - self.pm_bound) / self.trials)
        if self.pm.point > self.pm_bound + sigmas * bound_sigma:
            return False
        return abs(self.isolated_mean - self.isolated_expected) <= sigmas * self.isolated_se + 1e-12


def parallel_calibration(
    spec: str, trials: int, master_seed: int, p: float, p_index: int = 0, jobs: int = 1
) -> ParallelCalibration:
    g = _graph_for(spec)
    k = g.regular_degree()
    if k is None or not g.meta or "resistor_terminal_edges" not in g.meta:
        raise ValueError("parallel calibration needs a parallel-resistor graph")
    seeds = [derive_seed(master_seed, i, p_index) for i in range(trials)]
    results = _map_trials(_parallel_trial, [(spec, s, p) for s in seeds], jobs)
    pm_count = sum(1 for pm, _ in results if pm)
    counts = np.array([iso for _, iso in results], dtype=np.float64)
    se = float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return ParallelCalibration(
        p=p,
        trials=trials,
        pm=ProportionEstimate.from_counts(pm_count, trials),
        pm_bound=parallel_condition_probability(k, p),
        isolated_mean=float(counts.mean()),
        isolated_se=se,
        isolated_expected=g.n_vertices * (1.0 - p) ** k,
    )


@dataclass(frozen=True)
class SeriesCalibration:
    """Series-of-resistors check at one p: a perfect matching must imply the
    layer census on every single trial, and the census frequency must match
    its exact closed form."""

    p: float
    trials: int
    pm: ProportionEstimate
    census: ProportionEstimate
    census_expected: float
    implication_violations: int

    def passes(self, sigmas: float = 4.0) -> bool:
        if self.implication_violations:
            return False
        sigma = math.sqrt(self.census_expected * (1 - self.census_expected) / self.trials)
        return abs(self.census.point - self.census_expected) <= sigmas * sigma


def series_calibration(
    spec: str, trials: int, master_seed: int, p: float, p_index: int = 0, jobs: int = 1
) -> SeriesCalibration:
    g = _graph_for(spec)
    seeds = [derive_seed(master_seed, i, p_index) for i in range(trials)]
    results = _map_trials(_series_trial, [(spec, s, p) for s in seeds], jobs)
    pm_count = sum(1 for pm, _ in results if pm)
    census_count = sum(1 for _, cen in results if cen)
    violations = sum(1 for pm, cen in results if pm and not cen)
    return SeriesCalibration(
        p=p,
        trials=trials,
        pm=ProportionEstimate.from_counts(pm_count, trials),
        census=ProportionEstimate.from_counts(census_count, trials),
        census_expected=series_condition_probability(g, p),
        implication_violations=violations,
    )


@dataclass(frozen=True)
class SweepPoint:
    p: float
    estimate: ProportionEstimate


def sweep(
    config: ExperimentConfig,
    event: EventSpec,
    coupled: bool = True,
    jobs: int = 1,
) -> list[SweepPoint]:
    """One estimate per retention probability in ``config.p_values``.

    Coupled mode (default) reuses a single weight draw per trial across all
    p values; independent mode redraws per (trial, p) cell with its own
    derived seed.
    """
    ps = config.p_values
    if not ps:
        raise ValueError("sweep needs at least one p value")
    if list(ps) != sorted(ps):
        raise ValueError("p values must be sorted ascending")
    _graph_for(config.graph_spec)
    if coupled:
        seeds = [derive_seed(config.master_seed, i) for i in range(config.trials)]
        payloads = [(config.graph_spec, s, tuple(ps), event) for s in seeds]
        rows = _map_trials(_sweep_trial, payloads, jobs)
        counts = [sum(row[j] for row in rows) for j in range(len(ps))]
    else:
        counts = []
        for j, p in enumerate(ps):
            est = estimate_event_probability(config, event, p, p_index=j, jobs=jobs)
            counts.append(est.successes)
    return [
        SweepPoint(p, ProportionEstimate.from_counts(c, config.trials))
        for p, c in zip(ps, counts)
    ]
