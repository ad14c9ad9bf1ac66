"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v` (add -s to see the PASS lines
as they happen). Statistical criteria use fixed seeds, so every assertion
here is deterministic across reruns.
"""

import math

import numpy as np

from matchlab import (
    BipartiteGraph,
    Cut,
    CutSpace,
    EdgeWeights,
    ExperimentConfig,
    RandomStream,
    ThresholdConfig,
    check_regularity_identity,
    cli,
    complete_bipartite,
    cut_stats,
    draw_weights,
    estimate_event_probability,
    estimate_hitting_equality,
    hall_cut_event,
    hall_probability_bound,
    has_perfect_matching,
    hitting_times,
    max_matching,
    parallel_calibration,
    random_regular_bipartite,
    series_calibration,
)
from matchlab.matching import MatchingState

from helpers import oracle_hitting_times, oracle_no_hall_cut

# traces accumulated by the suite; criterion 7 asserts over all of them
ALL_TRACES: list[tuple[int, int]] = []


def _random_balanced(rng, n_max=6):
    n = int(rng.integers(1, n_max + 1))
    density = 0.05 + 0.9 * float(rng.uniforms(1)[0])
    keep = rng.uniforms(n * n) <= density
    cells = [(a, b) for a in range(n) for b in range(n)]
    return BipartiteGraph(n, n, [cells[i] for i in range(n * n) if keep[i]])


def test_01_hall_theorem_oracle_equivalence():
    # 200 random graphs, n <= 6 per side: the matching engine must agree
    # with brute force over all 4^n cuts, instance by instance
    rng = RandomStream(101)
    for i in range(200):
        g = _random_balanced(rng.spawn(i))
        fast = has_perfect_matching(g)
        brute = oracle_no_hall_cut(g.n_left, g.n_right, g.edge_pairs())
        assert fast == brute, f"instance {i}: engine {fast}, oracle {brute}"
    print("PASS criterion 1: Hall oracle equivalence on 200 instances")


def test_02_incremental_matching_scratch_oracle():
    rng = RandomStream(202)
    for i in range(100):
        sub = rng.spawn(i)
        n = int(sub.integers(2, 13))
        k = int(sub.integers(1, min(4, n) + 1))
        g = random_regular_bipartite(n, k, sub)
        order = sub.permutation(g.n_edges)
        state = MatchingState(g)
        prefix = []
        for e in order:
            state.insert(int(e))
            prefix.append((int(g.lefts[e]), int(g.rights[e])))
            scratch = max_matching(BipartiteGraph(g.n_left, g.n_right, prefix)).size
            assert state.size == scratch
    print("PASS criterion 2: incremental matching equals scratch on 100 graphs")


def test_03_regularity_identity_exact():
    rng = RandomStream(303)
    checked = 0
    for i in range(100):
        sub = rng.spawn(i)
        n = int(sub.integers(2, 17))
        k = int(sub.integers(1, min(5, n) + 1))
        g = random_regular_bipartite(n, k, sub)
        for _ in range(100):
            cut = Cut.from_masks(
                int(sub.integers(0, 1 << n)), int(sub.integers(0, 1 << n))
            )
            assert check_regularity_identity(g, k, cut)
            checked += 1
    assert checked == 10_000
    print("PASS criterion 3: counting identity exact on 10,000 (graph, cut) pairs")


def test_04_coupling_slice_equals_prefix():
    rng = RandomStream(404)
    for i in range(100):
        sub = rng.spawn(i)
        kind = i % 3
        if kind == 0:
            g = complete_bipartite(int(sub.integers(2, 10)))
        elif kind == 1:
            n = int(sub.integers(2, 10))
            g = random_regular_bipartite(n, int(sub.integers(1, min(4, n) + 1)), sub)
        else:
            from matchlab import parallel_resistor_graph

            g = parallel_resistor_graph(int(sub.integers(2, 5)))
        w = draw_weights(g, sub)
        p = float(sub.uniforms(1)[0])
        t = int((w.values <= p).sum())
        assert set(map(int, w.order()[:t])) == set(
            map(int, np.nonzero(w.values <= p)[0])
        )
    print("PASS criterion 4: slice equals process prefix on 100 triples")


def test_05_k22_exhaustive_hitting_times():
    import itertools

    g = complete_bipartite(2)
    pairs = g.edge_pairs()
    for order in itertools.permutations(range(4)):
        w = np.empty(4)
        for rank, eid in enumerate(order):
            w[eid] = (rank + 1) / 5.0
        tr = hitting_times(g, EdgeWeights(w))
        assert (tr.tau_I, tr.tau_M) == oracle_hitting_times(2, pairs, order)
        ALL_TRACES.append((tr.tau_I, tr.tau_M))
    print("PASS criterion 5: all 24 K_{2,2} orders match the exhaustive oracle")


def test_06_hitting_equality_desk_scale():
    est, reports = estimate_hitting_equality(
        ExperimentConfig("knn:n=300", 200, 20260810)
    )
    ALL_TRACES.extend((r.tau_I, r.tau_M) for r in reports)
    assert est.point >= 0.90, f"K_300,300 equality rate {est.point}"
    est2, reports2 = estimate_hitting_equality(
        ExperimentConfig("rrb:n=400,k=80,seed=11", 200, 20260811)
    )
    ALL_TRACES.extend((r.tau_I, r.tau_M) for r in reports2)
    assert est2.point >= 0.85, f"random 80-regular equality rate {est2.point}"
    print(
        f"PASS criterion 6: equality rates {est.point} (complete, floor 0.90), "
        f"{est2.point} (random regular, floor 0.85)"
    )


def test_07_tau_m_never_below_tau_i():
    # a fresh batch over mixed graphs, plus every trace this suite produced
    rng = RandomStream(707)
    for i in range(60):
        sub = rng.spawn(i)
        n = int(sub.integers(2, 20))
        k = int(sub.integers(1, min(6, n) + 1))
        g = random_regular_bipartite(n, k, sub)
        tr = hitting_times(g, draw_weights(g, sub))
        ALL_TRACES.append((tr.tau_I, tr.tau_M))
    assert ALL_TRACES, "no traces accumulated"
    assert all(tm >= ti for ti, tm in ALL_TRACES)
    print(f"PASS criterion 7: tau_M >= tau_I on all {len(ALL_TRACES)} traces")


def test_08_hall_cut_survival_bound():
    spec = "rrb:n=8,k=4,seed=88"
    from matchlab import from_spec

    g = from_spec(spec)
    rng = RandomStream(808)
    cuts = []
    while len(cuts) < 20:
        cut = Cut.from_masks(int(rng.integers(0, 256)), int(rng.integers(0, 256)))
        if cut.s.size > cut.t.size:
            cuts.append(cut)
    trials = 5000
    for p_index, p in enumerate((0.1, 0.3)):
        for cut in cuts:
            est = estimate_event_probability(
                ExperimentConfig(spec, trials, 814), hall_cut_event(cut), p, p_index
            )
            bound = hall_probability_bound(cut_stats(g, cut).cross_total, p)
            sigma = math.sqrt(bound * (1 - bound) / trials)
            assert est.point <= bound + 4 * sigma, (
                f"cut {cut.key} at p={p}: {est.point} > {bound} + 4σ"
            )
    print("PASS criterion 8: survival bound holds for 20 cuts at p=0.1 and p=0.3")


def test_09_parallel_resistor_calibration():
    trials, p, k = 2000, 0.1, 20
    rep = parallel_calibration(f"parres:k={k}", trials, 909, p)
    # independent closed forms: some resistor keeps both terminal edges;
    # every vertex has degree k, so E[#isolated] = (2k^2+2)(1-p)^k
    bound = 1 - (1 - p * p) ** k
    assert abs(rep.pm_bound - bound) < 1e-12
    sigma = math.sqrt(bound * (1 - bound) / trials)
    assert rep.pm.point <= bound + 4 * sigma
    expected_iso = (2 * k * k + 2) * (1 - p) ** k
    assert abs(rep.isolated_mean - expected_iso) <= 4 * rep.isolated_se
    print(
        f"PASS criterion 9: P[PM]={rep.pm.point} <= {round(bound, 4)}+4σ; "
        f"mean isolated {round(rep.isolated_mean, 2)} ~ {round(expected_iso, 2)}"
    )


def test_10_series_layer_calibration():
    trials = 5000
    spec = "serres:k=16,series=2,ell=3,r=8"
    for p_index, p in enumerate((0.1, 0.2, 0.3)):
        rep = series_calibration(spec, trials, 1010, p, p_index=p_index)
        assert rep.implication_violations == 0, "matching without the layer census"
        q = (1 - (1 - p) ** 8) ** 4  # independent closed form
        exact = 1 - (1 - q) ** 2
        assert abs(rep.census_expected - exact) < 1e-12
        sigma = math.sqrt(exact * (1 - exact) / trials)
        assert abs(rep.census.point - exact) <= 4 * sigma
    print("PASS criterion 10: layer census calibrated at p=0.1, 0.2, 0.3")


def _all_balanced_graphs(n):
    cells = [(i, j) for i in range(n) for j in range(n)]
    for mask in range(1 << len(cells)):
        yield BipartiteGraph(
            n, n, [cells[i] for i in range(len(cells)) if mask >> i & 1], validate=False
        )


def test_11_atom_process_exhaustive_small_graphs():
    rng = RandomStream(1111)
    runs = 0
    for n in (2, 3):
        for gi, g in enumerate(_all_balanced_graphs(n)):
            space = CutSpace(g, ThresholdConfig())
            for si, start in enumerate(space.unit_classes()):
                if start.is_trivial:
                    continue
                atom, steps = space.run_atom_process(start, rng.spawn(n, gi, si))
                assert steps <= 10 * n
                # atom property, re-verified by exhaustive enumeration
                viol = space.atom_violation(atom)
                assert viol is None, (
                    f"n={n} graph {gi} start {start.representative.key}: "
                    f"violated by {viol.representative.key}"
                )
                runs += 1
    print(f"PASS criterion 11: atom process exact on {runs} starts over 528 graphs")


def test_12_cli_determinism_across_jobs(tmp_path):
    argv = ["process", "--spec", "rrb:n=30,k=4,seed=5", "--trials", "40", "--seed", "1212"]
    outs = []
    for name, jobs in (("a", 1), ("b", 2), ("c", 1)):
        out = tmp_path / f"{name}.csv"
        assert cli.main(argv + ["--jobs", str(jobs), "--out", str(out)]) == 0
        outs.append(out.read_bytes() + (tmp_path / f"{name}.csv.manifest.json").read_bytes())
    assert outs[0] == outs[1] == outs[2]
    sweep_argv = [
        "sweep", "--spec", "knn:n=12", "--trials", "60", "--seed", "77",
        "--event", "noiso", "--p", "0.1,0.3,0.5",
    ]
    outs = []
    for name, jobs in (("sa", 1), ("sb", 3)):
        out = tmp_path / f"{name}.csv"
        assert cli.main(sweep_argv + ["--jobs", str(jobs), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    print("PASS criterion 12: bit-identical outputs across reruns and --jobs")
