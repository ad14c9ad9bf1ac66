#!/usr/bin/env python3
"""Demo 1: the graph process and its two hitting times.

Rebuild a regular bipartite graph one edge at a time in uniformly random
order and watch two moments: tau_I, when the last isolated vertex
disappears, and tau_M, when the first perfect matching appears. For dense
regular graphs the two almost always coincide: the local obstruction is the
only obstruction.
"""

from matchlab import (
    ExperimentConfig,
    RandomStream,
    complete_bipartite,
    draw_weights,
    estimate_hitting_equality,
    hitting_times,
)

print(__doc__)

print("--- one trace in detail: K_{12,12} ---")
g = complete_bipartite(12)
w = draw_weights(g, RandomStream(2024))
trace = hitting_times(g, w)
print(f"edges in the host graph : {g.n_edges}")
print(f"tau_I (no isolated)     : {trace.tau_I}")
print(f"tau_M (perfect matching): {trace.tau_M}")
print(f"equal                   : {trace.equal}")
first = [int(e) for e in trace.order[:8]]
print(f"first revealed edge ids : {first} ...")

print()
print("--- equality rate over 300 random processes ---")
for spec in ("knn:n=60", "rrb:n=80,k=20,seed=3"):
    est, reports = estimate_hitting_equality(ExperimentConfig(spec, 300, 777))
    worst = max(r.tau_M - r.tau_I for r in reports)
    print(
        f"{spec:22s} P[tau_M == tau_I] = {est.point:.3f} "
        f"(95% CI [{est.ci_low:.3f}, {est.ci_high:.3f}]), "
        f"max gap {worst} edges"
    )

print()
print("tau_M >= tau_I held on every trace above, as it must:")
print("a perfect matching leaves no vertex exposed, let alone isolated.")
