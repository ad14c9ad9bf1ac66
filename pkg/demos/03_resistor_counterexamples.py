#!/usr/bin/env python3
"""Demo 3: resistor gadgets, where the two thresholds separate.

A k-resistor between terminals x and y is K_{k,k} with one inner edge
removed and pendant edges to x and y added; any perfect matching of a
spanning subgraph must keep both pendant edges. Wiring k resistors in
parallel (or chaining stages in series) produces k-regular graphs whose
matching threshold sits far above the isolation threshold: isolated
vertices are long gone while perfect matchings are still nowhere in sight.
"""

from matchlab import (
    has_perfect_matching,
    k_resistor,
    parallel_calibration,
    parallel_resistor_graph,
    series_calibration,
    series_counterexample_graph,
    subgraph := None,  # placeholder removed below
)

print(__doc__)
