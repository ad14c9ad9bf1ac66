"""matchlab: a simulation and exact-verification laboratory for perfect
matchings in random subgraphs of regular bipartite graphs.

The package reconstructs graphs edge by edge in random order, measures the
hitting times for "no isolated vertices" and "contains a perfect matching",
analyzes Hall cuts and cut structure exhaustively on small graphs, and
builds the resistor-gadget families whose matching and isolation thresholds
separate.
"""

__version__ = "0.1.0"

from .graphs import (
    BipartiteGraph,
    Edge,
    PartiteSet,
    Side,
    VertexRef,
    load_graph,
    parse_edge_list,
    format_edge_list,
    save_graph,
)
from .generators import (
    Gadget,
    GenerationError,
    SeriesParams,
    complete_bipartite,
    from_spec,
    k_resistor,
    parallel_resistor_graph,
    random_regular_bipartite,
    series_counterexample_graph,
    series_of_resistors,
)
from .matching import (
    HallWitness,
    Matching,
    MatchingState,
    extract_hall_witness,
    has_perfect_matching,
    insert_edge_and_augment,
    max_matching,
)
from .process import (
    EdgeWeights,
    ProcessTrace,
    ThresholdPair,
    draw_weights,
    hitting_times,
    isolated_vertices,
    p1_p2,
    slice_at,
)
from .cuts import (
    Cut,
    CutClass,
    CutSpace,
    CutStats,
    ProcessBudgetError,
    ThresholdConfig,
    check_regularity_identity,
    closeness_classes,
    class_intersection,
    cut_distance,
    cut_stats,
    enumerate_cuts,
    gamma_set,
    hall_probability_bound,
    is_hall_cut,
    is_internal,
    run_atom_process,
)
from .experiments import (
    EventSpec,
    ExperimentConfig,
    NO_ISOLATED,
    PERFECT_MATCHING,
    ProportionEstimate,
    SweepPoint,
    TrialReport,
    estimate_event_probability,
    estimate_hitting_equality,
    hall_cut_event,
    necessary_condition_census,
    parallel_calibration,
    series_calibration,
    sweep,
    wilson_interval,
)
from .rng import RandomStream, derive_seed, mix64
