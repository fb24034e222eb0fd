"""batchplan: anytime sampling-based path planning on batched random
geometric graphs, with RRT baselines and a benchmark harness."""

from .baselines import (
    ExplicitGraph,
    RrtConfig,
    graph_shortest_path,
    rrt_connect,
    rrt_star,
    snapshot_rgg,
)
from .bench import (
    SuiteDefinition,
    cost_over_time,
    default_time_grid,
    median_ci,
    read_results,
    run_suite,
    success_curve,
    write_results,
)
from .planner import AbitPlanner, EdgeQueue, PlannerConfig, PolicySchedule, solve
from .records import RunRecord, SolutionEvent
from .rgg import NeighborIndex, RggConfig, add_batch, connection_radius, prune
from .space import (
    InformedSet,
    RandomSource,
    State,
    informed_measure,
    phs_measure,
    sample_informed,
    sample_informed_many,
    sample_unit_ball,
    sample_unit_ball_many,
    unit_ball_measure,
)
from .tree import SearchTree
from .world import (
    Box,
    Heuristics,
    ProblemDefinition,
    World,
    edge_cost,
    heuristics,
    is_segment_valid,
    is_state_valid,
    load_problem,
    make_random_rectangles,
    make_wall_gap,
    problem_from_json,
    problem_to_json,
    save_problem,
)

__version__ = "0.1.0"

__all__ = [
    "AbitPlanner", "Box", "EdgeQueue", "ExplicitGraph", "Heuristics",
    "InformedSet", "NeighborIndex", "PlannerConfig", "PolicySchedule",
    "ProblemDefinition", "RandomSource", "RggConfig", "RrtConfig",
    "RunRecord", "SearchTree", "SolutionEvent", "State", "SuiteDefinition",
    "World", "add_batch", "connection_radius", "cost_over_time",
    "default_time_grid", "edge_cost", "graph_shortest_path", "heuristics",
    "informed_measure", "is_segment_valid", "is_state_valid",
    "load_problem", "make_random_rectangles", "make_wall_gap", "median_ci",
    "phs_measure", "problem_from_json", "problem_to_json", "prune",
    "read_results", "rrt_connect", "rrt_star", "run_suite",
    "sample_informed", "sample_informed_many", "sample_unit_ball",
    "sample_unit_ball_many", "save_problem", "snapshot_rgg",
    "solve", "success_curve", "unit_ball_measure", "write_results",
]
