"""Comparison planners and the explicit-graph oracle used by the tests.

The RRT-family baselines are deliberately standard: uninformed sampling
with a goal bias, step-limited steering, and (for the star variant) local
rewiring within the usual shrinking radius computed over the whole space.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from .records import RunRecord, SolutionEvent
from .rgg import radius_from_measure
from .space import RandomSource, State
from .tree import SearchTree
from .world import ProblemDefinition


def default_max_edge_length(n: int) -> float:
    """Steering step per dimension; larger spaces need longer reaches."""
    return 0.5 if n <= 4 else 1.25


@dataclass
class RrtConfig:
    goal_bias: float = 0.05
    max_edge_length: float | None = None
    eta: float = 1.1
    seed: int = 0

    def step_for(self, n: int) -> float:
        return self.max_edge_length if self.max_edge_length is not None else default_max_edge_length(n)


class _PointBuffer:
    """Append-only point store with vectorized nearest/near queries."""

    def __init__(self, n: int):
        self._pts = np.empty((64, n))
        self.states: list[State] = []
        self.size = 0

    def add(self, x: State) -> int:
        if self.size == len(self._pts):
            self._pts = np.vstack([self._pts, np.empty_like(self._pts)])
        self._pts[self.size] = x
        self.states.append(x)
        self.size += 1
        return self.size - 1

    def coords(self) -> np.ndarray:
        return self._pts[: self.size]

    def nearest(self, x: State) -> int:
        d = np.linalg.norm(self.coords() - np.asarray(x), axis=1)
        return int(np.argmin(d))

    def near(self, x: State, r: float) -> np.ndarray:
        d = np.linalg.norm(self.coords() - np.asarray(x), axis=1)
        return np.nonzero(d <= r)[0]


def _steer(a: State, b: State, step: float) -> State:
    d = math.dist(a, b)
    if d <= step:
        return b
    t = step / d
    return tuple(ai + t * (bi - ai) for ai, bi in zip(a, b))


def rrt_connect(
    problem: ProblemDefinition,
    config: RrtConfig | None = None,
    time_budget: float | None = None,
    rng: RandomSource | None = None,
    max_iterations: int | None = None,
) -> RunRecord:
    """Bidirectional tree growth with greedy connection; stops at the first solution."""
    if len(problem.goals) != 1:
        raise ValueError("rrt_connect handles exactly one goal state")
    if time_budget is None and max_iterations is None:
        raise ValueError("need a time budget and/or an iteration cap")
    config = config or RrtConfig()
    rng = rng or RandomSource(config.seed)
    world = problem.world
    n = problem.dimension
    step = config.step_for(n)
    goal = problem.goals[0]
    lower, upper = world.bounds.lower, world.bounds.upper

    class Side:
        def __init__(self, root: State):
            self.buf = _PointBuffer(n)
            self.buf.add(root)
            self.parent = {0: -1}
            self.root = root

    start_side = Side(problem.start)
    goal_side = Side(goal)
    a, b = start_side, goal_side

    def extend(side: Side, target: State):
        """One bounded step toward target; returns (status, new index)."""
        i_near = side.buf.nearest(target)
        x_near = side.buf.states[i_near]
        if target == x_near:
            return "reached", i_near
        x_new = _steer(x_near, target, step)
        if not world.segment_valid(x_near, x_new):
            return "trapped", -1
        idx = side.buf.add(x_new)
        side.parent[idx] = i_near
        return ("reached" if x_new == target else "advanced"), idx

    def walk(side: Side, idx: int) -> list[State]:
        out = []
        while idx != -1:
            out.append(side.buf.states[idx])
            idx = side.parent[idx]
        return out

    t0 = time.perf_counter()
    deadline = t0 + time_budget if time_budget is not None else math.inf
    iterations = 0
    while time.perf_counter() < deadline and (
        max_iterations is None or iterations < max_iterations
    ):
        iterations += 1
        if rng.random() < config.goal_bias:
            target = b.root
        else:
            target = tuple(rng.uniform(lower, upper, n))
        status, idx = extend(a, target)
        if status != "trapped":
            x_new = a.buf.states[idx]
            # Greedy connect: keep stepping the other tree toward x_new.
            status_b, idx_b = extend(b, x_new)
            while status_b == "advanced":
                status_b, idx_b = extend(b, x_new)
            if status_b == "reached":
                part_a = walk(a, idx)[::-1]
                part_b = walk(b, idx_b)
                path = part_a + part_b[1:]
                if path[0] != problem.start:
                    path.reverse()
                cost = sum(math.dist(u, v) for u, v in zip(path, path[1:]))
                event = SolutionEvent(
                    elapsed=time.perf_counter() - t0, cost=cost, path=tuple(path)
                )
                return RunRecord(
                    planner="rrtconnect",
                    problem=problem.name,
                    seed=config.seed,
                    success=True,
                    events=[(event.elapsed, event.cost)],
                    path=list(event.path),
                )
        a, b = b, a
    return RunRecord(
        planner="rrtconnect", problem=problem.name, seed=config.seed,
        success=False, events=[], path=None,
    )


def rrt_star(
    problem: ProblemDefinition,
    config: RrtConfig | None = None,
    time_budget: float | None = None,
    rng: RandomSource | None = None,
    max_iterations: int | None = None,
) -> RunRecord:
    """Anytime single-tree planner with locally optimal rewiring."""
    if time_budget is None and max_iterations is None:
        raise ValueError("need a time budget and/or an iteration cap")
    config = config or RrtConfig()
    rng = rng or RandomSource(config.seed)
    world = problem.world
    n = problem.dimension
    step = config.step_for(n)
    goals = problem.goals
    lower, upper = world.bounds.lower, world.bounds.upper
    space_measure = world.bounds.measure()

    tree = SearchTree(problem.start)
    buf = _PointBuffer(n)
    buf.add(problem.start)

    best = math.inf
    events: list[tuple[float, float]] = []
    best_goal = None
    t0 = time.perf_counter()
    deadline = t0 + time_budget if time_budget is not None else math.inf
    iterations = 0

    while time.perf_counter() < deadline and (
        max_iterations is None or iterations < max_iterations
    ):
        iterations += 1
        if rng.random() < config.goal_bias:
            pick = int(rng.integers(0, len(goals))) if len(goals) > 1 else 0
            x_rand = goals[pick]
        else:
            x_rand = tuple(rng.uniform(lower, upper, n))
        i_near = buf.nearest(x_rand)
        x_near = buf.states[i_near]
        x_new = _steer(x_near, x_rand, step)
        if x_new == x_near or x_new in tree:
            continue
        if not world.segment_valid(x_near, x_new):
            continue

        radius = radius_from_measure(max(len(tree) + 1, 2), space_measure, n, config.eta)
        nbr_idx = buf.near(x_new, radius)
        candidates = list(nbr_idx) if len(nbr_idx) else [i_near]
        if i_near not in candidates:
            candidates.append(i_near)

        # Best valid parent among the neighborhood, cheapest first.
        scored = sorted(
            (tree.g(buf.states[i]) + math.dist(buf.states[i], x_new), i)
            for i in candidates
        )
        parent_idx = None
        new_cost = math.inf
        for potential, i in scored:
            cand = buf.states[i]
            if cand == x_near or world.segment_valid(cand, x_new):
                parent_idx = i
                new_cost = potential
                break
        if parent_idx is None:
            continue
        x_parent = buf.states[parent_idx]
        tree.connect(x_parent, x_new, math.dist(x_parent, x_new))
        buf.add(x_new)

        # Rewire the neighborhood through the new vertex where it helps.
        g_new = tree.g(x_new)
        for i in nbr_idx:
            x_nbr = buf.states[i]
            if x_nbr == x_new or x_nbr == problem.start:
                continue
            d = math.dist(x_new, x_nbr)
            if g_new + d < tree.g(x_nbr) and world.segment_valid(x_new, x_nbr):
                tree.rewire(x_new, x_nbr, d)

        goal_cost = math.inf
        for g in goals:
            c = tree.g(g)
            if c < goal_cost:
                goal_cost, best_goal = c, g
        if goal_cost < best:
            best = goal_cost
            events.append((time.perf_counter() - t0, best))

    path = [tuple(s) for s in tree.path_to(best_goal)] if best_goal is not None else None
    return RunRecord(
        planner="rrtstar", problem=problem.name, seed=config.seed,
        success=bool(events), events=events, path=path,
    )


@dataclass
class ExplicitGraph:
    """Frozen, fully materialized snapshot of an implicit graph."""

    states: list[State]
    start_index: int
    goal_indices: list[int]
    weights: csr_matrix
    edge_pairs: set = field(default_factory=set, repr=False)

    @property
    def edge_count(self) -> int:
        return len(self.edge_pairs)


def build_graph(
    states: Sequence[State],
    pairs: Sequence[tuple[int, int]],
    weights: Sequence[float],
    start_index: int,
    goal_indices: Sequence[int],
) -> ExplicitGraph:
    rows, cols, vals = [], [], []
    kept = set()
    for (i, j), w in zip(pairs, weights):
        if not (0.0 < w < math.inf):
            continue
        rows += [i, j]
        cols += [j, i]
        vals += [w, w]
        kept.add((min(i, j), max(i, j)))
    mat = csr_matrix((vals, (rows, cols)), shape=(len(states), len(states)))
    return ExplicitGraph(list(states), start_index, list(goal_indices), mat, kept)


def graph_shortest_path(g: ExplicitGraph) -> tuple[float, list[State]]:
    """Exact shortest path from the start to the cheapest goal; inf if cut off."""
    if not g.goal_indices:
        return math.inf, []
    dist, pred = dijkstra(
        g.weights, directed=False, indices=g.start_index, return_predecessors=True
    )
    best_goal = min(g.goal_indices, key=lambda i: dist[i])
    cost = float(dist[best_goal])
    if math.isinf(cost):
        return math.inf, []
    path_idx = [best_goal]
    while path_idx[-1] != g.start_index:
        path_idx.append(int(pred[path_idx[-1]]))
    path_idx.reverse()
    return cost, [g.states[i] for i in path_idx]


def snapshot_rgg(planner) -> ExplicitGraph:
    """Materialize the graph a finished search ran on.

    All pairs within the current connection radius over tree vertices and
    unconnected samples, plus the tree's own edges (the search re-offers
    those regardless of radius), with collision-checked true costs; blocked
    pairs are omitted. Shares the planner's edge-cost memo.
    """
    states = sorted(set(planner.tree.vertices) | planner.samples)
    pos = {s: i for i, s in enumerate(states)}
    r = planner.radius
    if math.isinf(r):
        pairs = {(i, j) for i in range(len(states)) for j in range(i + 1, len(states))}
    else:
        kd = cKDTree(np.asarray(states))
        pairs = {(min(i, j), max(i, j)) for i, j in kd.query_pairs(r)}
    for parent, child in planner.tree.edges():
        i, j = pos[parent], pos[child]
        pairs.add((min(i, j), max(i, j)))
    pair_list = sorted(pairs)
    weights = [planner.true_edge_cost(states[i], states[j]) for i, j in pair_list]
    goal_indices = [pos[g] for g in planner.problem.goals if g in pos]
    return build_graph(states, pair_list, weights, pos[planner.problem.start], goal_indices)
