"""Anytime planning on a batched graph with an inflated, truncated lazy search.

The planner interleaves two activities: densifying an informed random
geometric graph one batch of samples at a time, and running a sequence of
lazy edge-queue searches over it. Each search orders candidate edges by
cost-to-come plus estimated edge cost plus an inflated cost-to-go, delays
collision checking until an edge is actually popped, and truncates as soon
as the incumbent solution is provably within the truncation factor of the
best this graph can offer. Vertices whose cost-to-come improves after they
were already expanded are set aside as inconsistent and repaired by the
next search instead of being re-expanded immediately.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from . import rgg, world as world_mod
from .records import RunRecord, SolutionEvent
from .rgg import NeighborIndex, RggConfig, radius_from_measure
from .space import InformedSet, RandomSource, State, phs_measure
from .tree import SearchTree
from .world import ProblemDefinition


def default_inflation(search_index: int, q: int) -> float:
    """First search of a batch is strongly goal-biased, the rest barely."""
    return 1.0e6 if search_index == 0 else 1.0 + 10.0 / q

def default_truncation(q: int) -> float:
    return 1.0 + 5.0 / q


@dataclass
class PolicySchedule:
    """How aggressively each search of a batch inflates and truncates.

    `inflation` maps (completed searches on the current graph, q) to the
    factor for the upcoming search; `truncation` maps q to its factor.
    Both must stay >= 1 and their product should tend to one as q grows,
    which is what makes the planner asymptotically resolution-optimal.
    """

    inflation: Callable[[int, int], float]
    truncation: Callable[[int], float]
    searches_per_batch: int = 2

    @classmethod
    def defaults(cls, searches_per_batch: int = 2) -> "PolicySchedule":
        return cls(default_inflation, default_truncation, searches_per_batch)

    @classmethod
    def unit(cls, searches_per_batch: int = 1) -> "PolicySchedule":
        """No inflation, no truncation: every search runs to resolution optimality."""
        return cls(lambda i, q: 1.0, lambda q: 1.0, searches_per_batch)


def _inflation_policy(spec) -> Callable[[int, int], float]:
    if spec == "paper-default":
        return default_inflation
    if spec == "unit":
        return lambda i, q: 1.0
    value = float(spec)
    if value < 1.0:
        raise ValueError(f"inflation factor must be >= 1, got {value}")
    return lambda i, q: value


def _truncation_policy(spec) -> Callable[[int], float]:
    if spec == "paper-default":
        return default_truncation
    if spec == "unit":
        return lambda q: 1.0
    value = float(spec)
    if value < 1.0:
        raise ValueError(f"truncation factor must be >= 1, got {value}")
    return lambda q: value


@dataclass
class PlannerConfig:
    """Tuning block; the JSON form round-trips through to_json/from_json."""

    m: int = 100
    eta: float = 1.1
    pruning: bool = False
    searches_per_batch: int = 2
    infl_schedule: str | float = "paper-default"
    trunc_schedule: str | float = "paper-default"
    seed: int = 0

    def schedule(self) -> PolicySchedule:
        return PolicySchedule(
            inflation=_inflation_policy(self.infl_schedule),
            truncation=_truncation_policy(self.trunc_schedule),
            searches_per_batch=self.searches_per_batch,
        )

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "eta": self.eta,
            "pruning": self.pruning,
            "searches_per_batch": self.searches_per_batch,
            "infl_schedule": self.infl_schedule,
            "trunc_schedule": self.trunc_schedule,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, d: dict) -> "PlannerConfig":
        known = {f: d[f] for f in (
            "m", "eta", "pruning", "searches_per_batch",
            "infl_schedule", "trunc_schedule", "seed",
        ) if f in d}
        return cls(**known)


class EdgeQueue:
    """Candidate edges keyed by (inflated potential solution cost, cost-to-come).

    Keys are computed at insertion. An entry whose stored cost-to-come no
    longer matches the parent's current label has been superseded by a
    fresher copy (labels only ever improve), so it is silently dropped at
    pop time instead of being re-keyed in place.
    """

    __slots__ = ("_heap", "_pushes")

    def __init__(self):
        self._heap: list[tuple[float, float, int, State, State]] = []
        self._pushes = 0

    def __len__(self) -> int:
        return len(self._heap)

    def push(self, key1: float, key2: float, parent: State, child: State) -> None:
        heapq.heappush(self._heap, (key1, key2, self._pushes, parent, child))
        self._pushes += 1

    def pop_best(self, cost_to_come: Callable[[State], float]):
        """Remove and return the lexicographic minimum as (parent, child,
        key1, key2), skipping superseded entries; None when exhausted."""
        while self._heap:
            key1, key2, _, parent, child = heapq.heappop(self._heap)
            if cost_to_come(parent) == key2:
                return parent, child, key1, key2
        return None

    def live_edges(self, cost_to_come: Callable[[State], float]) -> list[tuple[State, State]]:
        """Surviving (parent, child) pairs in insertion order, deduplicated."""
        out = []
        seen = set()
        for key1, key2, _, parent, child in sorted(self._heap, key=lambda e: e[2]):
            if cost_to_come(parent) != key2 or (parent, child) in seen:
                continue
            seen.add((parent, child))
            out.append((parent, child))
        return out


class AbitPlanner:
    """Anytime, almost-surely asymptotically optimal batched-graph planner."""

    name = "abit"

    def __init__(self, problem: ProblemDefinition, config: PlannerConfig | None = None):
        self.problem = problem
        self.config = config or PlannerConfig()
        self.schedule = self.config.schedule()
        self.heur = problem.heuristics()
        self.rng = RandomSource(self.config.seed)
        self.rgg_config = RggConfig(m=self.config.m, eta=self.config.eta, n=problem.dimension)
        self._edge_costs: dict[tuple[State, State], float] = {}
        self._h_cache: dict[State, float] = {}
        self.collision_checks = 0
        self.restart()

    # -- setup ---------------------------------------------------------

    def restart(self) -> None:
        """Reset to the initial approximation: tree = {start}, samples = goals."""
        p = self.problem
        self.tree = SearchTree(p.start)
        self.samples: set[State] = set(p.goals)
        self.q = len(self.tree) + len(self.samples)
        self.inflation = math.inf
        self.truncation = math.inf
        self.closed: set[State] = set()
        self.inconsistent: set[State] = set()
        self.search_finished = False
        self.searches_completed = 0
        self.radius = math.inf
        self.batches = 0
        self.iterations = 0
        self.best_cost = math.inf
        self.events: list[SolutionEvent] = []
        self._best_goal: Optional[State] = None
        self._rebuild_index()
        self.queue = EdgeQueue()
        self._push_edges(self.expand([p.start]))
        self._start_time = time.perf_counter()

    def _rebuild_index(self) -> None:
        members = sorted(set(self.tree.vertices) | self.samples)
        self.index = NeighborIndex(members)
        if members:
            self._index_h = self.heur.cost_to_go_many(self.index.coords).tolist()
        else:
            self._index_h = []
        # Hot-path accessor for current cost-to-come labels.
        self._g_of = lambda s, _get=self.tree._g.get: _get(s, math.inf)

    # -- heuristic plumbing --------------------------------------------

    def _h(self, x: State) -> float:
        v = self._h_cache.get(x)
        if v is None:
            v = self.heur.cost_to_go(x)
            self._h_cache[x] = v
        return v

    def true_edge_cost(self, a: State, b: State) -> float:
        """Collision-checked edge cost, computed at most once per pair."""
        key = (a, b) if a <= b else (b, a)
        c = self._edge_costs.get(key)
        if c is None:
            self.collision_checks += 1
            c = world_mod.edge_cost(a, b, self.problem.world)
            self._edge_costs[key] = c
        return c

    # -- expansion ------------------------------------------------------

    def expand(self, sources: Iterable[State]) -> list[tuple[State, State]]:
        """Outgoing candidate edges for each source vertex.

        A source always re-offers its current tree edges. On top of that,
        every graph member within the connection radius becomes a candidate
        child if routing through the source could still beat the incumbent
        and could improve on the child's current cost-to-come.
        """
        out: list[tuple[State, State]] = []
        c_best = self.best_cost
        tree = self.tree
        idx = self.index
        states = idx.states
        h_of = self._index_h
        g_get = tree._g.get
        start = self.problem.start
        dist = math.dist
        inf = math.inf
        radius = self.radius
        for xp in sources:
            offered = tree.children(xp)
            for c in offered:
                out.append((xp, c))
            ghat_p = dist(start, xp)
            for i in idx.query_idx(xp, radius):
                xc = states[i]
                if xc == xp or xc in offered:
                    continue
                chat = dist(xp, xc)
                if ghat_p + chat + h_of[i] <= c_best and ghat_p + chat <= g_get(xc, inf):
                    out.append((xp, xc))
        return out

    def _push_edges(self, edges: Iterable[tuple[State, State]]) -> None:
        g_get = self.tree._g.get
        infl = self.inflation
        push = self.queue.push
        h_cache = self._h_cache
        cost_to_go = self.heur.cost_to_go
        dist = math.dist
        inf = math.inf
        for parent, child in edges:
            gp = g_get(parent, inf)
            h = h_cache.get(child)
            if h is None:
                h = cost_to_go(child)
                h_cache[child] = h
            key1 = gp + dist(parent, child) + (infl * h if h > 0.0 else 0.0)
            push(key1, gp, parent, child)

    # -- one search iteration -------------------------------------------

    def iterate(self) -> SolutionEvent | None:
        """Process exactly one queue pop; returns an event iff the incumbent improved."""
        if self.search_finished:
            raise RuntimeError("search is finished; call advance() before iterating")
        self.iterations += 1
        popped = self.queue.pop_best(self._g_of)
        if popped is None:
            # Empty queue behaves like an infinitely bad edge: stop this search.
            self.search_finished = True
            return None
        parent, child, _, g_parent = popped
        tree = self.tree

        if tree._parent.get(child) == parent:
            # Edge already in the tree: re-expansion freebie, no checks needed.
            if child in self.closed:
                self.inconsistent.add(child)
            else:
                self._push_edges(self.expand([child]))
                self.closed.add(child)
            return None

        g_child = self._g_of(child)
        estimate = math.dist(parent, child)
        to_go = self._h(child)
        potential = g_parent + estimate + to_go
        truncated = potential * self.truncation if potential > 0.0 else potential
        if not truncated <= self.best_cost:
            # Even scaled optimism cannot beat the incumbent: search done.
            self.search_finished = True
            return None

        if not g_parent + estimate < g_child:
            return None
        cost = self.true_edge_cost(parent, child)  # the lazy collision check
        if not g_parent + cost + to_go < self.best_cost:
            return None
        if not g_parent + cost < g_child:
            return None

        if child in tree:
            changed = tree.rewire(parent, child, cost)
        else:
            self.samples.discard(child)
            changed = tree.connect(parent, child, cost)
        if child in self.closed:
            self.inconsistent.add(child)
        else:
            self._push_edges(self.expand([child]))
            self.closed.add(child)
        # Cascaded improvements re-open any already-expanded descendant.
        for v in changed[1:]:
            if v in self.closed:
                self.inconsistent.add(v)
        return self._emit_if_improved()

    def _emit_if_improved(self) -> SolutionEvent | None:
        best = math.inf
        best_goal = None
        for goal in self.problem.goals:
            c = self.tree.g(goal)
            if c < best:
                best, best_goal = c, goal
        if best < self.best_cost:
            self.best_cost = best
            self._best_goal = best_goal
            event = SolutionEvent(
                elapsed=time.perf_counter() - self._start_time,
                cost=best,
                path=tuple(self.tree.path_to(best_goal)),
            )
            self.events.append(event)
            return event
        return None

    # -- between searches ------------------------------------------------

    def approximation_update_due(self) -> bool:
        return self.searches_completed >= self.schedule.searches_per_batch

    def update_factors(self) -> tuple[float, float]:
        self.inflation = self.schedule.inflation(self.searches_completed, self.q)
        self.truncation = self.schedule.truncation(self.q)
        return self.inflation, self.truncation

    def advance(self) -> None:
        """Between-search step: densify the graph or repair the last search.

        Either way the factors are updated for the upcoming search and
        every surviving queue entry is re-keyed under the new inflation.
        """
        if not self.search_finished:
            raise RuntimeError("advance() requires a finished search")
        self.searches_completed += 1
        if self.approximation_update_due():
            if self.config.pruning:
                rgg.prune(
                    self.tree, self.samples, self.problem.goals,
                    self.best_cost, self.heur.total,
                )
            self._draw_batch()
            self.q = len(self.tree) + len(self.samples)
            self.batches += 1
            self.searches_completed = 0
            self.radius = self._connection_radius(self.q)
            self._rebuild_index()
            seed_edges = self.expand([self.problem.start])
            self.update_factors()
            self.queue = EdgeQueue()
            self._push_edges(seed_edges)
        else:
            repair_edges = self.expand(sorted(self.inconsistent))
            self.update_factors()
            live = self.queue.live_edges(self._g_of)
            known = set(live)
            self.queue = EdgeQueue()
            self._push_edges(live)
            self._push_edges(e for e in repair_edges if e not in known)
        self.closed = set()
        self.inconsistent = set()
        self.search_finished = False

    def _informed_set(self) -> InformedSet:
        p = self.problem
        goal = p.goals[0]
        floor = math.dist(p.start, goal)
        return InformedSet(p.start, goal, p.world.bounds, max(self.best_cost, floor))

    def _draw_batch(self) -> None:
        p = self.problem
        if len(p.goals) == 1:
            rgg.add_batch(
                self.samples, self._informed_set(), p.goals,
                self.rgg_config, self.rng, self.tree.vertices,
            )
        else:
            pts = self._sample_multigoal(self.rgg_config.m)
            self.samples.update(tuple(row) for row in pts.tolist())
            for goal in p.goals:
                if goal not in self.tree and self.heur.total(goal) < self.best_cost:
                    self.samples.add(goal)

    def _sample_multigoal(self, count: int) -> np.ndarray:
        """Uniform over the informed region for several goals, by rejection."""
        bounds = self.problem.world.bounds
        n = self.problem.dimension
        out = np.empty((count, n))
        filled = 0
        while filled < count:
            pts = self.rng.uniform(bounds.lower, bounds.upper, (count - filled, n))
            if math.isinf(self.best_cost):
                ok = np.ones(len(pts), dtype=bool)
            else:
                fhat = self.heur.cost_to_come_many(pts) + self.heur.cost_to_go_many(pts)
                ok = fhat <= self.best_cost
            k = int(ok.sum())
            out[filled : filled + k] = pts[ok]
            filled += k
        return out

    def _connection_radius(self, q: int) -> float:
        p = self.problem
        if len(p.goals) == 1:
            return rgg.connection_radius(q, self._informed_set(), self.rgg_config)
        box = p.world.bounds.measure()
        if math.isinf(self.best_cost):
            measure = box
        else:
            spheroids = sum(
                phs_measure(math.dist(p.start, g), max(self.best_cost, math.dist(p.start, g)), p.dimension)
                for g in p.goals
            )
            measure = min(box, spheroids)
        return radius_from_measure(q, measure, p.dimension, self.config.eta)

    # -- the anytime loop -------------------------------------------------

    def solve(
        self,
        time_budget: float | None = None,
        max_iterations: int | None = None,
        on_event: Callable[[SolutionEvent], None] | None = None,
        on_search_finished: Callable[["AbitPlanner"], None] | None = None,
    ) -> RunRecord:
        """Run until the wall-clock budget or total-iteration cap is reached.

        The budget is checked between iterations, never mid-iteration.
        Calling solve() again resumes the same run; the returned record
        always covers everything since construction/restart.
        """
        if time_budget is None and max_iterations is None:
            raise ValueError("need a time budget and/or an iteration cap")
        if self.iterations == 0:
            self._start_time = time.perf_counter()
        deadline = (
            self._start_time + time_budget if time_budget is not None else math.inf
        )
        while True:
            if max_iterations is not None and self.iterations >= max_iterations:
                break
            if time.perf_counter() >= deadline:
                break
            if self.search_finished:
                if on_search_finished is not None:
                    on_search_finished(self)
                self.advance()
            else:
                event = self.iterate()
                if event is not None and on_event is not None:
                    on_event(event)
        return self.run_record()

    def run_record(self) -> RunRecord:
        return RunRecord(
            planner=self.name,
            problem=self.problem.name,
            seed=self.config.seed,
            success=bool(self.events),
            events=[(e.elapsed, e.cost) for e in self.events],
            path=list(self.events[-1].path) if self.events else None,
        )


def solve(
    problem: ProblemDefinition,
    config: PlannerConfig | None = None,
    time_budget: float | None = None,
    on_event: Callable[[SolutionEvent], None] | None = None,
    **kwargs,
) -> RunRecord:
    """One-shot convenience wrapper around AbitPlanner."""
    return AbitPlanner(problem, config).solve(
        time_budget=time_budget, on_event=on_event, **kwargs
    )
