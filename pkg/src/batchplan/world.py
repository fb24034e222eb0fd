"""Problem definitions: bounds, axis-aligned obstacles, costs and heuristics.

Obstacles are closed boxes, so touching a face or corner counts as a
collision. Segment validity is decided exactly by per-axis slab interval
intersection; there is no stepping resolution to tune.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

import numpy as np

from .space import RandomSource, State, as_state


class GenerationError(RuntimeError):
    """Raised when a random world cannot be built within the retry budget."""


class Box:
    """Closed axis-aligned box [lower, upper]."""

    __slots__ = ("lower", "upper")

    def __init__(self, lower: Iterable[float], upper: Iterable[float]):
        lo = np.asarray(list(lower), dtype=float)
        hi = np.asarray(list(upper), dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1 or lo.size == 0:
            raise ValueError("lower and upper must be 1-d and the same length")
        if np.any(lo > hi):
            raise ValueError(f"box has lower > upper: {lo} / {hi}")
        lo.flags.writeable = False
        hi.flags.writeable = False
        self.lower = lo
        self.upper = hi

    @property
    def dimension(self) -> int:
        return self.lower.size

    def contains(self, x: Sequence[float]) -> bool:
        p = np.asarray(x, dtype=float)
        if p.shape != self.lower.shape:
            raise ValueError(f"dimension mismatch: point {p.shape} vs box {self.lower.shape}")
        return bool(np.all(p >= self.lower) and np.all(p <= self.upper))

    def measure(self) -> float:
        return float(np.prod(self.upper - self.lower))

    def intersects(self, other: "Box") -> bool:
        return bool(
            np.all(np.maximum(self.lower, other.lower) <= np.minimum(self.upper, other.upper))
        )

    def to_json(self) -> dict:
        return {"lower": self.lower.tolist(), "upper": self.upper.tolist()}

    @classmethod
    def from_json(cls, d: dict) -> "Box":
        return cls(d["lower"], d["upper"])

    def __repr__(self) -> str:
        return f"Box({self.lower.tolist()}, {self.upper.tolist()})"


class World:
    """Bounded free space: a bounds box minus a list of closed obstacle boxes."""

    def __init__(self, bounds: Box, obstacles: Sequence[Box] = ()):
        if np.any(bounds.lower >= bounds.upper):
            raise ValueError("bounds box is degenerate")
        for obs in obstacles:
            if obs.dimension != bounds.dimension:
                raise ValueError("obstacle dimension differs from bounds")
            if not obs.intersects(bounds):
                raise ValueError(f"obstacle {obs} lies entirely outside the bounds")
        self.bounds = bounds
        self.obstacles = list(obstacles)
        if self.obstacles:
            self._obs_lo = np.array([o.lower for o in self.obstacles])
            self._obs_hi = np.array([o.upper for o in self.obstacles])
        else:
            n = bounds.dimension
            self._obs_lo = np.empty((0, n))
            self._obs_hi = np.empty((0, n))

    @property
    def dimension(self) -> int:
        return self.bounds.dimension

    def state_valid(self, x: Sequence[float]) -> bool:
        p = np.asarray(x, dtype=float)
        if p.shape != self.bounds.lower.shape:
            raise ValueError("dimension mismatch between state and world")
        if np.any(p < self.bounds.lower) or np.any(p > self.bounds.upper):
            return False
        if self._obs_lo.size == 0:
            return True
        return not bool(np.any(np.all((p >= self._obs_lo) & (p <= self._obs_hi), axis=1)))

    def segment_valid(self, a: Sequence[float], b: Sequence[float]) -> bool:
        pa = np.asarray(a, dtype=float)
        pb = np.asarray(b, dtype=float)
        if pa.shape != pb.shape or pa.shape != self.bounds.lower.shape:
            raise ValueError("dimension mismatch in segment check")
        # Bounds are convex, so endpoint containment covers the whole segment.
        for p in (pa, pb):
            if np.any(p < self.bounds.lower) or np.any(p > self.bounds.upper):
                return False
        if self._obs_lo.size == 0:
            return True
        return not self._segment_hits_any(pa, pb)

    def _segment_hits_any(self, a: np.ndarray, b: np.ndarray) -> bool:
        """Exact slab test of the closed segment against every obstacle."""
        d = b - a
        zero = d == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            t0 = (self._obs_lo - a) / d
            t1 = (self._obs_hi - a) / d
        tmin = np.minimum(t0, t1)
        tmax = np.maximum(t0, t1)
        if zero.any():
            inside = (a >= self._obs_lo) & (a <= self._obs_hi)
            tmin[:, zero] = np.where(inside[:, zero], -np.inf, np.inf)
            tmax[:, zero] = np.where(inside[:, zero], np.inf, -np.inf)
        enter = tmin.max(axis=1)
        leave = tmax.min(axis=1)
        return bool(np.any((enter <= leave) & (leave >= 0.0) & (enter <= 1.0)))


def is_state_valid(x: State, w: World) -> bool:
    """True iff x is inside the bounds and in no closed obstacle."""
    return w.state_valid(x)


def is_segment_valid(a: State, b: State, w: World) -> bool:
    """True iff the closed segment [a, b] stays in bounds and misses every obstacle."""
    return w.segment_valid(a, b)


def edge_cost(a: State, b: State, w: World) -> float:
    """True edge cost: Euclidean length if the motion is valid, else infinity.

    This is the only operation that performs collision checks during the
    search, which is what makes the search lazy.
    """
    if w.segment_valid(a, b):
        return math.dist(a, b)
    return math.inf


class Heuristics:
    """Admissible Euclidean estimates for the path-length objective.

    cost_to_come(x) never exceeds the true cost of reaching x from the
    start, cost_to_go(x) never exceeds the cost of any valid path from x
    to a goal, and edge_cost(a, b) never exceeds the true edge cost.
    """

    __slots__ = ("start", "goals", "_start_arr", "_goal_arr")

    def __init__(self, start: State, goals: Sequence[State]):
        self.start = as_state(start)
        self.goals = tuple(as_state(g) for g in goals)
        if not self.goals:
            raise ValueError("at least one goal required")
        self._start_arr = np.asarray(self.start)
        self._goal_arr = np.asarray(self.goals)

    def cost_to_come(self, x: State) -> float:
        return math.dist(self.start, x)

    def cost_to_go(self, x: State) -> float:
        return min(math.dist(x, g) for g in self.goals)

    def edge_cost(self, a: State, b: State) -> float:
        return math.dist(a, b)

    def total(self, x: State) -> float:
        """f-hat: admissible start-through-x-to-goal estimate."""
        return self.cost_to_come(x) + self.cost_to_go(x)

    def cost_to_come_many(self, pts: np.ndarray) -> np.ndarray:
        return np.linalg.norm(pts - self._start_arr, axis=1)

    def cost_to_go_many(self, pts: np.ndarray) -> np.ndarray:
        diffs = pts[:, None, :] - self._goal_arr[None, :, :]
        return np.linalg.norm(diffs, axis=2).min(axis=1)


class ProblemDefinition:
    """A planning query: world, start state and nonempty goal set."""

    def __init__(
        self,
        world: World,
        start: State,
        goals: Sequence[State],
        name: str = "problem",
    ):
        self.world = world
        self.start = as_state(start)
        self.goals = tuple(as_state(g) for g in goals)
        self.name = name
        if not self.goals:
            raise ValueError("problem needs at least one goal")
        if len(self.start) != world.dimension:
            raise ValueError("start dimension differs from world")
        if not world.state_valid(self.start):
            raise ValueError(f"start state {self.start} is not valid")
        for g in self.goals:
            if not world.state_valid(g):
                raise ValueError(f"goal state {g} is not valid")

    @property
    def dimension(self) -> int:
        return self.world.dimension

    def heuristics(self) -> Heuristics:
        return Heuristics(self.start, self.goals)


def heuristics(p: ProblemDefinition) -> Heuristics:
    """Admissible cost-to-come / cost-to-go / edge-cost estimates for p."""
    return p.heuristics()


def make_wall_gap(n: int, name: str | None = None) -> ProblemDefinition:
    """Wall with a narrow gap; valid paths thread the gap or clear the top.

    Bounds [-1, 1]^n. The wall occupies x1 in [-0.125, 0.125] up to
    x2 = 0.7, with a gap at x2 in (0.33, 0.36); it spans the full extent
    of every further dimension so the two homotopy classes survive in
    higher dimensions.
    """
    if n < 2:
        raise ValueError(f"wall gap needs dimension >= 2, got {n}")
    full_lo = [-1.0] * (n - 2)
    full_hi = [1.0] * (n - 2)
    below = Box([-0.125, -1.0] + full_lo, [0.125, 0.33] + full_hi)
    above = Box([-0.125, 0.36] + full_lo, [0.125, 0.7] + full_hi)
    world = World(Box([-1.0] * n, [1.0] * n), [below, above])
    start = tuple([-0.5] + [0.0] * (n - 1))
    goal = tuple([0.5] + [0.0] * (n - 1))
    return ProblemDefinition(world, start, [goal], name or f"wall_gap_{n}d")


def make_random_rectangles(
    n: int,
    count: int = 20,
    width_range: tuple[float, float] = (0.15, 0.5),
    rng: RandomSource | None = None,
    name: str | None = None,
) -> ProblemDefinition:
    """Random closed boxes dropped uniformly in [-1, 1]^n.

    Per-axis widths are uniform in width_range and centers uniform in the
    bounds, so boxes may stick out past the walls. Boxes covering the start
    or the goal are redrawn; generation is deterministic per seed.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    wmin, wmax = width_range
    if not (0.0 < wmin <= wmax):
        raise ValueError(f"invalid width range {width_range}")
    if rng is None:
        rng = RandomSource(0)
    bounds = Box([-1.0] * n, [1.0] * n)
    start = tuple([-0.5] + [0.0] * (n - 1))
    goal = tuple([0.5] + [0.0] * (n - 1))

    boxes: list[Box] = []
    attempts = 0
    max_attempts = 1000 * max(count, 1)
    while len(boxes) < count:
        if attempts >= max_attempts:
            raise GenerationError(
                f"could not place {count} boxes after {max_attempts} attempts"
            )
        attempts += 1
        widths = rng.uniform(wmin, wmax, n)
        center = rng.uniform(-1.0, 1.0, n)
        box = Box(center - widths / 2.0, center + widths / 2.0)
        if box.contains(start) or box.contains(goal):
            continue
        boxes.append(box)
    world = World(bounds, boxes)
    return ProblemDefinition(world, start, [goal], name or f"random_rects_{n}d")


def problem_to_json(p: ProblemDefinition) -> dict:
    return {
        "dimension": p.dimension,
        "bounds": p.world.bounds.to_json(),
        "obstacles": [o.to_json() for o in p.world.obstacles],
        "start": list(p.start),
        "goals": [list(g) for g in p.goals],
    }


def problem_from_json(d: dict, name: str = "problem") -> ProblemDefinition:
    try:
        n = int(d["dimension"])
        bounds = Box.from_json(d["bounds"])
        obstacles = [Box.from_json(o) for o in d.get("obstacles", [])]
        start = as_state(d["start"])
        goals = [as_state(g) for g in d["goals"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed problem description: {exc}") from exc
    if bounds.dimension != n:
        raise ValueError(f"bounds dimension {bounds.dimension} != declared {n}")
    return ProblemDefinition(World(bounds, obstacles), start, goals, name=name)


def save_problem(p: ProblemDefinition, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_json(p), fh, indent=2)


def load_problem(path: str, name: str | None = None) -> ProblemDefinition:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if name is None:
        name = path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return problem_from_json(data, name=name)
