"""Anytime run outputs shared by the planners and the benchmark harness."""

from __future__ import annotations

from dataclasses import dataclass, field

from .space import State


@dataclass(frozen=True)
class SolutionEvent:
    """One strict improvement of the incumbent solution."""

    elapsed: float
    cost: float
    path: tuple[State, ...]


@dataclass
class RunRecord:
    """Everything one planner run produced: the benchmark unit.

    `events` holds (elapsed seconds, cost) pairs in time order with
    strictly decreasing costs; a run is successful exactly when it emitted
    at least one event.
    """

    planner: str
    problem: str
    seed: int
    success: bool
    events: list[tuple[float, float]] = field(default_factory=list)
    path: list[State] | None = None

    def __post_init__(self):
        self.success = bool(self.events)

    @property
    def first_solution_time(self) -> float:
        return self.events[0][0] if self.events else float("inf")

    @property
    def final_cost(self) -> float:
        return self.events[-1][1] if self.events else float("inf")

    def best_cost_by(self, t: float) -> float:
        """Best cost achieved no later than t; infinite if none yet."""
        best = float("inf")
        for elapsed, cost in self.events:
            if elapsed <= t:
                best = cost
            else:
                break
        return best

    def to_json(self) -> dict:
        return {
            "planner": self.planner,
            "problem": self.problem,
            "seed": self.seed,
            "success": self.success,
            "events": [[t, c] for t, c in self.events],
        }

    @classmethod
    def from_json(cls, d: dict) -> "RunRecord":
        return cls(
            planner=d["planner"],
            problem=d["problem"],
            seed=int(d["seed"]),
            success=bool(d["success"]),
            events=[(float(t), float(c)) for t, c in d["events"]],
        )
