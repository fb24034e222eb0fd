"""The increasingly dense graph approximation.

Batches of informed samples plus tree vertices form an edge-implicit
random geometric graph: any pair closer than the connection radius is a
candidate edge, enumerated on demand through a static spatial index that
is rebuilt once per batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .space import (
    InformedSet,
    RandomSource,
    State,
    informed_measure,
    sample_informed_many,
    unit_ball_measure,
)
from .tree import SearchTree


@dataclass
class RggConfig:
    """Sampling/connection parameters: batch size, radius constant, dimension."""

    m: int = 100
    eta: float = 1.1
    n: int = 2

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"batch size must be >= 1, got {self.m}")
        if not self.eta > 1.0:
            raise ValueError(f"radius constant must be > 1, got {self.eta}")
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")


def radius_from_measure(q: int, measure: float, n: int, eta: float) -> float:
    """Connection radius for q sampled states covering `measure` of space."""
    if q < 2:
        raise ValueError(f"radius undefined for fewer than 2 states, got q={q}")
    return eta * (
        2.0 * (1.0 + 1.0 / n) * (measure / unit_ball_measure(n)) * (math.log(q) / q)
    ) ** (1.0 / n)


def connection_radius(q: int, iset: InformedSet, cfg: RggConfig) -> float:
    """Radius of the implicit graph over q states in the informed set."""
    return radius_from_measure(q, informed_measure(iset), cfg.n, cfg.eta)


class NeighborIndex:
    """Static radius-query index over a point set.

    Queries return exactly the member states within Euclidean distance r
    of the query point, excluding the query point itself.
    """

    def __init__(self, states: Iterable[State]):
        self.states: list[State] = list(states)
        if self.states:
            self.coords = np.asarray(self.states, dtype=float)
            self._kd = cKDTree(self.coords)
        else:
            self.coords = np.empty((0, 0))
            self._kd = None

    def __len__(self) -> int:
        return len(self.states)

    def query_idx(self, x: State, r: float) -> list[int]:
        """Indices of members within r of x; may include x itself."""
        if self._kd is None:
            return []
        if math.isinf(r):
            return list(range(len(self.states)))
        return self._kd.query_ball_point(x, r, return_sorted=False)

    def query(self, x: State, r: float) -> list[State]:
        return [self.states[i] for i in self.query_idx(x, r) if self.states[i] != x]


def add_batch(
    samples: set[State],
    iset: InformedSet,
    goals: Sequence[State],
    cfg: RggConfig,
    rng: RandomSource,
    tree_vertices: Iterable[State] = (),
) -> set[State]:
    """Add one batch of informed samples; keep unreached goals reachable.

    Goals that are not yet tree vertices and could still improve the
    incumbent are re-inserted into the sample set, so they stay available
    as connection targets no matter what pruning did.
    """
    pts = sample_informed_many(iset, rng, cfg.m)
    samples.update(tuple(row) for row in pts.tolist())
    for goal in goals:
        if goal not in tree_vertices and math.dist(iset.start, goal) < iset.c_best:
            samples.add(goal)
    return samples


def prune(
    tree: SearchTree,
    samples: set[State],
    goals: Sequence[State],
    c_best: float,
    f_hat: Callable[[State], float],
) -> tuple[SearchTree, set[State]]:
    """Drop everything that provably cannot beat the incumbent solution.

    Samples go when f_hat(x) >= c_best, vertices when f_hat(x) > c_best
    (note the asymmetry), and any vertex disconnected from the root by
    those removals is demoted back into the sample set rather than lost.
    """
    if math.isinf(c_best):
        return tree, samples

    samples.difference_update([x for x in samples if f_hat(x) >= c_best])

    keep = {v for v in tree.vertices if f_hat(v) <= c_best}
    keep.add(tree.root)
    reachable: set[State] = set()
    stack = [tree.root]
    while stack:
        v = stack.pop()
        reachable.add(v)
        stack.extend(c for c in tree.children(v) if c in keep)

    demoted = [v for v in keep if v not in reachable]
    removed = [v for v in tree.vertices if v not in keep]
    tree.remove_vertices(removed + demoted)
    samples.update(demoted)
    return tree, samples
