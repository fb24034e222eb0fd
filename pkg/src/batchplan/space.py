"""Deterministic randomness, unit-ball sampling and informed-set geometry.

States are plain tuples of floats so they can be used as dict/set keys by
every other module. All randomness flows through :class:`RandomSource`,
which wraps numpy's PCG64 generator: equal seeds and equal call sequences
produce bit-identical streams on every platform.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Iterable

import numpy as np

if TYPE_CHECKING:
    from .world import Box

State = tuple[float, ...]


def as_state(coords: Iterable[float]) -> State:
    """Normalize a coordinate sequence into the canonical state form."""
    s = tuple(float(c) for c in coords)
    if not s:
        raise ValueError("state needs at least one coordinate")
    if not all(math.isfinite(c) for c in s):
        raise ValueError(f"state has non-finite coordinates: {s}")
    return s


def distance(a: State, b: State) -> float:
    return math.dist(a, b)


class RandomSource:
    """Seeded PCG64 stream (the project-wide generator).

    PCG64 is numpy's default 64-bit generator; it is stable across
    machines, so benchmark runs are reproducible from their seed alone.
    """

    __slots__ = ("seed", "_gen")

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def random(self, size=None):
        return self._gen.random(size)

    def uniform(self, low, high, size=None):
        return self._gen.uniform(low, high, size)

    def standard_normal(self, size=None):
        return self._gen.standard_normal(size)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size)

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed})"


def unit_ball_measure(n: int) -> float:
    """Lebesgue measure of the n-dimensional unit ball."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def sample_unit_ball_many(n: int, rng: RandomSource, count: int) -> np.ndarray:
    """Draw `count` points uniformly from the unit n-ball, as a (count, n) array.

    Direction from a normalized Gaussian vector, radius from U^(1/n);
    uniform by construction, no rejection loop even in high dimensions.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if count < 0:
        raise ValueError("count must be nonnegative")
    dirs = rng.standard_normal((count, n))
    norms = np.linalg.norm(dirs, axis=1)
    # A zero normal vector has probability 0; resample defensively anyway.
    while np.any(norms == 0.0):
        bad = norms == 0.0
        dirs[bad] = rng.standard_normal((int(bad.sum()), n))
        norms = np.linalg.norm(dirs, axis=1)
    radii = rng.random(count) ** (1.0 / n)
    return dirs * (radii / norms)[:, None]


def sample_unit_ball(n: int, rng: RandomSource) -> State:
    """One point uniform in the unit n-ball."""
    return tuple(sample_unit_ball_many(n, rng, 1)[0])


def phs_measure(c_min: float, c_best: float, n: int) -> float:
    """Measure of the prolate hyperspheroid {x : |x-s| + |x-g| <= c_best}.

    The spheroid has one transverse axis of length c_best and n-1 conjugate
    axes of length sqrt(c_best^2 - c_min^2), where c_min = |s - g|.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if c_min < 0:
        raise ValueError(f"c_min must be nonnegative, got {c_min}")
    if math.isinf(c_best):
        return math.inf
    if c_best < c_min:
        raise ValueError(f"c_best ({c_best}) smaller than c_min ({c_min})")
    conjugate = math.sqrt((c_best - c_min) * (c_best + c_min)) / 2.0
    return unit_ball_measure(n) * (c_best / 2.0) * conjugate ** (n - 1)


class InformedSet:
    """States whose straight-line estimate through them can beat `c_best`.

    For the Euclidean path-length objective this is the prolate
    hyperspheroid with foci at the start and goal, intersected with the
    problem bounds. `c_best` is the incumbent solution cost; infinity means
    the whole bounded space is still informative.
    """

    __slots__ = ("start", "goal", "bounds", "c_best", "c_min", "n")

    def __init__(self, start: State, goal: State, bounds: "Box", c_best: float = math.inf):
        self.start = as_state(start)
        self.goal = as_state(goal)
        if len(self.start) != len(self.goal):
            raise ValueError("start and goal dimensions differ")
        self.bounds = bounds
        self.n = len(self.start)
        self.c_min = math.dist(self.start, self.goal)
        if not math.isinf(c_best) and c_best < self.c_min:
            raise ValueError(f"c_best ({c_best}) below straight-line cost ({self.c_min})")
        self.c_best = float(c_best)

    def contains(self, x: State) -> bool:
        return (
            self.bounds.contains(x)
            and math.dist(self.start, x) + math.dist(x, self.goal) <= self.c_best
        )

    def with_cost(self, c_best: float) -> "InformedSet":
        return InformedSet(self.start, self.goal, self.bounds, c_best)


def informed_measure(iset: InformedSet) -> float:
    """Measure of the informed set, clamped to the bounding box."""
    box = iset.bounds.measure()
    if math.isinf(iset.c_best):
        return box
    return min(phs_measure(iset.c_min, iset.c_best, iset.n), box)


def _axis_frame(start: np.ndarray, goal: np.ndarray) -> np.ndarray:
    """Orthonormal map taking the first basis vector onto the start-goal axis.

    Householder reflection H(e1 - a) with a = (goal-start)/|goal-start|:
    deterministic, orthogonal, and H @ e1 == a exactly.
    """
    n = start.shape[0]
    axis = goal - start
    norm = np.linalg.norm(axis)
    if norm == 0.0:
        return np.eye(n)
    a = axis / norm
    u = -a.copy()
    u[0] += 1.0  # e1 - a
    uu = float(u @ u)
    if uu < 1e-30:  # axis already along e1
        return np.eye(n)
    return np.eye(n) - (2.0 / uu) * np.outer(u, u)


def sample_informed_many(iset: InformedSet, rng: RandomSource, count: int) -> np.ndarray:
    """Draw `count` points uniform over (informed set ∩ bounds), as an array.

    Whichever of the hyperspheroid and the box is smaller is sampled
    directly and the other used as the rejection test, so acceptance never
    collapses when the incumbent cost is very large. Both directions give
    the same uniform law on the intersection.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    n = iset.n
    lower = np.asarray(iset.bounds.lower)
    upper = np.asarray(iset.bounds.upper)

    if count == 0:
        return np.empty((0, n))

    if iset.c_best == iset.c_min and iset.c_min > 0.0:
        # Degenerate spheroid: the start-goal segment.
        s = np.asarray(iset.start)
        g = np.asarray(iset.goal)
        t = rng.random(count)
        return s + t[:, None] * (g - s)

    box_measure = iset.bounds.measure()
    use_phs = (
        not math.isinf(iset.c_best)
        and phs_measure(iset.c_min, iset.c_best, n) < box_measure
    )

    out = np.empty((count, n))
    filled = 0
    if use_phs:
        s = np.asarray(iset.start)
        g = np.asarray(iset.goal)
        center = (s + g) / 2.0
        radii = np.full(n, math.sqrt((iset.c_best - iset.c_min) * (iset.c_best + iset.c_min)) / 2.0)
        radii[0] = iset.c_best / 2.0
        frame = _axis_frame(s, g)
        while filled < count:
            want = count - filled
            ball = sample_unit_ball_many(n, rng, want)
            pts = ball * radii @ frame.T + center
            in_box = np.all((pts >= lower) & (pts <= upper), axis=1)
            # Guard against boundary points drifting past c_best by rounding.
            fhat = np.linalg.norm(pts - s, axis=1) + np.linalg.norm(pts - g, axis=1)
            ok = in_box & (fhat <= iset.c_best)
            k = int(ok.sum())
            out[filled : filled + k] = pts[ok]
            filled += k
    else:
        s = np.asarray(iset.start)
        g = np.asarray(iset.goal)
        while filled < count:
            want = count - filled
            pts = rng.uniform(lower, upper, (want, n))
            if math.isinf(iset.c_best):
                ok = np.ones(want, dtype=bool)
            else:
                fhat = np.linalg.norm(pts - s, axis=1) + np.linalg.norm(pts - g, axis=1)
                ok = fhat <= iset.c_best
            k = int(ok.sum())
            out[filled : filled + k] = pts[ok]
            filled += k
    return out


def sample_informed(iset: InformedSet, rng: RandomSource) -> State:
    """One state uniform over the informed set intersected with the bounds."""
    return tuple(sample_informed_many(iset, rng, 1)[0])
