"""Worlds, exact collision checks, and the problem file format.

Walks through the two benchmark worlds: the wall with a narrow gap and a
field of random rectangles. Collision checking is exact (per-axis slab
intervals), so there is no stepping resolution to tune: touching an
obstacle boundary already counts as a collision.

Run:  python demos/01_worlds_and_validity.py
"""

import json
import math
import os

from batchplan import (
    RandomSource,
    edge_cost,
    is_segment_valid,
    is_state_valid,
    make_random_rectangles,
    make_wall_gap,
    problem_to_json,
)

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

# --- The wall-gap world -----------------------------------------------------

problem = make_wall_gap(2)
print("wall gap problem:", problem.name)
print("  bounds  :", problem.world.bounds)
for i, obs in enumerate(problem.world.obstacles):
    print(f"  wall box {i}:", obs)
print("  start   :", problem.start, "-> valid:", is_state_valid(problem.start, problem.world))
print("  goal    :", problem.goals[0])

# The straight line is blocked; the gap at x2 in (0.33, 0.36) is open.
print("\nstraight start->goal valid? ",
      is_segment_valid(problem.start, problem.goals[0], problem.world))
print("through the gap (y=0.345)?  ",
      is_segment_valid((-0.5, 0.345), (0.5, 0.345), problem.world))
print("grazing the gap edge (y=0.33)?",
      is_segment_valid((-0.5, 0.33), (0.5, 0.33), problem.world))

# True edge cost is Euclidean length when the motion is valid, inf otherwise.
print("\nedge costs:")
print("  blocked:", edge_cost(problem.start, problem.goals[0], problem.world))
print("  via gap:", edge_cost((-0.5, 0.345), (0.5, 0.345), problem.world))

# The best path threads the gap past two wall corners:
optimum = 2.0 * math.sqrt(0.375**2 + 0.33**2) + 0.25
print(f"\ncorner-path optimum in 2-d: {optimum:.6f}")

# --- Random rectangles -------------------------------------------------------

rects = make_random_rectangles(2, count=20, width_range=(0.15, 0.5),
                               rng=RandomSource(3))
print(f"\n{rects.name}: {len(rects.world.obstacles)} boxes, deterministic per seed")

# --- The problem file format -------------------------------------------------

path = os.path.join(OUT, "wall_gap_2d.json")
with open(path, "w") as fh:
    json.dump(problem_to_json(problem), fh, indent=2)
print("\nwrote problem JSON to", path)
print("benchmark it with:  plan bench --problem file:" + path,
      "--planner abit --runs 10 --time 1 --out results.json")

# Optional picture, if matplotlib is around.
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(9, 4.5))
    for ax, prob in zip(axes, (problem, rects)):
        for obs in prob.world.obstacles:
            ax.add_patch(plt.Rectangle(obs.lower, *(obs.upper - obs.lower), color="k"))
        ax.plot(*prob.start, "o", color="tab:red")
        ax.plot(*prob.goals[0], "o", color="tab:green")
        ax.set_xlim(-1, 1), ax.set_ylim(-1, 1), ax.set_aspect(1)
        ax.set_title(prob.name)
    fig.savefig(os.path.join(OUT, "worlds.png"), dpi=120, bbox_inches="tight")
    print("wrote", os.path.join(OUT, "worlds.png"))
except ImportError:
    print("(matplotlib not installed; skipping the picture)")
