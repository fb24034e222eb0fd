"""Informed sampling and the shrinking connection radius.

Once a solution of cost c exists, only states x with
dist(start, x) + dist(x, goal) <= c can possibly improve it. For path
length that region is a prolate spheroid with the start and goal as foci;
sampling is focused there, and its (box-clamped) measure drives the
radius that decides which sample pairs count as graph edges.

Run:  python demos/02_informed_sampling_and_radius.py
"""

import math
import os

import numpy as np

from batchplan import (
    Box,
    InformedSet,
    RandomSource,
    connection_radius,
    informed_measure,
    phs_measure,
    sample_informed_many,
    sample_unit_ball_many,
    unit_ball_measure,
)
from batchplan.rgg import RggConfig

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)
rng = RandomSource(7)

# Unit-ball draws: direction from a normalized Gaussian, radius U^(1/n).
pts = sample_unit_ball_many(2, rng, 10_000)
print("unit ball draws:", len(pts), " max |x| =", float(np.linalg.norm(pts, axis=1).max()))
print("unit ball measures:", [round(unit_ball_measure(n), 4) for n in (1, 2, 3, 4)])

# The informed spheroid shrinks as the incumbent improves.
bounds = Box([-1, -1], [1, 1])
start, goal = (-0.5, 0.0), (0.5, 0.0)
print("\nincumbent cost -> informed measure (box measure is 4.0):")
for c in (math.inf, 2.0, 1.5, 1.25, 1.05):
    iset = InformedSet(start, goal, bounds, c)
    print(f"  c = {c:>8}: {informed_measure(iset):8.4f}"
          + ("" if math.isinf(c) else f"   (spheroid alone: {phs_measure(1.0, c, 2):.4f})"))

# And the connection radius shrinks with both the measure and the count.
cfg = RggConfig(m=100, eta=1.1, n=2)
print("\nsamples q -> connection radius (informed at c=1.25 vs uninformed):")
tight = InformedSet(start, goal, bounds, 1.25)
wide = InformedSet(start, goal, bounds, math.inf)
for q in (100, 400, 1600, 6400):
    print(f"  q = {q:5d}:  {connection_radius(q, tight, cfg):.4f}  vs  "
          f"{connection_radius(q, wide, cfg):.4f}")

# Draws stay inside the spheroid-box intersection by construction.
draws = sample_informed_many(tight, rng, 5000)
f = np.linalg.norm(draws - np.array(start), axis=1) + np.linalg.norm(
    draws - np.array(goal), axis=1
)
print("\n5000 informed draws at c=1.25: max total estimate =", float(f.max()))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(draws[:, 0], draws[:, 1], ".", ms=1.5, alpha=0.4)
    ax.plot(*start, "o", color="tab:red")
    ax.plot(*goal, "o", color="tab:green")
    ax.set_xlim(-1, 1), ax.set_ylim(-1, 1), ax.set_aspect(1)
    ax.set_title("informed samples at incumbent cost 1.25")
    fig.savefig(os.path.join(OUT, "informed_samples.png"), dpi=120, bbox_inches="tight")
    print("wrote", os.path.join(OUT, "informed_samples.png"))
except ImportError:
    print("(matplotlib not installed; skipping the picture)")
