"""The anytime planner, its event stream, and the quality bound.

The planner alternates between densifying its sampled graph and searching
it lazily. The first search of every batch runs with a strongly inflated
cost-to-go (greedy, fast first solutions); the second with a factor near
one (repairing quality); every search truncates once the incumbent is
provably within the truncation factor of the current graph's optimum.
That product of factors is a hard certificate, demonstrated here against
an exact shortest path on the frozen graph.

Run:  python demos/03_anytime_planning.py
"""

import math
import os

from batchplan import graph_shortest_path, make_wall_gap, snapshot_rgg
from batchplan.planner import AbitPlanner, PlannerConfig

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

problem = make_wall_gap(2)
optimum = 2.0 * math.sqrt(0.375**2 + 0.33**2) + 0.25

planner = AbitPlanner(problem, PlannerConfig(seed=1))
print(f"planning for 2 s toward the known optimum {optimum:.5f} ...\n")
print("  time        cost     over optimum")
record = planner.solve(
    time_budget=2.0,
    on_event=lambda e: print(f"  {e.elapsed*1e3:8.1f} ms  {e.cost:.5f}  {(e.cost/optimum-1)*100:+6.2f}%"),
)

print(f"\n{len(record.events)} improvements, {planner.batches} batches,",
      f"{planner.iterations} queue pops, {planner.collision_checks} collision checks")
print("final path has", len(record.path), "states")

# Freeze the graph after the next finished search and check the bound.
while not planner.search_finished:
    planner.iterate()
infl, trunc = planner.inflation, planner.truncation
graph = snapshot_rgg(planner)
opt_on_graph, _ = graph_shortest_path(graph)
print(f"\nfrozen graph: {len(graph.states)} states, {graph.edge_count} edges")
print(f"incumbent {planner.best_cost:.6f} <= "
      f"{infl:.6f} * {trunc:.6f} * {opt_on_graph:.6f} = "
      f"{infl * trunc * opt_on_graph:.6f}  (search quality certificate)")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.5, 5))
    for obs in problem.world.obstacles:
        ax.add_patch(plt.Rectangle(obs.lower, *(obs.upper - obs.lower), color="k"))
    for parent, child in planner.tree.edges():
        ax.plot([parent[0], child[0]], [parent[1], child[1]], "-",
                color="tab:blue", lw=0.3, alpha=0.5)
    xs = [s[0] for s in record.path]
    ys = [s[1] for s in record.path]
    ax.plot(xs, ys, "-", color="tab:orange", lw=2)
    ax.plot(*problem.start, "o", color="tab:red")
    ax.plot(*problem.goals[0], "o", color="tab:green")
    ax.set_xlim(-1, 1), ax.set_ylim(-1, 1), ax.set_aspect(1)
    ax.set_title(f"search tree and best path ({record.final_cost:.4f})")
    fig.savefig(os.path.join(OUT, "anytime_tree.png"), dpi=120, bbox_inches="tight")
    print("wrote", os.path.join(OUT, "anytime_tree.png"))
except ImportError:
    print("(matplotlib not installed; skipping the picture)")
