"""Connection radius, neighbor index, batching and pruning tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from batchplan.rgg import (
    NeighborIndex,
    RggConfig,
    add_batch,
    connection_radius,
    prune,
    radius_from_measure,
)
from batchplan.space import InformedSet, RandomSource
from batchplan.tree import SearchTree
from batchplan.world import Box, Heuristics


def mp_radius(q, measure, n, eta):
    """High-precision reference evaluation of the radius formula."""
    import mpmath as mp

    with mp.workdps(60):
        zeta = mp.pi ** (mp.mpf(n) / 2) / mp.gamma(mp.mpf(n) / 2 + 1)
        inner = (
            2 * (1 + mp.mpf(1) / n)
            * (mp.mpf(measure) / zeta)
            * (mp.log(q) / mp.mpf(q))
        )
        return float(mp.mpf(eta) * inner ** (mp.mpf(1) / n))


class TestConnectionRadius:
    def test_worked_value(self):
        assert radius_from_measure(100, 4.0, 2, 1.1) == pytest.approx(
            0.46135, abs=5e-6
        )

    def test_matches_high_precision_grid(self):
        for q in (2, 10, 100, 10_000, 1_000_000):
            for n in (2, 3, 4, 8):
                for measure in (0.5, 4.0, 2**n):
                    for eta in (1.01, 1.1, 2.0):
                        assert radius_from_measure(q, measure, n, eta) == pytest.approx(
                            mp_radius(q, measure, n, eta), abs=1e-9
                        )

    def test_decays_for_huge_sample_counts(self):
        assert radius_from_measure(10**12, 4.0, 2, 1.1) < 1e-2

    def test_monotone_nonincreasing_in_q(self):
        # log(q)/q peaks at q=e, so the radius rises once from q=2 to q=3
        # and decays monotonically from there on.
        assert radius_from_measure(3, 4.0, 3, 1.1) > radius_from_measure(2, 4.0, 3, 1.1)
        qs = np.unique(np.geomspace(3, 10**6, 400).astype(int))
        vals = [radius_from_measure(int(q), 4.0, 3, 1.1) for q in qs]
        assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))

    def test_doubling_measure_scales_by_root(self):
        for n in (2, 4, 7):
            r1 = radius_from_measure(500, 1.7, n, 1.1)
            r2 = radius_from_measure(500, 3.4, n, 1.1)
            assert r2 == pytest.approx(r1 * 2 ** (1.0 / n), rel=1e-12)

    def test_rejects_tiny_q(self):
        with pytest.raises(ValueError):
            radius_from_measure(1, 4.0, 2, 1.1)

    def test_informed_set_entry_point(self):
        bounds = Box([-1, -1], [1, 1])
        iset = InformedSet((-0.5, 0.0), (0.5, 0.0), bounds, math.inf)
        cfg = RggConfig(m=100, eta=1.1, n=2)
        assert connection_radius(100, iset, cfg) == pytest.approx(
            radius_from_measure(100, 4.0, 2, 1.1)
        )


class TestRggConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            RggConfig(m=0)
        with pytest.raises(ValueError):
            RggConfig(eta=1.0)
        with pytest.raises(ValueError):
            RggConfig(n=0)


class TestNeighborIndex:
    @given(seed=st.integers(0, 10_000), r=st.floats(0.05, 1.5))
    @settings(max_examples=150, deadline=None)
    def test_matches_linear_scan(self, seed, r):
        rng = RandomSource(seed)
        n = int(rng.integers(1, 5))
        count = int(rng.integers(1, 60))
        pts = [tuple(p) for p in rng.uniform(-1, 1, (count, n)).tolist()]
        idx = NeighborIndex(pts)
        for _ in range(8):
            probe = pts[int(rng.integers(0, count))]
            got = sorted(idx.query(probe, r))
            want = sorted(p for p in pts if p != probe and math.dist(p, probe) <= r)
            assert got == want

    def test_excludes_query_point_itself(self):
        pts = [(0.0, 0.0), (0.1, 0.0), (0.0, 0.2)]
        idx = NeighborIndex(pts)
        assert (0.0, 0.0) not in idx.query((0.0, 0.0), 1.0)
        assert len(idx.query((0.0, 0.0), 1.0)) == 2

    def test_infinite_radius_returns_everything(self):
        pts = [(float(i), 0.0) for i in range(10)]
        idx = NeighborIndex(pts)
        assert len(idx.query((0.0, 0.0), math.inf)) == 9

    def test_empty_index(self):
        idx = NeighborIndex([])
        assert idx.query((0.0, 0.0), 1.0) == []


def _iset(c_best, n=2):
    start = tuple([-0.5] + [0.0] * (n - 1))
    goal = tuple([0.5] + [0.0] * (n - 1))
    return InformedSet(start, goal, Box([-1.0] * n, [1.0] * n), c_best)


class TestAddBatch:
    def test_grows_by_batch_size_when_goal_in_tree(self):
        iset = _iset(math.inf)
        cfg = RggConfig(m=100, eta=1.1, n=2)
        samples = set()
        add_batch(samples, iset, [iset.goal], cfg, RandomSource(1), {iset.goal, iset.start})
        assert len(samples) == 100

    def test_goal_reinserted_when_unreached(self):
        iset = _iset(math.inf)
        cfg = RggConfig(m=10, eta=1.1, n=2)
        samples = set()
        add_batch(samples, iset, [iset.goal], cfg, RandomSource(2), {iset.start})
        assert iset.goal in samples
        assert len(samples) == 11

    def test_goal_not_reinserted_when_it_cannot_improve(self):
        iset = _iset(1.0)  # incumbent equals the straight-line cost
        cfg = RggConfig(m=5, eta=1.1, n=2)
        samples = set()
        add_batch(samples, iset, [iset.goal], cfg, RandomSource(3), {iset.start})
        assert iset.goal not in samples

    def test_samples_respect_incumbent(self):
        iset = _iset(1.3)
        cfg = RggConfig(m=200, eta=1.1, n=2)
        samples: set = set()
        add_batch(samples, iset, [iset.goal], cfg, RandomSource(4), {iset.goal})
        for x in samples:
            f = math.dist(iset.start, x) + math.dist(x, iset.goal)
            assert f <= 1.3 + 1e-12

    def test_uniform_over_box_before_first_solution(self):
        iset = _iset(math.inf)
        cfg = RggConfig(m=500, eta=1.1, n=2)
        samples: set = set()
        add_batch(samples, iset, [iset.goal], cfg, RandomSource(5), {iset.goal})
        pts = np.array(sorted(samples))
        assert np.all(np.abs(pts) <= 1.0)
        assert abs(float(np.mean(pts[:, 0] > 0)) - 0.5) < 0.08


class FHat:
    def __init__(self, start, goal):
        self.h = Heuristics(start, [goal])

    def __call__(self, x):
        return self.h.total(x)


class TestPrune:
    def setup_method(self):
        self.start = (0.0, 0.0)
        self.goal = (1.0, 0.0)
        self.f = FHat(self.start, self.goal)

    def test_infinite_incumbent_changes_nothing(self):
        tree = SearchTree(self.start)
        tree.connect(self.start, (2.0, 2.0), math.dist(self.start, (2.0, 2.0)))
        samples = {(3.0, 3.0)}
        prune(tree, samples, [self.goal], math.inf, self.f)
        assert (2.0, 2.0) in tree and (3.0, 3.0) in samples

    def test_sample_at_threshold_removed_vertex_retained(self):
        # f-hat((0.5, y)) == c_best exactly for the right y; samples use
        # the non-strict rule, vertices the strict one.
        c_best = 1.25
        y = math.sqrt((c_best / 2) ** 2 - 0.25)  # on the spheroid boundary
        boundary = (0.5, y)
        assert self.f(boundary) == pytest.approx(c_best, abs=1e-12)

        tree = SearchTree(self.start)
        tree.connect(self.start, boundary, math.dist(self.start, boundary))
        samples = {boundary}
        prune(tree, samples, [self.goal], self.f(boundary), self.f)
        assert boundary not in samples
        assert boundary in tree

    def test_hopeless_samples_and_vertices_removed(self):
        tree = SearchTree(self.start)
        far = (0.0, 2.0)
        near = (0.5, 0.1)
        tree.connect(self.start, far, 2.0)
        tree.connect(self.start, near, math.dist(self.start, near))
        samples = {(0.0, -2.0), (0.5, -0.05)}
        prune(tree, samples, [self.goal], 1.2, self.f)
        assert far not in tree and near in tree
        assert samples == {(0.5, -0.05)}

    def test_orphans_demoted_to_samples(self):
        # start -> hopeless -> fine: removing the middle vertex must not
        # delete its informative child, which becomes a sample again.
        tree = SearchTree(self.start)
        hopeless = (0.2, 1.2)
        child = (0.6, 0.05)
        grandchild = (0.7, -0.05)
        tree.connect(self.start, hopeless, math.dist(self.start, hopeless))
        tree.connect(hopeless, child, math.dist(hopeless, child))
        tree.connect(child, grandchild, math.dist(child, grandchild))
        samples: set = set()
        prune(tree, samples, [self.goal], 1.3, self.f)
        assert hopeless not in tree
        assert child not in tree and grandchild not in tree
        assert samples == {child, grandchild}
        assert self.start in tree

    def test_tree_invariants_after_random_prunes(self):
        rng = RandomSource(77)
        for trial in range(60):
            tree = SearchTree(self.start)
            states = [tuple(p) for p in rng.uniform(-1, 1, (30, 2)).tolist()]
            for s in states:
                anchors = [self.start] + [v for v in tree.vertices if v != s]
                parent = anchors[int(rng.integers(0, len(anchors)))]
                if s not in tree:
                    tree.connect(parent, s, math.dist(parent, s))
            samples = {tuple(p) for p in rng.uniform(-1, 1, (20, 2)).tolist()}
            c_best = float(rng.uniform(1.0, 2.5))
            prune(tree, samples, [self.goal], c_best, self.f)
            for x in samples:
                assert self.f(x) < c_best
            for v in tree.vertices:
                assert self.f(v) <= c_best
                assert v == self.start or tree.parent(v) is not None
            for v in tree.vertices:
                p = tree.parent(v)
                if p is not None:
                    assert p in tree
