"""Chord sampling, separation counting, the arrangement oracle, experiments."""

import math

import numpy as np
import pytest

from wallsys.chords import (
    ChordSet,
    cell_graph_distance,
    cell_graph_distances,
    convergence_experiment,
    crossing_area,
    sample_chords,
    separation_distance,
    wlln_bound_check,
)
from wallsys.errors import DegenerateArrangement, NonGenericPoint, PreconditionError


def random_interior_points(rng, k, radius=0.95):
    r = radius * np.sqrt(rng.random(k))
    a = rng.uniform(0, 2 * math.pi, k)
    return np.column_stack([r * np.cos(a), r * np.sin(a)])


class TestSampling:
    def test_empty(self):
        assert sample_chords(0, 5).n == 0

    def test_determinism(self):
        a, b = sample_chords(64, 9), sample_chords(64, 9)
        assert np.array_equal(a.thetas, b.thetas) and np.array_equal(a.ps, b.ps)

    def test_counter_based_prefix(self):
        full = sample_chords(100, 17)
        head = sample_chords(40, 17)
        assert np.array_equal(head.thetas, full.thetas[:40])
        assert np.array_equal(head.ps, full.ps[:40])

    def test_distribution_moments(self):
        c = sample_chords(1_000_000, 3)
        assert abs(np.abs(c.ps).mean() - 0.5) < 0.002
        assert abs(c.thetas.mean() - math.pi) < 0.01
        assert np.all(np.abs(c.ps) < 1.0)

    def test_distinct_seeds_differ(self):
        assert not np.array_equal(sample_chords(10, 1).ps, sample_chords(10, 2).ps)


class TestSeparation:
    def test_no_chords(self):
        assert separation_distance(sample_chords(0, 1), (0.1, 0.2), (-0.3, 0.4)) == 0

    def test_single_chord_sides(self):
        cs = ChordSet(np.array([0.0]), np.array([0.0]), 0)  # the line y = 0
        assert separation_distance(cs, (0.0, 0.5), (0.0, -0.5)) == 1
        assert separation_distance(cs, (0.2, 0.5), (-0.2, 0.7)) == 0

    def test_on_chord_rejected(self):
        cs = ChordSet(np.array([0.0]), np.array([0.0]), 0)
        with pytest.raises(NonGenericPoint):
            separation_distance(cs, (0.5, 0.0), (0.0, 0.5))

    def test_outside_rejected(self):
        with pytest.raises(PreconditionError):
            separation_distance(sample_chords(3, 1), (1.5, 0.0), (0.0, 0.0))

    def test_bounded_by_n(self):
        cs = sample_chords(50, 4)
        rng = np.random.default_rng(0)
        pts = random_interior_points(rng, 20)
        for k in range(10):
            assert separation_distance(cs, pts[2 * k], pts[2 * k + 1]) <= cs.n


class TestCrossingArea:
    def test_parallel(self):
        cs = ChordSet(np.array([0.4, 0.4]), np.array([0.1, -0.5]), 0)
        assert crossing_area(cs) == 0

    def test_perpendicular_diameters(self):
        cs = ChordSet(np.array([0.0, math.pi / 2]), np.array([0.0, 0.0]), 0)
        assert crossing_area(cs) == 1

    def test_triangle_outside_vs_inside(self):
        # three chords tangent-ish near the rim meet pairwise outside the disk
        far = ChordSet(np.array([0.0, 2.1, 4.2]), np.array([0.99, 0.99, 0.99]), 0)
        assert crossing_area(far) == 0
        near = ChordSet(np.array([0.0, 2.1, 4.2]), np.array([0.2, 0.2, 0.2]), 0)
        assert crossing_area(near) == 3

    def test_pair_crossing_probability_half(self):
        n = 2000
        cs = sample_chords(n, 8)
        freq = crossing_area(cs) / (n * (n - 1) / 2)
        # se of a U-statistic mean with cov ~ 0.0202: sqrt(4*0.0202/n)
        assert abs(freq - 0.5) < 4 * math.sqrt(4 * 0.0202 / n)


class TestCellGraphOracle:
    def test_no_chords(self):
        assert cell_graph_distance(sample_chords(0, 1), (0.0, 0.1), (0.2, -0.1)) == 0

    def test_one_chord(self):
        cs = ChordSet(np.array([0.0]), np.array([0.0]), 0)
        assert cell_graph_distance(cs, (0.0, 0.5), (0.0, -0.5)) == 1
        assert cell_graph_distance(cs, (0.2, 0.5), (-0.2, 0.7)) == 0

    def test_concurrent_chords_detected(self):
        cs = ChordSet(np.array([0.0, math.pi / 2, math.pi / 4]), np.zeros(3), 0)
        with pytest.raises(DegenerateArrangement):
            cell_graph_distance(cs, (0.3, 0.2), (-0.3, 0.2))

    @pytest.mark.parametrize("n,seed", [(20, 1), (60, 2), (120, 3)])
    def test_matches_separation(self, n, seed):
        cs = sample_chords(n, seed)
        rng = np.random.default_rng(seed + 1000)
        pts = random_interior_points(rng, 40)
        pairs = [(pts[2 * k], pts[2 * k + 1]) for k in range(20)]
        seps = [separation_distance(cs, x, y) for x, y in pairs]
        assert cell_graph_distances(cs, pairs) == seps


class TestExperiment:
    def test_targets(self):
        rep = convergence_experiment([10], trials=2, x=(-0.5, 0), y=(0.5, 0), seed=1)
        assert rep.dist_target == pytest.approx(1 / math.pi)
        assert rep.area_target == 0.5

    def test_n_one_area_convention(self):
        rep = convergence_experiment([1], trials=3, seed=2)
        assert all(row[3] == 0.0 for row in rep.rows)

    def test_reproducible(self):
        a = convergence_experiment([50], trials=4, seed=9)
        b = convergence_experiment([50], trials=4, seed=9)
        assert a.rows == b.rows

    def test_means_converge(self):
        rep = convergence_experiment([800], trials=20, seed=5)
        stats = rep.per_n[800]
        assert stats["abs_err_dist"] < 0.02
        assert stats["abs_err_area"] < 0.02


class TestWlln:
    def test_coins_classical(self):
        out = wlln_bound_check(100, 0.05, trials=800, seed=3, family="coins")
        assert out["passes"]

    def test_constant_zero_deviation(self):
        out = wlln_bound_check(50, 0.05, trials=100, seed=3, family="constant")
        assert out["empirical_prob"] == 0.0 and out["passes"]

    def test_chords_bound(self):
        out = wlln_bound_check(100, 0.1, trials=300, seed=3)
        assert out["passes"]
        assert out["p_dependent"] == pytest.approx((4 * 100 - 6) / (100 * 99))

    def test_requires_two(self):
        with pytest.raises(PreconditionError):
            wlln_bound_check(1, 0.1, trials=10)
