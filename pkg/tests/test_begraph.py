"""Random-graph longest paths and their coupling to the bin process."""

import math

import numpy as np
import pytest

from infinitebin.begraph import estimate_C, fk_coupling_trajectory, longest_path


def test_full_graph_path_is_hamiltonian():
    run = longest_path(500, 1.0, seed=0, keep_per_vertex=True)
    assert run.L_n == 499
    assert run.per_vertex == tuple(range(500))


def test_empty_graph_has_no_edges():
    run = longest_path(500, 0.0, seed=0)
    assert run.L_n == 0
    assert longest_path(1, 0.7, seed=3).L_n == 0


def test_validation():
    with pytest.raises(ValueError):
        longest_path(0, 0.5, seed=0)
    with pytest.raises(ValueError):
        longest_path(10, 1.5, seed=0)
    with pytest.raises(ValueError):
        longest_path(10, 0.5, seed=0, method="adjacency")
    with pytest.raises(ValueError):
        estimate_C(0.0)


def test_determinism_and_replica_separation():
    a = longest_path(300, 0.4, seed=8)
    b = longest_path(300, 0.4, seed=8)
    assert a == b
    values = {longest_path(300, 0.4, seed=8, replica=r).L_n for r in range(6)}
    assert len(values) > 1


def test_two_vertex_edge_probability():
    # L_2 is a Bernoulli(p) indicator of the single possible edge.
    p, reps = 0.37, 2_000
    hits = sum(longest_path(2, p, seed=5, replica=r).L_n for r in range(reps))
    mean = hits / reps
    se = math.sqrt(p * (1 - p) / reps)
    assert abs(mean - p) < 4 * se


def test_methods_agree_in_distribution():
    # classmax (skip sampling over value classes) and bernoulli (dense
    # edge tape) must sample the same law.
    n, reps, p = 100, 400, 0.3
    a = [longest_path(n, p, seed=1, replica=r).L_n for r in range(reps)]
    b = [
        longest_path(n, p, seed=2, replica=r, method="bernoulli").L_n
        for r in range(reps)
    ]
    mean_a, mean_b = sum(a) / reps, sum(b) / reps
    var_a = sum((x - mean_a) ** 2 for x in a) / (reps - 1)
    var_b = sum((x - mean_b) ** 2 for x in b) / (reps - 1)
    se = math.sqrt((var_a + var_b) / reps)
    assert abs(mean_a - mean_b) < 4 * se


def test_bernoulli_tape_is_monotone_in_p():
    # The dense method decides each potential edge from one fixed uniform,
    # so raising p only ever adds edges: path lengths are coupled
    # monotonically sample by sample.
    for replica in range(20):
        lo = longest_path(60, 0.3, seed=4, replica=replica, method="bernoulli")
        hi = longest_path(60, 0.6, seed=4, replica=replica, method="bernoulli")
        assert lo.L_n <= hi.L_n


def test_per_vertex_values_are_path_lengths():
    run = longest_path(200, 0.5, seed=6, keep_per_vertex=True)
    assert len(run.per_vertex) == 200
    assert run.per_vertex[0] == 0
    for j, v in enumerate(run.per_vertex):
        assert 0 <= v <= j
    assert max(run.per_vertex) == run.L_n


def test_trajectory_matches_run_and_is_tight():
    for method in ("classmax", "bernoulli"):
        fronts = fk_coupling_trajectory(400, 0.45, seed=7, method=method)
        run = longest_path(400, 0.45, seed=7, keep_per_vertex=True, method=method)
        assert len(fronts) == 400
        assert int(fronts[-1]) == run.L_n
        steps = np.diff(fronts)
        assert steps.min() >= 0 and steps.max() <= 1
        # the front is the running max of per-vertex path lengths
        running = np.maximum.accumulate(np.asarray(run.per_vertex))
        assert np.array_equal(fronts, running)


def test_estimate_C_aggregates():
    est, se = estimate_C(1.0, n=1_000, replicas=4, seed=0)
    assert est == pytest.approx(999 / 1_000)
    assert se == 0.0  # all replicas identical at p = 1
    est, se = estimate_C(0.5, n=2_000, replicas=6, seed=0)
    assert 0.0 < est < 1.0 and se > 0.0
    _, se_single = estimate_C(0.5, n=500, replicas=1, seed=0)
    assert se_single == 0.0
