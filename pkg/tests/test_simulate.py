"""Forward Monte Carlo and perfect sampling from the past."""

import math

import pytest

from infinitebin.core import MINIMAL_CONFIG, Configuration
from infinitebin.distributions import Dirac, Geometric, Uniform
from infinitebin.simulate import (
    CouplingHorizonError,
    coupling_convergence_check,
    perfect_sample,
    run_forward,
    speed_floor,
    stationary_speed,
    tau_tail,
)
from infinitebin.words import test_set as patterns_for


# ---------------------------------------------------------------------------
# forward Monte Carlo
# ---------------------------------------------------------------------------


def test_run_forward_is_deterministic():
    a = run_forward(Geometric(0.5), MINIMAL_CONFIG, 5_000, seed=9)
    b = run_forward(Geometric(0.5), MINIMAL_CONFIG, 5_000, seed=9)
    assert a == b
    c = run_forward(Geometric(0.5), MINIMAL_CONFIG, 5_000, seed=10)
    d = run_forward(Geometric(0.5), MINIMAL_CONFIG, 5_000, seed=9, replica=1)
    assert a != c and a != d


def test_run_forward_dirac_one_has_unit_speed():
    stats = run_forward(Dirac(1), MINIMAL_CONFIG, 10_000, seed=0)
    assert stats.speed_estimate == 1.0
    assert stats.front_final == 10_000
    assert stats.stderr == 0.0


def test_run_forward_bounds_and_validation():
    stats = run_forward(Uniform(3), MINIMAL_CONFIG, 20_000, seed=4)
    assert 0.0 <= stats.speed_estimate <= 1.0
    assert stats.stderr >= 0.0
    assert stats.steps == 20_000
    with pytest.raises(ValueError):
        run_forward(Uniform(3), MINIMAL_CONFIG, 0, seed=4)


def test_run_forward_custom_start():
    start = Configuration(5, (3, 1, 2))
    stats = run_forward(Geometric(0.9), start, 1_000, seed=2)
    assert stats.front_final >= 5
    assert stats.speed_estimate == (stats.front_final - 5) / 1_000


def test_speed_floor_values():
    assert speed_floor(Geometric(0.5)) == pytest.approx(0.5)
    assert speed_floor(Geometric(0.8)) == pytest.approx(0.8)
    assert speed_floor(Uniform(2)) == pytest.approx(0.5)
    assert speed_floor(Uniform(3)) == pytest.approx(1.0 / 3.0)
    assert speed_floor(Dirac(2)) == pytest.approx(0.5)
    assert speed_floor(Dirac(3)) == pytest.approx(0.25)


def test_repeated_min_letter_block_advances_front():
    # With a the smallest letter, a block of a(a-1)/2 + 1 copies of a
    # must advance the front at least once from any start.
    corpus = patterns_for(4) + [
        Configuration(0, (5,)),
        Configuration(3, (2, 1, 4)),
        Configuration(-2, (1, 3, 1, 2)),
    ]
    for a in (1, 2, 3):
        block = (a,) * (a * (a - 1) // 2 + 1)
        for config in corpus:
            assert config.apply_word(block).front >= config.front + 1


# ---------------------------------------------------------------------------
# perfect sampling
# ---------------------------------------------------------------------------


def test_perfect_sample_dirac_one():
    sample = perfect_sample(Dirac(1), 3, seed=5)
    assert sample.scenery == (1, 1, 1)
    assert sample.K == 3
    # doubling schedule certifies depth 3 at the first horizon >= 3
    assert sample.tau == 4


def test_perfect_sample_is_reproducible():
    a = perfect_sample(Geometric(0.6), 2, seed=11, replica=7)
    b = perfect_sample(Geometric(0.6), 2, seed=11, replica=7)
    assert a == b
    c = perfect_sample(Geometric(0.6), 2, seed=11, replica=8)
    assert a != c or a.scenery == c.scenery  # replicas draw fresh letters


def test_perfect_sample_depths_are_consistent():
    # The same past stream must certify the same shallow scenery no
    # matter how deep a scenery was requested.
    mu = Geometric(0.5)
    for replica in range(10):
        shallow = perfect_sample(mu, 1, seed=3, replica=replica)
        deep = perfect_sample(mu, 3, seed=3, replica=replica)
        assert deep.scenery[0] == shallow.scenery[0]
        assert shallow.tau <= deep.tau


def test_perfect_sample_rejects_bad_inputs():
    with pytest.raises(ValueError):
        perfect_sample(Dirac(2), 1, seed=0)  # blocked point mass
    with pytest.raises(ValueError):
        perfect_sample(Geometric(0.5), 0, seed=0)


def test_perfect_sample_horizon_error_carries_diagnostics():
    mu = Geometric(0.5)
    hit = False
    for replica in range(30):
        try:
            sample = perfect_sample(mu, 1, seed=1, replica=replica, max_horizon=1)
            assert sample.tau <= 1
        except CouplingHorizonError as exc:
            hit = True
            assert exc.K == 1
            assert exc.horizon == 1
            assert exc.best_depth < 1
    assert hit, "expected at least one replica to need a longer horizon"


def test_stationary_speed_matches_known_value():
    estimate, stderr = stationary_speed(Geometric(0.7), 3_000, K=1, seed=21)
    assert stderr == pytest.approx(
        math.sqrt(estimate * (1 - estimate) / 3_000), abs=1e-12
    )
    assert abs(estimate - 0.742818) < 4 * stderr


def test_stationary_speed_dirac_one_is_exact():
    estimate, stderr = stationary_speed(Dirac(1), 50, K=1, seed=0)
    assert (estimate, stderr) == (1.0, 0.0)


# ---------------------------------------------------------------------------
# convergence checks and coupling-time statistics
# ---------------------------------------------------------------------------


def test_coupling_convergence_check_trivial_law():
    coupled_at = coupling_convergence_check(
        Dirac(1), MINIMAL_CONFIG, 1, n_max=64, seed=0
    )
    assert coupled_at == 0


def test_coupling_convergence_check_geometric():
    coupled_at = coupling_convergence_check(
        Geometric(0.5), MINIMAL_CONFIG, 2, n_max=512, seed=13
    )
    assert coupled_at is not None
    assert 0 <= coupled_at <= 512
    again = coupling_convergence_check(
        Geometric(0.5), MINIMAL_CONFIG, 2, n_max=512, seed=13
    )
    assert again == coupled_at


def test_tau_tail_shape_and_quantisation():
    tail = tau_tail(Geometric(0.5), 1, 300, seed=2)
    assert len(tail.taus) == 300
    assert tail.K == 1
    assert sum(c for _, c in tail.histogram()) == 300
    for t in tail.taus:
        assert t >= 1 and (t & (t - 1)) == 0  # doubling schedule values
    assert tail.survival(0) == 1.0
    ns = [1, 2, 4, 8, 16]
    surv = [tail.survival(n) for n in ns]
    assert all(x >= y for x, y in zip(surv, surv[1:]))
    assert tail.median >= 1.0


def test_tau_monotone_in_scenery_depth():
    mu = Geometric(0.5)
    for replica in range(15):
        t1 = perfect_sample(mu, 1, seed=6, replica=replica).tau
        t2 = perfect_sample(mu, 2, seed=6, replica=replica).tau
        t3 = perfect_sample(mu, 4, seed=6, replica=replica).tau
        assert t1 <= t2 <= t3
