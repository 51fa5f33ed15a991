"""Monte Carlo and perfect simulation of the infinite-bin process.

Forward simulation applies random moves to a configuration and measures
front displacement.  Perfect simulation draws the stationary K-scenery
exactly, by coupling from the past: fixed past randomness indexed by
absolute time is re-read over doubling horizons until the determined-
scenery tracker (:mod:`infinitebin.words`) certifies the K rightmost bin
counts, which at that point no longer depend on anything before the
horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from infinitebin import rng
from infinitebin.core import Configuration, _Evolver
from infinitebin.distributions import MoveDistribution
from infinitebin.words import _fold_determined

_LETTER_CHUNK = 1 << 16

DEFAULT_MAX_HORIZON = 1 << 24


class CouplingHorizonError(RuntimeError):
    """Tracker did not certify the requested depth within the horizon.

    This certifies only non-detection by the tracker's sound lower bound,
    not that no coupling word occurred.
    """

    def __init__(self, K: int, horizon: int, best_depth: int):
        self.K = K
        self.horizon = horizon
        self.best_depth = best_depth
        super().__init__(
            f"no depth-{K} coupling certified within {horizon} past letters "
            f"(deepest certified: {best_depth}); raise max_horizon or "
            f"check that the letter law is not (nearly) degenerate"
        )


def _require_perfect_samplable(mu: MoveDistribution) -> None:
    if not mu.non_degenerate() and mu.support_min >= 2:
        raise ValueError(
            "point mass at a letter >= 2 admits no coupling words; "
            "the stationary scenery is not defined for this law"
        )


def speed_floor(mu: MoveDistribution) -> float:
    """Universal lower bound on the speed for a non-degenerate-free check.

    Let a be the smallest supported letter and m = a(a-1)/2 + 1.  A run of
    m consecutive letters a always advances the front at least once, from
    any configuration, so blocks of m steps advance with probability at
    least mu(a)^m and the speed is at least mu(a)^m / m.  Weak but
    assumption-free; used as a sanity floor in verification panels.
    """
    a = mu.support_min
    m = a * (a - 1) // 2 + 1
    return mu.pmf(a) ** m / m


# ---------------------------------------------------------------------------
# forward Monte Carlo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunStats:
    """Front-displacement statistics of one forward run."""

    steps: int
    front_final: int
    speed_estimate: float
    stderr: float
    seed: int


def run_forward(
    mu: MoveDistribution,
    start: Configuration,
    steps: int,
    seed: int,
    *,
    replica: int = 0,
) -> RunStats:
    """Apply ``steps`` random moves from ``start``; measure the speed.

    The estimate is front displacement over steps.  Its standard error
    comes from splitting the run into up to 32 blocks and treating block
    speeds as independent — a standard correction for the dependence of
    consecutive advance indicators.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    gen = rng.stream(seed, rng.STREAM_FORWARD, replica)
    ev = _Evolver(start)
    front0 = ev.front
    n_blocks = min(32, steps)
    bounds = [round(i * steps / n_blocks) for i in range(n_blocks + 1)]
    block_speeds = []
    done = 0
    block_idx = 0
    block_adv = 0
    while done < steps:
        want = min(_LETTER_CHUNK, steps - done)
        letters = mu.letters_from_uniforms(gen.random(want)).tolist()
        for a in letters:
            block_adv += ev.step(a)
            done += 1
            if done == bounds[block_idx + 1]:
                size = bounds[block_idx + 1] - bounds[block_idx]
                block_speeds.append(block_adv / size)
                block_adv = 0
                block_idx += 1
    displacement = ev.front - front0
    if n_blocks >= 2:
        mean = sum(block_speeds) / n_blocks
        var = sum((s - mean) ** 2 for s in block_speeds) / (n_blocks - 1)
        stderr = math.sqrt(var / n_blocks)
    else:
        stderr = 0.0
    return RunStats(
        steps=steps,
        front_final=ev.front,
        speed_estimate=displacement / steps,
        stderr=stderr,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# coupling from the past
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PerfectSample:
    """Exact draw of the stationary process's rightmost bin counts.

    ``scenery[0]`` is the front bin count, deeper bins follow.  ``tau`` is
    the past horizon (in letters) at which the tracker certified depth K;
    it upper-bounds the true minimal coupling horizon, since the tracker
    is a sound but not exact detector.
    """

    scenery: tuple
    tau: int
    K: int


class _PastLetters:
    """Lazily extended, absolutely-indexed past letter stream.

    Index i holds the letter at time -i.  Letters are generated once and
    re-read on every horizon retry — the fixed-randomness requirement of
    coupling from the past.
    """

    def __init__(self, mu: MoveDistribution, seed: int, replica: int):
        self._mu = mu
        self._gen = rng.stream(seed, rng.STREAM_PAST, replica)
        self._buf = np.empty(0, dtype=np.int64)

    def fold(self, horizon: int):
        """Tracker fold of the letters from time -horizon+1 through 0.

        Returns a fresh (determined counts, front shift) pair.
        """
        if horizon > len(self._buf):
            fresh = self._mu.letters_from_uniforms(
                self._gen.random(horizon - len(self._buf))
            )
            self._buf = np.concatenate([self._buf, fresh])
        return _fold_determined(self._buf[horizon - 1 :: -1].tolist())


def _horizons(max_horizon: int):
    h = 1
    while True:
        yield h
        if h >= max_horizon:
            return
        h = min(2 * h, max_horizon)


def _certified_fold(past: _PastLetters, need: int, max_horizon: int):
    """Deepen the past until the tracker certifies depth >= need."""
    best = 0
    for h in _horizons(max_horizon):
        det, _shift = past.fold(h)
        best = max(best, len(det))
        if len(det) >= need:
            return det, h
    raise CouplingHorizonError(need, max_horizon, best)


def perfect_sample(
    mu: MoveDistribution,
    K: int,
    seed: int,
    *,
    replica: int = 0,
    max_horizon: int = DEFAULT_MAX_HORIZON,
) -> PerfectSample:
    """Draw the stationary K-scenery exactly (coupling from the past).

    Doubling horizons re-read the same indexed past letters; at each
    horizon the tracker folds the letters oldest-first.  Once it certifies
    depth >= K, the certified counts are the stationary scenery — they
    would be identical for every deeper horizon.  Raises
    CouplingHorizonError past ``max_horizon`` letters.
    """
    if K < 1:
        raise ValueError(f"scenery depth K must be >= 1, got {K}")
    if max_horizon < 1:
        raise ValueError("max_horizon must be >= 1")
    _require_perfect_samplable(mu)
    past = _PastLetters(mu, seed, replica)
    det, tau = _certified_fold(past, K, max_horizon)
    return PerfectSample(scenery=tuple(reversed(det[-K:])), tau=tau, K=K)


def stationary_speed(
    mu: MoveDistribution,
    samples: int,
    K: int = 1,
    seed: int = 0,
    *,
    max_horizon: int = DEFAULT_MAX_HORIZON,
) -> tuple:
    """Unbiased speed estimate from perfect samples.

    The speed equals the probability that a fresh letter lands within the
    stationary front bin count; each replica draws a perfect sample (only
    depth 1 of it is used) plus one fresh probe letter from a separate
    stream.  Returns (estimate, binomial stderr).
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    _require_perfect_samplable(mu)
    probes = mu.letters_from_uniforms(
        rng.stream(seed, rng.STREAM_PROBE).random(samples)
    )
    hits = 0
    for r in range(samples):
        sample = perfect_sample(
            mu, K, seed, replica=r, max_horizon=max_horizon
        )
        if probes[r] <= sample.scenery[0]:
            hits += 1
    estimate = hits / samples
    stderr = math.sqrt(estimate * (1.0 - estimate) / samples)
    return estimate, stderr


def coupling_convergence_check(
    mu: MoveDistribution,
    start: Configuration,
    K: int,
    n_max: int,
    seed: int,
    *,
    max_horizon: int = DEFAULT_MAX_HORIZON,
) -> int | None:
    """First time from which the chain's K-scenery sticks to the
    stationary one.

    Runs the forward chain from ``start`` and the stationary chain over
    the same future letter stream (times 1..n_max).  The stationary
    K-scenery at each time is maintained exactly by extending the tracker
    fold of the past letters one letter at a time, re-deepening into the
    past whenever the certified depth dips below K (a deeper fold refines
    the shallow one, so earlier comparisons stay valid).  Returns the
    smallest t such that the sceneries agree at every checked time n with
    t <= n <= n_max (0 when they agree from the start), or None if they
    still differ at n_max — a short check window, not a failure.
    """
    if K < 1:
        raise ValueError(f"scenery depth K must be >= 1, got {K}")
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    _require_perfect_samplable(mu)

    past = _PastLetters(mu, seed, replica=0)
    future_gen = rng.stream(seed, rng.STREAM_FORWARD)
    future: list = []

    need = K
    det, _h = _certified_fold(past, need, max_horizon)
    balls = sum(det)
    ev = _Evolver(start)
    streak: int | None = (
        0 if ev.scenery(K) == tuple(reversed(det[-K:])) else None
    )
    n = 0
    while n < n_max:
        if len(future) <= n:
            fresh = mu.letters_from_uniforms(
                future_gen.random(min(_LETTER_CHUNK, n_max - len(future)))
            )
            future.extend(fresh.tolist())
        a = future[n]
        n += 1
        ev.step(a)
        # incremental tracker update (same rule as words.tracker_step,
        # with the certified ball count carried across steps)
        if a <= balls:
            acc = 0
            j = len(det) - 1
            while True:
                acc += det[j]
                if acc >= a:
                    break
                j -= 1
            if j == len(det) - 1:
                det.append(1)
            else:
                det[j + 1] += 1
            balls += 1
        elif a == balls + 1:
            if det:
                det[0] += 1
            else:
                det.append(1)
            balls += 1
        elif det:
            balls -= det.pop(0)
        while len(det) < K:
            need = max(2 * need, 2 * K)
            det, _h = _certified_fold(past, need, max_horizon)
            det, _shift = _fold_determined(future[:n], det)
            balls = sum(det)
        if ev.scenery(K) == tuple(reversed(det[-K:])):
            if streak is None:
                streak = n
        else:
            streak = None
    return streak


# ---------------------------------------------------------------------------
# coupling-time statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TauTail:
    """Empirical distribution of certified coupling horizons.

    ``taus`` holds one certified horizon per replica (tracker upper
    bounds on the true coupling times, quantised to the doubling
    schedule).
    """

    taus: tuple
    K: int

    def histogram(self) -> list:
        """Sorted (horizon, count) pairs."""
        counts: dict = {}
        for t in self.taus:
            counts[t] = counts.get(t, 0) + 1
        return sorted(counts.items())

    def survival(self, n: int) -> float:
        """Fraction of replicas whose certified horizon exceeds n."""
        return sum(1 for t in self.taus if t > n) / len(self.taus)

    @property
    def median(self) -> float:
        ordered = sorted(self.taus)
        mid = len(ordered) // 2
        if len(ordered) % 2:
            return float(ordered[mid])
        return 0.5 * (ordered[mid - 1] + ordered[mid])


def tau_tail(
    mu: MoveDistribution,
    K: int,
    replicas: int,
    seed: int,
    *,
    max_horizon: int = DEFAULT_MAX_HORIZON,
) -> TauTail:
    """Certified coupling horizons over independent replicas."""
    if replicas < 1:
        raise ValueError(f"replicas must be >= 1, got {replicas}")
    _require_perfect_samplable(mu)
    taus = [
        perfect_sample(mu, K, seed, replica=r, max_horizon=max_horizon).tau
        for r in range(replicas)
    ]
    return TauTail(taus=tuple(taus), K=K)
