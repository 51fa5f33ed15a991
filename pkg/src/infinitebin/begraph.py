"""Random-DAG longest paths and their growing-front process.

The graph on vertices 1..n has each edge i -> j (i < j) independently with
probability p.  The longest-path lengths satisfy the streaming recursion
value(j) = 1 + max{value(i) : edge i -> j} (0 with no in-edge), and
recording the running maximum as vertices arrive produces, in law, the
front of the infinite-bin process with geometric letter law — each value
is a ball, each distinct value a bin.

Two in-edge samplers are provided:

- ``classmax`` (default): group earlier vertices by value; the class of
  size m receives an edge with probability 1 - (1-p)^m, and scanning
  classes from the top value down to the first hit draws the maximum
  in-neighbour value exactly, in expected O(1) uniforms per vertex.
- ``bernoulli``: one uniform per vertex pair, thresholded at p.  O(n^2)
  but the per-pair uniforms are fixed by the seed alone, so runs at
  different p are monotonely coupled (more edges at larger p, pathwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from infinitebin import rng

_UNIFORM_CHUNK = 1 << 14


@dataclass(frozen=True)
class LongestPathRun:
    """Longest-path statistics of one sampled graph.

    ``per_vertex`` (optional) holds the longest path length ending at each
    vertex, in vertex order; its maximum is ``L_n``.
    """

    n: int
    p: float
    L_n: int
    per_vertex: tuple | None
    seed: int


class _UniformTape:
    """Sequential uniforms drawn in chunks from one replica stream."""

    def __init__(self, gen):
        self._gen = gen
        self._buf = np.empty(0)
        self._pos = 0

    def take(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self._gen.random(_UNIFORM_CHUNK)
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u


def _classmax_run(n: int, p: float, gen, keep_values: bool,
                  keep_fronts: bool):
    """Stream the longest-path recursion with the class-max sampler."""
    q = 1.0 - p
    tape = _UniformTape(gen)
    class_sizes: list = []
    values: list | None = [] if keep_values else None
    fronts: list | None = [] if keep_fronts else None
    front = 0
    for j in range(n):
        value = 0
        for v in range(len(class_sizes) - 1, -1, -1):
            if tape.take() < 1.0 - q ** class_sizes[v]:
                value = v + 1
                break
        if value == len(class_sizes):
            class_sizes.append(1)
        else:
            class_sizes[value] += 1
        if value > front:
            front = value
        if values is not None:
            values.append(value)
        if fronts is not None:
            fronts.append(front)
    return front, values, fronts


def _bernoulli_run(n: int, p: float, gen, keep_values: bool,
                   keep_fronts: bool):
    """Per-pair thresholded uniforms; fixed tape enables p-coupling."""
    values = np.zeros(n, dtype=np.int64)
    fronts: list | None = [] if keep_fronts else None
    front = 0
    for j in range(1, n):
        u = gen.random(j)
        hit = u < p
        if hit.any():
            values[j] = int(values[:j][hit].max()) + 1
            if values[j] > front:
                front = int(values[j])
        if fronts is not None:
            fronts.append(front)
    if fronts is not None:
        fronts.insert(0, 0)
    return front, (values.tolist() if keep_values else None), fronts


def longest_path(
    n: int,
    p: float,
    seed: int,
    keep_per_vertex: bool = False,
    *,
    method: str = "classmax",
    replica: int = 0,
) -> LongestPathRun:
    """Sample one graph and compute its longest path length."""
    if n < 1:
        raise ValueError(f"vertex count must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {p}")
    gen = rng.stream(seed, rng.STREAM_GRAPH, replica)
    if method == "classmax":
        front, values, _ = _classmax_run(n, p, gen, keep_per_vertex, False)
    elif method == "bernoulli":
        front, values, _ = _bernoulli_run(n, p, gen, keep_per_vertex, False)
    else:
        raise ValueError(f"unknown sampling method {method!r}")
    return LongestPathRun(
        n=n, p=p, L_n=front,
        per_vertex=tuple(values) if keep_per_vertex else None,
        seed=seed,
    )


def fk_coupling_trajectory(
    n: int,
    p: float,
    seed: int,
    *,
    method: str = "classmax",
    replica: int = 0,
) -> np.ndarray:
    """Front trajectory of the growing graph (running max path length).

    Uses the same value stream as :func:`longest_path` for the same seed
    and method, so the terminal front equals that run's L_n exactly; the
    increments are 0/1.  In law, this trajectory is the front of the
    infinite-bin process with Geometric(p) letters started from a single
    ball.
    """
    if n < 1:
        raise ValueError(f"vertex count must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {p}")
    gen = rng.stream(seed, rng.STREAM_GRAPH, replica)
    if method == "classmax":
        _, _, fronts = _classmax_run(n, p, gen, False, True)
    elif method == "bernoulli":
        _, _, fronts = _bernoulli_run(n, p, gen, False, True)
    else:
        raise ValueError(f"unknown sampling method {method!r}")
    return np.asarray(fronts, dtype=np.int64)


def estimate_C(p: float, n: int = 100_000, replicas: int = 10,
               seed: int = 0) -> tuple:
    """Monte Carlo growth-rate estimate: mean of L_n / n over replicas.

    Returns (estimate, stderr) with the sample standard error across
    replicas (0.0 for a single replica).
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"edge probability must be in (0, 1], got {p}")
    if replicas < 1:
        raise ValueError(f"replicas must be >= 1, got {replicas}")
    rates = []
    for r in range(replicas):
        run = longest_path(n, p, seed, replica=r)
        rates.append(run.L_n / n)
    mean = sum(rates) / replicas
    if replicas >= 2:
        var = sum((x - mean) ** 2 for x in rates) / (replicas - 1)
        stderr = math.sqrt(var / replicas)
    else:
        stderr = 0.0
    return mean, stderr
