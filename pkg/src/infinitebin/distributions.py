"""Move-rank distributions: laws of the random letter xi >= 1.

Each law exposes exact pmf/cdf/tail values and an inversion sampler that
maps uniforms to letters (smallest j with cdf(j) >= u), so letter streams
are a deterministic function of the underlying uniform stream.
"""

from __future__ import annotations

import math
import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np


class MoveDistribution(ABC):
    """A probability law on the positive integers."""

    #: smallest letter with positive mass
    support_min: int
    #: largest letter with positive mass, or None if unbounded
    support_max: int | None

    @abstractmethod
    def pmf(self, j: int) -> float:
        """P(xi = j) for j >= 1."""

    @abstractmethod
    def cdf(self, j: int) -> float:
        """P(xi <= j) for j >= 0."""

    @abstractmethod
    def letters_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms in [0,1) to letters by exact inversion.

        Returns the smallest j with cdf(j) >= u, elementwise, as int64.
        """

    @abstractmethod
    def describe(self) -> str:
        """Canonical spec string, e.g. ``geom:0.5`` (parse_mu round-trips)."""

    def tail(self, j: int) -> float:
        """P(xi > j) for j >= 0."""
        return max(0.0, 1.0 - self.cdf(j))

    def non_degenerate(self) -> bool:
        """True iff the support has at least two letters."""
        return self.support_max is None or self.support_max > self.support_min

    def pmf_vector(self, max_letter: int) -> np.ndarray:
        """Array v with v[j] = pmf(j) for j = 0..max_letter (v[0] = 0)."""
        v = np.zeros(max_letter + 1)
        for j in range(1, max_letter + 1):
            v[j] = self.pmf(j)
        return v

    def sample(self, gen: np.random.Generator, size: int | None = None):
        """Draw letters using generator ``gen`` (int or int64 array)."""
        if size is None:
            return int(self.letters_from_uniforms(gen.random(1))[0])
        return self.letters_from_uniforms(gen.random(size))

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"{type(self).__name__}({self.describe()!r})"


@dataclass(frozen=True)
class Geometric(MoveDistribution):
    """Geometric law on {1, 2, ...}: pmf(j) = p (1-p)^(j-1)."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p <= 1.0:
            raise ValueError("geometric parameter must be in (0, 1]")
        object.__setattr__(self, "support_min", 1)
        object.__setattr__(self, "support_max", 1 if self.p == 1.0 else None)

    def pmf(self, j: int) -> float:
        if j < 1:
            return 0.0
        if self.p == 1.0:
            return 1.0 if j == 1 else 0.0
        return self.p * (1.0 - self.p) ** (j - 1)

    def cdf(self, j: int) -> float:
        if j < 1:
            return 0.0
        if self.p == 1.0:
            return 1.0
        return -math.expm1(j * math.log1p(-self.p))

    def tail(self, j: int) -> float:
        if j < 1:
            return 1.0
        if self.p == 1.0:
            return 0.0
        return (1.0 - self.p) ** j

    def letters_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        if self.p == 1.0:
            return np.ones(len(u), dtype=np.int64)
        base = math.log1p(-self.p)
        j = 1 + np.floor(np.log1p(-u) / base).astype(np.int64)
        j = np.maximum(j, 1)
        # round-off guard: enforce cdf(j-1) < u <= cdf(j) exactly
        j = np.where(-np.expm1(j * base) < u, j + 1, j)
        too_high = (j > 1) & (-np.expm1((j - 1) * base) >= u)
        j = np.where(too_high, j - 1, j)
        return j

    def describe(self) -> str:
        return f"geom:{self.p:g}"


@dataclass(frozen=True)
class Uniform(MoveDistribution):
    """Uniform law on {1, ..., k}."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("uniform support bound must be >= 1")
        object.__setattr__(self, "support_min", 1)
        object.__setattr__(self, "support_max", self.k)

    def pmf(self, j: int) -> float:
        return 1.0 / self.k if 1 <= j <= self.k else 0.0

    def cdf(self, j: int) -> float:
        if j < 1:
            return 0.0
        return min(1.0, j / self.k)

    def letters_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        j = np.ceil(u * self.k).astype(np.int64)
        return np.clip(j, 1, self.k)

    def describe(self) -> str:
        return f"unif:{self.k}"


@dataclass(frozen=True)
class Dirac(MoveDistribution):
    """Point mass at letter k."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("dirac letter must be >= 1")
        object.__setattr__(self, "support_min", self.k)
        object.__setattr__(self, "support_max", self.k)

    def pmf(self, j: int) -> float:
        return 1.0 if j == self.k else 0.0

    def cdf(self, j: int) -> float:
        return 1.0 if j >= self.k else 0.0

    def letters_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        return np.full(len(u), self.k, dtype=np.int64)

    def describe(self) -> str:
        return f"dirac:{self.k}"


class FiniteSupport(MoveDistribution):
    """Explicit finite-support law: probabilities for letters 1..m."""

    def __init__(self, probs) -> None:
        """Args:
        probs: mapping letter -> probability, or a sequence giving the
            probabilities of letters 1, 2, ... in order.  Must sum to 1
            within 1e-12.
        """
        if isinstance(probs, dict):
            items = sorted(probs.items())
        else:
            items = list(enumerate(probs, start=1))
        items = [(int(j), float(q)) for j, q in items if q != 0.0]
        if not items:
            raise ValueError("finite-support law needs positive mass")
        if any(j < 1 for j, _ in items):
            raise ValueError("letters must be >= 1")
        if any(q < 0 for _, q in items):
            raise ValueError("probabilities must be >= 0")
        total = math.fsum(q for _, q in items)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        self._letters = np.array([j for j, _ in items], dtype=np.int64)
        self._probs = {j: q for j, q in items}
        self._cum = np.cumsum([q for _, q in items])
        self._cum[-1] = 1.0
        self.support_min = int(self._letters[0])
        self.support_max = int(self._letters[-1])

    @classmethod
    def normalized(cls, probs) -> "FiniteSupport":
        """Like the constructor but rescales sums within [0.999, 1.001]
        (with a warning); sums further from 1 are rejected."""
        seq = list(probs.values()) if isinstance(probs, dict) else list(probs)
        total = math.fsum(float(q) for q in seq)
        if abs(total - 1.0) <= 1e-12:
            return cls(probs)
        if 0.999 <= total <= 1.001:
            warnings.warn(
                f"finite-support probabilities sum to {total:.6f}; normalizing",
                stacklevel=2,
            )
            if isinstance(probs, dict):
                return cls({j: float(q) / total for j, q in probs.items()})
            return cls([float(q) / total for q in seq])
        raise ValueError(f"probabilities sum to {total!r}, outside [0.999, 1.001]")

    def pmf(self, j: int) -> float:
        return self._probs.get(j, 0.0)

    def cdf(self, j: int) -> float:
        idx = int(np.searchsorted(self._letters, j, side="right"))
        return 0.0 if idx == 0 else float(self._cum[idx - 1])

    def letters_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self._cum, u, side="left")
        return self._letters[np.minimum(idx, len(self._letters) - 1)]

    def describe(self) -> str:
        dense = [self._probs.get(j, 0.0) for j in range(1, self.support_max + 1)]
        return "finite:" + ",".join(f"{q:g}" for q in dense)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteSupport) and self._probs == other._probs

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._probs.items())))


def parse_mu(spec: str) -> MoveDistribution:
    """Parse a distribution spec string.

    Grammar: ``geom:p`` | ``unif:k`` | ``dirac:k`` | ``finite:p1,p2,...``
    (finite probabilities are for letters 1, 2, ...; near-1 sums are
    normalized with a warning).
    """
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise ValueError(f"bad distribution spec {spec!r}: missing ':'")
    try:
        if kind == "geom":
            return Geometric(float(arg))
        if kind == "unif":
            return Uniform(int(arg))
        if kind == "dirac":
            return Dirac(int(arg))
        if kind == "finite":
            return FiniteSupport.normalized([float(x) for x in arg.split(",")])
    except ValueError as exc:
        raise ValueError(f"bad distribution spec {spec!r}: {exc}") from exc
    raise ValueError(f"bad distribution spec {spec!r}: unknown kind {kind!r}")
