"""Compensated accumulation helpers for rigorous mass bookkeeping."""

from __future__ import annotations

import math


class KahanSum:
    """Kahan-Neumaier compensated accumulator with a running error bound.

    Adds floats with a correction term so the result is accurate to a few
    ulps regardless of term count, and tracks an a-priori bound on the
    residual rounding error (count * eps * running magnitude).
    """

    __slots__ = ("_sum", "_carry", "_bound")

    def __init__(self) -> None:
        self._sum = 0.0
        self._carry = 0.0
        self._bound = 0.0

    def add(self, value: float) -> None:
        t = self._sum + value
        if abs(self._sum) >= abs(value):
            self._carry += (self._sum - t) + value
        else:
            self._carry += (value - t) + self._sum
        self._sum = t
        self._bound += math.ulp(abs(t) + abs(self._carry))

    @property
    def value(self) -> float:
        return self._sum + self._carry

    @property
    def error_bound(self) -> float:
        """Upper bound on the accumulated rounding error of ``value``."""
        return self._bound


def exact_sum(parts) -> float:
    """Exactly rounded sum of a finite iterable of floats."""
    return math.fsum(parts)
