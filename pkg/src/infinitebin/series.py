"""Certified speed brackets, the bivariate growth series, and the growth
curve of the random-graph longest path.

The front speed of the infinite-bin process under letter law mu equals the
total mu-weight of minimal good words, and one minus the weight of minimal
bad words.  Truncated enumeration therefore yields two-sided brackets whose
width is exactly the unresolved (frontier) mass — see
:mod:`infinitebin.enumeration` for the engine and its accounting.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from infinitebin.core import Configuration
from infinitebin.distributions import MoveDistribution, Uniform
from infinitebin.enumeration import (
    DEFAULT_BIRTH_FLOOR,
    DEFAULT_DEPTH_CAP,
    DEFAULT_MAX_STATES,
    DEFAULT_NODE_BUDGET,
    MassSplit,
    count_rounding_bound,
    mass_rounding_bound,
    stopping_tree_counts,
    stopping_tree_masses,
    walk_minimal_words,
)


@dataclass(frozen=True)
class SpeedBracket:
    """Two-sided certified bracket for the front speed.

    ``lower`` is the accumulated weight of enumerated minimal good words,
    ``upper`` one minus that of minimal bad words; the true speed lies in
    [lower, upper] up to ``rounding_bound`` of floating-point slack.
    ``params`` records the law and the truncation bounds that produced the
    bracket.
    """

    lower: float
    upper: float
    good_mass: float
    bad_mass: float
    frontier_mass: float
    params: dict
    rounding_bound: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def __str__(self) -> str:
        return (
            f"speed in [{self.lower:.9f}, {self.upper:.9f}]"
            f" (width {self.width:.3e}, {self.params})"
        )


def weight(word, mu: MoveDistribution) -> float:
    """Product of letter probabilities: the word's weight in the series."""
    word = tuple(word)
    if not word:
        raise ValueError("empty word has no weight")
    out = 1.0
    for a in word:
        out *= mu.pmf(a)
    return out


def _maybe_warn_degenerate(mu: MoveDistribution) -> None:
    if not mu.non_degenerate() and mu.support_min >= 2:
        warnings.warn(
            "letter law is a point mass at a letter >= 2: the minimal-word "
            "speed identity does not apply and the bracket stays [0, 1]; "
            "use forward simulation instead",
            stacklevel=3,
        )


def _bracket(split: MassSplit, mu_desc: str, L: int, A: int) -> SpeedBracket:
    lower = min(max(split.good, 0.0), 1.0)
    upper = min(max(1.0 - split.bad, lower), 1.0)
    return SpeedBracket(
        lower=lower,
        upper=upper,
        good_mass=split.good,
        bad_mass=split.bad,
        frontier_mass=split.frontier,
        params={"mu": mu_desc, "L": L, "A": A},
        rounding_bound=mass_rounding_bound(L, A),
    )


def enumerate_minimal(
    mu: MoveDistribution,
    max_len: int,
    max_letter: int,
    emit=None,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    birth_floor: float = DEFAULT_BIRTH_FLOOR,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> SpeedBracket:
    """Bracket the speed by enumerating minimal words up to the bounds.

    Words use letters 1..max_letter and lengths up to max_len; everything
    beyond is frontier mass (bracket width).  With ``emit`` given, an
    explicit depth-first walk visits each resolved minimal word once and
    calls ``emit(word, verdict, weight)`` — exact but exponential, so it
    is budgeted; without ``emit`` a lumped state engine is used, which
    reaches much larger bounds.
    """
    pmf_vec = mu.pmf_vector(max_letter)
    tail = mu.tail(max_letter)
    _maybe_warn_degenerate(mu)
    if emit is not None:
        split = walk_minimal_words(
            pmf_vec, tail, max_len, max_letter, emit,
            depth_cap=depth_cap, node_budget=node_budget,
        )
    else:
        split = stopping_tree_masses(
            pmf_vec, tail, max_len, max_letter,
            max_states=max_states, depth_cap=depth_cap,
            birth_floor=birth_floor,
        )
    return _bracket(split, mu.describe(), max_len, max_letter)


def bivariate_D(
    p: float,
    q: float,
    max_len: int,
    max_letter: int,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> tuple:
    """Partial sum of the bivariate minimal-good-word series, with bound.

    The series assigns each minimal good word the monomial
    p^length * q^(sum of letters minus length) and converges on part of
    the (p, q) quadrant; on the diagonal q = 1 - p it equals the
    longest-path growth rate.  Returns ``(lower, frontier)``: the partial
    sum over enumerated minimal good words, and a bound on the remaining
    series mass.  The bound multiplies each unresolved branch by its
    worst-case continuation mass, geometric with ratio r = p/(1-q); it is
    finite only for r < 1 (strictly inside the product region) or when
    enumeration left nothing unresolved.
    """
    if p < 0 or q < 0:
        raise ValueError("monomial variables must be >= 0")
    if max_letter < 1 or max_len < 1:
        raise ValueError("truncation bounds must be >= 1")
    pmf_vec = [0.0] + [p * q ** (a - 1) for a in range(1, max_letter + 1)]
    tail = p * q ** max_letter / (1.0 - q) if q < 1.0 else 0.0
    split = stopping_tree_masses(
        pmf_vec, tail, max_len, max_letter,
        max_states=max_states, depth_cap=depth_cap, birth_floor=0.0,
    )
    unresolved_now = split.frontier_live + split.pruned_mass
    unresolved_next = split.frontier_tail + split.frontier_capped
    if q >= 1.0 and p > 0.0:
        return split.good, math.inf
    if unresolved_now == 0.0 and unresolved_next == 0.0:
        return split.good, 0.0
    r = p / (1.0 - q)
    if r >= 1.0:
        return split.good, math.inf
    frontier = unresolved_next / (1.0 - r) + unresolved_now * r / (1.0 - r)
    return split.good, frontier


@dataclass(frozen=True)
class CurveRow:
    """One growth-curve grid point with its certified bracket."""

    p: float
    lower: float
    upper: float
    good_mass: float
    bad_mass: float
    frontier_mass: float
    rounding_bound: float


def curve(
    p_grid,
    max_len: int,
    max_letter: int,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> list:
    """Bracket the longest-path growth rate on a grid of edge densities.

    Runs the enumeration once, collecting exact integer coefficients of
    the monomials p^n (1-p)^e, and evaluates the resulting polynomials at
    every grid point — the minimal-word sets do not depend on p, only the
    weights do.  Every p must lie in (0, 1] (p = 0 has no geometric letter
    law).  State pruning is prioritised at the grid midpoint but stays
    frontier-accounted, so each returned bracket is valid at its own p.
    """
    ps = [float(p) for p in p_grid]
    if not ps:
        raise ValueError("grid must contain at least one edge density")
    for p in ps:
        if not 0.0 < p <= 1.0:
            raise ValueError(f"grid edge density must be in (0, 1], got {p}")
    reference_p = 0.5 * (min(ps) + max(ps))
    tables = stopping_tree_counts(
        max_len, max_letter,
        reference_p=reference_p, max_states=max_states, depth_cap=depth_cap,
    )
    bound = count_rounding_bound(max_len, max_letter)
    rows = []
    for p in ps:
        good, bad, _frontier = tables.evaluate(p)
        lower = min(max(good, 0.0), 1.0)
        upper = min(max(1.0 - bad, lower), 1.0)
        rows.append(CurveRow(
            p=p, lower=lower, upper=upper,
            good_mass=good, bad_mass=bad, frontier_mass=_frontier,
            rounding_bound=bound,
        ))
    return rows


def uniform_speed_terms(k: int, max_len: int, **engine_opts) -> SpeedBracket:
    """Bracket the uniform-law speed w_k; the alphabet is exactly 1..k.

    With letters uniform on {1..k} there is no alphabet truncation, so the
    frontier consists purely of words still unresolved at the length
    bound.
    """
    if k < 2:
        raise ValueError(f"uniform support bound must be >= 2, got {k}")
    return enumerate_minimal(Uniform(k), max_len, k, **engine_opts)


def old_series_partial(
    mu: MoveDistribution,
    start: Configuration,
    max_len: int,
    max_letter: int,
) -> float:
    """Partial sum of the older signed speed series from a fixed start.

    Sums eps(word, start) * weight(word) over all words of length up to
    max_len with letters up to max_letter, where eps compares the word's
    advance indicator against that of the word minus its first letter.
    The sum telescopes to

        G_L + mu((A, inf)) * (G_1 + ... + G_{L-1}),

    with G_n the probability that a length-n word of in-alphabet letters
    advances the front from ``start``; the G_n are computed by an exact
    dynamic program over front-relative configurations.  No convergence
    certificate is attached — this representation is kept for comparison
    experiments; brackets come from enumerate_minimal.
    """
    A = max_letter
    L = max_len
    if L < 1 or A < 1:
        raise ValueError("truncation bounds must be >= 1")
    if not isinstance(start, Configuration):
        raise TypeError("start must be a Configuration")
    # distribution over front-relative configurations after n letters
    states = {start.canonical().window: 1.0}
    g_levels = []
    for _n in range(1, L + 1):
        g_parts = []
        for window, prob in states.items():
            front_count = window[-1]
            g_parts.append(prob * mu.cdf(min(A, front_count)))
        g_levels.append(math.fsum(g_parts))
        if _n == L:
            break
        nxt: dict = {}
        for window, prob in states.items():
            base = Configuration(0, window)
            for a in range(1, A + 1):
                w = mu.pmf(a)
                if w == 0.0:
                    continue
                key = base.apply_move(a).canonical().window
                nxt[key] = nxt.get(key, 0.0) + prob * w
        states = nxt
    tail = mu.tail(A)
    return g_levels[-1] + tail * math.fsum(g_levels[:-1])
