"""Bounded enumeration of the stopping tree of minimal good/bad words.

Words are grown by prepending letters.  A branch stops the moment its word
classifies good or bad; because every strict suffix of a stopped word was
alive (neither) earlier on the same branch, stopped words are exactly the
*minimal* good/bad words.  Summing branch weights therefore produces
rigorous speed brackets: accumulated good mass is a lower bound on the
speed, one minus accumulated bad mass an upper bound, and everything not
resolved within the resource bounds is accounted to a *frontier* bucket so
that good + bad + frontier = 1 exactly (up to floating-point rounding).

Two engines share the transition algebra:

- a lumped dynamic program over goodness-vector states (`stopping_tree_masses`
  and its per-monomial-coefficient variant `stopping_tree_counts`), which
  merges all words with identical future behaviour and scales to lengths
  where the word tree itself is astronomically large;
- an explicit depth-first walk (`walk_minimal_words`) that visits individual
  words and streams resolved leaves to a consumer, for modest bounds.

Goodness-vector state: a live word w of horizon d is represented by the
boolean vector of its per-placement outcomes over the 2^(d-1) test
placements.  Prepending a letter acts on placements, so the child vector is
a gather of the parent's (``image_table``).  When the vector's two halves
agree, the outcome does not depend on the deepest test ball and the state
is reduced to depth d-1, which maximises merging.

Resource bounds, all frontier-accounted so brackets stay valid:
length bound L and alphabet bound A (contract parameters), a depth cap on
goodness vectors, a global cap on live lumped states per level (lowest
weights dropped, deterministic tie handling), and a birth-weight floor
below which children are not expanded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from infinitebin.words import BAD, GOOD, SizeLimitError

DEFAULT_MAX_STATES = 50_000
DEFAULT_DEPTH_CAP = 16
DEFAULT_BIRTH_FLOOR = 1e-18
DEFAULT_NODE_BUDGET = 3_000_000

#: Rows unpacked per chunk when streaming a bucket through transitions;
#: bounds transient memory at depth_cap (2^15 columns) to ~130 MB of bools.
_CHUNK_ROWS = 4096


def image_table(src_depth: int, letter: int, dst_depth: int) -> np.ndarray:
    """Gather map realising one prepended letter on placement patterns.

    For each placement pattern P of the src_depth rightmost balls (encoded
    by difference bits), apply the move ``letter`` to P and return the
    pattern index, at depth dst_depth, of the resulting rightmost
    dst_depth balls.  With d2 = horizon(letter . w) and d = horizon(w):

        outcome(letter . w, P) = outcome(w, image_table(d2, letter, d)[P])

    Tables are cached per (src_depth, letter, dst_depth).
    """
    key = (src_depth, letter, dst_depth)
    cached = _IMAGE_TABLES.get(key)
    if cached is not None:
        return cached
    n = 1 << (src_depth - 1)
    bits = np.arange(n, dtype=np.int64)
    pos = np.zeros((n, src_depth), dtype=np.int64)
    for i in range(1, src_depth):
        pos[:, i] = pos[:, i - 1] - ((bits >> (i - 1)) & 1)
    if letter <= src_depth:
        probed = pos[:, letter - 1]
    else:
        # one-ball-per-bin tail below the placed balls
        probed = pos[:, -1] - (letter - src_depth)
    inserted = probed + 1
    tail = pos[:, -1][:, None] - np.arange(1, dst_depth + 1)[None, :]
    allpos = np.concatenate([pos, inserted[:, None], tail], axis=1)
    allpos = -np.sort(-allpos, axis=1)
    top = allpos[:, :dst_depth]
    if dst_depth == 1:
        idx = np.zeros(n, dtype=np.int64)
    else:
        diffs = top[:, :-1] - top[:, 1:]
        idx = diffs @ (1 << np.arange(dst_depth - 1, dtype=np.int64))
    _IMAGE_TABLES[key] = idx
    return idx


_IMAGE_TABLES: dict = {}


def _dedupe(packed: np.ndarray, weights: np.ndarray):
    """Merge identical packed rows, summing weights (byte-order output)."""
    if packed.shape[0] <= 1:
        return packed, weights
    nbytes = packed.shape[1]
    keys = packed.view(f"V{nbytes}").ravel()
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    starts = np.flatnonzero(
        np.concatenate(([True], sorted_keys[1:] != sorted_keys[:-1]))
    )
    sums = np.add.reduceat(weights[order], starts)
    return packed[order[starts]], sums


def _birth_row(depth: int) -> np.ndarray:
    """Packed goodness vector of the single-letter word of this horizon.

    The word (a) advances exactly from the flat placement (pattern 0).
    """
    v = np.zeros((1, 1 << (depth - 1)), dtype=bool)
    v[0, 0] = True
    return np.packbits(v, axis=1)


def _stash(pending: dict, key, V: np.ndarray, w: np.ndarray, depth: int) -> None:
    """Depth-reduce rows and append them (packed) to the pending buckets.

    ``key`` is the bucket key minus the depth component: () for the mass
    engine, (exponent,) for the coefficient engine.
    """
    d = depth
    while d > 1 and V.shape[0]:
        half = 1 << (d - 2)
        eq = (V[:, :half] == V[:, half:]).all(axis=1)
        if not eq.any():
            break
        hold = ~eq
        if hold.any():
            bucket = pending.setdefault((d, *key), ([], []))
            bucket[0].append(np.packbits(V[hold], axis=1))
            bucket[1].append(w[hold])
        V = V[eq][:, :half]
        w = w[eq]
        d -= 1
    if V.shape[0]:
        bucket = pending.setdefault((d, *key), ([], []))
        bucket[0].append(np.packbits(V, axis=1))
        bucket[1].append(w)


def _settle(pending: dict, max_states: int, priority):
    """Dedupe pending buckets, then drop lowest-priority states over the cap.

    ``priority`` maps (bucket key, weight array) to the pruning score; the
    dropped mass (sum of raw weights) is returned for frontier accounting.
    Ties at the threshold are resolved deterministically in bucket-key,
    then row-byte, order.
    """
    buckets = {}
    total = 0
    for key in sorted(pending):
        rows_list, w_list = pending[key]
        rows, sums = _dedupe(np.concatenate(rows_list), np.concatenate(w_list))
        buckets[key] = (rows, sums)
        total += len(sums)
    if total <= max_states:
        return buckets, 0.0, total
    scores = {key: priority(key, b[1]) for key, b in buckets.items()}
    wall = np.concatenate([scores[key] for key in sorted(buckets)])
    n_drop = total - max_states
    thresh = np.partition(wall, n_drop - 1)[n_drop - 1]
    n_keep_eq = max_states - int((wall > thresh).sum())
    kept = {}
    dropped = 0.0
    for key in sorted(buckets):
        rows, sums = buckets[key]
        score = scores[key]
        keep = score > thresh
        eq = score == thresh
        if n_keep_eq > 0 and eq.any():
            take = np.flatnonzero(eq)[:n_keep_eq]
            keep[take] = True
            n_keep_eq -= len(take)
        if not keep.all():
            dropped += float(sums[~keep].sum())
        if keep.any():
            kept[key] = (rows[keep], sums[keep])
    return kept, dropped, total


@dataclass(frozen=True)
class MassSplit:
    """Resolved/unresolved weight of the truncated stopping tree.

    ``frontier`` is the exactly-summed total of the unresolved weight; the
    four components record how each piece exited the enumeration, which
    downstream bounds for non-probability weights need to treat
    differently:

    - ``frontier_tail``: a continuation letter fell beyond the alphabet
      (includes the root term: first letter beyond A);
    - ``frontier_live``: still unresolved at the length bound;
    - ``frontier_capped``: child state not expanded (depth cap or
      birth-weight floor);
    - ``pruned_mass``: live states dropped by the state-count cap.
    """

    good: float
    bad: float
    frontier: float
    frontier_tail: float
    frontier_live: float
    frontier_capped: float
    pruned_mass: float
    peak_states: int

    @property
    def total(self) -> float:
        return self.good + self.bad + self.frontier


def _check_bounds(L: int, A: int) -> None:
    if L < 1:
        raise ValueError(f"max word length must be >= 1, got {L}")
    if A < 1:
        raise ValueError(f"max letter must be >= 1, got {A}")


def stopping_tree_masses(
    pmf_vec: np.ndarray,
    tail_mass: float,
    L: int,
    A: int,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    birth_floor: float = DEFAULT_BIRTH_FLOOR,
) -> MassSplit:
    """Run the lumped stopping-tree DP with per-letter weights.

    ``pmf_vec[a]`` is the weight of prepending letter a (index 0 unused)
    and ``tail_mass`` the weight of "letter beyond A" per prepend step.
    For a probability law these are mu(a) and mu((A, inf)); the engine
    never assumes they sum to 1, so monomial weights work too.
    """
    _check_bounds(L, A)
    if len(pmf_vec) < A + 1:
        raise ValueError("pmf_vec must cover letters 1..A")
    good_parts: list = []
    bad_parts: list = []
    tail_parts: list = [float(tail_mass)]  # first letter beyond alphabet
    live_parts: list = []
    capped_parts: list = []
    pruned_parts: list = []
    peak = 0

    def priority(key, weights):
        return weights

    pending: dict = {}
    for a in range(1, A + 1):
        w = float(pmf_vec[a])
        if w <= 0.0:
            continue
        if a == 1:
            good_parts.append(w)  # (1) advances from every placement
            continue
        if a > depth_cap or w < birth_floor:
            capped_parts.append(w)
            continue
        _stash(pending, (), np.unpackbits(
            _birth_row(a), axis=1, count=1 << (a - 1)).astype(bool),
            np.array([w]), a)
    buckets, dropped, total = _settle(pending, max_states, priority)
    peak = max(peak, total)
    if dropped:
        pruned_parts.append(dropped)

    for _level in range(2, L + 1):
        if not buckets:
            break
        live = sum(float(b[1].sum()) for b in buckets.values())
        tail_parts.append(live * tail_mass)
        pending = {}
        for (d,) in sorted(buckets):
            rows, wts = buckets[(d,)]
            ncols = 1 << (d - 1)
            for lo in range(0, rows.shape[0], _CHUNK_ROWS):
                V = np.unpackbits(
                    rows[lo : lo + _CHUNK_ROWS], axis=1, count=ncols
                ).astype(bool)
                wc = wts[lo : lo + _CHUNK_ROWS]
                for a in range(1, A + 1):
                    w = float(pmf_vec[a])
                    if w <= 0.0:
                        continue
                    d2 = max(a, d - 1, 1)
                    if d2 > depth_cap:
                        capped_parts.append(float(wc.sum()) * w)
                        continue
                    cw = wc * w
                    Vs = V
                    if birth_floor > 0.0:
                        alive = cw >= birth_floor
                        if not alive.all():
                            capped_parts.append(float(cw[~alive].sum()))
                            cw = cw[alive]
                            Vs = V[alive]
                            if cw.size == 0:
                                continue
                    C = Vs[:, image_table(d2, a, d)]
                    g = C.all(axis=1)
                    b = ~C.any(axis=1)
                    if g.any():
                        good_parts.append(float(cw[g].sum()))
                    if b.any():
                        bad_parts.append(float(cw[b].sum()))
                    keep = ~(g | b)
                    if keep.any():
                        _stash(pending, (), C[keep], cw[keep], d2)
        buckets, dropped, total = _settle(pending, max_states, priority)
        peak = max(peak, total)
        if dropped:
            pruned_parts.append(dropped)

    live_parts.extend(float(b[1].sum()) for b in buckets.values())
    return MassSplit(
        good=math.fsum(good_parts),
        bad=math.fsum(bad_parts),
        frontier=math.fsum(
            tail_parts + live_parts + capped_parts + pruned_parts
        ),
        frontier_tail=math.fsum(tail_parts),
        frontier_live=math.fsum(live_parts),
        frontier_capped=math.fsum(capped_parts),
        pruned_mass=math.fsum(pruned_parts),
        peak_states=peak,
    )


def mass_rounding_bound(L: int, A: int) -> float:
    """Conservative bound on the rounding error of the mass accounting.

    Every accumulated part is a product of at most L letter weights and a
    pairwise-summed reduction (depth <= 64), so carries relative error at
    most (L + 64) eps with eps = 2^-52; parts are finally combined by
    exactly-rounded fsum.  Total part magnitude is at most L + 3 (live
    mass re-enters the frontier accounting once per level).  A safety
    factor of 4 absorbs second-order terms.
    """
    eps = math.ulp(1.0)
    return 4.0 * (L + 64) * (L + 3) * eps


# ---------------------------------------------------------------------------
# coefficient engine: one enumeration, evaluated at many geometric p
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CountTables:
    """Exact leaf/frontier counts by (word length n, exponent e).

    Entry [n, e] counts words contributing the monomial p^n (1-p)^e under
    Geometric(p) letter weights: resolved minimal good/bad words in
    ``good``/``bad``; unresolved contributions in ``frontier`` (branches
    needing a letter beyond A enter at exponent e + A, branches still
    alive at length L at their own exponent, plus capped/pruned states).
    Counts are exact integers stored as float64.
    """

    good: np.ndarray
    bad: np.ndarray
    frontier: np.ndarray
    L: int
    A: int
    pruned_states: int

    def evaluate(self, p: float) -> tuple:
        """(good, bad, frontier) mass at Geometric(p); masses sum to 1."""
        if not 0.0 < p <= 1.0:
            raise ValueError(f"p must be in (0, 1], got {p}")
        n_pow = np.power(float(p), np.arange(self.good.shape[0]))
        e_pow = np.power(1.0 - float(p), np.arange(self.good.shape[1]))
        return tuple(
            float(n_pow @ table @ e_pow)
            for table in (self.good, self.bad, self.frontier)
        )


def count_rounding_bound(L: int, A: int) -> float:
    """Rounding bound for CountTables.evaluate at one p.

    Table entries and the power vectors are exact to relative eps-level;
    the double contraction sums at most (L+1)(E+1) nonnegative terms of
    total magnitude <= 1, giving error <= 4 (L + E) eps with
    E = L(A-1) + A.
    """
    eps = math.ulp(1.0)
    E = L * (A - 1) + A
    return 4.0 * (L + E + 64) * eps


def stopping_tree_counts(
    L: int,
    A: int,
    *,
    reference_p: float = 0.5,
    max_states: int = DEFAULT_MAX_STATES,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> CountTables:
    """Enumerate once, recording integer monomial coefficients.

    States carry their accumulated exponent e = sum(letter - 1) in the
    bucket key, and weights are word *counts* (exact in float64; guarded
    by requiring A^L < 2^53).  Pruning priority uses the reference p so a
    single pass serves a whole p-grid; whatever is pruned is still
    frontier-accounted at its own (n, e), keeping every evaluated bracket
    valid at every p.
    """
    _check_bounds(L, A)
    if L * math.log2(max(A, 2)) >= 53:
        raise SizeLimitError(
            f"word counts up to {A}^{L} exceed exact float64 integers"
        )
    E = L * (A - 1) + A
    good = np.zeros((L + 1, E + 1))
    bad = np.zeros((L + 1, E + 1))
    frontier = np.zeros((L + 1, E + 1))
    frontier[0, A] = 1.0  # first letter beyond alphabet
    q_ref = 1.0 - reference_p
    pruned_states = 0

    def priority(key, weights):
        # same level everywhere, so p_ref^n is a common factor
        return weights * q_ref ** key[1]

    pending: dict = {}
    for a in range(1, A + 1):
        if a == 1:
            good[1, 0] += 1.0
            continue
        if a > depth_cap:
            frontier[1, a - 1] += 1.0
            continue
        _stash(pending, (a - 1,), np.unpackbits(
            _birth_row(a), axis=1, count=1 << (a - 1)).astype(bool),
            np.array([1.0]), a)
    pruned_births: dict = {}
    buckets, _dropped, _total = _settle_counts(
        pending, max_states, priority, pruned_births
    )
    pruned_states += sum(int(c.size) for c in pruned_births.values())
    for (d, e), counts in pruned_births.items():
        frontier[1, e] += float(counts.sum())
    for level in range(2, L + 1):
        if not buckets:
            break
        for (d, e) in sorted(buckets):
            frontier[level - 1, e + A] += float(buckets[(d, e)][1].sum())
        pending = {}
        for (d, e) in sorted(buckets):
            rows, wts = buckets[(d, e)]
            ncols = 1 << (d - 1)
            for lo in range(0, rows.shape[0], _CHUNK_ROWS):
                V = np.unpackbits(
                    rows[lo : lo + _CHUNK_ROWS], axis=1, count=ncols
                ).astype(bool)
                wc = wts[lo : lo + _CHUNK_ROWS]
                for a in range(1, A + 1):
                    d2 = max(a, d - 1, 1)
                    e2 = e + a - 1
                    if d2 > depth_cap:
                        frontier[level, e2] += float(wc.sum())
                        continue
                    C = V[:, image_table(d2, a, d)]
                    g = C.all(axis=1)
                    b = ~C.any(axis=1)
                    if g.any():
                        good[level, e2] += float(wc[g].sum())
                    if b.any():
                        bad[level, e2] += float(wc[b].sum())
                    keep = ~(g | b)
                    if keep.any():
                        _stash(pending, (e2,), C[keep], wc[keep], d2)
        pruned: dict = {}
        buckets, _dropped_count, _total = _settle_counts(
            pending, max_states, priority, pruned
        )
        pruned_states += sum(int(c.size) for c in pruned.values())
        for (d, e), counts in pruned.items():
            frontier[level, e] += float(counts.sum())
    for (d, e) in sorted(buckets):
        frontier[L, e] += float(buckets[(d, e)][1].sum())
    return CountTables(
        good=good, bad=bad, frontier=frontier, L=L, A=A,
        pruned_states=pruned_states,
    )


def _settle_counts(pending: dict, max_states: int, priority, pruned_out: dict):
    """_settle variant that reports the dropped weights per bucket key."""
    buckets = {}
    total = 0
    for key in sorted(pending):
        rows_list, w_list = pending[key]
        rows, sums = _dedupe(np.concatenate(rows_list), np.concatenate(w_list))
        buckets[key] = (rows, sums)
        total += len(sums)
    if total <= max_states:
        return buckets, 0.0, total
    scores = {key: priority(key, b[1]) for key, b in buckets.items()}
    wall = np.concatenate([scores[key] for key in sorted(buckets)])
    n_drop = total - max_states
    thresh = np.partition(wall, n_drop - 1)[n_drop - 1]
    n_keep_eq = max_states - int((wall > thresh).sum())
    kept = {}
    dropped = 0.0
    for key in sorted(buckets):
        rows, sums = buckets[key]
        score = scores[key]
        keep = score > thresh
        eq = score == thresh
        if n_keep_eq > 0 and eq.any():
            take = np.flatnonzero(eq)[:n_keep_eq]
            keep[take] = True
            n_keep_eq -= len(take)
        if not keep.all():
            pruned_out[key] = sums[~keep]
            dropped += float(sums[~keep].sum())
        if keep.any():
            kept[key] = (rows[keep], sums[keep])
    return kept, dropped, total


# ---------------------------------------------------------------------------
# explicit word walk (streams resolved leaves)
# ---------------------------------------------------------------------------


def walk_minimal_words(
    pmf_vec: np.ndarray,
    tail_mass: float,
    L: int,
    A: int,
    emit,
    *,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> MassSplit:
    """Depth-first walk over individual words, emitting resolved leaves.

    Same accounting as stopping_tree_masses but without state merging, so
    each minimal word is visited once and handed to ``emit(word, verdict,
    weight)`` in deterministic order (letters prepended in increasing
    order, depth-first).  Raises SizeLimitError past ``node_budget``
    expanded nodes — the walk is for bounds where the word tree itself is
    tractable; use the lumped engines otherwise.
    """
    _check_bounds(L, A)
    if len(pmf_vec) < A + 1:
        raise ValueError("pmf_vec must cover letters 1..A")
    good_parts: list = []
    bad_parts: list = []
    tail_parts: list = [float(tail_mass)]
    live_parts: list = []
    capped_parts: list = []
    expanded = 0
    stack: list = []

    def spawn_births():
        for a in range(A, 0, -1):
            w = float(pmf_vec[a])
            if w <= 0.0:
                continue
            if a == 1:
                yield ((1,), 1, None, w)  # resolves immediately: all-true
                continue
            if a > depth_cap:
                capped_parts.append(w)
                continue
            v = np.zeros(1 << (a - 1), dtype=bool)
            v[0] = True
            yield ((a,), a, v, w)

    for word, d, v, w in spawn_births():
        if v is None:
            if emit is not None:
                emit(word, GOOD, w)
            good_parts.append(w)
        else:
            stack.append((word, d, v, w))
    stack.reverse()

    while stack:
        word, d, v, w = stack.pop()
        if len(word) >= L:
            live_parts.append(w)
            continue
        expanded += 1
        if expanded > node_budget:
            raise SizeLimitError(
                f"word walk exceeded its budget of {node_budget} expanded "
                f"nodes at length-bound {L}, alphabet {A}; use the lumped "
                f"bracket engine for bounds this large"
            )
        tail_parts.append(w * tail_mass)
        children = []
        for a in range(1, A + 1):
            wa = float(pmf_vec[a])
            if wa <= 0.0:
                continue
            d2 = max(a, d - 1, 1)
            if d2 > depth_cap:
                capped_parts.append(w * wa)
                continue
            child = v[image_table(d2, a, d)]
            cw = w * wa
            cword = (a,) + word
            if child.all():
                if emit is not None:
                    emit(cword, GOOD, cw)
                good_parts.append(cw)
                continue
            if not child.any():
                if emit is not None:
                    emit(cword, BAD, cw)
                bad_parts.append(cw)
                continue
            while d2 > 1:
                half = 1 << (d2 - 2)
                if not np.array_equal(child[:half], child[half:]):
                    break
                child = child[:half]
                d2 -= 1
            children.append((cword, d2, child, cw))
        stack.extend(reversed(children))

    return MassSplit(
        good=math.fsum(good_parts),
        bad=math.fsum(bad_parts),
        frontier=math.fsum(tail_parts + live_parts + capped_parts),
        frontier_tail=math.fsum(tail_parts),
        frontier_live=math.fsum(live_parts),
        frontier_capped=math.fsum(capped_parts),
        pruned_mass=0.0,
        peak_states=expanded,
    )
