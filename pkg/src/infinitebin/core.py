"""Configurations of the infinite-bin model and the move dynamics.

A configuration places balls in integer-indexed bins so that every bin at
or below the front (the rightmost non-empty bin) is non-empty and every bin
above it is empty.  We store the counts of the rightmost bins explicitly
(the *window*) and represent everything below the window by the fixed tail
policy "one ball per bin", which is exact for every state this package ever
needs: moves only probe the top of a configuration, and the window grows
lazily when they reach down.

The move of rank k adds one ball immediately to the right of the bin
holding the k-th rightmost ball; the front advances by one exactly when
that ball sits in the front bin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple # alias used in signatures: a word is a sequence of letters >= 1

TAIL_POLICY = "one_per_bin"


@dataclass(frozen=True)
class Configuration:
    """Finite-window view of a bin configuration.

    Attributes:
        front: absolute index of the rightmost non-empty bin.
        window: ball counts of the rightmost ``len(window)`` bins, ordered
            left to right; the last entry is the count of bin ``front``.
            Every bin below the window holds exactly one ball.
    """

    front: int = 0
    window: tuple = (1,)

    def __post_init__(self) -> None:
        win = tuple(int(c) for c in self.window)
        if not win:
            raise ValueError("window must be non-empty")
        if any(c < 1 for c in win):
            raise ValueError("window counts must be >= 1")
        object.__setattr__(self, "window", win)

    # -- basic geometry -------------------------------------------------

    @property
    def depth(self) -> int:
        """Number of explicitly stored bins."""
        return len(self.window)

    @property
    def window_balls(self) -> int:
        """Total balls stored in the window."""
        return sum(self.window)

    @property
    def below(self) -> int:
        """Index of the highest tail bin (first bin under the window)."""
        return self.front - len(self.window)

    # -- queries ---------------------------------------------------------

    def count_at_or_right(self, k: int) -> int:
        """Number of balls in bins with index >= k."""
        if k > self.front:
            return 0
        if k > self.below:
            return sum(self.window[k - self.below - 1 :])
        return self.window_balls + (self.below - k + 1)

    def bin_of_kth_rightmost(self, k: int) -> int:
        """Index of the bin holding the k-th rightmost ball (k >= 1)."""
        if k < 1:
            raise ValueError("rank must be >= 1")
        acc = 0
        for i in range(len(self.window) - 1, -1, -1):
            acc += self.window[i]
            if acc >= k:
                return self.below + 1 + i
        return self.below - (k - acc) + 1

    def scenery(self, K: int) -> tuple:
        """Counts of the K rightmost bins, front bin first.

        Entries beyond the explicit window come from the one-ball-per-bin
        tail.
        """
        if K < 0:
            raise ValueError("scenery depth must be >= 0")
        if K == 0:
            return ()
        if K <= len(self.window):
            return tuple(reversed(self.window[len(self.window) - K :]))
        return tuple(reversed(self.window)) + (1,) * (K - len(self.window))

    # -- dynamics ---------------------------------------------------------

    def apply_move(self, k: int) -> "Configuration":
        """Add one ball right of the k-th rightmost ball."""
        ev = _Evolver(self)
        ev.step(k)
        return ev.snapshot()

    def apply_word(self, word: Iterable[int]) -> "Configuration":
        """Apply a word's moves left to right (empty word = identity)."""
        ev = _Evolver(self)
        for k in word:
            ev.step(k)
        return ev.snapshot()

    def shift(self, r: int) -> "Configuration":
        """Move every ball r bins to the left (window unchanged)."""
        return Configuration(self.front - r, self.window)

    # -- identity ---------------------------------------------------------

    def canonical(self) -> "Configuration":
        """Strip window entries that coincide with the tail policy."""
        win = self.window
        i = 0
        while i < len(win) - 1 and win[i] == 1:
            i += 1
        return Configuration(self.front, win[i:]) if i else self

    def same_configuration(self, other: "Configuration") -> bool:
        """Equality of the represented states (window depth ignored)."""
        a, b = self.canonical(), other.canonical()
        return a.front == b.front and a.window == b.window

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {"front": self.front, "window": list(self.window), "tail": TAIL_POLICY}
        )

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        obj = json.loads(text)
        if obj.get("tail", TAIL_POLICY) != TAIL_POLICY:
            raise ValueError(f"unsupported tail policy {obj.get('tail')!r}")
        return cls(int(obj["front"]), tuple(obj["window"]))


#: The canonical start state: one ball per bin up to front 0.
MINIMAL_CONFIG = Configuration(0, (1,))


class _Evolver:
    """Mutable fast path for the move dynamics.

    Single implementation shared by the public ``apply_move``/``apply_word``,
    the word classifier, and the forward simulator, so the dynamics cannot
    drift apart between them.
    """

    __slots__ = ("window", "below", "front")

    def __init__(self, config: Configuration = MINIMAL_CONFIG) -> None:
        self.window = list(config.window)
        self.below = config.front - len(config.window)
        self.front = config.front

    def step(self, k: int) -> bool:
        """Apply the rank-k move; return True iff the front advanced."""
        if k < 1:
            raise ValueError("letter must be >= 1")
        w = self.window
        acc = 0
        idx = len(w) - 1
        while True:
            acc += w[idx]
            if acc >= k or idx == 0:
                break
            idx -= 1
        if acc >= k:
            if idx == len(w) - 1:
                w.append(1)
                self.front += 1
                return True
            w[idx + 1] += 1
            return False
        # ball located in the tail: materialize bins down to it, then add
        need = k - acc
        w[0:0] = [1] * need
        w[1] += 1
        self.below -= need
        return False

    def scenery(self, K: int) -> tuple:
        w = self.window
        if K <= len(w):
            return tuple(reversed(w[len(w) - K :]))
        return tuple(reversed(w)) + (1,) * (K - len(w))

    def snapshot(self) -> Configuration:
        return Configuration(self.front, tuple(self.window))


def final_move_advances(config: Configuration, word: Sequence[int]) -> bool:
    """True iff the last move of ``word`` advances the front from ``config``."""
    if not word:
        raise ValueError("empty word has no final move")
    ev = _Evolver(config)
    for k in word[:-1]:
        ev.step(k)
    return ev.step(word[-1])
