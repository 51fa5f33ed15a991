"""Append-only on-disk cache of word classifications.

One JSON record per line: {"word": [...], "verdict": "...", "minimal": ...}
(minimal is null for neither-words).  Records are immutable once written;
re-classifying a cached word returns the cached verdict, and attempting to
record a contradicting verdict is an error.  The textual line-per-record
format is chosen for append safety and diff-ability.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from infinitebin.words import BAD, GOOD, NEITHER, Classification, classify

#: Environment variable holding the default cache path.
STORE_PATH_ENV = "INFINITEBIN_WORD_STORE"

_VERDICTS = frozenset({GOOD, BAD, NEITHER})


@dataclass(frozen=True)
class WordStoreRecord:
    """One cached classification."""

    word: tuple
    verdict: str
    minimal: bool | None

    def to_line(self) -> str:
        return json.dumps(
            {
                "word": list(self.word),
                "verdict": self.verdict,
                "minimal": self.minimal,
            }
        )

    @classmethod
    def from_line(cls, line: str) -> "WordStoreRecord":
        data = json.loads(line)
        word = tuple(int(a) for a in data["word"])
        verdict = data["verdict"]
        minimal = data["minimal"]
        if verdict not in _VERDICTS:
            raise ValueError(f"unknown verdict {verdict!r}")
        if minimal is not None and not isinstance(minimal, bool):
            raise ValueError(f"minimal must be boolean or null, got {minimal!r}")
        return cls(word=word, verdict=verdict, minimal=minimal)


def default_store_path() -> str | None:
    """Cache path from the environment, if configured."""
    path = os.environ.get(STORE_PATH_ENV)
    return path if path else None


class WordStore:
    """Append-only word-classification cache backed by one JSONL file."""

    def __init__(self, path):
        self.path = Path(path)
        self._records: dict = {}
        if self.path.exists():
            with self.path.open("r", encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, start=1):
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        rec = WordStoreRecord.from_line(line)
                    except (ValueError, KeyError, json.JSONDecodeError) as exc:
                        raise ValueError(
                            f"{self.path}:{lineno}: bad cache record: {exc}"
                        ) from exc
                    self._check_consistent(rec)
                    self._records[rec.word] = rec

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(self._records.values())

    def lookup(self, word) -> WordStoreRecord | None:
        return self._records.get(tuple(word))

    def _check_consistent(self, rec: WordStoreRecord) -> None:
        old = self._records.get(rec.word)
        if old is not None and old != rec:
            raise ValueError(
                f"cache contradiction for word {rec.word}: "
                f"{old.verdict}/{old.minimal} vs {rec.verdict}/{rec.minimal}"
            )

    def add(self, rec: WordStoreRecord) -> None:
        """Record a classification; identical duplicates are no-ops."""
        self._check_consistent(rec)
        if rec.word in self._records:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(rec.to_line() + "\n")
        self._records[rec.word] = rec

    def classify(self, word) -> Classification:
        """Cached classification; computes and appends on a miss."""
        word = tuple(word)
        rec = self._records.get(word)
        if rec is None:
            result = classify(word)
            rec = WordStoreRecord(
                word=word, verdict=result.verdict, minimal=result.minimal
            )
            self.add(rec)
        return Classification(rec.verdict, rec.minimal)
