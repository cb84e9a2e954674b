"""Stem-set keys and Jaccard similarity search for near-duplicate phrases.

Inflectional variants of one simile collapse to the same key: the phrase is
normalized, connector variants are canonicalized to "kao", every word is
stemmed, and the resulting stems are deduplicated and sorted. Similarity
between phrases is the Jaccard overlap of their stem sets.
"""

from __future__ import annotations

from .matcher import CANONICAL_CONNECTOR, DEFAULT_CONNECTORS
from .stemmer import StemRuleTable, stem
from .text import PUNCTUATION, normalize, tokenize

DEFAULT_SIMILARITY_THRESHOLD = 0.6


def stem_set(phrase: str, table: StemRuleTable | None = None) -> frozenset[str]:
    """Deduplicated stems of the phrase's word and number tokens."""
    words = [
        t.text for t in tokenize(normalize(phrase)) if t.kind != PUNCTUATION
    ]
    if not words:
        raise ValueError(f"phrase has no word tokens: {phrase!r}")
    canonical = [
        CANONICAL_CONNECTOR if w in DEFAULT_CONNECTORS else w for w in words
    ]
    return frozenset(stem(w, table) for w in canonical)


def key_of(phrase: str, table: StemRuleTable | None = None) -> str:
    """Canonical dedup key: sorted stem set joined by single spaces."""
    return " ".join(sorted(stem_set(phrase, table)))


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


class DedupIndex:
    """In-memory map from entry id to stem set with similarity search."""

    def __init__(self, table: StemRuleTable | None = None):
        self._table = table
        self._sets: dict[int, frozenset[str]] = {}

    def __len__(self) -> int:
        return len(self._sets)

    def __contains__(self, entry_id: int) -> bool:
        return entry_id in self._sets

    def add(self, entry_id: int, phrase: str) -> None:
        self._sets[entry_id] = stem_set(phrase, self._table)

    def remove(self, entry_id: int) -> None:
        del self._sets[entry_id]

    def find_similar(
        self,
        query: str,
        threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
        ids: set[int] | None = None,
    ) -> list[tuple[int, float]]:
        """Entries with similarity >= threshold, best first, ties by id.

        ``ids`` restricts the search to a subset of indexed entries.
        """
        if not 0.0 < threshold <= 1.0:
            raise ValueError("threshold must be in (0, 1]")
        query_set = stem_set(query, self._table)
        hits = [
            (entry_id, jaccard(query_set, stems))
            for entry_id, stems in self._sets.items()
            if ids is None or entry_id in ids
        ]
        ranked = [(entry_id, sim) for entry_id, sim in hits if sim >= threshold]
        ranked.sort(key=lambda pair: (-pair[1], pair[0]))
        return ranked
