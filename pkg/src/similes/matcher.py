"""Simile-candidate extraction over coarse POS patterns.

A candidate is a connector token ("kao", "ko", "k'o") preceded by a verb or
adjective (optionally carrying a directly following reflexive "se") and
followed by up to ``max_adjectives`` adjectives and exactly one noun. The
match stops at the first noun and never crosses punctuation. Candidate text
is normalized (lowercase Latin script, the connector canonicalized to "kao");
the original surface stays reachable through the token span and source.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .tagger import A, N, TaggedToken, V
from .text import PUNCTUATION, normalize

CANONICAL_CONNECTOR = "kao"
DEFAULT_CONNECTORS = frozenset({"kao", "ko", "k'o"})
REFLEXIVE = "se"


@dataclass(frozen=True)
class MatcherConfig:
    connectors: frozenset[str] = DEFAULT_CONNECTORS
    allow_reflexive_se: bool = True
    max_adjectives: int = 3

    def __post_init__(self):
        if not self.connectors:
            raise ValueError("connector set is empty")
        if self.max_adjectives < 0:
            raise ValueError("max_adjectives must be >= 0")
        object.__setattr__(
            self, "connectors", frozenset(normalize(c) for c in self.connectors)
        )


@dataclass(frozen=True)
class SimileCandidate:
    left: str
    connector: str
    right: str
    full_text: str
    span: tuple[int, int]
    doc_id: str = ""
    sentence_offset: int = 0

    def __post_init__(self):
        if self.full_text != f"{self.left} {self.connector} {self.right}":
            raise ValueError("full_text does not recompose from its parts")
        if self.span[0] < 0 or self.span[1] <= self.span[0]:
            raise ValueError(f"bad token span {self.span}")


def extract(
    sentence: Sequence[TaggedToken],
    config: MatcherConfig | None = None,
    *,
    doc_id: str = "",
    sentence_offset: int = 0,
) -> list[SimileCandidate]:
    """All pattern matches in one tagged sentence, in sentence order.

    Each connector occurrence is tried independently, so distinct connectors
    can yield overlapping candidates. No match yields an empty list.
    """
    cfg = config if config is not None else MatcherConfig()
    norm = [normalize(tt.token.text) for tt in sentence]
    found: list[SimileCandidate] = []
    for i in range(len(sentence)):
        if norm[i] not in cfg.connectors:
            continue
        left = _match_left(sentence, norm, i, cfg)
        if left is None:
            continue
        start, left_text = left
        right = _match_right(sentence, norm, i, cfg)
        if right is None:
            continue
        end, right_text = right
        if any(sentence[j].token.kind == PUNCTUATION for j in range(start, end)):
            continue
        full_text = f"{left_text} {CANONICAL_CONNECTOR} {right_text}"
        found.append(
            SimileCandidate(
                left=left_text,
                connector=CANONICAL_CONNECTOR,
                right=right_text,
                full_text=full_text,
                span=(start, end),
                doc_id=doc_id,
                sentence_offset=sentence_offset,
            )
        )
    return found


def _match_left(
    sentence: Sequence[TaggedToken], norm: list[str], i: int, cfg: MatcherConfig
) -> tuple[int, str] | None:
    j = i - 1
    if j < 0:
        return None
    if cfg.allow_reflexive_se and norm[j] == REFLEXIVE:
        k = j - 1
        if k >= 0 and sentence[k].coarse == V:
            return k, f"{norm[k]} {REFLEXIVE}"
        return None
    if sentence[j].coarse in (V, A):
        return j, norm[j]
    return None


def _match_right(
    sentence: Sequence[TaggedToken], norm: list[str], i: int, cfg: MatcherConfig
) -> tuple[int, str] | None:
    j = i + 1
    parts: list[str] = []
    while j < len(sentence) and sentence[j].coarse == A and len(parts) < cfg.max_adjectives:
        parts.append(norm[j])
        j += 1
    if j < len(sentence) and sentence[j].coarse == N:
        parts.append(norm[j])
        return j + 1, " ".join(parts)
    return None
