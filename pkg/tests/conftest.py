"""Shared fixtures: paths, parsed gold blocks, session-scoped trained models."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import pytest

from similes.classifier import LabeledExample, load_labeled
from similes.tagger import TaggedToken, TaggerModel, coarse_of, load_tagged_corpus, train
from similes.text import Token, token_kind

FIXTURES = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class GoldBlock:
    """One hand-tagged sentence with its expected candidates."""

    pairs: tuple[tuple[str, str], ...]
    candidates: tuple[tuple[str, str, str, tuple[int, int]], ...]

    def tagged(self) -> list[TaggedToken]:
        return [
            TaggedToken(Token(word, token_kind(word)), tag, coarse_of(tag))
            for word, tag in self.pairs
        ]


def parse_gold_file(path: Path) -> list[GoldBlock]:
    blocks: list[GoldBlock] = []
    pairs: list[tuple[str, str]] = []
    candidates: list[tuple[str, str, str, tuple[int, int]]] = []

    def flush():
        nonlocal pairs, candidates
        if pairs:
            blocks.append(GoldBlock(tuple(pairs), tuple(candidates)))
        pairs, candidates = [], []

    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.rstrip("\n")
        if line.startswith("#"):
            continue
        if not line.strip():
            flush()
            continue
        if not pairs:
            for item in line.split(" "):
                word, _, tag = item.rpartition("/")
                pairs.append((word, tag))
        else:
            full_text, left, right, span = line.split("\t")
            start, _, end = span.partition(":")
            candidates.append((full_text, left, right, (int(start), int(end))))
    flush()
    return blocks


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def gold_blocks() -> list[GoldBlock]:
    return parse_gold_file(FIXTURES / "gold_matcher.txt")


@pytest.fixture(scope="session")
def tagger_model() -> TaggerModel:
    return train(load_tagged_corpus(FIXTURES / "tagger_corpus.tsv"))


@pytest.fixture(scope="session")
def labeled40() -> list[LabeledExample]:
    return load_labeled(FIXTURES / "labeled_40.tsv")
