"""Sentence splitting, tokenization and Serbian script utilities.

All downstream stages (tagging, matching, stemming, dedup) consume the
tokens produced here. Serbian is digraphic: both Cyrillic and Latin input
are accepted, and matching-oriented code normalizes to lowercase Latin via
:func:`normalize`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

WORD = "word"
PUNCTUATION = "punctuation"
NUMBER = "number"

# Numbers first, then words (letters with internal apostrophes/hyphens kept
# whole, so "k'o" and "crno-beli" stay single tokens), then any leftover
# non-space character on its own.
_TOKEN_RE = re.compile(
    r"\d+(?:[.,]\d+)*"
    r"|[^\W\d_]+(?:['’-][^\W\d_]+)*"
    r"|\S",
    re.UNICODE,
)

_NUMBER_RE = re.compile(r"\d+(?:[.,]\d+)*\Z")

_CYR_TO_LAT = {
    "а": "a", "б": "b", "в": "v", "г": "g", "д": "d", "ђ": "đ", "е": "e",
    "ж": "ž", "з": "z", "и": "i", "ј": "j", "к": "k", "л": "l", "љ": "lj",
    "м": "m", "н": "n", "њ": "nj", "о": "o", "п": "p", "р": "r", "с": "s",
    "т": "t", "ћ": "ć", "у": "u", "ф": "f", "х": "h", "ц": "c", "ч": "č",
    "џ": "dž", "ш": "š",
    "А": "A", "Б": "B", "В": "V", "Г": "G", "Д": "D", "Ђ": "Đ", "Е": "E",
    "Ж": "Ž", "З": "Z", "И": "I", "Ј": "J", "К": "K", "Л": "L", "Љ": "Lj",
    "М": "M", "Н": "N", "Њ": "Nj", "О": "O", "П": "P", "Р": "R", "С": "S",
    "Т": "T", "Ћ": "Ć", "У": "U", "Ф": "F", "Х": "H", "Ц": "C", "Ч": "Č",
    "Џ": "Dž", "Ш": "Š",
}

# Serbian Latin alphabet in collation order; digraphs are single letters.
_ALPHABET = [
    "a", "b", "c", "č", "ć", "d", "dž", "đ", "e", "f", "g", "h", "i", "j",
    "k", "l", "lj", "m", "n", "nj", "o", "p", "r", "s", "š", "t", "u", "v",
    "z", "ž",
]
_ALPHABET_INDEX = {letter: i for i, letter in enumerate(_ALPHABET)}
_DIGRAPHS = ("dž", "lj", "nj")

_TERMINALS = ".!?…"


@dataclass(frozen=True)
class Token:
    """One surface token; ``kind`` is word, punctuation or number."""

    text: str
    kind: str


@dataclass(frozen=True)
class Sentence:
    text: str
    tokens: tuple[Token, ...]
    source_offset: int


def latinize(text: str) -> str:
    """Transliterate Serbian Cyrillic to Latin; other characters pass through."""
    if not any(ch in _CYR_TO_LAT for ch in text):
        return text
    return "".join(_CYR_TO_LAT.get(ch, ch) for ch in text)


def normalize(text: str) -> str:
    """Lowercased Latin form with curly apostrophes folded to ``'``."""
    return latinize(text).replace("’", "'").lower()


def token_kind(text: str) -> str:
    if _NUMBER_RE.match(text):
        return NUMBER
    if text and text[0].isalpha():
        return WORD
    return PUNCTUATION


def tokenize(sentence_text: str) -> list[Token]:
    """Split one sentence into tokens, keeping punctuation as its own token."""
    return [Token(m.group(), token_kind(m.group())) for m in _TOKEN_RE.finditer(sentence_text)]


def default_abbreviations() -> frozenset[str]:
    data = resources.files("similes.data").joinpath("abbreviations.txt").read_text("utf-8")
    return frozenset(line.strip().casefold() for line in data.splitlines() if line.strip())


_WORD_BEFORE_DOT_RE = re.compile(r"([^\W\d_]+)\.\Z", re.UNICODE)


def _is_abbreviation(text: str, end: int, abbreviations: frozenset[str]) -> bool:
    """True if the terminal run ending at ``end`` closes an abbreviation."""
    m = _WORD_BEFORE_DOT_RE.search(text[:end])
    if not m:
        return False
    word = m.group(1)
    return len(word) == 1 or word.casefold() in abbreviations


def split_sentences(
    text: str, abbreviations: frozenset[str] | None = None
) -> list[tuple[int, int]]:
    """Sentence-boundary spans over ``text``.

    A boundary falls after a run of terminal punctuation that is followed by
    whitespace and an uppercase letter (or end of text). A single period
    after a listed abbreviation, or after a lone initial letter, does not
    split. Spans are trimmed to non-whitespace and cover all of it.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    boundaries = []
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _TERMINALS:
            j = i
            while j < n and text[j] in _TERMINALS:
                j += 1
            run = text[i:j]
            if run == "." and _is_abbreviation(text, j, abbreviations):
                i = j
                continue
            k = j
            while k < n and text[k].isspace():
                k += 1
            if k == n or (k > j and text[k].isupper()):
                boundaries.append(j)
            i = j
        else:
            i += 1
    spans = []
    start = 0
    for b in boundaries + [n]:
        piece = text[start:b]
        lead = len(piece) - len(piece.lstrip())
        trail = len(piece) - len(piece.rstrip())
        if piece.strip():
            spans.append((start + lead, b - trail))
        start = b
    return spans


def split_into_sentences(
    text: str, abbreviations: frozenset[str] | None = None
) -> list[Sentence]:
    """Tokenized sentences with their character offsets into ``text``."""
    sentences = []
    for start, end in split_sentences(text, abbreviations):
        piece = text[start:end]
        tokens = tokenize(piece)
        if tokens:
            sentences.append(Sentence(piece, tuple(tokens), start))
    return sentences


def collation_key(text: str) -> tuple:
    """Sort key following Serbian Latin alphabet order (c < č < ć, d < dž < đ).

    Input is normalized first, so Cyrillic and mixed-case text collate with
    Latin. Characters outside the alphabet sort after all letters, by code
    point.
    """
    s = normalize(text)
    key = []
    i = 0
    while i < len(s):
        pair = s[i : i + 2]
        if pair in _DIGRAPHS:
            key.append((0, _ALPHABET_INDEX[pair]))
            i += 2
            continue
        ch = s[i]
        idx = _ALPHABET_INDEX.get(ch)
        if idx is not None:
            key.append((0, idx))
        elif ch.isspace():
            key.append((1, 0))
        else:
            key.append((2, ord(ch)))
        i += 1
    return tuple(key)
