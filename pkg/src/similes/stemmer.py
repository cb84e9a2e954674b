"""Rule-based suffix-stripping stemmer for Serbian.

Used for dedup keys, search and classifier features. The rule table is
plain data (see ``data/stem_rules.txt``) and can be replaced by the user;
the bundled table is tuned so that inflectional and grammatical-gender
variants of the phrases we collect map to a common stem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .text import PUNCTUATION, normalize, tokenize


class RuleTableError(ValueError):
    """Raised when a rule-table file cannot be parsed."""


@dataclass(frozen=True)
class StemRuleTable:
    """Ordered ending transforms plus a longest-first strippable suffix list."""

    transforms: tuple[tuple[str, str], ...] = ()
    suffixes: tuple[str, ...] = ()
    min_stem_len: int = 2

    def __post_init__(self):
        if self.min_stem_len < 1:
            raise ValueError("min_stem_len must be >= 1")
        if len(set(self.suffixes)) != len(self.suffixes):
            raise ValueError("duplicate suffixes in rule table")
        ordered = tuple(sorted(self.suffixes, key=lambda s: (-len(s), s)))
        object.__setattr__(self, "suffixes", ordered)


def parse_rule_table(text: str) -> StemRuleTable:
    transforms: list[tuple[str, str]] = []
    suffixes: list[str] = []
    min_stem_len = 2
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1]
            if section not in ("transforms", "suffixes"):
                raise RuleTableError(f"line {lineno}: unknown section [{section}]")
            continue
        if line.startswith("min_stem_len="):
            try:
                min_stem_len = int(line.split("=", 1)[1])
            except ValueError:
                raise RuleTableError(f"line {lineno}: bad min_stem_len") from None
            continue
        if section == "transforms":
            parts = raw.strip().split("\t")
            if len(parts) != 2 or not parts[0]:
                raise RuleTableError(f"line {lineno}: transform needs 'suffix<TAB>replacement'")
            transforms.append((parts[0], parts[1]))
        elif section == "suffixes":
            suffixes.append(line)
        else:
            raise RuleTableError(f"line {lineno}: content outside any section")
    return StemRuleTable(tuple(transforms), tuple(suffixes), min_stem_len)


def load_rule_table(path: str | Path) -> StemRuleTable:
    return parse_rule_table(Path(path).read_text("utf-8"))


def default_rule_table() -> StemRuleTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        text = resources.files("similes.data").joinpath("stem_rules.txt").read_text("utf-8")
        _DEFAULT_TABLE = parse_rule_table(text)
    return _DEFAULT_TABLE


_DEFAULT_TABLE: StemRuleTable | None = None


def stem(word: str, table: StemRuleTable | None = None) -> str:
    """Stem one word: lowercase + Latin-normalize, transform the ending,
    then strip the longest suffix that leaves at least ``min_stem_len``
    characters. Words no longer than ``min_stem_len`` pass through unchanged.
    """
    if not word:
        raise ValueError("cannot stem an empty word")
    if table is None:
        table = default_rule_table()
    w = normalize(word)
    if len(w) <= table.min_stem_len:
        return w
    for pattern, replacement in table.transforms:
        if w.endswith(pattern) and len(w) - len(pattern) + len(replacement) >= table.min_stem_len:
            w = w[: len(w) - len(pattern)] + replacement
            break
    for suffix in table.suffixes:
        if w.endswith(suffix) and len(w) - len(suffix) >= table.min_stem_len:
            return w[: len(w) - len(suffix)]
    return w


def stem_phrase(phrase: str, table: StemRuleTable | None = None) -> str:
    """Stem every word-like token of ``phrase``; punctuation is dropped."""
    if not phrase:
        raise ValueError("cannot stem an empty phrase")
    stems = [
        stem(token.text, table)
        for token in tokenize(phrase)
        if token.kind != PUNCTUATION
    ]
    return " ".join(stems)
