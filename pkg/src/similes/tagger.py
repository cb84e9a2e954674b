"""Trainable trigram hidden-Markov POS tagger with Viterbi decoding.

Transition probabilities interpolate unigram/bigram/trigram maximum
likelihood estimates with weights fitted by deleted interpolation; unknown
words are scored through suffix tables collected from rare training words.
Decoding runs in log space and breaks score ties by tagset order, preferring
the lexicographically smallest tag sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .text import Token, token_kind

BOS = "<s>"
EOS = "</s>"

V = "V"
A = "A"
N = "N"
O = "O"
COARSE_TAGS = (V, A, N, O)

MODEL_MAGIC = "similes-tagger"
MODEL_VERSION = 1


class CorpusFormatError(ValueError):
    """Raised for malformed training-corpus lines, naming the line number."""


class ModelFormatError(ValueError):
    """Raised when a model file is corrupt, truncated or wrong-versioned."""


def coarse_of(fine_tag: str, overrides: dict[str, str] | None = None) -> str:
    """Coarse class of a fine tag: V/A/N by first letter, O otherwise.

    ``overrides`` maps full fine tags to coarse values and wins over the
    first-letter rule.
    """
    if not fine_tag:
        raise ValueError("empty fine tag")
    if overrides:
        forced = overrides.get(fine_tag)
        if forced is not None:
            if forced not in COARSE_TAGS:
                raise ValueError(f"override for {fine_tag!r} is not one of {COARSE_TAGS}")
            return forced
    first = fine_tag[0].upper()
    return first if first in (V, A, N) else O


@dataclass(frozen=True)
class TaggedToken:
    token: Token
    fine_tag: str
    coarse: str


@dataclass
class TaggerModel:
    tagset: tuple[str, ...]
    trigram_counts: dict[tuple[str, str, str], int]
    emission_counts: dict[tuple[str, str], int]
    suffix_tables: dict[str, dict[str, int]]
    lambdas: tuple[float, float, float]
    coarse_map: dict[str, str]
    max_suffix_len: int = 4

    # Derived tables, built once in validate().
    _bigram: dict[tuple[str, str], int] = field(default_factory=dict, repr=False)
    _unigram: dict[str, int] = field(default_factory=dict, repr=False)
    _ctx3: dict[tuple[str, str], int] = field(default_factory=dict, repr=False)
    _ctx2: dict[str, int] = field(default_factory=dict, repr=False)
    _total: int = field(default=0, repr=False)
    _tag_word_total: dict[str, int] = field(default_factory=dict, repr=False)
    _vocabulary: set[str] = field(default_factory=set, repr=False)
    _suffix_totals: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.tagset:
            raise ValueError("empty tagset")
        if abs(sum(self.lambdas) - 1.0) > 1e-9 or any(l < 0 for l in self.lambdas):
            raise ValueError("interpolation weights must be non-negative and sum to 1")
        known = set(self.tagset) | {BOS, EOS}
        for (a, b, c) in self.trigram_counts:
            if a not in known or b not in known or c not in known:
                raise ValueError(f"trigram tag outside tagset: {(a, b, c)}")
        for (tag, _word) in self.emission_counts:
            if tag not in self.tagset:
                raise ValueError(f"emission tag outside tagset: {tag!r}")
        for tag in self.tagset:
            if tag not in self.coarse_map:
                raise ValueError(f"coarse_map is missing tag {tag!r}")
        self._rebuild()

    def _rebuild(self):
        self._bigram = {}
        self._unigram = {}
        self._ctx3 = {}
        self._ctx2 = {}
        self._total = 0
        for (a, b, c), n in self.trigram_counts.items():
            self._ctx3[(a, b)] = self._ctx3.get((a, b), 0) + n
            self._bigram[(b, c)] = self._bigram.get((b, c), 0) + n
            self._ctx2[b] = self._ctx2.get(b, 0) + n
            self._unigram[c] = self._unigram.get(c, 0) + n
            self._total += n
        self._tag_word_total = {}
        self._vocabulary = set()
        word_tags: dict[str, set[str]] = {}
        for (tag, word), n in self.emission_counts.items():
            self._tag_word_total[tag] = self._tag_word_total.get(tag, 0) + n
            self._vocabulary.add(word)
            if n > 0:
                word_tags.setdefault(word, set()).add(tag)
        self._suffix_totals = {
            suffix: sum(dist.values()) for suffix, dist in self.suffix_tables.items()
        }
        index_of = {t: i for i, t in enumerate(self.tagset)}
        self._tag_index = index_of
        self._word_tags = {
            word: sorted(tags, key=index_of.__getitem__)
            for word, tags in word_tags.items()
        }
        self._suffix_tag_lists = {
            suffix: sorted(
                (t for t, n in dist.items() if n > 0), key=index_of.__getitem__
            )
            for suffix, dist in self.suffix_tables.items()
        }

    def transition_prob(self, a: str, b: str, c: str) -> float:
        """Interpolated P(c | a, b); a proper distribution over tags + EOS."""
        l1, l2, l3 = self.lambdas
        p_uni = self._unigram.get(c, 0) / self._total if self._total else 0.0
        ctx2 = self._ctx2.get(b, 0)
        p_bi = self._bigram.get((b, c), 0) / ctx2 if ctx2 else p_uni
        ctx3 = self._ctx3.get((a, b), 0)
        p_tri = self.trigram_counts.get((a, b, c), 0) / ctx3 if ctx3 else p_bi
        return l1 * p_uni + l2 * p_bi + l3 * p_tri

    def transition_logprob(self, a: str, b: str, c: str) -> float:
        p = self.transition_prob(a, b, c)
        return math.log(p) if p > 0 else -math.inf

    def emission_logprob(self, tag: str, word: str) -> float:
        """log P(word | tag); unknown words fall back to suffix tables."""
        w = word.lower()
        if w in self._vocabulary:
            total = self._tag_word_total.get(tag, 0)
            if not total:
                return -math.inf
            count = self.emission_counts.get((tag, w), 0)
            return math.log(count / total) if count else -math.inf
        table = self._suffix_table_for(w)
        if table is None:
            return -math.log(len(self.tagset))
        suffix, dist = table
        count = dist.get(tag, 0)
        if not count:
            return -math.inf
        return math.log(count / self._suffix_totals[suffix])

    def candidate_tags(self, word: str) -> list[str]:
        """Tags with finite emission for the word, in tagset order.

        Every other tag scores -inf on this word, so a search that skips
        them can only drop sequences that were impossible anyway.
        """
        w = word.lower()
        if w in self._vocabulary:
            return self._word_tags.get(w, [])
        table = self._suffix_table_for(w)
        if table is None:
            return list(self.tagset)
        suffix, _dist = table
        return self._suffix_tag_lists[suffix]

    def _suffix_table_for(self, word: str) -> tuple[str, dict[str, int]] | None:
        for length in range(min(self.max_suffix_len, len(word)), 0, -1):
            suffix = word[-length:]
            if suffix in self.suffix_tables and self._suffix_totals.get(suffix):
                return suffix, self.suffix_tables[suffix]
        if "" in self.suffix_tables and self._suffix_totals.get(""):
            return "", self.suffix_tables[""]
        return None


def read_tagged_corpus(lines: Iterable[str]) -> Iterator[list[tuple[str, str]]]:
    """Parse ``word<TAB>fine_tag`` lines; a blank line ends a sentence."""
    sentence: list[tuple[str, str]] = []
    lineno = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            if sentence:
                yield sentence
                sentence = []
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise CorpusFormatError(f"line {lineno}: expected 'word<TAB>tag', got {line!r}")
        word, tag = parts[0].strip(), parts[1].strip()
        if tag in (BOS, EOS):
            raise CorpusFormatError(f"line {lineno}: tag {tag!r} is reserved")
        sentence.append((word, tag))
    if sentence:
        yield sentence


def load_tagged_corpus(path: str | Path) -> list[list[tuple[str, str]]]:
    with open(path, encoding="utf-8") as handle:
        return list(read_tagged_corpus(handle))


def _deleted_interpolation(
    trigrams: dict[tuple[str, str, str], int],
    ctx3: dict[tuple[str, str], int],
    bigrams: dict[tuple[str, str], int],
    ctx2: dict[str, int],
    unigrams: dict[str, int],
    total: int,
) -> tuple[float, float, float]:
    """Deleted-interpolation weights; ties prefer the lower-order estimate."""
    votes = [0.0, 0.0, 0.0]
    for (a, b, c), n in trigrams.items():
        d_tri = (n - 1) / (ctx3[(a, b)] - 1) if ctx3[(a, b)] > 1 else 0.0
        d_bi = (bigrams[(b, c)] - 1) / (ctx2[b] - 1) if ctx2[b] > 1 else 0.0
        d_uni = (unigrams[c] - 1) / (total - 1) if total > 1 else 0.0
        if d_uni >= d_bi and d_uni >= d_tri:
            votes[0] += n
        elif d_bi >= d_tri:
            votes[1] += n
        else:
            votes[2] += n
    weight = sum(votes)
    if not weight:
        return (1 / 3, 1 / 3, 1 / 3)
    l1, l2 = votes[0] / weight, votes[1] / weight
    # Close the sum to exactly 1; rounding may leave 1-l1-l2 one ulp negative.
    return (l1, l2, max(0.0, 1.0 - l1 - l2))


def train(
    corpus: Iterable[Sequence[tuple[str, str]]],
    *,
    max_suffix_len: int = 4,
    rare_threshold: int = 10,
    coarse_overrides: dict[str, str] | None = None,
) -> TaggerModel:
    """Count a tagged corpus into a model.

    Counts are exact corpus frequencies. Suffix tables are collected from
    words whose corpus frequency is at most ``rare_threshold``.
    """
    trigram_counts: dict[tuple[str, str, str], int] = {}
    emission_counts: dict[tuple[str, str], int] = {}
    word_freq: dict[str, int] = {}
    tagset: list[str] = []
    seen_tags: set[str] = set()
    n_sentences = 0

    sentences = []
    for sentence in corpus:
        if not sentence:
            continue
        n_sentences += 1
        sentences.append(sentence)
        padded = [BOS, BOS] + [tag for _, tag in sentence] + [EOS]
        for i in range(2, len(padded)):
            key = (padded[i - 2], padded[i - 1], padded[i])
            trigram_counts[key] = trigram_counts.get(key, 0) + 1
        for word, tag in sentence:
            w = word.lower()
            emission_counts[(tag, w)] = emission_counts.get((tag, w), 0) + 1
            word_freq[w] = word_freq.get(w, 0) + 1
            if tag not in seen_tags:
                seen_tags.add(tag)
                tagset.append(tag)
    if not n_sentences:
        raise ValueError("training corpus is empty")

    ctx3: dict[tuple[str, str], int] = {}
    bigrams: dict[tuple[str, str], int] = {}
    ctx2: dict[str, int] = {}
    unigrams: dict[str, int] = {}
    total = 0
    for (a, b, c), n in trigram_counts.items():
        ctx3[(a, b)] = ctx3.get((a, b), 0) + n
        bigrams[(b, c)] = bigrams.get((b, c), 0) + n
        ctx2[b] = ctx2.get(b, 0) + n
        unigrams[c] = unigrams.get(c, 0) + n
        total += n
    lambdas = _deleted_interpolation(trigram_counts, ctx3, bigrams, ctx2, unigrams, total)

    suffix_tables: dict[str, dict[str, int]] = {}
    for sentence in sentences:
        for word, tag in sentence:
            w = word.lower()
            if word_freq[w] > rare_threshold:
                continue
            for length in range(0, min(max_suffix_len, len(w)) + 1):
                suffix = w[-length:] if length else ""
                table = suffix_tables.setdefault(suffix, {})
                table[tag] = table.get(tag, 0) + 1

    coarse_map = {tag: coarse_of(tag, coarse_overrides) for tag in tagset}
    return TaggerModel(
        tagset=tuple(tagset),
        trigram_counts=trigram_counts,
        emission_counts=emission_counts,
        suffix_tables=suffix_tables,
        lambdas=lambdas,
        coarse_map=coarse_map,
        max_suffix_len=max_suffix_len,
    )


def tag_words(model: TaggerModel, words: Sequence[str]) -> list[str]:
    """Viterbi-optimal fine-tag sequence for ``words``.

    Ties between equal-scoring sequences go to the one whose tag indices are
    lexicographically smallest in tagset order; the exhaustive-search oracle
    in the test suite applies the same rule.
    """
    if not words:
        raise ValueError("cannot tag an empty sentence")
    tags = model.tagset
    # When every complete sequence scores -inf the lexicographic rule picks
    # the all-first-tag path, so impossible sentences fall back to it.
    impossible = [tags[0]] * len(words)
    candidates = [model.candidate_tags(word) for word in words]
    if not all(candidates):
        return impossible
    index_of = model._tag_index
    # Each state is (previous tag, current tag) -> (score, path of tag indices).
    # Only finite-emission tags enter the lattice; see candidate_tags.
    states: dict[tuple[str, str], tuple[float, tuple[int, ...]]] = {}
    for t in candidates[0]:
        score = model.transition_logprob(BOS, BOS, t) + model.emission_logprob(t, words[0])
        states[(BOS, t)] = (score, (index_of[t],))
    for word, cands in zip(words[1:], candidates[1:]):
        nxt: dict[tuple[str, str], tuple[float, tuple[int, ...]]] = {}
        for t in cands:
            ti = index_of[t]
            emit = model.emission_logprob(t, word)
            for (prev, cur), (score, path) in states.items():
                cand = (score + model.transition_logprob(prev, cur, t) + emit, path + (ti,))
                best = nxt.get((cur, t))
                if best is None or cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
                    nxt[(cur, t)] = cand
        states = nxt
    final: tuple[float, tuple[int, ...]] | None = None
    for (prev, cur), (score, path) in states.items():
        cand = (score + model.transition_logprob(prev, cur, EOS), path)
        if final is None or cand[0] > final[0] or (cand[0] == final[0] and cand[1] < final[1]):
            final = cand
    if final[0] == -math.inf:
        return impossible
    return [tags[i] for i in final[1]]


def tag(model: TaggerModel, sentence: Sequence[Token]) -> list[TaggedToken]:
    """Tag tokenized text, attaching fine tags and their coarse classes."""
    fine = tag_words(model, [token.text for token in sentence])
    return [
        TaggedToken(token, fine_tag, model.coarse_map[fine_tag])
        for token, fine_tag in zip(sentence, fine)
    ]


def tag_text_words(model: TaggerModel, words: Sequence[str]) -> list[TaggedToken]:
    """Convenience wrapper building tokens from bare strings before tagging."""
    return tag(model, [Token(w, token_kind(w)) for w in words])


def save_model(model: TaggerModel, path: str | Path) -> None:
    lines = [f"lambdas\t{model.lambdas[0]!r}\t{model.lambdas[1]!r}\t{model.lambdas[2]!r}"]
    lines.append(f"max_suffix_len\t{model.max_suffix_len}")
    for t in model.tagset:
        lines.append(f"tag\t{t}\t{model.coarse_map[t]}")
    for (a, b, c), n in sorted(model.trigram_counts.items()):
        lines.append(f"tri\t{a}\t{b}\t{c}\t{n}")
    for (t, w), n in sorted(model.emission_counts.items()):
        lines.append(f"emit\t{t}\t{w}\t{n}")
    for suffix, dist in sorted(model.suffix_tables.items()):
        for t, n in sorted(dist.items()):
            lines.append(f"suf\t{suffix}\t{t}\t{n}")
    body = "\n".join(lines)
    header = f"{MODEL_MAGIC} {MODEL_VERSION}"
    footer = f"end\t{len(lines)}"
    Path(path).write_text(f"{header}\n{body}\n{footer}\n", encoding="utf-8")


def load_model(path: str | Path) -> TaggerModel:
    raw = Path(path).read_text(encoding="utf-8")
    lines = raw.splitlines()
    if not lines:
        raise ModelFormatError("empty model file")
    header = lines[0].split(" ")
    if len(header) != 2 or header[0] != MODEL_MAGIC:
        raise ModelFormatError("not a tagger model file (bad magic header)")
    if header[1] != str(MODEL_VERSION):
        raise ModelFormatError(f"unsupported model version {header[1]!r}")
    if len(lines) < 2 or not lines[-1].startswith("end\t"):
        raise ModelFormatError("model file is truncated (missing end record)")
    try:
        declared = int(lines[-1].split("\t")[1])
    except (IndexError, ValueError):
        raise ModelFormatError("model file has a corrupt end record") from None
    body = lines[1:-1]
    if len(body) != declared:
        raise ModelFormatError(
            f"model file is truncated: {len(body)} records, {declared} declared"
        )

    lambdas: tuple[float, float, float] | None = None
    max_suffix_len = 4
    tagset: list[str] = []
    coarse_map: dict[str, str] = {}
    trigram_counts: dict[tuple[str, str, str], int] = {}
    emission_counts: dict[tuple[str, str], int] = {}
    suffix_tables: dict[str, dict[str, int]] = {}
    try:
        for line in body:
            parts = line.split("\t")
            kind = parts[0]
            if kind == "lambdas":
                lambdas = (float(parts[1]), float(parts[2]), float(parts[3]))
            elif kind == "max_suffix_len":
                max_suffix_len = int(parts[1])
            elif kind == "tag":
                tagset.append(parts[1])
                coarse_map[parts[1]] = parts[2]
            elif kind == "tri":
                trigram_counts[(parts[1], parts[2], parts[3])] = int(parts[4])
            elif kind == "emit":
                emission_counts[(parts[1], parts[2])] = int(parts[3])
            elif kind == "suf":
                suffix_tables.setdefault(parts[1], {})[parts[2]] = int(parts[3])
            else:
                raise ModelFormatError(f"unknown record kind {kind!r}")
    except (IndexError, ValueError) as exc:
        raise ModelFormatError(f"corrupt model record: {exc}") from exc
    if lambdas is None or not tagset:
        raise ModelFormatError("model file is missing required records")
    try:
        return TaggerModel(
            tagset=tuple(tagset),
            trigram_counts=trigram_counts,
            emission_counts=emission_counts,
            suffix_tables=suffix_tables,
            lambdas=lambdas,
            coarse_map=coarse_map,
            max_suffix_len=max_suffix_len,
        )
    except ValueError as exc:
        raise ModelFormatError(f"invalid model contents: {exc}") from exc
