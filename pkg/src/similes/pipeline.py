"""Document-to-candidate extraction and the candidate file format.

One document flows through sentence splitting, optional transliteration to
lowercase Latin, tokenization, POS tagging and pattern matching. Candidate
records serialize to a TAB-separated line format, sorted canonically by
(doc_id, sentence_offset, span) so parallel extraction yields byte-identical
files.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Iterator

from .ingest import Document
from .matcher import MatcherConfig, SimileCandidate, extract
from .tagger import TaggerModel, tag
from .text import normalize, split_into_sentences, tokenize


def extract_document(
    model: TaggerModel,
    doc: Document,
    config: MatcherConfig | None = None,
    normalize_script: bool = True,
) -> list[SimileCandidate]:
    """All candidates of one document, in sentence order.

    Sentence offsets index characters in the original document text, before
    any transliteration, so provenance always points into the source file.
    """
    candidates: list[SimileCandidate] = []
    for sentence in split_into_sentences(doc.text):
        text = normalize(sentence.text) if normalize_script else sentence.text
        tokens = tokenize(text)
        if not tokens:
            continue
        tagged = tag(model, tokens)
        candidates.extend(
            extract(
                tagged,
                config,
                doc_id=doc.doc_id,
                sentence_offset=sentence.source_offset,
            )
        )
    return candidates


def extract_corpus(
    model: TaggerModel,
    docs: Iterable[Document],
    config: MatcherConfig | None = None,
    normalize_script: bool = True,
    jobs: int = 1,
) -> list[SimileCandidate]:
    """Candidates over a document stream, canonically sorted.

    With jobs > 1 documents are processed concurrently; the final sort by
    (doc_id, sentence_offset, span) makes the output independent of
    scheduling.
    """
    doc_list = list(docs)
    if jobs <= 1 or len(doc_list) <= 1:
        results = [extract_document(model, d, config, normalize_script) for d in doc_list]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(
                    lambda d: extract_document(model, d, config, normalize_script),
                    doc_list,
                )
            )
    merged = [c for per_doc in results for c in per_doc]
    merged.sort(key=lambda c: (c.doc_id, c.sentence_offset, c.span))
    return merged


class CandidateFormatError(ValueError):
    """Raised for malformed candidate-file lines, naming the line number."""


def candidate_to_line(c: SimileCandidate) -> str:
    span = f"{c.span[0]}:{c.span[1]}"
    return "\t".join(
        [c.full_text, c.doc_id, str(c.sentence_offset), span, c.left, c.right]
    )


def write_candidates(candidates: Iterable[SimileCandidate], path: str | Path) -> int:
    lines = [candidate_to_line(c) for c in candidates]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return len(lines)


def read_candidates(path: str | Path) -> Iterator[SimileCandidate]:
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 6:
                raise CandidateFormatError(
                    f"line {lineno}: expected 6 TAB-separated fields, got {len(parts)}"
                )
            full_text, doc_id, offset, span, left, right = parts
            try:
                start, _, end = span.partition(":")
                yield SimileCandidate(
                    left=left,
                    connector="kao",
                    right=right,
                    full_text=full_text,
                    span=(int(start), int(end)),
                    doc_id=doc_id,
                    sentence_offset=int(offset),
                )
            except ValueError as exc:
                raise CandidateFormatError(f"line {lineno}: {exc}") from exc
