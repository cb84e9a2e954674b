"""Persistent corpus of simile entries with lifecycle, history and stats.

Storage is a single JSONL event log: a header record, then one record per
entry creation, status change, or text edit. Opening a store replays the log
into memory; every mutation appends a record and flushes. Nothing is ever
physically deleted: rejection is a status, and edits keep the prior text
reachable through the entry's history chain.

Allowed status transitions: pending->approved, pending->rejected,
rejected->pending (reinstatement) and approved->pending (re-open).
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .dedup import DEFAULT_SIMILARITY_THRESHOLD, DedupIndex, key_of
from .stemmer import StemRuleTable
from .text import collation_key

PENDING = "pending"
APPROVED = "approved"
REJECTED = "rejected"
STATUSES = (PENDING, APPROVED, REJECTED)

MINED = "mined"
MANUAL = "manual"
SEED = "seed"
ORIGINS = (MINED, MANUAL, SEED)

ALLOWED_TRANSITIONS = frozenset(
    {
        (PENDING, APPROVED),
        (PENDING, REJECTED),
        (REJECTED, PENDING),
        (APPROVED, PENDING),
    }
)

STORE_FORMAT = "similes-store"
STORE_VERSION = 1


class StoreError(ValueError):
    """Base error for store misuse and corrupt store files."""


class UnknownEntryError(StoreError):
    pass


class IllegalTransitionError(StoreError):
    pass


class StoreFormatError(StoreError):
    pass


@dataclass(frozen=True)
class HistoryRecord:
    at: float
    actor: str
    action: str
    to_status: str | None = None
    text: str | None = None


@dataclass
class CorpusEntry:
    id: int
    text: str
    stem_key: str
    status: str
    origin: str
    provenance: dict
    classifier_score: float | None
    created_at: float
    updated_at: float
    history: list[HistoryRecord] = field(default_factory=list)

    def to_public_dict(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "stem_key": self.stem_key,
            "status": self.status,
            "origin": self.origin,
            "provenance": self.provenance,
            "classifier_score": self.classifier_score,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }


@dataclass(frozen=True)
class CorpusStats:
    total: int
    by_status: dict[str, int]
    by_origin: dict[str, int]
    approved: int
    seed_mined_overlap: int


@dataclass(frozen=True)
class SeedImportReport:
    source_name: str
    added: int
    overlap: int


@dataclass(frozen=True)
class Page:
    items: list[CorpusEntry]
    page: int
    page_size: int
    total: int


class CorpusStore:
    """Single-writer, multi-reader entry store backed by one JSONL file."""

    def __init__(
        self,
        path: str | Path,
        stem_table: StemRuleTable | None = None,
        similarity_threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
        clock: Callable[[], float] = time.time,
    ):
        self.path = Path(path)
        self._table = stem_table
        self.similarity_threshold = similarity_threshold
        self._clock = clock
        self._lock = threading.RLock()
        self._entries: dict[int, CorpusEntry] = {}
        self._index = DedupIndex(stem_table)
        self._next_id = 1
        if self.path.exists():
            self._replay()
            self._handle = self.path.open("a", encoding="utf-8")
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = self.path.open("a", encoding="utf-8")
            self._append({"kind": "header", "format": STORE_FORMAT, "version": STORE_VERSION})

    def close(self) -> None:
        with self._lock:
            self._handle.close()

    def __enter__(self) -> "CorpusStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- persistence ----------------------------------------------------

    def _append(self, record: dict) -> None:
        self._handle.write(json.dumps(record, ensure_ascii=False) + "\n")
        self._handle.flush()

    def _replay(self) -> None:
        header_seen = False
        with self.path.open(encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise StoreFormatError(f"{self.path}: line {lineno}: {exc}") from exc
                if not header_seen:
                    if record.get("kind") != "header" or record.get("format") != STORE_FORMAT:
                        raise StoreFormatError(f"{self.path}: not a corpus store file")
                    if record.get("version") != STORE_VERSION:
                        raise StoreFormatError(
                            f"{self.path}: unsupported store version {record.get('version')!r}"
                        )
                    header_seen = True
                    continue
                try:
                    self._apply(record)
                except (KeyError, TypeError, ValueError) as exc:
                    raise StoreFormatError(f"{self.path}: line {lineno}: {exc}") from exc
        if not header_seen:
            raise StoreFormatError(f"{self.path}: not a corpus store file (empty)")

    def _apply(self, record: dict) -> None:
        kind = record["kind"]
        if kind == "entry":
            entry = CorpusEntry(
                id=int(record["id"]),
                text=record["text"],
                stem_key=record["stem_key"],
                status=record["status"],
                origin=record["origin"],
                provenance=record.get("provenance") or {},
                classifier_score=record.get("classifier_score"),
                created_at=float(record["at"]),
                updated_at=float(record["at"]),
                history=[
                    HistoryRecord(
                        at=float(record["at"]),
                        actor=record["actor"],
                        action="created",
                        to_status=record["status"],
                        text=record["text"],
                    )
                ],
            )
            if entry.status not in STATUSES:
                raise ValueError(f"bad status {entry.status!r}")
            if entry.origin not in ORIGINS:
                raise ValueError(f"bad origin {entry.origin!r}")
            if entry.id in self._entries:
                raise ValueError(f"duplicate entry id {entry.id}")
            self._entries[entry.id] = entry
            self._index.add(entry.id, entry.text)
            self._next_id = max(self._next_id, entry.id + 1)
        elif kind == "status":
            entry = self._entries[int(record["id"])]
            to_status = record["to_status"]
            if (entry.status, to_status) not in ALLOWED_TRANSITIONS:
                raise ValueError(f"illegal transition {entry.status}->{to_status}")
            entry.status = to_status
            entry.updated_at = float(record["at"])
            entry.history.append(
                HistoryRecord(
                    at=float(record["at"]),
                    actor=record["actor"],
                    action="status",
                    to_status=to_status,
                )
            )
        elif kind == "edit":
            entry = self._entries[int(record["id"])]
            entry.text = record["text"]
            entry.stem_key = record["stem_key"]
            entry.updated_at = float(record["at"])
            entry.history.append(
                HistoryRecord(
                    at=float(record["at"]),
                    actor=record["actor"],
                    action="edit",
                    text=record["text"],
                )
            )
            self._index.add(entry.id, entry.text)
        else:
            raise ValueError(f"unknown record kind {kind!r}")

    # -- queries ----------------------------------------------------------

    def get(self, entry_id: int) -> CorpusEntry:
        with self._lock:
            try:
                return self._entries[entry_id]
            except KeyError:
                raise UnknownEntryError(f"no entry with id {entry_id}") from None

    def entries(self) -> Iterator[CorpusEntry]:
        with self._lock:
            yield from list(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def has_key(self, stem_key: str) -> bool:
        with self._lock:
            return any(e.stem_key == stem_key for e in self._entries.values())

    def find_similar(
        self,
        query: str,
        threshold: float | None = None,
        status: str | None = None,
    ) -> list[tuple[CorpusEntry, float]]:
        """Entries similar to the query phrase, best first, ties by id."""
        limit = threshold if threshold is not None else self.similarity_threshold
        with self._lock:
            ids = None
            if status is not None:
                ids = {e.id for e in self._entries.values() if e.status == status}
            ranked = self._index.find_similar(query, limit, ids)
            return [(self._entries[entry_id], sim) for entry_id, sim in ranked]

    def list_entries(
        self,
        status: str | None = None,
        origin: str | None = None,
        prefix: str | None = None,
        page: int = 1,
        page_size: int = 50,
    ) -> Page:
        """Alphabetical page of matching entries (Serbian Latin collation)."""
        if page < 1:
            raise ValueError("page must be >= 1")
        if page_size < 1:
            raise ValueError("page_size must be >= 1")
        if status is not None and status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        if origin is not None and origin not in ORIGINS:
            raise ValueError(f"unknown origin {origin!r}")
        with self._lock:
            matching = [
                e
                for e in self._entries.values()
                if (status is None or e.status == status)
                and (origin is None or e.origin == origin)
                and (prefix is None or e.text.lower().startswith(prefix.lower()))
            ]
        matching.sort(key=lambda e: (collation_key(e.text), e.id))
        start = (page - 1) * page_size
        return Page(
            items=matching[start : start + page_size],
            page=page,
            page_size=page_size,
            total=len(matching),
        )

    def pending_queue(self) -> list[CorpusEntry]:
        """Pending entries oldest first (creation time, then id)."""
        with self._lock:
            queue = [e for e in self._entries.values() if e.status == PENDING]
        queue.sort(key=lambda e: (e.created_at, e.id))
        return queue

    def stats(self) -> CorpusStats:
        with self._lock:
            by_status = {s: 0 for s in STATUSES}
            by_origin = {o: 0 for o in ORIGINS}
            for entry in self._entries.values():
                by_status[entry.status] += 1
                by_origin[entry.origin] += 1
            return CorpusStats(
                total=len(self._entries),
                by_status=by_status,
                by_origin=by_origin,
                approved=by_status[APPROVED],
                seed_mined_overlap=self.key_overlap(SEED, MINED),
            )

    def key_overlap(self, origin_a: str, origin_b: str) -> int:
        """Distinct stem keys present under both origins."""
        with self._lock:
            keys_a = {e.stem_key for e in self._entries.values() if e.origin == origin_a}
            keys_b = {e.stem_key for e in self._entries.values() if e.origin == origin_b}
        return len(keys_a & keys_b)

    # -- mutations ----------------------------------------------------------

    def add_entry(
        self,
        text: str,
        origin: str,
        provenance: dict | None = None,
        classifier_score: float | None = None,
        actor: str = "system",
        status: str = PENDING,
    ) -> tuple[CorpusEntry, list[tuple[CorpusEntry, float]]]:
        """Insert an entry; returns it plus near-duplicate warnings.

        Warnings list existing entries whose stem-set similarity meets the
        store threshold. Duplicates are still inserted: the caller decides.
        """
        cleaned = text.strip()
        if not cleaned:
            raise ValueError("entry text is empty")
        if origin not in ORIGINS:
            raise ValueError(f"unknown origin {origin!r}")
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        stem_key = key_of(cleaned, self._table)
        with self._lock:
            warnings = self.find_similar(cleaned)
            now = self._clock()
            entry = CorpusEntry(
                id=self._next_id,
                text=cleaned,
                stem_key=stem_key,
                status=status,
                origin=origin,
                provenance=provenance or {},
                classifier_score=classifier_score,
                created_at=now,
                updated_at=now,
                history=[
                    HistoryRecord(
                        at=now, actor=actor, action="created", to_status=status, text=cleaned
                    )
                ],
            )
            self._next_id += 1
            self._entries[entry.id] = entry
            self._index.add(entry.id, entry.text)
            self._append(
                {
                    "kind": "entry",
                    "id": entry.id,
                    "text": entry.text,
                    "stem_key": entry.stem_key,
                    "status": entry.status,
                    "origin": entry.origin,
                    "provenance": entry.provenance,
                    "classifier_score": entry.classifier_score,
                    "actor": actor,
                    "at": now,
                }
            )
            return entry, warnings

    def set_status(self, entry_id: int, new_status: str, actor: str) -> CorpusEntry:
        if new_status not in STATUSES:
            raise ValueError(f"unknown status {new_status!r}")
        with self._lock:
            entry = self.get(entry_id)
            if (entry.status, new_status) not in ALLOWED_TRANSITIONS:
                raise IllegalTransitionError(
                    f"illegal transition {entry.status}->{new_status} for entry {entry_id}"
                )
            now = self._clock()
            entry.status = new_status
            entry.updated_at = now
            entry.history.append(
                HistoryRecord(at=now, actor=actor, action="status", to_status=new_status)
            )
            self._append(
                {"kind": "status", "id": entry_id, "to_status": new_status, "actor": actor, "at": now}
            )
            return entry

    def edit_text(self, entry_id: int, new_text: str, actor: str) -> CorpusEntry:
        cleaned = new_text.strip()
        if not cleaned:
            raise ValueError("entry text is empty")
        with self._lock:
            entry = self.get(entry_id)
            now = self._clock()
            entry.text = cleaned
            entry.stem_key = key_of(cleaned, self._table)
            entry.updated_at = now
            entry.history.append(
                HistoryRecord(at=now, actor=actor, action="edit", text=cleaned)
            )
            self._index.add(entry.id, entry.text)
            self._append(
                {
                    "kind": "edit",
                    "id": entry_id,
                    "text": cleaned,
                    "stem_key": entry.stem_key,
                    "actor": actor,
                    "at": now,
                }
            )
            return entry

    def import_seed(
        self, lines: Iterable[str], source_name: str, actor: str = "import"
    ) -> SeedImportReport:
        """Add phrases as approved seed entries; count mined-key overlaps."""
        added = 0
        overlap = 0
        with self._lock:
            for raw in lines:
                phrase = raw.strip()
                if not phrase:
                    continue
                stem_key = key_of(phrase, self._table)
                collides = any(
                    e.origin == MINED and e.stem_key == stem_key
                    for e in self._entries.values()
                )
                if collides:
                    overlap += 1
                self.add_entry(
                    phrase,
                    origin=SEED,
                    provenance={"seed_source": source_name},
                    actor=actor,
                    status=APPROVED,
                )
                added += 1
        return SeedImportReport(source_name=source_name, added=added, overlap=overlap)
