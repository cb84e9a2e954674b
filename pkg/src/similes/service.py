"""HTTP curation API over the corpus store.

Public callers can browse approved entries, search by stem similarity, and
submit new similes (rate limited per client address). Everything else --
non-approved listings, the pending queue, approve/reject/edit -- requires a
curator session token obtained by POST /login with the configured password.

Configuration precedence: environment variables (SIMILES_*) override the
JSON config file, which overrides built-in defaults.
"""

from __future__ import annotations

import json
import os
import secrets
import time
from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping

from fastapi import Depends, FastAPI, Header, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .dedup import DEFAULT_SIMILARITY_THRESHOLD
from .store import (
    APPROVED,
    CorpusEntry,
    CorpusStore,
    IllegalTransitionError,
    MANUAL,
    PENDING,
    REJECTED,
    UnknownEntryError,
)

DEFAULT_SEARCH_THRESHOLD = 0.2


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8337
    store_path: str = "similes-store.jsonl"
    curator_password: str = "kurator"
    rate_limit_per_minute: int = 30
    dedup_threshold: float = DEFAULT_SIMILARITY_THRESHOLD
    search_threshold: float = DEFAULT_SEARCH_THRESHOLD
    token_ttl_seconds: int = 8 * 3600


_FILE_KEYS = {
    "host": str,
    "port": int,
    "store_path": str,
    "curator_password": str,
    "rate_limit_per_minute": int,
    "dedup_threshold": float,
    "search_threshold": float,
    "token_ttl_seconds": int,
}

_ENV_KEYS = {
    "SIMILES_HOST": ("host", str),
    "SIMILES_PORT": ("port", int),
    "SIMILES_STORE": ("store_path", str),
    "SIMILES_PASSWORD": ("curator_password", str),
    "SIMILES_RATE_LIMIT": ("rate_limit_per_minute", int),
    "SIMILES_DEDUP_THRESHOLD": ("dedup_threshold", float),
    "SIMILES_SEARCH_THRESHOLD": ("search_threshold", float),
    "SIMILES_TOKEN_TTL": ("token_ttl_seconds", int),
}


def load_service_config(
    config_path: str | Path | None = None,
    env: Mapping[str, str] | None = None,
) -> ServiceConfig:
    """Defaults, overridden by the JSON file, overridden by SIMILES_* vars."""
    config = ServiceConfig()
    if config_path is not None:
        raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise ValueError(f"{config_path}: config must be a JSON object")
        unknown = set(raw) - set(_FILE_KEYS)
        if unknown:
            raise ValueError(f"{config_path}: unknown config keys {sorted(unknown)}")
        config = replace(config, **{k: _FILE_KEYS[k](v) for k, v in raw.items()})
    environment = env if env is not None else os.environ
    overrides = {}
    for var, (key, cast) in _ENV_KEYS.items():
        if var in environment:
            overrides[key] = cast(environment[var])
    return replace(config, **overrides)


class _RateLimiter:
    """Sliding one-minute window per client address; 0 disables the limit."""

    def __init__(self, per_minute: int, clock=time.time):
        self.per_minute = per_minute
        self.clock = clock
        self._hits: dict[str, deque[float]] = {}

    def allow(self, client: str) -> bool:
        if self.per_minute <= 0:
            return True
        now = self.clock()
        window = self._hits.setdefault(client, deque())
        while window and now - window[0] >= 60.0:
            window.popleft()
        if len(window) >= self.per_minute:
            return False
        window.append(now)
        return True


class AddSimileBody(BaseModel):
    text: str
    note: str | None = None


class EditSimileBody(BaseModel):
    text: str


class LoginBody(BaseModel):
    password: str


def entry_payload(entry: CorpusEntry) -> dict:
    return entry.to_public_dict()


def create_app(store: CorpusStore, config: ServiceConfig | None = None) -> FastAPI:
    cfg = config if config is not None else ServiceConfig()
    app = FastAPI(title="similes curation service")
    # the browser client may be served from a different origin than the API
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST", "PUT"],
        allow_headers=["Authorization", "Content-Type"],
    )
    sessions: dict[str, float] = {}
    limiter = _RateLimiter(cfg.rate_limit_per_minute)
    app.state.store = store
    app.state.config = cfg

    def curator_token(authorization: str | None = Header(default=None)) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="curator token required")
        token = authorization.removeprefix("Bearer ")
        expiry = sessions.get(token)
        if expiry is None or expiry < time.time():
            sessions.pop(token, None)
            raise HTTPException(status_code=401, detail="invalid or expired token")
        return token

    def maybe_token(authorization: str | None = Header(default=None)) -> bool:
        if not authorization or not authorization.startswith("Bearer "):
            return False
        token = authorization.removeprefix("Bearer ")
        expiry = sessions.get(token)
        return expiry is not None and expiry >= time.time()

    @app.post("/login")
    def login(body: LoginBody):
        if not secrets.compare_digest(body.password, cfg.curator_password):
            raise HTTPException(status_code=401, detail="wrong password")
        token = secrets.token_hex(16)
        expires_at = time.time() + cfg.token_ttl_seconds
        sessions[token] = expires_at
        return {"token": token, "expires_at": expires_at}

    @app.get("/similes")
    def list_similes(
        status: str | None = None,
        origin: str | None = None,
        prefix: str | None = None,
        page: int = 1,
        page_size: int = 50,
        authorized: bool = Depends(maybe_token),
    ):
        wanted = status if status is not None else APPROVED
        if wanted != APPROVED and not authorized:
            raise HTTPException(status_code=401, detail="curator token required")
        try:
            result = store.list_entries(
                status=wanted, origin=origin, prefix=prefix, page=page, page_size=page_size
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "items": [entry_payload(e) for e in result.items],
            "page": result.page,
            "page_size": result.page_size,
            "total": result.total,
        }

    @app.get("/similes/search")
    def search(q: str = ""):
        if not q.strip():
            raise HTTPException(status_code=400, detail="empty query")
        matches = store.find_similar(q, threshold=cfg.search_threshold, status=APPROVED)
        return {
            "query": q,
            "results": [
                {"entry": entry_payload(e), "similarity": sim} for e, sim in matches
            ],
        }

    @app.post("/similes", status_code=201)
    def add_simile(body: AddSimileBody, request: Request):
        client = request.client.host if request.client else "unknown"
        if not limiter.allow(client):
            raise HTTPException(status_code=429, detail="rate limit exceeded")
        if not body.text.strip():
            raise HTTPException(status_code=400, detail="empty text")
        provenance = {"note": body.note} if body.note else {}
        entry, warnings = store.add_entry(
            body.text,
            origin=MANUAL,
            provenance=provenance,
            actor=f"contributor:{client}",
        )
        return {
            "entry_id": entry.id,
            "entry": entry_payload(entry),
            "similar": [
                {"entry": entry_payload(e), "similarity": sim} for e, sim in warnings
            ],
        }

    @app.post("/similes/{entry_id}/approve")
    def approve(entry_id: int, token: str = Depends(curator_token)):
        return _transition(entry_id, APPROVED)

    @app.post("/similes/{entry_id}/reject")
    def reject(entry_id: int, token: str = Depends(curator_token)):
        return _transition(entry_id, REJECTED)

    @app.post("/similes/{entry_id}/reopen")
    def reopen(entry_id: int, token: str = Depends(curator_token)):
        return _transition(entry_id, PENDING)

    def _transition(entry_id: int, new_status: str) -> dict:
        try:
            entry = store.set_status(entry_id, new_status, actor="curator")
        except UnknownEntryError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except IllegalTransitionError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        return {"entry": entry_payload(entry)}

    @app.put("/similes/{entry_id}")
    def edit(entry_id: int, body: EditSimileBody, token: str = Depends(curator_token)):
        if not body.text.strip():
            raise HTTPException(status_code=400, detail="empty text")
        try:
            entry = store.edit_text(entry_id, body.text, actor="curator")
        except UnknownEntryError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return {"entry": entry_payload(entry)}

    @app.get("/pending")
    def pending(token: str = Depends(curator_token)):
        queue = store.pending_queue()
        return {"items": [entry_payload(e) for e in queue], "total": len(queue)}

    @app.get("/stats")
    def stats():
        s = store.stats()
        return {
            "total": s.total,
            "by_status": s.by_status,
            "by_origin": s.by_origin,
            "approved": s.approved,
            "seed_mined_overlap": s.seed_mined_overlap,
        }

    return app
