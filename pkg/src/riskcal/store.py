"""File-backed session persistence.

Each session gets an append-only JSON-lines event log (`<id>.log`) plus a
latest-envelope snapshot (`<id>.json`). The log is the source of truth:
sessions are deterministic given their seed and answers, so replaying the
log reconstructs the exact state. Snapshots are written with a
write-then-rename so a crash mid-write leaves a recoverable store.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Iterator, Optional

from .elicitation import SessionState


class StoreError(RuntimeError):
    """A storage operation failed; the message names the offending path."""


class UnknownSessionError(KeyError):
    """No session with the requested id exists in the store."""


def envelope_from_state(state: SessionState) -> dict:
    """Serializable snapshot of a session's externally visible state."""
    answers = list(state.answers)
    updated_at = answers[-1]["timestamp"] if answers else state.created_at
    envelope = {
        "session_id": state.session_id,
        "protocol": state.protocol,
        "adaptive": state.adaptive,
        "seed": state.seed,
        "budget": state.budget,
        "created_at": state.created_at,
        "updated_at": updated_at,
        "status": state.status,
        "asked": state.asked_question_ids(),
        "answers": answers,
        "results": state.results() if state.status == "complete" else None,
    }
    if state.protocol == "MPL":
        envelope["bracket"] = list(state.bracket)
    return envelope


class SessionStore:
    """Flat-file store of elicitation sessions with per-session locking."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreError(f"cannot create store directory {self.root}: {exc}") from exc
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- locking -------------------------------------------------------------

    def lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    # -- paths ---------------------------------------------------------------

    def _log_path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.log"

    def _snapshot_path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    # -- writes --------------------------------------------------------------

    def create(self, state: SessionState) -> dict:
        event = {
            "type": "created",
            "session_id": state.session_id,
            "protocol": state.protocol,
            "adaptive": state.adaptive,
            "seed": state.seed,
            "budget": state.budget,
            "created_at": state.created_at,
        }
        self._append_event(state.session_id, event)
        return self.save(state)

    def record_answer(self, state: SessionState, question_id: str, chosen: str, timestamp: str) -> dict:
        event = {
            "type": "answered",
            "question_id": question_id,
            "chosen": chosen,
            "timestamp": timestamp,
        }
        self._append_event(state.session_id, event)
        return self.save(state)

    def save(self, state: SessionState) -> dict:
        envelope = envelope_from_state(state)
        self._write_snapshot(state.session_id, envelope)
        return envelope

    def _append_event(self, session_id: str, event: dict) -> None:
        path = self._log_path(session_id)
        try:
            with open(path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(event, sort_keys=True) + "\n")
                handle.flush()
                os.fsync(handle.fileno())
        except OSError as exc:
            raise StoreError(f"cannot append to session log {path}: {exc}") from exc

    def _write_snapshot(self, session_id: str, envelope: dict) -> None:
        path = self._snapshot_path(session_id)
        tmp = path.with_suffix(".json.tmp")
        try:
            with open(tmp, "w", encoding="utf-8") as handle:
                json.dump(envelope, handle, sort_keys=True)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, path)
        except OSError as exc:
            raise StoreError(f"cannot write snapshot {path}: {exc}") from exc

    # -- reads ---------------------------------------------------------------

    def events(self, session_id: str) -> list[dict]:
        path = self._log_path(session_id)
        if not path.exists():
            raise UnknownSessionError(session_id)
        events = []
        try:
            with open(path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if line:
                        events.append(json.loads(line))
        except OSError as exc:
            raise StoreError(f"cannot read session log {path}: {exc}") from exc
        return events

    def replay(self, session_id: str) -> SessionState:
        """Rebuild the session state by replaying its event log."""
        events = self.events(session_id)
        if not events or events[0].get("type") != "created":
            raise StoreError(f"session log for {session_id} lacks a creation event")
        created = events[0]
        state = SessionState(
            protocol=created["protocol"],
            session_id=created["session_id"],
            seed=created["seed"],
            budget=created["budget"],
            adaptive=created["adaptive"],
            created_at=created["created_at"],
        )
        for event in events[1:]:
            if event.get("type") == "answered":
                state.answer(event["question_id"], event["chosen"], event["timestamp"])
        return state

    def load_state(self, session_id: str) -> SessionState:
        return self.replay(session_id)

    def load_envelope(self, session_id: str) -> dict:
        """Latest envelope; falls back to log replay on a damaged snapshot."""
        path = self._snapshot_path(session_id)
        if path.exists():
            try:
                with open(path, encoding="utf-8") as handle:
                    return json.load(handle)
            except (json.JSONDecodeError, OSError):
                pass  # fall through to log replay
        state = self.replay(session_id)
        envelope = envelope_from_state(state)
        self._write_snapshot(session_id, envelope)
        return envelope

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.log"))

    def __iter__(self) -> Iterator[dict]:
        for session_id in self.list_ids():
            yield self.load_envelope(session_id)
