"""Persistent capture index: one JSON file, atomically rewritten.

Every write lands via write-new-then-rename with fsync, so a crash
leaves either the old or the new index, never a torn one. Reads serve
from memory; the file is the recovery source.
"""

import json
import os
import threading
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

STATUSES = ("received", "parsing", "analyzing", "complete", "failed")
_ORDER = {"received": 0, "parsing": 1, "analyzing": 2, "complete": 3, "failed": 3}
_TERMINAL = {"complete", "failed"}


class CorruptIndex(Exception):
    """The index file exists but cannot be read; refuse to serve."""


class InvalidTransition(Exception):
    pass


@dataclass
class ArchiveEntry:
    capture_id: str
    original_name: str
    uploaded_at: str  # ISO-8601 UTC
    pcap_bytes: int
    status: str = "received"
    packet_count: Optional[int] = None
    failure_reason: Optional[str] = None
    truncated: bool = False
    sha256: Optional[str] = None
    # transition log: [{"status": ..., "at": ...}, ...], never revisits
    history: list = field(default_factory=list)

    def to_api_dict(self) -> dict:
        return {
            "capture_id": self.capture_id,
            "original_name": self.original_name,
            "uploaded_at": self.uploaded_at,
            "pcap_bytes": self.pcap_bytes,
            "packet_count": self.packet_count,
            "status": self.status,
            "failure_reason": self.failure_reason,
            "truncated": self.truncated,
        }


class CaptureIndex:
    """In-memory map of capture_id -> ArchiveEntry backed by one file."""

    def __init__(self, path: Path):
        self._path = Path(path)
        self._lock = threading.RLock()
        self._entries: dict = {}
        if self._path.exists():
            self._load()

    def _load(self):
        try:
            doc = json.loads(self._path.read_text())
            entries = doc["entries"]
            for capture_id, raw in entries.items():
                entry = ArchiveEntry(**raw)
                if entry.status not in STATUSES:
                    raise ValueError(f"bad status {entry.status!r}")
                self._entries[capture_id] = entry
        except (ValueError, KeyError, TypeError, OSError) as e:
            raise CorruptIndex(f"cannot read index {self._path}: {e}") from e

    def _persist_locked(self):
        doc = {
            "version": 1,
            "entries": {cid: asdict(e) for cid, e in self._entries.items()},
        }
        tmp = self._path.with_name(self._path.name + ".tmp")
        with open(tmp, "w") as f:
            json.dump(doc, f)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, self._path)
        dir_fd = os.open(self._path.parent, os.O_RDONLY)
        try:
            os.fsync(dir_fd)
        finally:
            os.close(dir_fd)

    def put(self, entry: ArchiveEntry):
        with self._lock:
            if not entry.history:
                entry.history.append({"status": entry.status, "at": entry.uploaded_at})
            self._entries[entry.capture_id] = entry
            self._persist_locked()

    def get(self, capture_id: str) -> Optional[ArchiveEntry]:
        with self._lock:
            return self._entries.get(capture_id)

    def scan(self) -> List[ArchiveEntry]:
        """All entries, newest upload first; ties broken by capture_id."""
        with self._lock:
            entries = sorted(self._entries.values(), key=lambda e: e.capture_id)
            entries.sort(key=lambda e: e.uploaded_at, reverse=True)
            return entries

    def advance(self, capture_id: str, status: str, at: str, **fields):
        """Move an entry forward and record extra fields.

        Replays of already-passed stages (crash recovery re-runs the
        pipeline from the top) are no-ops for the status while still
        applying the fields. Leaving a terminal state raises.
        """
        with self._lock:
            entry = self._entries[capture_id]
            if status != entry.status:
                if entry.status in _TERMINAL:
                    raise InvalidTransition(
                        f"{capture_id}: {entry.status} -> {status}"
                    )
                if status == "failed" or _ORDER[status] > _ORDER[entry.status]:
                    entry.status = status
                    entry.history.append({"status": status, "at": at})
                # lower-order statuses: replay of a finished stage, keep state
            for name, value in fields.items():
                setattr(entry, name, value)
            self._persist_locked()
