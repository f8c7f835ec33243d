"""Embedded append-only persistence.

One log file per record family under the data directory.  Every record line
carries a CRC32 checksum; replay on open rebuilds the in-memory index.  A
torn final line (crash mid-append) is truncated with a warning; any other
undecodable or checksum-failing line raises ``StoreCorruptionError``.

Concurrency: a single serialized writer per family (module-level lock),
many concurrent readers; scans copy under the lock (snapshot reads).
"""

from __future__ import annotations

import json
import logging
import os
import threading
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterator

from eatcoach.errors import StoreCorruptionError, ValidationError

logger = logging.getLogger(__name__)

Key = tuple[str, ...]

FAMILIES = (
    "users",
    "tokens",
    "food_entries",
    "water_entries",
    "turn_refs",
    "turn_cache",
    "goals",
    "dialog_states",
    "nlu_examples",
    "prompts",
    "popularity",
)


@dataclass
class UserProfile:
    """Account record; the timezone offset drives all user-local bucketing."""

    user_id: str
    display_name: str
    tz_offset_minutes: int
    created_at: str

    def __post_init__(self) -> None:
        if not (-720 <= self.tz_offset_minutes <= 840):
            raise ValidationError(
                f"timezone offset must be within [-720, 840] minutes, got {self.tz_offset_minutes}"
            )
        if not self.display_name:
            raise ValidationError("display_name must be non-empty")

    def to_dict(self) -> dict[str, Any]:
        return {
            "user_id": self.user_id,
            "display_name": self.display_name,
            "tz_offset_minutes": self.tz_offset_minutes,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "UserProfile":
        return cls(
            user_id=d["user_id"],
            display_name=d["display_name"],
            tz_offset_minutes=int(d["tz_offset_minutes"]),
            created_at=d["created_at"],
        )


def _checksum(key: list[str], value: Any) -> int:
    payload = json.dumps([key, value], sort_keys=True, separators=(",", ":"))
    return zlib.crc32(payload.encode("utf-8"))


class _Family:
    def __init__(self, path: Path):
        self.path = path
        self.lock = threading.RLock()
        self.records: dict[Key, Any] = {}
        self._fh = None

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


class Store:
    """Durable key-value store keyed by string tuples, ordered scans."""

    def __init__(self, data_dir: str | os.PathLike, fsync: bool = False):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.fsync = fsync
        self._families: dict[str, _Family] = {}
        self._open_lock = threading.Lock()

    # -- lifecycle ---------------------------------------------------------

    def _family(self, name: str) -> _Family:
        fam = self._families.get(name)
        if fam is not None:
            return fam
        with self._open_lock:
            fam = self._families.get(name)
            if fam is None:
                fam = _Family(self.data_dir / f"{name}.log")
                self._replay(fam)
                self._families[name] = fam
        return fam

    def _replay(self, fam: _Family) -> None:
        if not fam.path.exists():
            return
        raw = fam.path.read_bytes()
        if not raw:
            return
        chunks = raw.split(b"\n")
        complete, trailing = chunks[:-1], chunks[-1]
        offset = 0
        for line in complete:
            if line:
                try:
                    rec = json.loads(line.decode("utf-8"))
                    key = tuple(str(k) for k in rec["k"])
                    value = rec.get("v")
                    expected = rec["c"]
                except Exception:
                    raise StoreCorruptionError(
                        f"{fam.path.name}: undecodable record at byte {offset}"
                    ) from None
                if expected != _checksum(list(key), value):
                    raise StoreCorruptionError(
                        f"{fam.path.name}: checksum mismatch at byte {offset}"
                    )
                if value is None:
                    fam.records.pop(key, None)
                else:
                    fam.records[key] = value
            offset += len(line) + 1
        if trailing:
            # A committed append always ends with a newline, so a trailing
            # chunk is a torn (uncommitted) write: drop it.
            logger.warning(
                "%s: dropping torn record at byte %d", fam.path.name, offset
            )
            with open(fam.path, "r+b") as fh:
                fh.truncate(offset)

    def close(self) -> None:
        for fam in self._families.values():
            with fam.lock:
                fam.close()

    # -- record operations -------------------------------------------------

    def _append(self, fam: _Family, key: Key, value: Any) -> None:
        rec = {"k": list(key), "v": value, "c": _checksum(list(key), value)}
        line = json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n"
        if fam._fh is None:
            fam._fh = open(fam.path, "a", encoding="utf-8")
        fam._fh.write(line)
        fam._fh.flush()
        if self.fsync:
            os.fsync(fam._fh.fileno())

    def put(self, family: str, key: Key, value: dict[str, Any]) -> None:
        fam = self._family(family)
        with fam.lock:
            self._append(fam, key, value)
            fam.records[key] = value

    def get(self, family: str, key: Key) -> dict[str, Any] | None:
        fam = self._family(family)
        with fam.lock:
            return fam.records.get(key)

    def delete(self, family: str, key: Key) -> bool:
        fam = self._family(family)
        with fam.lock:
            if key not in fam.records:
                return False
            self._append(fam, key, None)
            del fam.records[key]
            return True

    def scan(self, family: str, prefix: Key = ()) -> list[tuple[Key, dict[str, Any]]]:
        """Records whose key starts with ``prefix``, in key order."""
        fam = self._family(family)
        with fam.lock:
            items = [
                (k, v)
                for k, v in fam.records.items()
                if k[: len(prefix)] == prefix
            ]
        items.sort(key=lambda kv: kv[0])
        return items

    def count(self, family: str, prefix: Key = ()) -> int:
        return len(self.scan(family, prefix))

    def lock(self, family: str) -> threading.RLock:
        """Per-family writer lock for check-then-write sequences."""
        return self._family(family).lock

    def mutate(self, family: str, fn: Callable[[], Any]) -> Any:
        """Run ``fn`` under the family writer lock (atomic read-modify-write)."""
        with self.lock(family):
            return fn()

    # -- export ------------------------------------------------------------

    def export_records(self, family: str) -> Iterator[str]:
        for key, value in self.scan(family):
            yield json.dumps({"k": list(key), "v": value}, sort_keys=True)
