"""Persistent orbit cache: append-only, line-oriented, human-inspectable.

File layout: one JSON object per line.  The first line is the header

    {"format": "collatz-cache", "version": 1}

and every following line is a record

    {"x": "<decimal>", "steps": <int>, "max": "<decimal>"}

keyed by the starting value, storing the step count to 1 and the maximum
excursion of the full trajectory.  Arbitrary-precision integers travel as
decimal strings so no consumer ever rounds them through a float.

The file only ever grows.  Re-storing an identical record is a no-op;
a record that disagrees with what the cache already holds is an integrity
error (a cache must never contain two answers for one key).  Concurrent
readers are fine; writes are serialized through the owning instance.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import CacheError

__all__ = ["CacheEntry", "OrbitCache", "HEADER"]

HEADER = {"format": "collatz-cache", "version": 1}


@dataclass(frozen=True)
class CacheEntry:
    steps: int
    max_excursion: int


def _parse_decimal(value: object, what: str, lineno: int, path: Path) -> int:
    if not isinstance(value, str) or not value.isdigit():
        raise CacheError(f"{path}: line {lineno}: {what} must be a decimal string, got {value!r}")
    return int(value)


class OrbitCache:
    """Orbit summaries keyed by starting value, mirrored to a file.

    Opening a missing path creates a fresh cache (header only).  Opening an
    existing file loads and validates every line; any malformed line or
    internal conflict raises CacheError naming the offending line.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[int, CacheEntry] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.created = not self.path.exists()
        if self.created:
            self.path.write_text(json.dumps(HEADER) + "\n")
        else:
            self._load()

    def __len__(self) -> int:
        return len(self._entries)

    def _load(self) -> None:
        with open(self.path, encoding="ascii") as fh:
            lines = fh.read().splitlines()
        if not lines:
            raise CacheError(f"{self.path}: line 1: missing header")
        try:
            head = json.loads(lines[0])
        except json.JSONDecodeError as exc:
            raise CacheError(f"{self.path}: line 1: unreadable header: {exc}") from exc
        if head != HEADER:
            raise CacheError(f"{self.path}: line 1: unexpected header {head!r}")
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                raise CacheError(f"{self.path}: line {lineno}: blank line in record section")
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CacheError(f"{self.path}: line {lineno}: unreadable record: {exc}") from exc
            if not isinstance(rec, dict) or set(rec) != {"x", "steps", "max"}:
                raise CacheError(f"{self.path}: line {lineno}: record must have keys x, steps, max")
            x = _parse_decimal(rec["x"], "x", lineno, self.path)
            if not isinstance(rec["steps"], int) or isinstance(rec["steps"], bool) or rec["steps"] < 0:
                raise CacheError(f"{self.path}: line {lineno}: steps must be a nonnegative integer")
            mx = _parse_decimal(rec["max"], "max", lineno, self.path)
            entry = CacheEntry(steps=rec["steps"], max_excursion=mx)
            known = self._entries.get(x)
            if known is not None and known != entry:
                raise CacheError(
                    f"{self.path}: line {lineno}: conflicting record for x={x}: "
                    f"{known} vs {entry}"
                )
            self._entries[x] = entry

    def lookup(self, x: int) -> CacheEntry | None:
        entry = self._entries.get(x)
        if entry is None:
            self.misses += 1
        else:
            self.hits += 1
        return entry

    def store(self, x: int, steps: int, max_excursion: int) -> CacheEntry:
        """Record one orbit summary; idempotent, conflict-checked."""
        return self.store_many([(x, steps, max_excursion)])[0]

    def store_many(self, items: Iterable[tuple[int, int, int]]) -> list[CacheEntry]:
        """Batch store with a single file append."""
        out: list[CacheEntry] = []
        new_lines: list[str] = []
        with self._lock:
            for x, steps, max_excursion in items:
                entry = CacheEntry(steps=steps, max_excursion=max_excursion)
                known = self._entries.get(x)
                if known is not None:
                    if known != entry:
                        raise CacheError(
                            f"{self.path}: conflicting store for x={x}: "
                            f"cached {known}, offered {entry}"
                        )
                    out.append(known)
                    continue
                new_lines.append(json.dumps(
                    {"x": str(x), "steps": steps, "max": str(max_excursion)}
                ))
                self._entries[x] = entry
                out.append(entry)
            if new_lines:
                with open(self.path, "a", encoding="ascii") as fh:
                    fh.write("\n".join(new_lines) + "\n")
        return out
