"""Durable transactional record store.

Layout: an append-only journal of committed batches plus an optional
snapshot per keyspace, described by a MANIFEST file so a store is
self-describing. Each journal entry is length-prefixed and checksummed;
recovery replays whole entries and discards a torn tail, so a crash can
lose at most the batch that never finished committing, never half of one.
"""

from __future__ import annotations

import copy
import fcntl
import hashlib
import json
import os
import struct
import threading
import zlib
from pathlib import Path
from typing import Iterable, Optional, Union

from .blobs import HASH_ALGORITHM, BlobRef, BlobStore
from .errors import (
    CorruptManifest,
    GuardFailed,
    LockedByAnotherProcess,
    StorageFull,
)

KEYSPACES = (
    "resources",
    "revisions",
    "glossary",
    "taxonomy",
    "principals",
    "sessions",
    "attachments",
)

FORMAT_VERSION = 1
_ENTRY_HEADER = struct.Struct(">I")  # payload length
_ENTRY_TRAILER = struct.Struct(">I")  # crc32 of payload
_MAX_ENTRY_BYTES = 256 * 1024 * 1024


def canonical_json(value) -> bytes:
    """Stable byte encoding used for hashing and journal entries."""
    return json.dumps(
        value, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def value_hash(value) -> str:
    """Content hash of a record value; the token compare-and-set guards use."""
    return hashlib.sha256(canonical_json(value)).hexdigest()


class TxnBatch:
    """Ordered put/delete mutations plus compare-and-set guards.

    Guards name the hash the current value must have (or ``None`` for
    "must be absent") and are all checked before any mutation applies.
    """

    def __init__(self):
        self.mutations: list[tuple] = []
        self.guards: list[tuple[str, str, Optional[str]]] = []

    def put(self, keyspace: str, key: str, value: dict) -> "TxnBatch":
        _check_keyspace(keyspace)
        if not isinstance(value, dict):
            raise TypeError("record values must be dicts")
        sv = value.get("schema_version")
        if not isinstance(sv, int) or sv < 1:
            raise ValueError("record values must carry schema_version >= 1")
        self.mutations.append(("put", keyspace, key, copy.deepcopy(value)))
        return self

    def delete(self, keyspace: str, key: str) -> "TxnBatch":
        _check_keyspace(keyspace)
        self.mutations.append(("del", keyspace, key))
        return self

    def guard(self, keyspace: str, key: str, expected: Optional[str]) -> "TxnBatch":
        """Require the stored value's hash to equal ``expected`` (None = absent)."""
        _check_keyspace(keyspace)
        self.guards.append((keyspace, key, expected))
        return self

    def guard_value(self, keyspace: str, key: str, prior: Optional[dict]) -> "TxnBatch":
        return self.guard(keyspace, key, None if prior is None else value_hash(prior))

    def __len__(self) -> int:
        return len(self.mutations)


def _check_keyspace(keyspace: str) -> None:
    if keyspace not in KEYSPACES:
        raise ValueError(f"unknown keyspace {keyspace!r}")


def _encode_entry(seq: int, mutations: list[tuple]) -> bytes:
    payload = canonical_json({"seq": seq, "ops": mutations})
    return (
        _ENTRY_HEADER.pack(len(payload))
        + payload
        + _ENTRY_TRAILER.pack(zlib.crc32(payload))
    )


def iter_journal_entries(raw: bytes):
    """Yield (end_offset, seq, ops) for each intact entry; stop at the first torn one."""
    pos = 0
    last_seq = None
    while True:
        if pos + _ENTRY_HEADER.size > len(raw):
            return
        (length,) = _ENTRY_HEADER.unpack_from(raw, pos)
        if length > _MAX_ENTRY_BYTES:
            return
        end = pos + _ENTRY_HEADER.size + length + _ENTRY_TRAILER.size
        if end > len(raw):
            return
        payload = raw[pos + _ENTRY_HEADER.size : pos + _ENTRY_HEADER.size + length]
        (crc,) = _ENTRY_TRAILER.unpack_from(raw, pos + _ENTRY_HEADER.size + length)
        if zlib.crc32(payload) != crc:
            return
        try:
            entry = json.loads(payload.decode("utf-8"))
            seq = entry["seq"]
            ops = entry["ops"]
        except (ValueError, KeyError, UnicodeDecodeError):
            return
        if last_seq is not None and seq <= last_seq:
            return
        last_seq = seq
        yield end, seq, ops
        pos = end


class Store:
    """Open record store; one writer process, many in-process readers."""

    def __init__(self, data_dir: Union[str, Path], fsync: bool = True):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._fsync = fsync
        self._lock = threading.RLock()
        self._state: dict[str, dict[str, dict]] = {ks: {} for ks in KEYSPACES}
        self._lock_fh = None
        self._journal_fh = None
        self._seq = 0
        self.blobs = BlobStore(self.data_dir / "blobs")
        self._acquire_lock()
        try:
            self._recover()
        except Exception:
            self._release_lock()
            raise

    # -- lifecycle ---------------------------------------------------------

    def _acquire_lock(self) -> None:
        lock_path = self.data_dir / "LOCK"
        fh = open(lock_path, "a+")
        try:
            fcntl.flock(fh.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            fh.close()
            raise LockedByAnotherProcess(f"{self.data_dir} is locked") from None
        self._lock_fh = fh

    def _release_lock(self) -> None:
        if self._lock_fh is not None:
            fcntl.flock(self._lock_fh.fileno(), fcntl.LOCK_UN)
            self._lock_fh.close()
            self._lock_fh = None

    def _manifest_path(self) -> Path:
        return self.data_dir / "MANIFEST"

    def _journal_path(self) -> Path:
        return self.data_dir / "journal.log"

    def _read_manifest(self) -> dict:
        path = self._manifest_path()
        if not path.exists():
            manifest = {
                "format_version": FORMAT_VERSION,
                "hash_algorithm": HASH_ALGORITHM,
                "snapshot_seq": 0,
                "snapshots": {},
            }
            self._write_manifest(manifest)
            return manifest
        try:
            manifest = json.loads(path.read_text("utf-8"))
            if manifest["format_version"] != FORMAT_VERSION:
                raise CorruptManifest(
                    f"unsupported format_version {manifest['format_version']}"
                )
            if manifest["hash_algorithm"] != HASH_ALGORITHM:
                raise CorruptManifest(
                    f"unsupported hash algorithm {manifest['hash_algorithm']}"
                )
            manifest["snapshots"]
            manifest["snapshot_seq"]
        except CorruptManifest:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            raise CorruptManifest(f"unreadable manifest: {exc}") from exc
        return manifest

    def _write_manifest(self, manifest: dict) -> None:
        path = self._manifest_path()
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(canonical_json(manifest))
        os.replace(tmp, path)

    def _recover(self) -> None:
        manifest = self._read_manifest()
        self._seq = manifest["snapshot_seq"]
        for ks, rel in manifest["snapshots"].items():
            _check_keyspace(ks)
            snap_path = self.data_dir / rel
            try:
                self._state[ks] = json.loads(snap_path.read_text("utf-8"))
            except (OSError, ValueError) as exc:
                raise CorruptManifest(f"unreadable snapshot {rel}: {exc}") from exc
        jpath = self._journal_path()
        valid_end = 0
        if jpath.exists():
            raw = jpath.read_bytes()
            for end, seq, ops in iter_journal_entries(raw):
                valid_end = end
                if seq <= manifest["snapshot_seq"]:
                    continue
                self._apply(ops)
                self._seq = seq
            if valid_end < len(raw):
                # Drop the torn tail so future appends start on a clean boundary.
                with open(jpath, "r+b") as fh:
                    fh.truncate(valid_end)
        self._journal_fh = open(jpath, "ab")

    def close(self) -> None:
        with self._lock:
            if self._journal_fh is not None:
                self._journal_fh.close()
                self._journal_fh = None
            self._release_lock()

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- transactions ------------------------------------------------------

    def _apply(self, ops: Iterable[tuple]) -> None:
        for op in ops:
            if op[0] == "put":
                _, ks, key, value = op
                self._state[ks][key] = value
            elif op[0] == "del":
                _, ks, key = op
                self._state[ks].pop(key, None)
            else:
                raise CorruptManifest(f"unknown journal op {op[0]!r}")

    def txn_execute(self, batch: TxnBatch) -> None:
        """Apply the batch atomically; durable before return."""
        if self._journal_fh is None:
            raise RuntimeError("store is closed")
        with self._lock:
            for ks, key, expected in batch.guards:
                current = self._state[ks].get(key)
                actual = None if current is None else value_hash(current)
                if actual != expected:
                    raise GuardFailed(ks, key)
            if not batch.mutations:
                return
            entry = _encode_entry(self._seq + 1, batch.mutations)
            start = self._journal_fh.tell()
            try:
                self._journal_fh.write(entry)
                self._journal_fh.flush()
                if self._fsync:
                    os.fsync(self._journal_fh.fileno())
            except OSError as exc:
                try:
                    self._journal_fh.truncate(start)
                    self._journal_fh.seek(start)
                except OSError:
                    pass
                if exc.errno == 28:  # ENOSPC
                    raise StorageFull(str(exc)) from exc
                raise
            self._seq += 1
            self._apply(batch.mutations)

    # -- reads -------------------------------------------------------------

    def get_record(self, keyspace: str, key: str) -> Optional[dict]:
        _check_keyspace(keyspace)
        with self._lock:
            value = self._state[keyspace].get(key)
            return copy.deepcopy(value)

    def query_records(self, keyspace: str, key_prefix: str = "") -> list[tuple[str, dict]]:
        """Committed records whose key starts with the prefix, key-ordered."""
        _check_keyspace(keyspace)
        with self._lock:
            keys = sorted(k for k in self._state[keyspace] if k.startswith(key_prefix))
            return [(k, copy.deepcopy(self._state[keyspace][k])) for k in keys]

    def count_records(self, keyspace: str) -> int:
        _check_keyspace(keyspace)
        with self._lock:
            return len(self._state[keyspace])

    # -- blobs -------------------------------------------------------------

    def store_blob(self, data: bytes) -> BlobRef:
        return self.blobs.store(data)

    def fetch_blob(self, ref: BlobRef) -> bytes:
        return self.blobs.fetch(ref)

    # -- maintenance -------------------------------------------------------

    def compact(self) -> None:
        """Fold the journal into per-keyspace snapshots and reset it."""
        with self._lock:
            snap_dir = self.data_dir / "snapshots"
            snap_dir.mkdir(exist_ok=True)
            snapshots = {}
            for ks in KEYSPACES:
                if not self._state[ks]:
                    continue
                rel = f"snapshots/{ks}-{self._seq}.json"
                tmp = self.data_dir / (rel + ".tmp")
                tmp.write_bytes(canonical_json(self._state[ks]))
                os.replace(tmp, self.data_dir / rel)
                snapshots[ks] = rel
            self._write_manifest(
                {
                    "format_version": FORMAT_VERSION,
                    "hash_algorithm": HASH_ALGORITHM,
                    "snapshot_seq": self._seq,
                    "snapshots": snapshots,
                }
            )
            self._journal_fh.truncate(0)
            self._journal_fh.seek(0)
            if self._fsync:
                os.fsync(self._journal_fh.fileno())


def open_store(data_dir: Union[str, Path], fsync: bool = True) -> Store:
    """Open (or create) a store, recovering to the last committed state."""
    return Store(data_dir, fsync=fsync)
