"""Content-addressed blob storage.

Blobs live as plain files named by their SHA-256 digest under
``blobs/ab/cdef...``, so identical payloads deduplicate for free and every
fetch can be verified against the name it was stored under.
"""

from __future__ import annotations

import hashlib
import os
import secrets
from dataclasses import dataclass
from pathlib import Path

from .errors import HashMismatch, StorageFull, UnknownBlob

HASH_ALGORITHM = "sha256"


@dataclass(frozen=True)
class BlobRef:
    """Pointer to one immutable blob: hash algorithm, hex digest, byte length."""

    algorithm: str
    digest: str
    size_bytes: int

    def as_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "digest": self.digest,
            "size_bytes": self.size_bytes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BlobRef":
        return cls(d["algorithm"], d["digest"], d["size_bytes"])


class BlobStore:
    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path_for(self, digest: str) -> Path:
        return self.root / digest[:2] / digest[2:]

    def store(self, data: bytes) -> BlobRef:
        digest = hashlib.sha256(data).hexdigest()
        ref = BlobRef(HASH_ALGORITHM, digest, len(data))
        path = self._path_for(digest)
        if path.exists():
            return ref
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.parent / f".tmp-{secrets.token_hex(8)}"
        try:
            with open(tmp, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except OSError as exc:
            tmp.unlink(missing_ok=True)
            if exc.errno == 28:  # ENOSPC
                raise StorageFull(str(exc)) from exc
            raise
        return ref

    def fetch(self, ref: BlobRef) -> bytes:
        if ref.algorithm != HASH_ALGORITHM:
            raise UnknownBlob(f"unsupported hash algorithm {ref.algorithm!r}")
        path = self._path_for(ref.digest)
        if not path.exists():
            raise UnknownBlob(f"no blob stored under {ref.digest}")
        data = path.read_bytes()
        if hashlib.sha256(data).hexdigest() != ref.digest:
            raise HashMismatch(f"blob {ref.digest} failed verification")
        return data

    def contains(self, ref: BlobRef) -> bool:
        return self._path_for(ref.digest).exists()
