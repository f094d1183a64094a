from .blobs import BlobRef, BlobStore
from .errors import (
    CorruptManifest,
    GuardFailed,
    HashMismatch,
    LockedByAnotherProcess,
    StorageError,
    StorageFull,
    UnknownBlob,
)
from .store import (
    FORMAT_VERSION,
    HASH_ALGORITHM,
    KEYSPACES,
    Store,
    TxnBatch,
    canonical_json,
    iter_journal_entries,
    open_store,
    value_hash,
)

__all__ = [
    "BlobRef",
    "BlobStore",
    "CorruptManifest",
    "FORMAT_VERSION",
    "GuardFailed",
    "HASH_ALGORITHM",
    "HashMismatch",
    "KEYSPACES",
    "LockedByAnotherProcess",
    "Store",
    "StorageError",
    "StorageFull",
    "TxnBatch",
    "UnknownBlob",
    "canonical_json",
    "iter_journal_entries",
    "open_store",
    "value_hash",
]
