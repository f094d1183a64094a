class StorageError(Exception):
    """Base class for record/blob store failures."""


class CorruptManifest(StorageError):
    """The store manifest (or a snapshot it references) cannot be read."""


class LockedByAnotherProcess(StorageError):
    """Another live process holds the store's exclusive lock."""


class GuardFailed(StorageError):
    """A compare-and-set guard did not match; no mutation was applied."""

    def __init__(self, keyspace: str, key: str):
        super().__init__(f"guard failed for {keyspace}/{key}")
        self.keyspace = keyspace
        self.key = key


class StorageFull(StorageError):
    """The underlying filesystem ran out of space mid-commit."""


class UnknownBlob(StorageError):
    """No blob is stored under the given reference."""


class HashMismatch(StorageError):
    """Stored blob bytes no longer match their content hash (corruption)."""
