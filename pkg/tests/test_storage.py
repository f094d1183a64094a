import random
import shutil

import pytest

from belnet.storage import (
    CorruptManifest,
    GuardFailed,
    HashMismatch,
    LockedByAnotherProcess,
    Store,
    TxnBatch,
    UnknownBlob,
    canonical_json,
    iter_journal_entries,
    open_store,
    value_hash,
)


def rec(**kwargs):
    kwargs.setdefault("schema_version", 1)
    return kwargs


def test_fresh_dir_is_empty_store(tmp_path):
    with open_store(tmp_path / "s") as store:
        assert store.query_records("resources") == []
        assert store.get_record("resources", "nope") is None


def test_put_get_roundtrip(store):
    store.txn_execute(TxnBatch().put("resources", "k", rec(v=1)))
    assert store.get_record("resources", "k") == {"schema_version": 1, "v": 1}


def test_get_returns_copy(store):
    store.txn_execute(TxnBatch().put("resources", "k", rec(v=[1, 2])))
    first = store.get_record("resources", "k")
    first["v"].append(3)
    assert store.get_record("resources", "k")["v"] == [1, 2]


def test_schema_version_required(store):
    with pytest.raises(ValueError):
        TxnBatch().put("resources", "k", {"v": 1})
    with pytest.raises(ValueError):
        TxnBatch().put("resources", "k", {"schema_version": 0, "v": 1})


def test_unknown_keyspace_rejected(store):
    with pytest.raises(ValueError):
        TxnBatch().put("bogus", "k", rec())
    with pytest.raises(ValueError):
        store.get_record("bogus", "k")


def test_prefix_scan_matches_external_sort(store):
    # interleave res/ keys with others, expect exactly the res/ nine, sorted
    keys = [f"res/{i}" for i in range(1, 10)] + [f"other/{i}" for i in range(5)]
    random.Random(7).shuffle(keys)
    batch = TxnBatch()
    for i, key in enumerate(keys):
        batch.put("resources", key, rec(i=i))
    store.txn_execute(batch)
    scanned = [k for k, _ in store.query_records("resources", "res/")]
    assert scanned == sorted(f"res/{i}" for i in range(1, 10))


def test_guard_mismatch_applies_nothing(store):
    store.txn_execute(TxnBatch().put("resources", "k", rec(v=1)))
    old = store.get_record("resources", "k")
    store.txn_execute(
        TxnBatch().guard_value("resources", "k", old).put("resources", "k", rec(v=2))
    )
    stale = TxnBatch()
    stale.guard("resources", "k", value_hash(old))
    stale.put("resources", "k", rec(v=3))
    stale.put("resources", "other", rec())
    with pytest.raises(GuardFailed):
        store.txn_execute(stale)
    assert store.get_record("resources", "k")["v"] == 2
    assert store.get_record("resources", "other") is None


def test_guard_absent_semantics(store):
    store.txn_execute(TxnBatch().guard("resources", "k", None).put("resources", "k", rec()))
    with pytest.raises(GuardFailed):
        store.txn_execute(TxnBatch().guard("resources", "k", None))


def test_empty_batch_is_noop(store):
    store.txn_execute(TxnBatch())


def test_delete_then_get_absent(store):
    store.txn_execute(TxnBatch().put("sessions", "t", rec()))
    store.txn_execute(TxnBatch().delete("sessions", "t"))
    assert store.get_record("sessions", "t") is None


def test_reopen_recovers_committed_state(tmp_path):
    path = tmp_path / "s"
    with open_store(path) as store:
        store.txn_execute(TxnBatch().put("resources", "a", rec(v=1)))
        store.txn_execute(TxnBatch().put("resources", "b", rec(v=2)))
        store.txn_execute(TxnBatch().delete("resources", "a"))
    with open_store(path) as store:
        assert store.get_record("resources", "a") is None
        assert store.get_record("resources", "b")["v"] == 2


def test_torn_tail_discarded(tmp_path):
    path = tmp_path / "s"
    with open_store(path) as store:
        store.txn_execute(TxnBatch().put("resources", "a", rec(v=1)))
        store.txn_execute(TxnBatch().put("resources", "b", rec(v=2)))
    journal = path / "journal.log"
    raw = journal.read_bytes()
    ends = [end for end, _, _ in iter_journal_entries(raw)]
    assert len(ends) == 2
    # cut inside the second entry: only the first batch must survive
    journal.write_bytes(raw[: ends[0] + 3])
    with open_store(path) as store:
        assert store.get_record("resources", "a") == {"schema_version": 1, "v": 1}
        assert store.get_record("resources", "b") is None
        # the torn bytes were dropped; appending keeps the journal parseable
        store.txn_execute(TxnBatch().put("resources", "c", rec(v=3)))
    with open_store(path) as store:
        assert store.get_record("resources", "c")["v"] == 3


def test_second_open_locked(tmp_path):
    path = tmp_path / "s"
    with open_store(path):
        with pytest.raises(LockedByAnotherProcess):
            open_store(path)
    # released on close
    open_store(path).close()


def test_corrupt_manifest_detected(tmp_path):
    path = tmp_path / "s"
    open_store(path).close()
    (path / "MANIFEST").write_text("not json at all {", "utf-8")
    with pytest.raises(CorruptManifest):
        open_store(path)


def test_blob_roundtrip_and_dedup(store):
    ref1 = store.store_blob(b"payload")
    ref2 = store.store_blob(b"payload")
    assert ref1 == ref2
    assert store.fetch_blob(ref1) == b"payload"
    assert ref1.size_bytes == 7


def test_blob_corruption_detected(store):
    ref = store.store_blob(b"original bytes")
    path = store.blobs._path_for(ref.digest)
    data = bytearray(path.read_bytes())
    data[0] ^= 0xFF
    path.write_bytes(bytes(data))
    with pytest.raises(HashMismatch):
        store.fetch_blob(ref)


def test_unknown_blob(store):
    from belnet.storage import BlobRef

    with pytest.raises(UnknownBlob):
        store.fetch_blob(BlobRef("sha256", "ab" * 32, 1))


def test_compact_preserves_state(tmp_path):
    path = tmp_path / "s"
    with open_store(path) as store:
        for i in range(20):
            store.txn_execute(TxnBatch().put("resources", f"k{i:02d}", rec(v=i)))
        store.txn_execute(TxnBatch().delete("resources", "k03"))
        expected = store.query_records("resources")
        store.compact()
        assert (path / "journal.log").stat().st_size == 0
        assert store.query_records("resources") == expected
        store.txn_execute(TxnBatch().put("resources", "post", rec(v=99)))
    with open_store(path) as store:
        assert store.query_records("resources") == expected + [
            ("post", {"schema_version": 1, "v": 99})
        ]


def test_canonical_json_is_stable():
    a = canonical_json({"b": 1, "a": [1, 2]})
    b = canonical_json({"a": [1, 2], "b": 1})
    assert a == b
    assert value_hash({"b": 1, "a": [1, 2]}) == value_hash({"a": [1, 2], "b": 1})


def test_random_truncation_yields_batch_prefix(tmp_path):
    """Small-scale crash harness; the acceptance suite runs the full one."""
    src = tmp_path / "src"
    states = []
    with open_store(src) as store:
        for i in range(10):
            batch = TxnBatch()
            batch.put("resources", f"k{i}", rec(v=i))
            batch.put("revisions", f"r{i}", rec(v=i * 10))
            if i >= 2:
                batch.delete("resources", f"k{i - 2}")
            store.txn_execute(batch)
            states.append(
                (store.query_records("resources"), store.query_records("revisions"))
            )
    raw = (src / "journal.log").read_bytes()
    ends = [0] + [end for end, _, _ in iter_journal_entries(raw)]
    rng = random.Random(11)
    for _ in range(25):
        cut = rng.randint(0, len(raw))
        surviving = max(i for i, end in enumerate(ends) if end <= cut)
        dst = tmp_path / f"cut{cut}"
        shutil.copytree(src, dst)
        (dst / "journal.log").write_bytes(raw[:cut])
        with open_store(dst) as store:
            got = (store.query_records("resources"), store.query_records("revisions"))
        if surviving == 0:
            assert got == ([], [])
        else:
            assert got == states[surviving - 1]
