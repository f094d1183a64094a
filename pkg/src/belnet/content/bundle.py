"""Portable content bundle: seeding and backup format.

A bundle directory holds a UTF-8 ``manifest`` of newline-delimited JSON
records (taxonomy, resources, revisions, glossary, attachments) and a
``blobs/`` tree keyed by content hash, mirroring the store's blob layout.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Union

from ..storage import Store, TxnBatch, canonical_json
from ..storage.errors import HashMismatch

BUNDLE_FORMAT_VERSION = 1

CONTENT_KEYSPACES = ("taxonomy", "resources", "revisions", "glossary", "attachments")


def export_bundle(store: Store, dest: Union[str, Path]) -> int:
    """Write all content records and referenced blobs; returns record count."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    lines = [
        canonical_json(
            {"type": "bundle-header", "format_version": BUNDLE_FORMAT_VERSION}
        ).decode("utf-8")
    ]
    count = 0
    digests = set()
    for keyspace in CONTENT_KEYSPACES:
        for key, value in store.query_records(keyspace):
            lines.append(
                canonical_json(
                    {"keyspace": keyspace, "key": key, "value": value}
                ).decode("utf-8")
            )
            count += 1
            if keyspace == "attachments":
                digests.add(value["blob"]["digest"])
    (dest / "manifest").write_text("\n".join(lines) + "\n", "utf-8")
    blob_dir = dest / "blobs"
    for digest in sorted(digests):
        src = store.blobs._path_for(digest)
        out = blob_dir / digest[:2] / digest[2:]
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(src.read_bytes())
    return count


def import_bundle(store: Store, src: Union[str, Path]) -> int:
    """Load a bundle into the store; returns record count."""
    src = Path(src)
    text = (src / "manifest").read_text("utf-8")
    lines = [line for line in text.splitlines() if line.strip()]
    header = json.loads(lines[0])
    if header.get("type") != "bundle-header":
        raise ValueError("manifest must start with a bundle-header record")
    if header.get("format_version") != BUNDLE_FORMAT_VERSION:
        raise ValueError(f"unsupported bundle format {header.get('format_version')}")

    blob_dir = src / "blobs"
    if blob_dir.is_dir():
        for path in sorted(blob_dir.glob("*/*")):
            data = path.read_bytes()
            expected = path.parent.name + path.name
            if hashlib.sha256(data).hexdigest() != expected:
                raise HashMismatch(f"bundle blob {expected} fails verification")
            store.store_blob(data)

    count = 0
    batch = TxnBatch()
    for line in lines[1:]:
        rec = json.loads(line)
        batch.put(rec["keyspace"], rec["key"], rec["value"])
        count += 1
        if len(batch) >= 500:
            store.txn_execute(batch)
            batch = TxnBatch()
    store.txn_execute(batch)
    return count
