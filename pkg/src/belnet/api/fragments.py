"""Named page regions whose data refreshes independently of the full page.

A fragment's etag is the content hash of its payload, so unchanged data
answers If-None-Match with an empty 304 instead of a body.
"""

from __future__ import annotations

import hashlib

from ..storage import canonical_json

FRAGMENT_IDS = ("resource-list", "resource-detail", "glossary-panel", "labwork-panel")


def compute_etag(payload: dict) -> str:
    return '"' + hashlib.sha256(canonical_json(payload)).hexdigest() + '"'


def etag_matches(header_value: str | None, etag: str) -> bool:
    if not header_value:
        return False
    candidates = [v.strip() for v in header_value.split(",")]
    return etag in candidates or etag.strip('"') in candidates
