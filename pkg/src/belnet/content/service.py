"""Operations on versioned resources, taxonomy, and the glossary.

Every mutation commits through one transactional batch, with
compare-and-set guards carrying the optimistic-concurrency contract:
a racing writer surfaces as RevisionConflict, never as a lost update.
"""

from __future__ import annotations

import threading
import uuid
from datetime import datetime, timezone
from typing import Optional

from .. import markup
from ..access import AccessTier, Actor, authorize, max_visible_tier
from ..storage import BlobRef, GuardFailed, Store, TxnBatch
from .models import (
    ATTACHMENT_KINDS,
    DEFAULT_MAX_ATTACHMENT_BYTES,
    Attachment,
    AuthorizationDenied,
    DuplicateSiblingLabel,
    EmptyTerm,
    GlossaryEntry,
    InvalidQuery,
    MarkupError,
    NotFound,
    PayloadTooLarge,
    Resource,
    ResourceDraft,
    ResourcePage,
    ResourcePatch,
    ResourceQuery,
    ResourceSummary,
    Revision,
    RevisionConflict,
    TaxonomyNode,
    UnknownKind,
    UnknownTaxonomyNode,
    term_key,
)

_RETRY_LIMIT = 32


def _now() -> datetime:
    return datetime.now(timezone.utc)


def _check(actor: Actor, action: str, tier: AccessTier, what: str) -> None:
    decision = authorize(actor.role, action, tier)
    if not decision.allowed:
        raise AuthorizationDenied(
            f"{actor.username} may not {action} {what}", decision.reason
        )


def _check_editor(actor: Actor, what: str) -> None:
    """Editor-or-above, any tier."""
    decision = authorize(actor.role, "write", AccessTier.OPEN)
    if not decision.allowed:
        raise AuthorizationDenied(
            f"{actor.username} may not edit {what}", decision.reason
        )


def _parse_body(body: str) -> None:
    try:
        markup.parse(body)
    except markup.ParseError as exc:
        raise MarkupError(exc.line, exc.column, exc.expected, exc.found) from exc


def _revision_key(resource_id: str, index: int) -> str:
    return f"{resource_id}/{index:08d}"


def _resource_from_record(rec: dict) -> Resource:
    return Resource(
        id=rec["id"],
        tier=AccessTier(rec["tier"]),
        title=rec["title"],
        body=rec["body"],
        taxonomy_ids=tuple(rec["taxonomy_ids"]),
        attachment_ids=tuple(rec["attachment_ids"]),
        current_revision=rec["current_revision"],
        created_at=datetime.fromisoformat(rec["created_at"]),
        updated_at=datetime.fromisoformat(rec["updated_at"]),
        archived=rec["archived"],
    )


def _summary_from_record(rec: dict) -> ResourceSummary:
    return ResourceSummary(
        id=rec["id"],
        tier=AccessTier(rec["tier"]),
        title=rec["title"],
        current_revision=rec["current_revision"],
        created_at=datetime.fromisoformat(rec["created_at"]),
        updated_at=datetime.fromisoformat(rec["updated_at"]),
    )


def _revision_from_record(rec: dict) -> Revision:
    return Revision(
        resource_id=rec["resource_id"],
        index=rec["index"],
        title=rec["title"],
        body=rec["body"],
        author=rec["author"],
        timestamp=datetime.fromisoformat(rec["timestamp"]),
    )


def _glossary_from_record(rec: dict) -> GlossaryEntry:
    return GlossaryEntry(
        term=rec["term"],
        definition=rec["definition"],
        application_area=rec["application_area"],
        deviation_notes=rec["deviation_notes"],
        source_refs=tuple(rec["source_refs"]),
    )


def _taxonomy_from_record(rec: dict) -> TaxonomyNode:
    return TaxonomyNode(
        id=rec["id"],
        parent_id=rec["parent_id"],
        label=rec["label"],
        sort_key=rec["sort_key"],
    )


def _attachment_from_record(rec: dict) -> Attachment:
    return Attachment(
        id=rec["id"],
        resource_id=rec["resource_id"],
        kind=rec["kind"],
        media_type=rec["media_type"],
        filename=rec["filename"],
        blob_ref=BlobRef.from_dict(rec["blob"]),
        size_bytes=rec["size_bytes"],
    )


class ContentService:
    def __init__(self, store: Store, max_attachment_bytes: int = DEFAULT_MAX_ATTACHMENT_BYTES):
        self.store = store
        self.max_attachment_bytes = max_attachment_bytes
        # sibling-label uniqueness cannot be expressed as a single-key guard
        self._taxonomy_lock = threading.Lock()

    # -- resources -------------------------------------------------------

    def create_resource(self, draft: ResourceDraft, actor: Actor) -> Resource:
        _check(actor, "write", draft.tier, f"tier-{draft.tier.label} content")
        self._require_taxonomy_ids(draft.taxonomy_ids)
        _parse_body(draft.body)
        now = _now().isoformat()
        resource_id = uuid.uuid4().hex
        record = {
            "schema_version": 1,
            "id": resource_id,
            "tier": int(draft.tier),
            "title": draft.title,
            "body": draft.body,
            "taxonomy_ids": sorted(set(draft.taxonomy_ids)),
            "attachment_ids": [],
            "current_revision": 0,
            "created_at": now,
            "updated_at": now,
            "archived": False,
        }
        batch = TxnBatch()
        batch.guard("resources", resource_id, None)
        batch.put("resources", resource_id, record)
        batch.put(
            "revisions",
            _revision_key(resource_id, 0),
            self._revision_record(record, actor, now),
        )
        self.store.txn_execute(batch)
        return _resource_from_record(record)

    def _revision_record(self, resource_record: dict, actor: Actor, stamp: str) -> dict:
        return {
            "schema_version": 1,
            "resource_id": resource_record["id"],
            "index": resource_record["current_revision"],
            "title": resource_record["title"],
            "body": resource_record["body"],
            "author": actor.principal_id or actor.username,
            "timestamp": stamp,
        }

    def get_resource(self, resource_id: str, actor: Actor) -> Resource:
        rec = self.store.get_record("resources", resource_id)
        if rec is None:
            raise NotFound(f"no resource {resource_id}")
        _check(actor, "read", AccessTier(rec["tier"]), "this resource")
        return _resource_from_record(rec)

    def update_resource(
        self,
        resource_id: str,
        patch: ResourcePatch,
        expected_revision: int,
        actor: Actor,
    ) -> Resource:
        rec = self.store.get_record("resources", resource_id)
        if rec is None or rec["archived"]:
            raise NotFound(f"no editable resource {resource_id}")
        if expected_revision != rec["current_revision"]:
            raise RevisionConflict(
                f"expected revision {expected_revision}, "
                f"current is {rec['current_revision']}"
            )
        old_tier = AccessTier(rec["tier"])
        new_tier = patch.tier if patch.tier is not None else old_tier
        _check(actor, "write", max(old_tier, new_tier), "this resource")
        if patch.taxonomy_ids is not None:
            self._require_taxonomy_ids(patch.taxonomy_ids)
        if patch.body is not None:
            _parse_body(patch.body)

        prior = dict(rec)
        now = _now().isoformat()
        rec["title"] = patch.title if patch.title is not None else rec["title"]
        rec["body"] = patch.body if patch.body is not None else rec["body"]
        rec["tier"] = int(new_tier)
        if patch.taxonomy_ids is not None:
            rec["taxonomy_ids"] = sorted(set(patch.taxonomy_ids))
        rec["current_revision"] = prior["current_revision"] + 1
        rec["updated_at"] = now

        batch = TxnBatch()
        batch.guard_value("resources", resource_id, prior)
        batch.put("resources", resource_id, rec)
        batch.put(
            "revisions",
            _revision_key(resource_id, rec["current_revision"]),
            self._revision_record(rec, actor, now),
        )
        try:
            self.store.txn_execute(batch)
        except GuardFailed:
            raise RevisionConflict(
                f"resource {resource_id} changed concurrently"
            ) from None
        return _resource_from_record(rec)

    def archive_resource(self, resource_id: str, actor: Actor) -> Resource:
        for _ in range(_RETRY_LIMIT):
            rec = self.store.get_record("resources", resource_id)
            if rec is None:
                raise NotFound(f"no resource {resource_id}")
            _check(actor, "write", AccessTier(rec["tier"]), "this resource")
            if rec["archived"]:
                return _resource_from_record(rec)
            prior = dict(rec)
            rec["archived"] = True
            rec["updated_at"] = _now().isoformat()
            batch = TxnBatch()
            batch.guard_value("resources", resource_id, prior)
            batch.put("resources", resource_id, rec)
            try:
                self.store.txn_execute(batch)
                return _resource_from_record(rec)
            except GuardFailed:
                continue  # racer touched the resource; re-read and retry
        raise RevisionConflict(f"resource {resource_id} kept changing")

    def query_resources(self, query: ResourceQuery, actor: Actor) -> ResourcePage:
        query.validate()
        ceiling = min(query.tier_ceiling, max_visible_tier(actor.role))
        subtree: Optional[set[str]] = None
        if query.taxonomy_filter is not None:
            subtree = self._subtree_ids(query.taxonomy_filter)
        needle = query.text_filter.casefold() if query.text_filter else None

        matches = []
        for _, rec in self.store.query_records("resources"):
            if rec["archived"]:
                continue
            if rec["tier"] > int(ceiling):
                continue
            if subtree is not None and not subtree.intersection(rec["taxonomy_ids"]):
                continue
            if needle is not None and (
                needle not in rec["title"].casefold()
                and needle not in rec["body"].casefold()
            ):
                continue
            matches.append(rec)

        matches.sort(key=lambda r: r["id"])
        matches.sort(
            key=lambda r: r[query.sort_field], reverse=(query.sort_dir == "desc")
        )
        total = len(matches)
        page = matches[query.offset : query.offset + query.limit]
        return ResourcePage(
            items=tuple(_summary_from_record(r) for r in page),
            total_count=total,
            offset=query.offset,
            limit=query.limit,
        )

    def revision_history(self, resource_id: str, actor: Actor) -> list[Revision]:
        rec = self.store.get_record("resources", resource_id)
        if rec is None:
            raise NotFound(f"no resource {resource_id}")
        _check(actor, "read", AccessTier(rec["tier"]), "this resource")
        rows = self.store.query_records("revisions", f"{resource_id}/")
        return [_revision_from_record(r) for _, r in rows]

    # -- attachments -------------------------------------------------------

    def attach_file(
        self,
        resource_id: str,
        kind: str,
        media_type: str,
        filename: str,
        data: bytes,
        actor: Actor,
    ) -> Attachment:
        if kind not in ATTACHMENT_KINDS:
            raise UnknownKind(f"kind must be one of {ATTACHMENT_KINDS}")
        if len(data) > self.max_attachment_bytes:
            raise PayloadTooLarge(
                f"{len(data)} bytes exceeds limit {self.max_attachment_bytes}"
            )
        for _ in range(_RETRY_LIMIT):
            rec = self.store.get_record("resources", resource_id)
            if rec is None or rec["archived"]:
                raise NotFound(f"no editable resource {resource_id}")
            _check(actor, "write", AccessTier(rec["tier"]), "this resource")
            ref = self.store.store_blob(data)
            attachment_id = uuid.uuid4().hex
            attachment = {
                "schema_version": 1,
                "id": attachment_id,
                "resource_id": resource_id,
                "kind": kind,
                "media_type": media_type,
                "filename": filename,
                "blob": ref.as_dict(),
                "size_bytes": ref.size_bytes,
            }
            prior = dict(rec)
            rec["attachment_ids"] = list(rec["attachment_ids"]) + [attachment_id]
            rec["updated_at"] = _now().isoformat()
            batch = TxnBatch()
            batch.guard_value("resources", resource_id, prior)
            batch.put("resources", resource_id, rec)
            batch.put("attachments", attachment_id, attachment)
            try:
                self.store.txn_execute(batch)
                return _attachment_from_record(attachment)
            except GuardFailed:
                continue  # attachment list is append-only; just retry
        raise RevisionConflict(f"resource {resource_id} kept changing")

    def get_attachment(self, attachment_id: str, actor: Actor) -> tuple[Attachment, bytes]:
        rec = self.store.get_record("attachments", attachment_id)
        if rec is None:
            raise NotFound(f"no attachment {attachment_id}")
        resource = self.store.get_record("resources", rec["resource_id"])
        if resource is not None:
            _check(actor, "read", AccessTier(resource["tier"]), "this attachment")
        attachment = _attachment_from_record(rec)
        return attachment, self.store.fetch_blob(attachment.blob_ref)

    # -- glossary ----------------------------------------------------------

    def upsert_glossary_term(self, entry: GlossaryEntry, actor: Actor) -> GlossaryEntry:
        _check_editor(actor, "the glossary")
        key = term_key(entry.term)
        if not key:
            raise EmptyTerm("glossary term must be nonempty")
        record = {
            "schema_version": 1,
            "term": entry.term,
            "definition": entry.definition,
            "application_area": entry.application_area,
            "deviation_notes": entry.deviation_notes,
            "source_refs": list(entry.source_refs),
        }
        self.store.txn_execute(TxnBatch().put("glossary", key, record))
        return _glossary_from_record(record)

    def search_terms(self, prefix: str, actor: Actor) -> list[GlossaryEntry]:
        needle = term_key(prefix)
        rows = self.store.query_records("glossary", needle)
        entries = [_glossary_from_record(rec) for _, rec in rows]
        entries.sort(key=lambda e: (e.term.casefold(), e.term))
        return entries

    # -- taxonomy ----------------------------------------------------------

    def add_taxonomy_node(
        self,
        parent_id: Optional[str],
        label: str,
        actor: Actor,
        sort_key: Optional[str] = None,
    ) -> TaxonomyNode:
        decision = authorize(actor.role, "admin", AccessTier.RESTRICTED)
        if not decision.allowed:
            raise AuthorizationDenied(
                f"{actor.username} may not manage taxonomy", decision.reason
            )
        with self._taxonomy_lock:
            if parent_id is not None:
                if self.store.get_record("taxonomy", parent_id) is None:
                    raise NotFound(f"no taxonomy node {parent_id}")
            for _, rec in self.store.query_records("taxonomy"):
                if rec["parent_id"] == parent_id and rec["label"] == label:
                    raise DuplicateSiblingLabel(
                        f"label {label!r} already used under this parent"
                    )
            node_id = uuid.uuid4().hex
            record = {
                "schema_version": 1,
                "id": node_id,
                "parent_id": parent_id,
                "label": label,
                "sort_key": sort_key if sort_key is not None else label.casefold(),
            }
            batch = TxnBatch()
            batch.guard("taxonomy", node_id, None)
            if parent_id is not None:
                batch.guard_value(
                    "taxonomy", parent_id, self.store.get_record("taxonomy", parent_id)
                )
            batch.put("taxonomy", node_id, record)
            self.store.txn_execute(batch)
        return _taxonomy_from_record(record)

    def assign_resource(self, resource_id: str, node_id: str, actor: Actor) -> Resource:
        if self.store.get_record("taxonomy", node_id) is None:
            raise NotFound(f"no taxonomy node {node_id}")
        for _ in range(_RETRY_LIMIT):
            rec = self.store.get_record("resources", resource_id)
            if rec is None:
                raise NotFound(f"no resource {resource_id}")
            _check(actor, "write", AccessTier(rec["tier"]), "this resource")
            if node_id in rec["taxonomy_ids"]:
                return _resource_from_record(rec)  # idempotent
            prior = dict(rec)
            rec["taxonomy_ids"] = sorted(set(rec["taxonomy_ids"]) | {node_id})
            rec["updated_at"] = _now().isoformat()
            batch = TxnBatch()
            batch.guard_value("resources", resource_id, prior)
            batch.put("resources", resource_id, rec)
            try:
                self.store.txn_execute(batch)
                return _resource_from_record(rec)
            except GuardFailed:
                continue
        raise RevisionConflict(f"resource {resource_id} kept changing")

    def list_taxonomy(self) -> list[TaxonomyNode]:
        rows = self.store.query_records("taxonomy")
        nodes = [_taxonomy_from_record(rec) for _, rec in rows]
        nodes.sort(key=lambda n: (n.sort_key, n.id))
        return nodes

    def get_taxonomy_node(self, node_id: str) -> TaxonomyNode:
        rec = self.store.get_record("taxonomy", node_id)
        if rec is None:
            raise NotFound(f"no taxonomy node {node_id}")
        return _taxonomy_from_record(rec)

    # -- helpers -----------------------------------------------------------

    def _require_taxonomy_ids(self, ids) -> None:
        for node_id in ids:
            if self.store.get_record("taxonomy", node_id) is None:
                raise UnknownTaxonomyNode(f"no taxonomy node {node_id}")

    def _subtree_ids(self, root_id: str) -> set[str]:
        if self.store.get_record("taxonomy", root_id) is None:
            raise InvalidQuery(f"unknown taxonomy filter {root_id}")
        children: dict[Optional[str], list[str]] = {}
        for _, rec in self.store.query_records("taxonomy"):
            children.setdefault(rec["parent_id"], []).append(rec["id"])
        subtree = set()
        frontier = [root_id]
        while frontier:
            node = frontier.pop()
            if node in subtree:
                continue  # defensive: reject cycles during traversal
            subtree.add(node)
            frontier.extend(children.get(node, []))
        return subtree
