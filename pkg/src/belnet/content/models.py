"""Domain types and errors for versioned portal content."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional, Tuple

from ..access import AccessTier
from ..storage import BlobRef

ATTACHMENT_KINDS = ("file", "reference-link", "video", "photo", "picture")

DEFAULT_MAX_ATTACHMENT_BYTES = 64 * 2**20  # video uploads happen; unbounded blobs don't

SORT_FIELDS = ("title", "updated_at", "created_at")
SORT_DIRECTIONS = ("asc", "desc")
MAX_PAGE_LIMIT = 500
DEFAULT_PAGE_LIMIT = 50


class ContentError(Exception):
    """Base class for content-model failures."""


class NotFound(ContentError):
    pass


class RevisionConflict(ContentError):
    """The caller's expected_revision is stale; someone else wrote first."""


class AuthorizationDenied(ContentError):
    """Actor may not perform the operation; reason is 'role' or 'tier'."""

    def __init__(self, message: str, reason: str):
        super().__init__(message)
        self.reason = reason


class UnknownTaxonomyNode(ContentError):
    pass


class MarkupError(ContentError):
    """Body failed to parse; carries the reported (line, column)."""

    def __init__(self, line: int, column: int, expected: str, found: str):
        super().__init__(f"{line}:{column}: expected {expected}, found {found}")
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found

    @property
    def position(self) -> tuple[int, int]:
        return (self.line, self.column)


class PayloadTooLarge(ContentError):
    pass


class UnknownKind(ContentError):
    pass


class EmptyTerm(ContentError):
    pass


class DuplicateSiblingLabel(ContentError):
    pass


class CycleRejected(ContentError):
    """Reserved for taxonomy move semantics; creation alone cannot cycle."""


class InvalidQuery(ContentError):
    pass


@dataclass(frozen=True)
class Resource:
    id: str
    tier: AccessTier
    title: str
    body: str
    taxonomy_ids: Tuple[str, ...]
    attachment_ids: Tuple[str, ...]
    current_revision: int
    created_at: datetime
    updated_at: datetime
    archived: bool


@dataclass(frozen=True)
class ResourceSummary:
    id: str
    tier: AccessTier
    title: str
    current_revision: int
    created_at: datetime
    updated_at: datetime


@dataclass(frozen=True)
class Revision:
    resource_id: str
    index: int
    title: str
    body: str
    author: str
    timestamp: datetime


@dataclass(frozen=True)
class Attachment:
    id: str
    resource_id: str
    kind: str
    media_type: str
    filename: str
    blob_ref: BlobRef
    size_bytes: int


@dataclass(frozen=True)
class GlossaryEntry:
    term: str
    definition: str
    application_area: str = ""
    deviation_notes: str = ""
    source_refs: Tuple[str, ...] = ()


@dataclass(frozen=True)
class TaxonomyNode:
    id: str
    parent_id: Optional[str]
    label: str
    sort_key: str


def term_key(term: str) -> str:
    """Case-folded, whitespace-normalized glossary key."""
    return " ".join(term.split()).casefold()


@dataclass(frozen=True)
class ResourceDraft:
    title: str
    body: str
    tier: AccessTier
    taxonomy_ids: Tuple[str, ...] = ()


@dataclass(frozen=True)
class ResourcePatch:
    """Fields to change; None leaves the stored value alone."""

    title: Optional[str] = None
    body: Optional[str] = None
    tier: Optional[AccessTier] = None
    taxonomy_ids: Optional[Tuple[str, ...]] = None


@dataclass(frozen=True)
class ResourceQuery:
    tier_ceiling: AccessTier = AccessTier.RESTRICTED
    taxonomy_filter: Optional[str] = None
    text_filter: Optional[str] = None
    sort_field: str = "updated_at"
    sort_dir: str = "desc"
    offset: int = 0
    limit: int = DEFAULT_PAGE_LIMIT

    def validate(self) -> None:
        if self.sort_field not in SORT_FIELDS:
            raise InvalidQuery(f"sort_field must be one of {SORT_FIELDS}")
        if self.sort_dir not in SORT_DIRECTIONS:
            raise InvalidQuery("sort_dir must be 'asc' or 'desc'")
        if not 1 <= self.limit <= MAX_PAGE_LIMIT:
            raise InvalidQuery(f"limit must be in [1, {MAX_PAGE_LIMIT}]")
        if self.offset < 0:
            raise InvalidQuery("offset must be nonnegative")


@dataclass(frozen=True)
class ResourcePage:
    items: Tuple[ResourceSummary, ...]
    total_count: int
    offset: int
    limit: int
