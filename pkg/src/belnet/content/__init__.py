from .bundle import export_bundle, import_bundle
from .models import (
    ATTACHMENT_KINDS,
    DEFAULT_MAX_ATTACHMENT_BYTES,
    DEFAULT_PAGE_LIMIT,
    MAX_PAGE_LIMIT,
    Attachment,
    AuthorizationDenied,
    ContentError,
    CycleRejected,
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
from .service import ContentService

__all__ = [
    "ATTACHMENT_KINDS",
    "Attachment",
    "AuthorizationDenied",
    "ContentError",
    "ContentService",
    "CycleRejected",
    "DEFAULT_MAX_ATTACHMENT_BYTES",
    "DEFAULT_PAGE_LIMIT",
    "DuplicateSiblingLabel",
    "EmptyTerm",
    "GlossaryEntry",
    "InvalidQuery",
    "MAX_PAGE_LIMIT",
    "MarkupError",
    "NotFound",
    "PayloadTooLarge",
    "Resource",
    "ResourceDraft",
    "ResourcePage",
    "ResourcePatch",
    "ResourceQuery",
    "ResourceSummary",
    "Revision",
    "RevisionConflict",
    "TaxonomyNode",
    "UnknownKind",
    "UnknownTaxonomyNode",
    "export_bundle",
    "import_bundle",
    "term_key",
]
