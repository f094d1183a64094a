from .accounts import (
    AccountInactive,
    AccountService,
    InvalidCredentials,
    Principal,
    Session,
    hash_credential,
    verify_credential,
)
from .tiers import (
    ANONYMOUS,
    ANONYMOUS_ACTOR,
    AccessTier,
    Actor,
    Decision,
    Role,
    RoleKind,
    authorize,
    filter_visible,
    max_visible_tier,
)

__all__ = [
    "ANONYMOUS",
    "ANONYMOUS_ACTOR",
    "AccessTier",
    "AccountInactive",
    "AccountService",
    "Actor",
    "Decision",
    "InvalidCredentials",
    "Principal",
    "Role",
    "RoleKind",
    "Session",
    "authorize",
    "filter_visible",
    "hash_credential",
    "max_visible_tier",
    "verify_credential",
]
