"""Access tiers, roles, and pure authorization decisions.

Content carries one of three totally ordered visibility tiers; an actor's
role caps what they may see and edit. Decisions here are pure functions so
every caller (HTTP layer, content service, tests) agrees by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterable, Optional, Sequence, TypeVar


class AccessTier(IntEnum):
    OPEN = 0
    LIMITED = 1
    RESTRICTED = 2

    @classmethod
    def parse(cls, text: str) -> "AccessTier":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown access tier {text!r}") from None

    @property
    def label(self) -> str:
        return self.name.lower()


class RoleKind(str, Enum):
    ANONYMOUS = "anonymous"
    READER = "reader"
    EDITOR = "editor"
    PORTAL_ADMIN = "portal_admin"
    SYSTEM_ADMIN = "system_admin"


_TIERED_KINDS = (RoleKind.READER, RoleKind.EDITOR)
_ADMIN_KINDS = (RoleKind.PORTAL_ADMIN, RoleKind.SYSTEM_ADMIN)


@dataclass(frozen=True)
class Role:
    """An actor category; readers and editors carry their maximum tier."""

    kind: RoleKind
    tier: Optional[AccessTier] = None

    def __post_init__(self):
        if self.kind in _TIERED_KINDS:
            if self.tier is None:
                raise ValueError(f"{self.kind.value} role requires a tier")
        elif self.tier is not None:
            raise ValueError(f"{self.kind.value} role carries no tier")

    @property
    def is_admin(self) -> bool:
        return self.kind in _ADMIN_KINDS

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "tier": None if self.tier is None else int(self.tier),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Role":
        tier = d.get("tier")
        return cls(RoleKind(d["kind"]), None if tier is None else AccessTier(tier))


ANONYMOUS = Role(RoleKind.ANONYMOUS)


@dataclass(frozen=True)
class Actor:
    """A resolved caller: the anonymous actor or an authenticated principal."""

    role: Role
    principal_id: Optional[str] = None
    username: str = "anonymous"

    @property
    def is_anonymous(self) -> bool:
        return self.role.kind is RoleKind.ANONYMOUS


ANONYMOUS_ACTOR = Actor(role=ANONYMOUS)


@dataclass(frozen=True)
class Decision:
    """Authorization verdict plus a machine-readable reason code."""

    allowed: bool
    reason: str  # "ok" | "role" | "tier"

    def __bool__(self) -> bool:
        return self.allowed


_ALLOW = Decision(True, "ok")


def max_visible_tier(role: Role) -> AccessTier:
    """Highest content tier the role may read."""
    if role.kind is RoleKind.ANONYMOUS:
        return AccessTier.OPEN
    if role.kind in _TIERED_KINDS:
        return role.tier  # type: ignore[return-value]
    return AccessTier.RESTRICTED


def authorize(role: Role, action: str, subject_tier: AccessTier) -> Decision:
    """Decide read/write/admin access against a subject tier.

    Reads go through whenever the tier is visible; writes need an editor
    whose tier dominates the subject (or an admin); admin actions need an
    admin role. Denials say whether the role or the tier was the blocker.
    """
    if action == "read":
        if subject_tier <= max_visible_tier(role):
            return _ALLOW
        return Decision(False, "tier")
    if action == "write":
        if role.is_admin:
            return _ALLOW
        if role.kind is RoleKind.EDITOR:
            if subject_tier <= role.tier:  # type: ignore[operator]
                return _ALLOW
            return Decision(False, "tier")
        return Decision(False, "role")
    if action == "admin":
        if role.is_admin:
            return _ALLOW
        return Decision(False, "role")
    raise ValueError(f"unknown action {action!r}")


T = TypeVar("T")


def filter_visible(role: Role, resources: Iterable[T]) -> list[T]:
    """Keep only items whose tier the role may read, preserving order."""
    ceiling = max_visible_tier(role)
    return [r for r in resources if AccessTier(int(r.tier)) <= ceiling]
