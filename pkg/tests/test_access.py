import time
from dataclasses import dataclass
from datetime import timedelta

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from belnet.access import (
    AccessTier,
    AccountInactive,
    AccountService,
    InvalidCredentials,
    Role,
    RoleKind,
    authorize,
    filter_visible,
    hash_credential,
    max_visible_tier,
    verify_credential,
)
from belnet.storage import GuardFailed


@dataclass(frozen=True)
class Item:
    tier: AccessTier
    name: str = ""


def test_tier_total_order():
    assert AccessTier.OPEN < AccessTier.LIMITED < AccessTier.RESTRICTED
    assert AccessTier.parse("Limited") is AccessTier.LIMITED
    assert AccessTier.RESTRICTED.label == "restricted"
    with pytest.raises(ValueError):
        AccessTier.parse("secret")


def test_role_tier_validation():
    Role(RoleKind.READER, AccessTier.OPEN)
    with pytest.raises(ValueError):
        Role(RoleKind.READER)
    with pytest.raises(ValueError):
        Role(RoleKind.PORTAL_ADMIN, AccessTier.OPEN)


def test_max_visible_tier():
    assert max_visible_tier(Role(RoleKind.ANONYMOUS)) is AccessTier.OPEN
    assert max_visible_tier(Role(RoleKind.READER, AccessTier.LIMITED)) is AccessTier.LIMITED
    assert max_visible_tier(Role(RoleKind.PORTAL_ADMIN)) is AccessTier.RESTRICTED
    assert max_visible_tier(Role(RoleKind.SYSTEM_ADMIN)) is AccessTier.RESTRICTED


def test_authorize_examples():
    assert authorize(Role(RoleKind.ANONYMOUS), "read", AccessTier.OPEN).allowed
    denied = authorize(Role(RoleKind.READER, AccessTier.LIMITED), "read", AccessTier.RESTRICTED)
    assert not denied.allowed and denied.reason == "tier"
    assert authorize(Role(RoleKind.EDITOR, AccessTier.RESTRICTED), "write", AccessTier.LIMITED).allowed


def test_authorize_reason_codes():
    by_role = authorize(Role(RoleKind.READER, AccessTier.RESTRICTED), "write", AccessTier.OPEN)
    assert (by_role.allowed, by_role.reason) == (False, "role")
    by_tier = authorize(Role(RoleKind.EDITOR, AccessTier.OPEN), "write", AccessTier.LIMITED)
    assert (by_tier.allowed, by_tier.reason) == (False, "tier")
    admin = authorize(Role(RoleKind.ANONYMOUS), "admin", AccessTier.OPEN)
    assert (admin.allowed, admin.reason) == (False, "role")


def test_filter_visible_preserves_order():
    items = [
        Item(AccessTier.RESTRICTED, "r"),
        Item(AccessTier.OPEN, "o1"),
        Item(AccessTier.LIMITED, "l"),
        Item(AccessTier.OPEN, "o2"),
    ]
    visible = filter_visible(Role(RoleKind.ANONYMOUS), items)
    assert [i.name for i in visible] == ["o1", "o2"]
    assert filter_visible(Role(RoleKind.SYSTEM_ADMIN), items) == items


_roles = st.sampled_from(
    [
        Role(RoleKind.ANONYMOUS),
        Role(RoleKind.READER, AccessTier.OPEN),
        Role(RoleKind.READER, AccessTier.LIMITED),
        Role(RoleKind.READER, AccessTier.RESTRICTED),
        Role(RoleKind.EDITOR, AccessTier.LIMITED),
        Role(RoleKind.PORTAL_ADMIN),
        Role(RoleKind.SYSTEM_ADMIN),
    ]
)
_corpora = st.lists(
    st.builds(Item, st.sampled_from(list(AccessTier)), st.text(max_size=3))
)


@given(a=_roles, b=_roles, corpus=_corpora)
@settings(max_examples=200)
def test_visibility_monotone(a, b, corpus):
    if max_visible_tier(a) > max_visible_tier(b):
        a, b = b, a
    seen_a = filter_visible(a, corpus)
    seen_b = filter_visible(b, corpus)
    for item in seen_a:
        assert item in seen_b


@given(role=_roles, tier=st.sampled_from(list(AccessTier)), corpus=_corpora)
@settings(max_examples=200)
def test_read_decision_agrees_with_filter(role, tier, corpus):
    for item in corpus:
        in_filter = item in filter_visible(role, [item])
        assert authorize(role, "read", item.tier).allowed == in_filter


# -- credentials and sessions -------------------------------------------------


def test_credential_hash_verify_cycle():
    stored = hash_credential("hunter2", n=2**12)
    assert stored.startswith("scrypt$4096$8$1$")
    assert verify_credential("hunter2", stored)
    assert not verify_credential("hunter3", stored)
    assert not verify_credential("hunter2", "garbage")


def test_hash_salted():
    assert hash_credential("same", n=2**12) != hash_credential("same", n=2**12)


@pytest.fixture
def accounts(store):
    return AccountService(store, scrypt_n=2**12)


def test_authenticate_lifetime(accounts):
    accounts.create_principal("ann", "pw", Role(RoleKind.READER, AccessTier.LIMITED))
    session = accounts.authenticate("ann", "pw")
    assert session.expires_at == session.issued_at + accounts.session_lifetime
    actor = accounts.resolve(session.token)
    assert actor.username == "ann"
    assert actor.role == Role(RoleKind.READER, AccessTier.LIMITED)


def test_wrong_password_and_unknown_user_identical(accounts):
    accounts.create_principal("ann", "pw", Role(RoleKind.READER, AccessTier.OPEN))
    with pytest.raises(InvalidCredentials) as wrong_pw:
        accounts.authenticate("ann", "nope")
    with pytest.raises(InvalidCredentials) as wrong_user:
        accounts.authenticate("bob", "pw")
    assert str(wrong_pw.value) == str(wrong_user.value)


def test_inactive_account(accounts):
    accounts.create_principal("ann", "pw", Role(RoleKind.READER, AccessTier.OPEN))
    accounts.set_active("ann", False)
    with pytest.raises(AccountInactive):
        accounts.authenticate("ann", "pw")
    # sessions issued earlier stop resolving too
    accounts.set_active("ann", True)
    token = accounts.authenticate("ann", "pw").token
    accounts.set_active("ann", False)
    assert accounts.resolve(token).is_anonymous


def test_usernames_unique(accounts):
    accounts.create_principal("ann", "pw", Role(RoleKind.READER, AccessTier.OPEN))
    with pytest.raises(GuardFailed):
        accounts.create_principal("ann", "pw2", Role(RoleKind.PORTAL_ADMIN))


def test_credential_not_recoverable(accounts, store):
    accounts.create_principal("ann", "super-secret", Role(RoleKind.PORTAL_ADMIN))
    record = store.get_record("principals", "ann")
    assert "super-secret" not in str(record)


def test_hundred_sessions_distinct_tokens(accounts):
    accounts.create_principal("ann", "pw", Role(RoleKind.READER, AccessTier.OPEN))
    tokens = {accounts.authenticate("ann", "pw").token for _ in range(100)}
    assert len(tokens) == 100


def test_expired_session_is_anonymous(store):
    accounts = AccountService(
        store, session_lifetime=timedelta(milliseconds=5), scrypt_n=2**12
    )
    accounts.create_principal("ann", "pw", Role(RoleKind.PORTAL_ADMIN))
    token = accounts.authenticate("ann", "pw").token
    time.sleep(0.02)
    assert accounts.resolve(token).is_anonymous


def test_revoked_and_unknown_tokens_are_anonymous(accounts):
    accounts.create_principal("ann", "pw", Role(RoleKind.PORTAL_ADMIN))
    token = accounts.authenticate("ann", "pw").token
    accounts.revoke(token)
    assert accounts.resolve(token).is_anonymous
    assert accounts.resolve("never-issued").is_anonymous
    assert accounts.resolve(None).is_anonymous


def test_bootstrap_admin_idempotent(accounts):
    assert accounts.ensure_bootstrap_admin("root", "pw") is True
    assert accounts.ensure_bootstrap_admin("root", "other") is False
    assert accounts.get_principal("root").role == Role(RoleKind.PORTAL_ADMIN)
