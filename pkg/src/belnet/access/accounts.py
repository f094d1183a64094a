"""Principals, credential verification, and bearer sessions.

Passwords are stored only as scrypt verifiers (per-user random salt,
parameters recorded in the verifier string so they can be raised later).
Sessions are opaque high-entropy bearer tokens with a fixed lifetime;
an expired or unknown token simply resolves to the anonymous actor.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
import uuid
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Optional

from ..storage import Store, TxnBatch
from .tiers import ANONYMOUS_ACTOR, Actor, Role, RoleKind

DEFAULT_SESSION_LIFETIME = timedelta(hours=12)

_SCRYPT_DEFAULTS = {"n": 2**14, "r": 8, "p": 1}
_DKLEN = 32


class InvalidCredentials(Exception):
    """Wrong username or wrong password; deliberately indistinguishable."""


class AccountInactive(Exception):
    """The principal exists and the password matched, but the account is disabled."""


def hash_credential(password: str, *, n: int | None = None, r: int | None = None,
                    p: int | None = None) -> str:
    params = dict(_SCRYPT_DEFAULTS)
    if n:
        params["n"] = n
    if r:
        params["r"] = r
    if p:
        params["p"] = p
    salt = secrets.token_bytes(16)
    derived = hashlib.scrypt(
        password.encode("utf-8"), salt=salt, dklen=_DKLEN, **params
    )
    return "scrypt${n}${r}${p}${salt}${hash}".format(
        **params, salt=salt.hex(), hash=derived.hex()
    )


def verify_credential(password: str, stored: str) -> bool:
    try:
        scheme, n, r, p, salt_hex, hash_hex = stored.split("$")
        if scheme != "scrypt":
            return False
        derived = hashlib.scrypt(
            password.encode("utf-8"),
            salt=bytes.fromhex(salt_hex),
            n=int(n),
            r=int(r),
            p=int(p),
            dklen=_DKLEN,
        )
    except (ValueError, TypeError):
        return False
    return hmac.compare_digest(derived, bytes.fromhex(hash_hex))


@dataclass(frozen=True)
class Principal:
    id: str
    username: str
    role: Role
    active: bool


@dataclass(frozen=True)
class Session:
    token: str
    principal_id: str
    issued_at: datetime
    expires_at: datetime


def _now() -> datetime:
    return datetime.now(timezone.utc)


def _principal_from_record(rec: dict) -> Principal:
    return Principal(
        id=rec["id"],
        username=rec["username"],
        role=Role.from_dict(rec["role"]),
        active=rec["active"],
    )


class AccountService:
    """Principal and session management over the record store."""

    def __init__(
        self,
        store: Store,
        session_lifetime: timedelta = DEFAULT_SESSION_LIFETIME,
        scrypt_n: int | None = None,
    ):
        self.store = store
        self.session_lifetime = session_lifetime
        self._scrypt_n = scrypt_n
        # Burned on unknown-username authentication so the failure path does
        # comparable work to a real verification.
        self._decoy_verifier = hash_credential("decoy", n=scrypt_n)

    # -- principals ----------------------------------------------------

    def create_principal(self, username: str, password: str, role: Role,
                         active: bool = True) -> Principal:
        username = username.strip()
        if not username:
            raise ValueError("username must be nonempty")
        record = {
            "schema_version": 1,
            "id": uuid.uuid4().hex,
            "username": username,
            "credential": hash_credential(password, n=self._scrypt_n),
            "role": role.as_dict(),
            "active": active,
        }
        batch = TxnBatch()
        batch.guard("principals", username, None)  # usernames unique
        batch.put("principals", username, record)
        self.store.txn_execute(batch)
        return _principal_from_record(record)

    def get_principal(self, username: str) -> Optional[Principal]:
        rec = self.store.get_record("principals", username)
        return None if rec is None else _principal_from_record(rec)

    def set_active(self, username: str, active: bool) -> None:
        rec = self.store.get_record("principals", username)
        if rec is None:
            raise KeyError(username)
        batch = TxnBatch().guard_value("principals", username, rec)
        rec["active"] = active
        batch.put("principals", username, rec)
        self.store.txn_execute(batch)

    def ensure_bootstrap_admin(self, username: str, password: str) -> bool:
        """Create the initial portal admin on first start; no-op afterwards."""
        if self.store.get_record("principals", username) is not None:
            return False
        self.create_principal(username, password, Role(RoleKind.PORTAL_ADMIN))
        return True

    # -- sessions --------------------------------------------------------

    def authenticate(self, username: str, password: str) -> Session:
        rec = self.store.get_record("principals", username)
        if rec is None:
            verify_credential(password, self._decoy_verifier)
            raise InvalidCredentials("invalid credentials")
        if not verify_credential(password, rec["credential"]):
            raise InvalidCredentials("invalid credentials")
        if not rec["active"]:
            raise AccountInactive(f"account {username!r} is inactive")
        issued = _now()
        session = Session(
            token=secrets.token_urlsafe(32),
            principal_id=rec["id"],
            issued_at=issued,
            expires_at=issued + self.session_lifetime,
        )
        batch = TxnBatch().put(
            "sessions",
            session.token,
            {
                "schema_version": 1,
                "token": session.token,
                "principal_id": session.principal_id,
                "username": username,
                "issued_at": session.issued_at.isoformat(),
                "expires_at": session.expires_at.isoformat(),
            },
        )
        self.store.txn_execute(batch)
        return session

    def revoke(self, token: str) -> None:
        self.store.txn_execute(TxnBatch().delete("sessions", token))

    def resolve(self, token: Optional[str]) -> Actor:
        """Map a bearer token to its actor; anything invalid degrades to anonymous."""
        if not token:
            return ANONYMOUS_ACTOR
        rec = self.store.get_record("sessions", token)
        if rec is None:
            return ANONYMOUS_ACTOR
        if datetime.fromisoformat(rec["expires_at"]) <= _now():
            return ANONYMOUS_ACTOR
        principal = self.store.get_record("principals", rec["username"])
        if principal is None or not principal["active"]:
            return ANONYMOUS_ACTOR
        return Actor(
            role=Role.from_dict(principal["role"]),
            principal_id=principal["id"],
            username=principal["username"],
        )
