import json
import socket
import threading
import time

import pytest

from belnet.access import AccessTier, Actor, Role, RoleKind
from belnet.api import ServiceConfig, create_app
from belnet.content import ContentService
from belnet.storage import open_store


@pytest.fixture
def store(tmp_path):
    with open_store(tmp_path / "data", fsync=False) as s:
        yield s


@pytest.fixture
def content(store):
    return ContentService(store)


ADMIN = Actor(Role(RoleKind.PORTAL_ADMIN), principal_id="p-admin", username="admin")
SYSADMIN = Actor(Role(RoleKind.SYSTEM_ADMIN), principal_id="p-sys", username="sys")
EDITOR_RESTRICTED = Actor(
    Role(RoleKind.EDITOR, AccessTier.RESTRICTED), principal_id="p-edr", username="edr"
)
EDITOR_LIMITED = Actor(
    Role(RoleKind.EDITOR, AccessTier.LIMITED), principal_id="p-edl", username="edl"
)
EDITOR_OPEN = Actor(
    Role(RoleKind.EDITOR, AccessTier.OPEN), principal_id="p-edo", username="edo"
)
READER_LIMITED = Actor(
    Role(RoleKind.READER, AccessTier.LIMITED), principal_id="p-rdl", username="rdl"
)
ANON = Actor(Role(RoleKind.ANONYMOUS))


def make_config(tmp_path, **overrides):
    admin_file = tmp_path / "admin.json"
    admin_file.write_text(json.dumps({"username": "root", "password": "root-pw"}))
    defaults = dict(
        data_dir=tmp_path / "data",
        fsync=False,
        bootstrap_admin_file=admin_file,
    )
    defaults.update(overrides)
    return ServiceConfig(**defaults)


@pytest.fixture
def app(tmp_path):
    return create_app(make_config(tmp_path))


@pytest.fixture
def client(app):
    from fastapi.testclient import TestClient

    with TestClient(app) as c:
        yield c


class LiveServer:
    """uvicorn on an ephemeral localhost port, for real-socket tests."""

    def __init__(self, app):
        import uvicorn

        with socket.socket() as probe:
            probe.bind(("127.0.0.1", 0))
            self.port = probe.getsockname()[1]
        self.base_url = f"http://127.0.0.1:{self.port}"
        config = uvicorn.Config(
            app, host="127.0.0.1", port=self.port, log_level="warning"
        )
        self.server = uvicorn.Server(config)
        self.thread = threading.Thread(target=self.server.run, daemon=True)

    def __enter__(self):
        self.thread.start()
        deadline = time.time() + 10
        while not self.server.started:
            if time.time() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.02)
        return self

    def __exit__(self, *exc):
        self.server.should_exit = True
        self.thread.join(timeout=10)
