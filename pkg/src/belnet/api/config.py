"""Service configuration.

Every CLI flag has a BELNET_-prefixed environment variable equivalent
(via click's auto-envvar support); explicit flags win over environment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..content import DEFAULT_MAX_ATTACHMENT_BYTES

ENV_PREFIX = "BELNET"


@dataclass
class ServiceConfig:
    port: int = 8080
    data_dir: Path = field(default_factory=lambda: Path("belnet-data"))
    tls_cert: Optional[Path] = None
    tls_key: Optional[Path] = None
    max_upload_bytes: int = DEFAULT_MAX_ATTACHMENT_BYTES
    bootstrap_admin_file: Optional[Path] = None
    session_lifetime_hours: float = 12.0
    fsync: bool = True

    @property
    def tls_enabled(self) -> bool:
        return self.tls_cert is not None and self.tls_key is not None

    def bootstrap_admin(self) -> Optional[tuple[str, str]]:
        """(username, password) from the bootstrap file, if configured."""
        if self.bootstrap_admin_file is None:
            return None
        data = json.loads(Path(self.bootstrap_admin_file).read_text("utf-8"))
        return data["username"], data["password"]
