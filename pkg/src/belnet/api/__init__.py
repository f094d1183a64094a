from .app import create_app
from .config import ServiceConfig
from .fragments import FRAGMENT_IDS, compute_etag, etag_matches

__all__ = ["FRAGMENT_IDS", "ServiceConfig", "compute_etag", "create_app", "etag_matches"]
