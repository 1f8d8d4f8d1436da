"""HTTP review service: app factory, configuration, sessions."""
from .config import ROLES, ServiceConfig, UserEntry, load_service_config
from .service import ApiSession, NotFound, create_app

__all__ = [
    "ApiSession",
    "NotFound",
    "ROLES",
    "ServiceConfig",
    "UserEntry",
    "create_app",
    "load_service_config",
]
