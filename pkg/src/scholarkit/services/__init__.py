from scholarkit.services.config import CONFIG_ENV_VAR, ServiceConfig, load_config
from scholarkit.services.gateway import (
    BadRequest,
    Gateway,
    NoActiveCorpus,
    RemoteCiteClient,
    RemoteHighlightsClient,
    create_app,
)
from scholarkit.services.registry import (
    CorpusRegistration,
    CorpusRegistry,
    RegistrySnapshot,
    open_registered_corpus,
)

__all__ = [
    "BadRequest",
    "CONFIG_ENV_VAR",
    "CorpusRegistration",
    "CorpusRegistry",
    "Gateway",
    "NoActiveCorpus",
    "RegistrySnapshot",
    "RemoteCiteClient",
    "RemoteHighlightsClient",
    "ServiceConfig",
    "create_app",
    "load_config",
    "open_registered_corpus",
]
