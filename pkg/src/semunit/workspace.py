"""Composition root: store, registry, and schemas opened as one bundle."""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Optional

from .schemas import SchemaRegistry
from .store import GraphStore
from .terms import Iri
from .units import IdMinter, UnitRegistry

STORE_LOG = "quads.nq"
UNIT_JOURNAL = "units.jsonl"


class Workspace:
    """A store directory plus the registries working over it.

    Writes from the API and CLI funnel through ``write_lock`` to honor
    the single-writer contract across store and registry together.
    """

    def __init__(
        self,
        store: GraphStore,
        registry: UnitRegistry,
        schemas: SchemaRegistry,
        path: Optional[Path] = None,
    ):
        self.store = store
        self.registry = registry
        self.schemas = schemas
        self.path = path
        self.write_lock = threading.RLock()

    @classmethod
    def open(
        cls,
        path,
        schema_paths: Optional[list] = None,
        seed: Optional[int] = None,
        prefix: str = "urn:uuid:",
        creator: Optional[str] = None,
    ) -> "Workspace":
        root = Path(path)
        root.mkdir(parents=True, exist_ok=True)
        store = GraphStore(log_path=root / STORE_LOG)
        minter = IdMinter(prefix=prefix, seed=seed)
        registry = UnitRegistry(store, journal_path=root / UNIT_JOURNAL, minter=minter)
        schemas = SchemaRegistry()
        for schema_path in schema_paths or []:
            schemas.load_path(schema_path)
        ws = cls(store=store, registry=registry, schemas=schemas, path=root)
        ws.creator = Iri(creator) if creator else None
        return ws

    @classmethod
    def in_memory(
        cls,
        schema_paths: Optional[list] = None,
        seed: Optional[int] = None,
        prefix: str = "urn:uuid:",
    ) -> "Workspace":
        store = GraphStore()
        registry = UnitRegistry(store, minter=IdMinter(prefix=prefix, seed=seed))
        schemas = SchemaRegistry()
        for schema_path in schema_paths or []:
            schemas.load_path(schema_path)
        ws = cls(store=store, registry=registry, schemas=schemas)
        ws.creator = None
        return ws

    def close(self) -> None:
        self.registry.close()
        self.store.close()


def builtin_schema_dir() -> Path:
    from importlib import resources

    return Path(str(resources.files("semunit.data").joinpath("schemas")))
