"""Catalog of external 3D assets that scene objects may reference by key.

The catalog maps a short key (usable in a scene file as ``source asset:<key>``)
to a relative mesh path under the configured asset root plus a one-line
description used when rendering prompts. Catalog membership is what scene
validation checks; the mesh files themselves are resolved at render time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class AssetEntry:
    key: str
    path: str  # relative to the asset root, forward slashes
    description: str


@dataclass(frozen=True)
class AssetCatalog:
    entries: tuple[AssetEntry, ...]

    def __contains__(self, key: str) -> bool:
        return any(e.key == key for e in self.entries)

    def get(self, key: str) -> AssetEntry:
        for e in self.entries:
            if e.key == key:
                return e
        raise KeyError(key)

    def keys(self) -> list[str]:
        return [e.key for e in self.entries]


_DEFAULT_ENTRIES = (
    AssetEntry("basketball", "basketball.obj", "Standard basketball, 0.24 m diameter"),
    AssetEntry("mug", "mug.obj", "Ceramic mug with handle, about 0.10 m tall"),
    AssetEntry("tshirt", "tshirt.obj", "T-shirt cloth mesh, draped"),
    AssetEntry("flag", "flag.obj", "Rectangular flag cloth, 2 m by 1 m"),
    AssetEntry("table", "table.obj", "Wooden table, 0.75 m tall"),
)


def default_catalog() -> AssetCatalog:
    """Built-in catalog of common everyday objects."""
    return AssetCatalog(_DEFAULT_ENTRIES)


def load_catalog(path: str | Path) -> AssetCatalog:
    """Load a catalog from a JSON file: [{"key", "path", "description"}, ...]."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    entries = tuple(AssetEntry(d["key"], d["path"], d.get("description", "")) for d in doc)
    return AssetCatalog(entries)
