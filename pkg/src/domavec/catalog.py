"""Matrix catalog: names the containers a query session can load.

The catalog file is JSON (``{"matrices": {"GENERIC": "GENERIC.doma"}}``)
with paths relative to its own directory.  Headers are read eagerly so a
broken path fails at load time; full matrices load lazily and are cached,
read-only, for the lifetime of the catalog.
"""

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from . import matrixio

ENV_CATALOG = "DOMAVEC_CATALOG"


class CatalogError(ValueError):
    """Catalog file missing, unreadable, or naming unreadable matrices."""


@dataclass
class MatrixCatalog:
    paths: dict                  # name -> Path
    headers: dict                # name -> header field dict
    base_dir: Path
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @classmethod
    def load(cls, path):
        path = Path(path)
        if not path.is_file():
            raise CatalogError(f"catalog file {path} does not exist")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CatalogError(f"{path}: not valid JSON ({exc})") from None
        matrices = data.get("matrices")
        if not isinstance(matrices, dict):
            raise CatalogError(f"{path}: expected a 'matrices' mapping")
        base = path.parent
        paths, headers = {}, {}
        for name, rel in matrices.items():
            p = Path(rel)
            p = p if p.is_absolute() else base / p
            if not p.is_file():
                raise CatalogError(f"{path}: matrix {name!r} path {p} unreadable")
            paths[name] = p
            headers[name] = matrixio.read_header(p)
        return cls(paths=paths, headers=headers, base_dir=base)

    @classmethod
    def from_env(cls):
        path = os.environ.get(ENV_CATALOG)
        if not path:
            raise CatalogError(
                f"no catalog given and {ENV_CATALOG} is not set")
        return cls.load(path)

    @property
    def names(self):
        return sorted(self.paths)

    def __contains__(self, name):
        return name in self.paths

    def describe(self):
        """Catalog listing with header metadata, name-sorted."""
        out = []
        for name in self.names:
            h = self.headers[name]
            entry = {
                "name": name,
                "kind": h.get("kind", ""),
                "rows": int(h.get("rows", 0)),
                "cols": int(h.get("cols", 0)),
                "window": int(h.get("window", 0)),
                "weighting": h.get("weighting", ""),
            }
            if "reduced-rank" in h:
                entry["reducedRank"] = int(h["reduced-rank"])
            out.append(entry)
        return out

    def matrix(self, name):
        """Load (and cache) one matrix; KeyError names the unknown matrix."""
        if name not in self.paths:
            raise KeyError(f"unknown matrix {name!r}; catalog has {self.names}")
        with self._lock:
            if name not in self._cache:
                self._cache[name] = matrixio.read_matrix(self.paths[name])
            return self._cache[name]

    def select(self, names):
        """Ordered (name, matrix) pairs for a query."""
        return [(name, self.matrix(name)) for name in names]
