"""
In-memory repository implementations for development and testing.
"""
from typing import Dict, List, Mapping

from domain.entities import PriceTable
from domain.exceptions import DataValidationError, InputIOError
from domain.value_objects import IngestOptions, SymbolInfo
from repositories.interfaces import IArtifactRepository, IMetadataRepository, IPriceRepository


class MemoryPriceRepository(IPriceRepository):
    """In-memory implementation of the price repository, keyed by path."""

    def __init__(self, tables: Mapping[str, PriceTable] = None):
        self._tables: Dict[str, PriceTable] = dict(tables or {})

    def load(self, path: str, options: IngestOptions) -> PriceTable:
        if path not in self._tables:
            raise InputIOError(f"Input file does not exist: {path}")
        prices = self._tables[path]
        if prices.n_dates < options.tau + 2:
            raise DataValidationError(f"At least {options.tau + 2} rows are required")
        return prices

    def save(self, prices: PriceTable, path: str) -> str:
        self._tables[path] = prices
        return path


class MemoryMetadataRepository(IMetadataRepository):
    """In-memory implementation of the metadata repository."""

    def __init__(self, tables: Mapping[str, Mapping[str, SymbolInfo]] = None):
        self._tables: Dict[str, Dict[str, SymbolInfo]] = {
            path: dict(metadata) for path, metadata in (tables or {}).items()
        }

    def load(self, path: str) -> Dict[str, SymbolInfo]:
        if path not in self._tables:
            raise InputIOError(f"Metadata file does not exist: {path}")
        return dict(self._tables[path])

    def save(self, metadata: Mapping[str, SymbolInfo], path: str) -> str:
        self._tables[path] = dict(metadata)
        return path


class MemoryArtifactRepository(IArtifactRepository):
    """In-memory implementation of the artifact repository."""

    def __init__(self):
        self.artifacts: Dict[str, str] = {}

    def save_all(self, artifacts: Mapping[str, str]) -> List[str]:
        self.artifacts.update(artifacts)
        return sorted(artifacts)

    def names(self) -> List[str]:
        return sorted(self.artifacts)
