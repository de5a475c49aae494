"""
Repository interfaces following the Dependency Inversion Principle.
Services depend on these contracts, never on a concrete storage.
"""
from abc import ABC, abstractmethod
from typing import Dict, List, Mapping

from domain.entities import PriceTable
from domain.value_objects import IngestOptions, SymbolInfo


class IPriceRepository(ABC):
    """Interface for reading and writing wide price tables."""

    @abstractmethod
    def load(self, path: str, options: IngestOptions) -> PriceTable:
        """Load and validate a price table."""
        pass

    @abstractmethod
    def save(self, prices: PriceTable, path: str) -> str:
        """Write a price table, returning the written location."""
        pass


class IMetadataRepository(ABC):
    """Interface for symbol metadata (continent, display name)."""

    @abstractmethod
    def load(self, path: str) -> Dict[str, SymbolInfo]:
        """Load metadata keyed by symbol."""
        pass

    @abstractmethod
    def save(self, metadata: Mapping[str, SymbolInfo], path: str) -> str:
        """Write metadata, returning the written location."""
        pass


class IArtifactRepository(ABC):
    """Interface for persisting rendered run artifacts."""

    @abstractmethod
    def save_all(self, artifacts: Mapping[str, str]) -> List[str]:
        """Persist every artifact (file name -> text) and return their locations."""
        pass

    @abstractmethod
    def names(self) -> List[str]:
        """Names of the artifacts currently stored."""
        pass
