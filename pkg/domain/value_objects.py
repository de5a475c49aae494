"""
Value objects describing inputs and run settings.
Immutable, compared by value.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

from domain.entities import ExportFormat, Linkage, MissingDataPolicy
from domain.exceptions import InvalidArgumentError


@dataclass(frozen=True)
class SymbolInfo:
    """Sidecar metadata for one series (continent and display name)."""
    symbol: str
    continent: Optional[str] = None
    name: Optional[str] = None

    def __post_init__(self):
        if not self.symbol.strip():
            raise InvalidArgumentError("Symbol cannot be empty")


@dataclass(frozen=True)
class IngestOptions:
    """Options for reading a price CSV."""
    tau: int = 1
    date_column: Optional[str] = None
    missing_policy: MissingDataPolicy = MissingDataPolicy.LISTWISE

    def __post_init__(self):
        if self.tau < 1:
            raise InvalidArgumentError("tau must be at least 1")


@dataclass(frozen=True)
class BlockSpec:
    """Planted block correlation model."""
    blocks: Tuple[Tuple[str, int], ...]
    intra_rho: float
    inter_rho: float
    rows: int
    seed: int = 0
    volatility: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple((str(p), int(s)) for p, s in self.blocks))
        if not self.blocks:
            raise InvalidArgumentError("At least one block is required")
        if any(size < 1 for _, size in self.blocks):
            raise InvalidArgumentError("Block sizes must be positive")
        if len({prefix for prefix, _ in self.blocks}) != len(self.blocks):
            raise InvalidArgumentError("Block label prefixes must be unique")
        if not 0.0 <= self.intra_rho < 1.0 or not 0.0 <= self.inter_rho < 1.0:
            raise InvalidArgumentError("Block correlations must lie in [0, 1)")
        if self.rows < 2:
            raise InvalidArgumentError("At least two rows are required")
        if self.volatility <= 0.0:
            raise InvalidArgumentError("Volatility must be positive")

    @property
    def size(self) -> int:
        return sum(size for _, size in self.blocks)

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(f"{prefix}{k + 1}" for prefix, size in self.blocks for k in range(size))

    @property
    def labels(self) -> Tuple[str, ...]:
        """Block label of every generated symbol."""
        return tuple(prefix for prefix, size in self.blocks for _ in range(size))


@dataclass(frozen=True)
class RunConfig:
    """Everything one pipeline invocation needs."""
    input_path: str
    output_directory: str
    tau: int = 1
    linkages: Tuple[Linkage, ...] = (Linkage.SINGLE, Linkage.AVERAGE)
    replicas: int = 1000
    seed: int = 0
    symbols: Tuple[str, ...] = ()
    missing_policy: MissingDataPolicy = MissingDataPolicy.LISTWISE
    formats: Tuple[ExportFormat, ...] = tuple(ExportFormat)
    metadata_path: Optional[str] = None
    drop_constant: bool = False
    clusters: Optional[int] = None
    workers: int = 1

    def __post_init__(self):
        """Validate run configuration after initialization."""
        object.__setattr__(self, "linkages", tuple(self.linkages))
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "formats", tuple(self.formats))
        if self.tau < 1:
            raise InvalidArgumentError("tau must be at least 1")
        if self.replicas < 0:
            raise InvalidArgumentError("replicas cannot be negative")
        if self.workers < 1:
            raise InvalidArgumentError("workers must be at least 1")
        if self.clusters is not None and self.clusters < 1:
            raise InvalidArgumentError("clusters must be at least 1")
        if not self.linkages:
            raise InvalidArgumentError("At least one linkage is required")

    def wants(self, export_format: ExportFormat) -> bool:
        return export_format in self.formats
