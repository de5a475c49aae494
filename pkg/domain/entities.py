"""
Domain entities representing the matrices and trees of a correlation taxonomy.
Entities validate themselves after initialization; array fields are stored
as read-only numpy arrays so an entity cannot change after construction.
"""
import math
import re
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from domain.exceptions import DataValidationError

MONTH_PATTERN = re.compile(r"^\d{4}-(0[1-9]|1[0-2])$")


class Linkage(Enum):
    """Agglomeration rule of a hierarchical tree."""
    SINGLE = "single"
    AVERAGE = "average"


class MissingDataPolicy(Enum):
    """How months with missing prices are handled."""
    LISTWISE = "listwise"
    STRICT = "strict"


class ExportFormat(Enum):
    """Artifact families the exporter can write."""
    DOT = "dot"
    JSON = "json"
    NEWICK = "newick"
    CSV = "csv"


def _readonly(values, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


def _check_symbols(symbols: Tuple[str, ...]) -> None:
    if not symbols:
        raise DataValidationError("At least one symbol is required")
    if any(not str(symbol).strip() for symbol in symbols):
        raise DataValidationError("Symbols cannot be empty")
    if len(set(symbols)) != len(symbols):
        raise DataValidationError("Symbols must be unique")


def _check_square(name: str, matrix: np.ndarray, size: int) -> None:
    if matrix.shape != (size, size):
        raise DataValidationError(
            f"{name} must be {size}x{size}, got {'x'.join(map(str, matrix.shape))}"
        )
    if not np.all(np.isfinite(matrix)):
        raise DataValidationError(f"{name} contains non-finite entries")
    if not np.array_equal(matrix, matrix.T):
        raise DataValidationError(f"{name} must be symmetric")


@dataclass(frozen=True, eq=False)
class PriceTable:
    """Wide monthly price table, one column per symbol."""
    dates: Tuple[str, ...]
    symbols: Tuple[str, ...]
    values: np.ndarray
    missing: np.ndarray

    def __post_init__(self):
        """Validate price table data after initialization."""
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "values", _readonly(self.values))
        object.__setattr__(self, "missing", _readonly(self.missing, dtype=bool))

        _check_symbols(self.symbols)
        for date in self.dates:
            if not MONTH_PATTERN.match(date):
                raise DataValidationError(f"Unparsable date: {date!r} (expected YYYY-MM)")
        for previous, current in zip(self.dates, self.dates[1:]):
            if current == previous:
                raise DataValidationError(f"Duplicate date: {current}")
            if current < previous:
                raise DataValidationError(f"Non-monotone dates: {previous} followed by {current}")

        shape = (len(self.dates), len(self.symbols))
        if self.values.shape != shape or self.missing.shape != shape:
            raise DataValidationError(f"Price grid must be {shape[0]}x{shape[1]}")
        present = self.values[~self.missing]
        if not np.all(np.isfinite(present)) or np.any(present <= 0):
            raise DataValidationError("Present prices must be finite and positive")

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def n_symbols(self) -> int:
        return len(self.symbols)

    def column(self, symbol: str) -> np.ndarray:
        return self.values[:, self.symbols.index(symbol)]


@dataclass(frozen=True, eq=False)
class ReturnsMatrix:
    """Log returns over a lag of ``tau`` sampling periods."""
    symbols: Tuple[str, ...]
    rows: np.ndarray
    tau: int = 1
    dates: Tuple[str, ...] = ()
    dropped_dates: Tuple[str, ...] = ()

    def __post_init__(self):
        """Validate returns data after initialization."""
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "rows", _readonly(self.rows))
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "dropped_dates", tuple(self.dropped_dates))

        _check_symbols(self.symbols)
        if self.tau < 1:
            raise DataValidationError("Lag tau must be at least 1")
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.symbols):
            raise DataValidationError("Returns grid must have one column per symbol")
        if self.rows.shape[0] < 1:
            raise DataValidationError("Returns grid must have at least one row")
        if not np.all(np.isfinite(self.rows)):
            raise DataValidationError("Returns must be finite")
        if self.dates and len(self.dates) != self.rows.shape[0]:
            raise DataValidationError("One date label per returns row is required")

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_symbols(self) -> int:
        return len(self.symbols)

    @property
    def zero_variance(self) -> Tuple[str, ...]:
        """Symbols whose returns are constant over every row."""
        constant = np.ptp(self.rows, axis=0) == 0
        return tuple(symbol for symbol, flag in zip(self.symbols, constant) if flag)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Pearson cross-correlation coefficients between return series."""
    symbols: Tuple[str, ...]
    c: np.ndarray

    def __post_init__(self):
        """Validate correlation data after initialization."""
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "c", _readonly(self.c))
        _check_symbols(self.symbols)
        _check_square("Correlation matrix", self.c, len(self.symbols))
        if not np.all(np.diag(self.c) == 1.0):
            raise DataValidationError("Correlation matrix must have a unit diagonal")
        if np.any(np.abs(self.c) > 1.0):
            raise DataValidationError("Correlations must lie in [-1, 1]")

    @property
    def size(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Metric distances between series, d = sqrt(2 (1 - c))."""
    symbols: Tuple[str, ...]
    d: np.ndarray
    correlation: Optional[CorrelationMatrix] = None

    def __post_init__(self):
        """Validate distance data after initialization."""
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "d", _readonly(self.d))
        _check_symbols(self.symbols)
        _check_square("Distance matrix", self.d, len(self.symbols))
        if not np.all(np.diag(self.d) == 0.0):
            raise DataValidationError("Distance matrix must have a zero diagonal")
        if np.any(self.d < 0.0) or np.any(self.d > 2.0):
            raise DataValidationError("Distances must lie in [0, 2]")
        if self.correlation is not None and self.correlation.symbols != self.symbols:
            raise DataValidationError("Distance and correlation symbols differ")

    @property
    def size(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class TreeEdge:
    """Undirected spanning-tree link stored with u < v."""
    u: int
    v: int
    distance: float
    correlation: float
    reliability: Optional[float] = None

    def __post_init__(self):
        """Validate edge data after initialization."""
        if not 0 <= self.u < self.v:
            raise DataValidationError(f"Edge ({self.u}, {self.v}) is not canonical")
        if self.reliability is not None and not 0.0 <= self.reliability <= 1.0:
            raise DataValidationError("Reliability must be between 0 and 1")

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class SpanningTree:
    """Spanning tree over labeled nodes, edges in insertion order."""
    symbols: Tuple[str, ...]
    edges: Tuple[TreeEdge, ...]

    def __post_init__(self):
        """Validate tree data after initialization."""
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "edges", tuple(self.edges))
        _check_symbols(self.symbols)
        n = len(self.symbols)
        if len(self.edges) != n - 1:
            raise DataValidationError(f"A spanning tree on {n} nodes needs {n - 1} edges")
        if any(edge.v >= n for edge in self.edges):
            raise DataValidationError("Edge endpoint out of range")
        if len(self._reachable_from(0)) != n:
            raise DataValidationError("Edges do not connect every node")

    def _reachable_from(self, start: int) -> set:
        adjacency = self.adjacency()
        seen = {start}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for neighbor, _ in adjacency[node]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    queue.append(neighbor)
        return seen

    @property
    def size(self) -> int:
        return len(self.symbols)

    @property
    def total_distance(self) -> float:
        return math.fsum(edge.distance for edge in self.edges)

    @property
    def edge_pairs(self) -> frozenset:
        return frozenset(edge.pair for edge in self.edges)

    def adjacency(self) -> List[List[Tuple[int, TreeEdge]]]:
        """Neighbor lists: adjacency[node] = [(neighbor, edge), ...]."""
        adjacency: List[List[Tuple[int, TreeEdge]]] = [[] for _ in self.symbols]
        for edge in self.edges:
            adjacency[edge.u].append((edge.v, edge))
            adjacency[edge.v].append((edge.u, edge))
        return adjacency

    def with_reliability(self, fractions: Mapping[Tuple[int, int], float]) -> "SpanningTree":
        """Copy of the tree whose edges carry the given link fractions."""
        edges = tuple(replace(edge, reliability=fractions.get(edge.pair)) for edge in self.edges)
        return replace(self, edges=edges)


@dataclass(frozen=True)
class MergeStep:
    """One agglomeration step of a dendrogram."""
    left: int
    right: int
    height: float
    new_id: int
    size: int


@dataclass(frozen=True)
class Dendrogram:
    """
    Sequence of N-1 merges. Ids 0..N-1 are leaves, N..2N-2 are internal
    clusters numbered in merge order.
    """
    symbols: Tuple[str, ...]
    merges: Tuple[MergeStep, ...]
    linkage: Linkage

    def __post_init__(self):
        """Validate dendrogram data after initialization."""
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "merges", tuple(self.merges))
        _check_symbols(self.symbols)
        n = len(self.symbols)
        if len(self.merges) != n - 1:
            raise DataValidationError(f"A dendrogram on {n} leaves needs {n - 1} merges")

        available = set(range(n))
        previous = 0.0
        for step, merge in enumerate(self.merges):
            if merge.new_id != n + step:
                raise DataValidationError("Internal cluster ids must follow merge order")
            if merge.left not in available or merge.right not in available:
                raise DataValidationError(f"Merge {step} joins an unavailable cluster")
            if merge.height < previous:
                raise DataValidationError("Merge heights must be non-decreasing")
            available -= {merge.left, merge.right}
            available.add(merge.new_id)
            previous = merge.height

    @property
    def size(self) -> int:
        return len(self.symbols)

    @property
    def heights(self) -> np.ndarray:
        return np.array([merge.height for merge in self.merges], dtype=float)

    def members(self) -> Dict[int, Tuple[int, ...]]:
        """Leaf indices of every cluster id, leaves included."""
        members: Dict[int, Tuple[int, ...]] = {leaf: (leaf,) for leaf in range(self.size)}
        for merge in self.merges:
            members[merge.new_id] = tuple(sorted(members[merge.left] + members[merge.right]))
        return members

    def linkage_matrix(self) -> np.ndarray:
        """SciPy-compatible (N-1)x4 linkage array."""
        return np.array(
            [[merge.left, merge.right, merge.height, merge.size] for merge in self.merges],
            dtype=float,
        ).reshape(len(self.merges), 4)


@dataclass(frozen=True, eq=False)
class UltrametricMatrix:
    """Cophenetic distances read off a dendrogram."""
    symbols: Tuple[str, ...]
    u: np.ndarray

    def __post_init__(self):
        """Validate ultrametric data after initialization."""
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "u", _readonly(self.u))
        _check_symbols(self.symbols)
        _check_square("Ultrametric matrix", self.u, len(self.symbols))
        if not np.all(np.diag(self.u) == 0.0):
            raise DataValidationError("Ultrametric matrix must have a zero diagonal")


@dataclass(frozen=True)
class BootstrapReport:
    """Fraction of bootstrap replicas whose MST keeps each reference link."""
    replicas: int
    seed: int
    link_fractions: Dict[Tuple[int, int], float] = field(default_factory=dict)
    dropped_replicas: int = 0

    def __post_init__(self):
        """Validate report data after initialization."""
        if self.replicas < 1:
            raise DataValidationError("A bootstrap report needs at least one replica")
        if not 0 <= self.dropped_replicas < self.replicas:
            raise DataValidationError("Dropped replicas must be fewer than replicas")
        for pair, fraction in self.link_fractions.items():
            if not pair[0] < pair[1]:
                raise DataValidationError(f"Link {pair} is not canonical")
            if not 0.0 <= fraction <= 1.0:
                raise DataValidationError("Link fractions must be between 0 and 1")

    @property
    def effective_replicas(self) -> int:
        return self.replicas - self.dropped_replicas
