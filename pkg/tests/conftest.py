"""
Shared fixtures: services wired the way the CLI wires them, plus seeded
random data builders.
"""
import numpy as np
import pytest

from domain.entities import DistanceMatrix, ReturnsMatrix
from repositories.csv_repository import CsvMetadataRepository, CsvPriceRepository
from services.bootstrap_service import BootstrapService
from services.correlation_service import CorrelationService
from services.export_service import ExportService
from services.hierarchy_service import HierarchyService
from services.mst_service import SpanningTreeService
from services.returns_service import ReturnsService
from services.synthetic_service import SyntheticService


def symbols_for(n):
    return tuple(f"S{i}" for i in range(n))


def random_returns(seed, n, rows=60):
    rng = np.random.default_rng(seed)
    return ReturnsMatrix(symbols=symbols_for(n), rows=rng.normal(0.0, 0.05, size=(rows, n)))


def random_distance(seed, n):
    """Distance matrix of seeded random returns (distinct weights almost surely)."""
    return CorrelationService().distance_from_returns(random_returns(seed, n))


def distance_from_pairs(n, pairs):
    """DistanceMatrix from {(i, j): d} with i < j."""
    d = np.zeros((n, n))
    for (i, j), value in pairs.items():
        d[i, j] = d[j, i] = value
    return DistanceMatrix(symbols=symbols_for(n), d=d)


@pytest.fixture
def returns_service():
    return ReturnsService(CsvPriceRepository(), CsvMetadataRepository())


@pytest.fixture
def correlation_service():
    return CorrelationService()


@pytest.fixture
def tree_service():
    return SpanningTreeService()


@pytest.fixture
def hierarchy_service():
    return HierarchyService()


@pytest.fixture
def bootstrap_service(correlation_service, tree_service):
    return BootstrapService(correlation_service, tree_service)


@pytest.fixture
def export_service(tree_service):
    return ExportService(tree_service)


@pytest.fixture
def synthetic_service():
    return SyntheticService()


@pytest.fixture
def write_csv(tmp_path):
    """Write text to a file under tmp_path and return its path."""
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write
