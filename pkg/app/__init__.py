"""
Command-line application factory following the Dependency Injection pattern.
"""
import logging

import click

import config
from repositories.artifact_repository import FileArtifactRepository
from repositories.csv_repository import CsvMetadataRepository, CsvPriceRepository
from services.bootstrap_service import BootstrapService
from services.correlation_service import CorrelationService
from services.export_service import ExportService
from services.hierarchy_service import HierarchyService
from services.mst_service import SpanningTreeService
from services.pipeline_service import PipelineService
from services.returns_service import ReturnsService
from services.synthetic_service import SyntheticService


def configure_logging(verbose: bool = False) -> None:
    """Route library logging to stderr; ``--verbose`` lowers the level to DEBUG."""
    level = logging.DEBUG if verbose else getattr(logging, config.LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(level=level, format=config.LOG_FORMAT, force=True)


def create_services() -> dict:
    """Wire repositories into services."""
    # Initialize repositories
    price_repo = CsvPriceRepository()
    metadata_repo = CsvMetadataRepository()

    # Initialize services
    returns_service = ReturnsService(price_repo, metadata_repo)
    correlation_service = CorrelationService()
    tree_service = SpanningTreeService()
    hierarchy_service = HierarchyService()
    bootstrap_service = BootstrapService(correlation_service, tree_service,
                                         workers=config.BOOTSTRAP_WORKERS)
    export_service = ExportService(tree_service)
    pipeline_service = PipelineService(
        returns_service, correlation_service, tree_service, hierarchy_service,
        bootstrap_service, export_service, FileArtifactRepository,
    )

    return {
        'price_repo': price_repo,
        'metadata_repo': metadata_repo,
        'returns_service': returns_service,
        'pipeline_service': pipeline_service,
        'synthetic_service': SyntheticService(),
    }


def create_cli(services: dict = None) -> click.Group:
    """Create the command group with services stored in the click context."""
    from app.commands import register_commands

    @click.group(context_settings={"obj": {"SERVICES": services or create_services()},
                                   "help_option_names": ["-h", "--help"]})
    @click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level.")
    def cli(verbose: bool):
        """Correlation-based taxonomy of co-moving time series."""
        configure_logging(verbose)

    register_commands(cli)
    return cli
