"""
Pipeline service orchestrating ingest -> correlations -> MST -> hierarchy
-> bootstrap and collecting every artifact before anything is written.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet

from config import DATE_COLUMN
from domain.entities import ExportFormat, Linkage
from domain.exceptions import InvalidArgumentError, TaxonomyError
from domain.value_objects import IngestOptions, RunConfig
from repositories.interfaces import IArtifactRepository
from services.bootstrap_service import BootstrapService
from services.correlation_service import CorrelationService
from services.export_service import ExportService
from services.hierarchy_service import HierarchyService
from services.mst_service import SpanningTreeService
from services.returns_service import ReturnsService
from services.serialization import to_json

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"
NEWICK_NAMES = {Linkage.SINGLE: "slca", Linkage.AVERAGE: "alca"}

STAGES: Dict[str, FrozenSet[str]] = {
    "returns": frozenset({"returns"}),
    "corr": frozenset({"corr"}),
    "mst": frozenset({"mst"}),
    "tree": frozenset({"tree"}),
    "boot": frozenset({"boot"}),
    "run": frozenset({"returns", "corr", "mst", "tree", "boot"}),
}


@dataclass
class PipelineResult:
    """Rendered artifacts keyed by file name, plus the run manifest."""
    artifacts: Dict[str, str] = field(default_factory=dict)
    manifest: dict = field(default_factory=dict)


class PipelineService:
    """Service running one CLI stage end to end."""

    def __init__(self, returns_service: ReturnsService, correlation_service: CorrelationService,
                 tree_service: SpanningTreeService, hierarchy_service: HierarchyService,
                 bootstrap_service: BootstrapService, export_service: ExportService,
                 artifact_repo_factory: Callable[[str], IArtifactRepository],
                 date_column: str = DATE_COLUMN):
        self.returns_service = returns_service
        self.correlation_service = correlation_service
        self.tree_service = tree_service
        self.hierarchy_service = hierarchy_service
        self.bootstrap_service = bootstrap_service
        self.export_service = export_service
        self.artifact_repo_factory = artifact_repo_factory
        self.date_column = date_column

    def execute(self, config: RunConfig, stage: str = "run") -> PipelineResult:
        """Compute and render everything a stage produces, in memory."""
        if stage not in STAGES:
            raise InvalidArgumentError(f"Unknown stage: {stage}")
        steps = STAGES[stage]
        if stage == "boot" and config.replicas < 1:
            raise InvalidArgumentError("The boot stage needs at least 1 replica")
        started = time.perf_counter()
        artifacts: Dict[str, str] = {}
        exports = self.export_service
        csv = config.wants(ExportFormat.CSV)

        prices = self.returns_service.load_csv(
            config.input_path,
            IngestOptions(tau=config.tau, date_column=self.date_column,
                          missing_policy=config.missing_policy),
        )
        prices = self.returns_service.select_symbols(prices, config.symbols)
        metadata = (
            self.returns_service.load_metadata(config.metadata_path)
            if config.metadata_path else {}
        )
        returns = self.returns_service.compute_log_returns(
            prices, tau=config.tau, policy=config.missing_policy
        )
        dropped_symbols = ()
        if config.drop_constant:
            returns, dropped_symbols = self.returns_service.drop_constant_columns(returns)

        if "returns" in steps and csv:
            artifacts["returns.csv"] = exports.returns_csv(returns)

        report = None
        if steps - {"returns"}:
            dist = self.correlation_service.distance_from_returns(returns)

            if "corr" in steps and csv:
                artifacts["corr.csv"] = exports.matrix_csv(dist.correlation)
                artifacts["dist.csv"] = exports.matrix_csv(dist)

            if steps & {"mst", "boot"}:
                if "boot" in steps and config.replicas > 0:
                    tree, report = self.bootstrap_service.link_reliability(
                        returns, config.replicas, config.seed, workers=config.workers,
                    )
                    if csv:
                        artifacts["bootstrap.csv"] = exports.bootstrap_csv(tree, report)
                else:
                    tree = self.tree_service.kruskal_mst(dist)
                if config.wants(ExportFormat.JSON):
                    artifacts["mst.json"] = exports.mst_json(tree, report, metadata)
                if config.wants(ExportFormat.DOT):
                    artifacts["mst.dot"] = exports.export_dot(tree, metadata)

            if "tree" in steps:
                partitions = {}
                for linkage in config.linkages:
                    dendro = self.hierarchy_service.build(dist, linkage)
                    name = NEWICK_NAMES[linkage]
                    if config.wants(ExportFormat.NEWICK):
                        artifacts[f"{name}.nwk"] = exports.export_newick(dendro) + "\n"
                    if csv:
                        artifacts[f"{name}_merges.csv"] = exports.merge_table_csv(dendro)
                    if config.clusters is not None:
                        partitions[linkage.value] = self.hierarchy_service.cut_clusters(
                            dendro, config.clusters
                        )
                if partitions and csv:
                    artifacts["clusters.csv"] = exports.clusters_csv(partitions, metadata)

        manifest = {
            "stage": stage,
            "config": {
                "input": config.input_path,
                "tau": config.tau,
                "linkages": [linkage.value for linkage in config.linkages],
                "replicas": config.replicas,
                "seed": config.seed,
                "symbols": list(config.symbols),
                "missing_policy": config.missing_policy.value,
                "formats": [export_format.value for export_format in config.formats],
                "metadata": config.metadata_path,
                "drop_constant": config.drop_constant,
                "clusters": config.clusters,
                "workers": config.workers,
            },
            "symbols": list(returns.symbols),
            "months": prices.n_dates,
            "return_rows": returns.n_rows,
            "dropped_months": list(returns.dropped_dates),
            "dropped_symbols": list(dropped_symbols),
            "dropped_replicas": report.dropped_replicas if report is not None else None,
            "artifacts": sorted(artifacts) + [MANIFEST],
            "wall_time_seconds": round(time.perf_counter() - started, 6),
        }
        artifacts[MANIFEST] = to_json(manifest)
        return PipelineResult(artifacts=artifacts, manifest=manifest)

    def run_pipeline(self, config: RunConfig, stage: str = "run") -> int:
        """Run a stage and write its artifacts; returns the process exit code."""
        try:
            result = self.execute(config, stage)
            self.artifact_repo_factory(config.output_directory).save_all(result.artifacts)
        except TaxonomyError as e:
            logger.error("%s failed: %s", stage, e)
            return e.exit_code
        logger.info("%s finished in %.3f s", stage, result.manifest["wall_time_seconds"])
        return 0
