"""
Export service rendering matrices, trees and reports as text artifacts.
Renderers return strings; persisting them is the artifact repository's job.
"""
import io
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

import config
from domain.entities import (
    BootstrapReport, CorrelationMatrix, Dendrogram, DistanceMatrix, ReturnsMatrix, SpanningTree,
)
from domain.value_objects import SymbolInfo
from services.mst_service import SpanningTreeService
from services.newick import quote_label
from services.serialization import to_json

Metadata = Mapping[str, SymbolInfo]


def _csv(frame: pd.DataFrame, **kwargs) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, lineterminator="\n", **kwargs)
    return buffer.getvalue()


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


class ExportService:
    """Service rendering analysis results in CSV, DOT, Newick and JSON."""

    def __init__(self, tree_service: SpanningTreeService,
                 significant_digits: int = config.MATRIX_SIGNIFICANT_DIGITS,
                 display_decimals: int = config.RELIABILITY_DISPLAY_DECIMALS):
        self.tree_service = tree_service
        self.significant_digits = significant_digits
        self.display_decimals = display_decimals

    def format_reliability(self, reliability: float) -> str:
        return f"{reliability:.{self.display_decimals}f}"

    def matrix_csv(self, matrix) -> str:
        """Square matrix with a symbol header row and column."""
        values = matrix.c if isinstance(matrix, CorrelationMatrix) else (
            matrix.d if isinstance(matrix, DistanceMatrix) else matrix.u
        )
        frame = pd.DataFrame(np.asarray(values), index=list(matrix.symbols),
                             columns=list(matrix.symbols))
        return _csv(frame, index_label="symbol", float_format=f"%.{self.significant_digits}g")

    def returns_csv(self, returns: ReturnsMatrix) -> str:
        frame = pd.DataFrame(np.asarray(returns.rows), columns=list(returns.symbols))
        if returns.dates:
            frame.insert(0, config.DATE_COLUMN, list(returns.dates))
        return _csv(frame, index=False)

    def export_dot(self, tree: SpanningTree, metadata: Optional[Metadata] = None) -> str:
        """Undirected DOT graph; edge labels show reliability with 2 decimals."""
        metadata = metadata or {}
        lines = ["graph MST {"]
        for symbol in tree.symbols:
            attributes = [f"label={_dot_id(symbol)}"]
            info = metadata.get(symbol)
            if info is not None and info.continent:
                attributes.append(f"continent={_dot_id(info.continent)}")
            if info is not None and info.name:
                attributes.append(f"tooltip={_dot_id(info.name)}")
            lines.append(f"  {_dot_id(symbol)} [{', '.join(attributes)}];")
        for edge in tree.edges:
            attributes = [f"distance={_dot_id(repr(edge.distance))}"]
            if edge.reliability is not None:
                attributes.insert(0, f"label={_dot_id(self.format_reliability(edge.reliability))}")
            lines.append(
                f"  {_dot_id(tree.symbols[edge.u])} -- {_dot_id(tree.symbols[edge.v])}"
                f" [{', '.join(attributes)}];"
            )
        lines.append("}")
        return "\n".join(lines) + "\n"

    def export_newick(self, dendro: Dendrogram) -> str:
        """
        Rooted Newick string. A child's branch length is its parent's merge
        height minus its own (leaves sit at height 0).
        """
        text: Dict[int, str] = {leaf: quote_label(symbol) for leaf, symbol in enumerate(dendro.symbols)}
        heights: Dict[int, float] = {leaf: 0.0 for leaf in range(dendro.size)}
        for merge in dendro.merges:
            left = merge.height - heights[merge.left]
            right = merge.height - heights[merge.right]
            text[merge.new_id] = (
                f"({text[merge.left]}:{left!r},{text[merge.right]}:{right!r})"
            )
            heights[merge.new_id] = merge.height
        root = dendro.merges[-1].new_id if dendro.merges else 0
        return text[root] + ";"

    def merge_table_csv(self, dendro: Dendrogram) -> str:
        members = dendro.members()
        frame = pd.DataFrame(
            [
                {
                    "step": step + 1,
                    "left": merge.left,
                    "right": merge.right,
                    "height": merge.height,
                    "size": merge.size,
                    "members": " ".join(dendro.symbols[leaf] for leaf in members[merge.new_id]),
                }
                for step, merge in enumerate(dendro.merges)
            ],
            columns=["step", "left", "right", "height", "size", "members"],
        )
        return _csv(frame, index=False)

    def bootstrap_csv(self, tree: SpanningTree, report: BootstrapReport) -> str:
        """One row per reference link, sorted by canonical (u, v)."""
        rows = []
        for edge in sorted(tree.edges, key=lambda edge: edge.pair):
            rows.append({
                "u": tree.symbols[edge.u],
                "v": tree.symbols[edge.v],
                "distance": edge.distance,
                "correlation": edge.correlation,
                "reliability": report.link_fractions[edge.pair],
            })
        frame = pd.DataFrame(rows, columns=["u", "v", "distance", "correlation", "reliability"])
        return _csv(frame, index=False)

    def clusters_csv(self, partitions: Mapping[str, Sequence[Tuple[str, ...]]],
                     metadata: Optional[Metadata] = None) -> str:
        metadata = metadata or {}
        rows = []
        for linkage, clusters in partitions.items():
            for number, members in enumerate(clusters, start=1):
                for symbol in members:
                    info = metadata.get(symbol)
                    rows.append({
                        "linkage": linkage,
                        "cluster": number,
                        "symbol": symbol,
                        "continent": info.continent if info and info.continent else "",
                    })
        frame = pd.DataFrame(rows, columns=["linkage", "cluster", "symbol", "continent"])
        return _csv(frame, index=False)

    def mst_document(self, tree: SpanningTree,
                     report: Optional[BootstrapReport] = None,
                     metadata: Optional[Metadata] = None) -> dict:
        """JSON-ready MST description (schema: docs/schemas/mst.schema.json)."""
        metadata = metadata or {}
        degrees = self.tree_service.degree_profile(tree)
        nodes = []
        for index, symbol in enumerate(tree.symbols):
            info = metadata.get(symbol)
            nodes.append({
                "id": index,
                "symbol": symbol,
                "degree": degrees[index],
                "continent": info.continent if info else None,
                "name": info.name if info else None,
            })
        edges = [
            {
                "u": edge.u,
                "v": edge.v,
                "source": tree.symbols[edge.u],
                "target": tree.symbols[edge.v],
                "distance": edge.distance,
                "correlation": edge.correlation,
                "reliability": edge.reliability,
            }
            for edge in tree.edges
        ]
        return {
            "symbols": list(tree.symbols),
            "nodes": nodes,
            "edges": edges,
            "total_distance": self.tree_service.tree_length(tree),
            "hubs": [tree.symbols[node] for node in self.tree_service.hub_nodes(tree)],
            "bootstrap": None if report is None else {
                "replicas": report.replicas,
                "seed": report.seed,
                "dropped_replicas": report.dropped_replicas,
            },
        }

    def mst_json(self, tree: SpanningTree,
                 report: Optional[BootstrapReport] = None,
                 metadata: Optional[Metadata] = None) -> str:
        return to_json(self.mst_document(tree, report, metadata))
