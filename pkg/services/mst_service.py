"""
Spanning tree service: Kruskal's minimal spanning tree over a distance
matrix, plus the tree queries used by the taxonomy reports.
"""
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from domain.entities import DistanceMatrix, SpanningTree, TreeEdge
from domain.exceptions import InvalidArgumentError
from services.union_find import UnionFind

logger = logging.getLogger(__name__)


class SpanningTreeService:
    """Service building minimal spanning trees and answering tree queries."""

    def kruskal_mst(self, dist: DistanceMatrix) -> SpanningTree:
        """
        Kruskal's algorithm. Candidate edges are scanned in (distance, u, v)
        order, so equal distances always resolve to the same tree.
        """
        n = dist.size
        u_index, v_index = np.triu_indices(n, k=1)
        weights = dist.d[u_index, v_index]
        order = np.lexsort((v_index, u_index, weights))
        correlations = dist.correlation.c if dist.correlation is not None else None

        components = UnionFind(n)
        edges: List[TreeEdge] = []
        for k in order:
            if len(edges) == n - 1:
                break
            u, v = int(u_index[k]), int(v_index[k])
            if not components.unite(u, v):
                continue
            distance = float(weights[k])
            if correlations is not None:
                correlation = float(correlations[u, v])
            else:
                correlation = 1.0 - distance * distance / 2.0
            edges.append(TreeEdge(u=u, v=v, distance=distance, correlation=correlation))

        tree = SpanningTree(symbols=dist.symbols, edges=tuple(edges))
        logger.debug("Built MST on %d nodes, length %.6f", n, tree.total_distance)
        return tree

    def tree_path_max(self, tree: SpanningTree, i: int, j: int) -> float:
        """Largest edge distance on the unique tree path between i and j."""
        for node in (i, j):
            if not 0 <= node < tree.size:
                raise InvalidArgumentError(f"Node index {node} out of range 0..{tree.size - 1}")
        if i == j:
            raise InvalidArgumentError("Path endpoints must differ")

        adjacency = tree.adjacency()
        stack = [(i, -1, 0.0)]
        while stack:
            node, parent, largest = stack.pop()
            if node == j:
                return largest
            for neighbor, edge in adjacency[node]:
                if neighbor != parent:
                    stack.append((neighbor, node, max(largest, edge.distance)))
        raise InvalidArgumentError(f"No path between {i} and {j}")

    def path_max_matrix(self, tree: SpanningTree) -> np.ndarray:
        """tree_path_max for every pair at once (zero diagonal)."""
        adjacency = tree.adjacency()
        result = np.zeros((tree.size, tree.size))
        for source in range(tree.size):
            stack = [(source, -1, 0.0)]
            while stack:
                node, parent, largest = stack.pop()
                result[source, node] = largest
                for neighbor, edge in adjacency[node]:
                    if neighbor != parent:
                        stack.append((neighbor, node, max(largest, edge.distance)))
        return result

    def degree_profile(self, tree: SpanningTree) -> Dict[int, int]:
        degrees = {node: 0 for node in range(tree.size)}
        for edge in tree.edges:
            degrees[edge.u] += 1
            degrees[edge.v] += 1
        return degrees

    def tree_length(self, tree: SpanningTree) -> float:
        return tree.total_distance

    def hub_nodes(self, tree: SpanningTree) -> List[int]:
        """Nodes of maximal degree, ascending."""
        degrees = self.degree_profile(tree)
        top = max(degrees.values())
        return [node for node, degree in degrees.items() if degree == top]

    def strongest_links(self, tree: SpanningTree, count: Optional[int] = None) -> List[TreeEdge]:
        """Edges by increasing distance (strongest correlation first)."""
        ranked = sorted(tree.edges, key=lambda edge: (edge.distance, edge.u, edge.v))
        return ranked if count is None else ranked[:count]

    def cut_largest_edges(self, tree: SpanningTree, k: int) -> List[Tuple[str, ...]]:
        """Partition the nodes into k components by deleting the k-1 longest edges."""
        if not 1 <= k <= tree.size:
            raise InvalidArgumentError(f"k must lie in 1..{tree.size}, got {k}")
        kept = self.strongest_links(tree)[: tree.size - k]
        components = UnionFind(tree.size)
        for edge in kept:
            components.unite(edge.u, edge.v)

        groups: Dict[int, List[int]] = {}
        for node in range(tree.size):
            groups.setdefault(components.find(node), []).append(node)
        ordered = sorted(groups.values(), key=lambda members: members[0])
        return [tuple(tree.symbols[node] for node in members) for members in ordered]
