"""
Hierarchy service: single-linkage (subdominant ultrametric) and
average-linkage (UPGMA) hierarchical trees, cophenetic matrices and cuts.
"""
import logging
from typing import List, Tuple

import numpy as np

from domain.entities import Dendrogram, DistanceMatrix, Linkage, MergeStep, UltrametricMatrix
from domain.exceptions import DataValidationError, InvalidArgumentError

logger = logging.getLogger(__name__)


class HierarchyService:
    """Service for agglomerative hierarchical trees."""

    def single_linkage(self, dist: DistanceMatrix) -> Dendrogram:
        """Cluster distance = smallest cross-pair distance."""
        return self.build(dist, Linkage.SINGLE)

    def average_linkage(self, dist: DistanceMatrix) -> Dendrogram:
        """Cluster distance = mean of all cross-pair distances (UPGMA)."""
        return self.build(dist, Linkage.AVERAGE)

    def build(self, dist: DistanceMatrix, linkage: Linkage) -> Dendrogram:
        """
        Naive agglomeration over an N x N working matrix.

        Row/column ``s`` of the working matrix always holds the cluster whose
        smallest member is leaf ``s``, so scanning the upper triangle in row
        order and taking the first minimum merges, among equally distant
        pairs, the one with the smallest (min-member, second min-member).
        Average linkage keeps exact cross-pair distance sums and sizes.
        """
        n = dist.size
        if n < 2:
            raise DataValidationError("A hierarchical tree needs at least 2 symbols")

        working = np.array(dist.d, dtype=float)
        sums = working.copy()
        sizes = np.ones(n)
        cluster_ids = list(range(n))
        active = np.ones(n, dtype=bool)

        merges: List[MergeStep] = []
        previous = 0.0
        for step in range(n - 1):
            slots = np.flatnonzero(active)
            rows, cols = np.triu_indices(len(slots), k=1)
            values = working[slots[rows], slots[cols]]
            best = int(np.argmin(values))
            a, b = int(slots[rows[best]]), int(slots[cols[best]])
            # UPGMA is monotone; rounding must not create an inversion
            height = max(float(values[best]), previous)

            sizes[a] += sizes[b]
            if linkage is Linkage.SINGLE:
                merged = np.minimum(working[a], working[b])
            else:
                sums[a] += sums[b]
                sums[:, a] = sums[a]
                merged = sums[a] / (sizes[a] * sizes)
            working[a] = merged
            working[:, a] = merged
            working[a, a] = 0.0

            merges.append(MergeStep(
                left=cluster_ids[a],
                right=cluster_ids[b],
                height=height,
                new_id=n + step,
                size=int(sizes[a]),
            ))
            cluster_ids[a] = n + step
            active[b] = False
            previous = height

        dendrogram = Dendrogram(symbols=dist.symbols, merges=tuple(merges), linkage=linkage)
        logger.debug("Built %s-linkage tree on %d leaves", linkage.value, n)
        return dendrogram

    def cophenetic_matrix(self, dendro: Dendrogram) -> UltrametricMatrix:
        """u[i][j] = height of the lowest merge joining leaves i and j."""
        members = dendro.members()
        u = np.zeros((dendro.size, dendro.size))
        for merge in dendro.merges:
            left, right = list(members[merge.left]), list(members[merge.right])
            u[np.ix_(left, right)] = merge.height
            u[np.ix_(right, left)] = merge.height
        return UltrametricMatrix(symbols=dendro.symbols, u=u)

    def cut_clusters(self, dendro: Dendrogram, k: int) -> List[Tuple[str, ...]]:
        """The k clusters left after undoing the last k-1 merges."""
        n = dendro.size
        if not 1 <= k <= n:
            raise InvalidArgumentError(f"k must lie in 1..{n}, got {k}")
        members = dendro.members()
        roots = set(range(n))
        for merge in dendro.merges[: n - k]:
            roots -= {merge.left, merge.right}
            roots.add(merge.new_id)
        clusters = sorted((members[root] for root in roots), key=lambda leaves: leaves[0])
        return [tuple(dendro.symbols[leaf] for leaf in leaves) for leaves in clusters]
