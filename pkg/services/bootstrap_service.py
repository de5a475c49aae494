"""
Bootstrap service: statistical reliability of minimal spanning tree links.

Each replica resamples the time rows of the returns matrix with replacement,
rebuilds correlation -> distance -> MST with the same tie-break, and records
which reference links it preserves.
"""
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import FrozenSet, Optional, Tuple

import numpy as np

from domain.entities import BootstrapReport, ReturnsMatrix, SpanningTree
from domain.exceptions import InvalidArgumentError, NumericalError, ZeroVarianceError
from services.correlation_service import CorrelationService
from services.mst_service import SpanningTreeService

logger = logging.getLogger(__name__)


class BootstrapService:
    """Service computing bootstrap link-reliability values."""

    def __init__(self, correlation_service: CorrelationService,
                 tree_service: SpanningTreeService, workers: int = 1):
        self.correlation_service = correlation_service
        self.tree_service = tree_service
        self.workers = workers

    @staticmethod
    def replica_rng(seed: int, replica: int) -> np.random.Generator:
        """Independent PCG64 stream for one replica, derived from (seed, replica)."""
        sequence = np.random.SeedSequence(entropy=seed % 2**64, spawn_key=(replica,))
        return np.random.default_rng(sequence)

    def resample_rows(self, returns: ReturnsMatrix, rng) -> ReturnsMatrix:
        """Draw T rows uniformly with replacement, keeping each row intact."""
        picks = np.asarray(rng.integers(0, returns.n_rows, size=returns.n_rows))
        return ReturnsMatrix(symbols=returns.symbols, rows=returns.rows[picks], tau=returns.tau)

    def _replica_links(self, returns: ReturnsMatrix, seed: int,
                       replica: int) -> Optional[FrozenSet[Tuple[int, int]]]:
        sample = self.resample_rows(returns, self.replica_rng(seed, replica))
        try:
            dist = self.correlation_service.distance_from_returns(sample)
        except ZeroVarianceError as e:
            logger.debug("Replica %d dropped: %s", replica, e)
            return None
        return self.tree_service.kruskal_mst(dist).edge_pairs

    def link_reliability(self, returns: ReturnsMatrix, replicas: int, seed: int,
                         workers: Optional[int] = None) -> Tuple[SpanningTree, BootstrapReport]:
        """
        Reference MST of the full sample annotated with the fraction of
        non-dropped replicas whose MST contains each of its links.
        """
        if replicas < 1:
            raise InvalidArgumentError("replicas must be at least 1")
        workers = workers or self.workers

        reference = self.tree_service.kruskal_mst(
            self.correlation_service.distance_from_returns(returns)
        )
        reference_links = reference.edge_pairs

        task = partial(self._replica_links, returns, seed)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(task, range(replicas)))
        else:
            outcomes = [task(replica) for replica in range(replicas)]

        counts: Counter = Counter()
        dropped = 0
        for links in outcomes:
            if links is None:
                dropped += 1
            else:
                counts.update(links & reference_links)

        if dropped == replicas:
            raise NumericalError(f"All {replicas} bootstrap replicas had a constant series")
        if dropped:
            logger.warning("Dropped %d of %d replicas with a constant series", dropped, replicas)

        effective = replicas - dropped
        fractions = {pair: counts[pair] / effective for pair in sorted(reference_links)}
        report = BootstrapReport(
            replicas=replicas, seed=seed, link_fractions=fractions, dropped_replicas=dropped,
        )
        logger.info("Bootstrap finished: %d replicas, %d dropped, %d workers",
                    replicas, dropped, workers)
        return reference.with_reliability(fractions), report
