"""
Synthetic service: planted block-correlation datasets and brute-force
oracles for spanning trees and subdominant ultrametrics.

Block model construction, per series i in block B:

    x_i(t) = a g(t) + b f_B(t) + c e_i(t),   a^2 = inter, a^2 + b^2 = intra, a^2 + b^2 + c^2 = 1

with independent standard normal g, f_B, e_i drawn from numpy's PCG64
generator seeded with ``BlockSpec.seed``.
"""
import itertools
import logging
from functools import lru_cache
from typing import List, Tuple

import numpy as np

import config
from domain.entities import (
    DistanceMatrix, PriceTable, ReturnsMatrix, SpanningTree, TreeEdge, UltrametricMatrix,
)
from domain.exceptions import InvalidArgumentError
from domain.value_objects import BlockSpec

logger = logging.getLogger(__name__)


def prufer_decode(sequence: Tuple[int, ...], n: int) -> List[Tuple[int, int]]:
    """Edges (u < v) of the labeled tree encoded by a Prüfer sequence."""
    degree = [1] * n
    for node in sequence:
        degree[node] += 1
    edges = []
    for node in sequence:
        leaf = degree.index(1)
        edges.append((min(leaf, node), max(leaf, node)))
        degree[leaf] -= 1
        degree[node] -= 1
    remaining = [node for node in range(n) if degree[node] == 1]
    if len(remaining) == 2:
        edges.append((remaining[0], remaining[1]))
    return edges


@lru_cache(maxsize=None)
def enumerate_labeled_trees(n: int) -> np.ndarray:
    """All n^(n-2) labeled trees on n nodes, shape (count, n - 1, 2)."""
    if n < 1:
        raise InvalidArgumentError("At least one node is required")
    if n == 1:
        trees = np.zeros((1, 0, 2), dtype=int)
    else:
        trees = np.array(
            [prufer_decode(sequence, n) for sequence in itertools.product(range(n), repeat=n - 2)],
            dtype=int,
        )
    trees.setflags(write=False)
    return trees


class SyntheticService:
    """Service for planted datasets and brute-force reference answers."""

    def __init__(self, max_nodes: int = config.MAX_BRUTE_FORCE_NODES):
        self.max_nodes = max_nodes

    def target_correlation(self, spec: BlockSpec) -> np.ndarray:
        """Block-constant correlation matrix implied by a spec."""
        labels = np.array(spec.labels)
        same_block = labels[:, None] == labels[None, :]
        target = np.where(same_block, spec.intra_rho, spec.inter_rho)
        np.fill_diagonal(target, 1.0)
        return target

    def generate_block_model(self, spec: BlockSpec) -> ReturnsMatrix:
        """Draw spec.rows x N returns with the planted block correlation."""
        if np.linalg.eigvalsh(self.target_correlation(spec)).min() < -1e-12:
            raise InvalidArgumentError(
                f"Infeasible correlations intra={spec.intra_rho}, inter={spec.inter_rho}: "
                "target matrix is not positive semidefinite"
            )
        if spec.inter_rho > spec.intra_rho:
            raise InvalidArgumentError(
                "The factor construction needs intra_rho >= inter_rho"
            )

        global_weight = np.sqrt(spec.inter_rho)
        block_weight = np.sqrt(spec.intra_rho - spec.inter_rho)
        noise_weight = np.sqrt(1.0 - spec.intra_rho)

        rng = np.random.default_rng(spec.seed)
        global_factor = rng.standard_normal(spec.rows)
        block_factors = rng.standard_normal((spec.rows, len(spec.blocks)))
        noise = rng.standard_normal((spec.rows, spec.size))

        block_of = np.repeat(np.arange(len(spec.blocks)), [size for _, size in spec.blocks])
        draws = (global_weight * global_factor[:, None]
                 + block_weight * block_factors[:, block_of]
                 + noise_weight * noise)
        logger.info("Generated %d x %d block-model returns (seed=%d)", spec.rows, spec.size, spec.seed)
        return ReturnsMatrix(symbols=spec.symbols, rows=spec.volatility * draws, tau=1)

    def prices_from_returns(self, returns: ReturnsMatrix, start_price: float = 100.0,
                            start_month: str = "1985-01") -> PriceTable:
        """Prices P(t) = start * exp(cumulative returns), one month apart."""
        log_prices = np.vstack([np.zeros(returns.n_symbols), np.cumsum(returns.rows, axis=0)])
        values = start_price * np.exp(log_prices)
        year, month = (int(part) for part in start_month.split("-"))
        dates = []
        for offset in range(values.shape[0]):
            index = month - 1 + offset
            dates.append(f"{year + index // 12:04d}-{index % 12 + 1:02d}")
        return PriceTable(
            dates=dates, symbols=returns.symbols, values=values,
            missing=np.zeros(values.shape, dtype=bool),
        )

    def _check_size(self, dist: DistanceMatrix) -> None:
        if dist.size > self.max_nodes:
            raise InvalidArgumentError(
                f"Brute force is limited to {self.max_nodes} nodes, got {dist.size}"
            )

    def brute_force_mst(self, dist: DistanceMatrix) -> SpanningTree:
        """Minimum spanning tree by scoring every labeled tree."""
        self._check_size(dist)
        trees = enumerate_labeled_trees(dist.size)
        totals = dist.d[trees[..., 0], trees[..., 1]].sum(axis=1)
        best = trees[int(np.argmin(totals))]

        edges = []
        for u, v in sorted(best.tolist(), key=lambda pair: (dist.d[pair[0], pair[1]], pair)):
            distance = float(dist.d[u, v])
            if dist.correlation is not None:
                correlation = float(dist.correlation.c[u, v])
            else:
                correlation = 1.0 - distance * distance / 2.0
            edges.append(TreeEdge(u=u, v=v, distance=distance, correlation=correlation))
        return SpanningTree(symbols=dist.symbols, edges=tuple(edges))

    def brute_force_subdominant(self, dist: DistanceMatrix) -> UltrametricMatrix:
        """Minimax path distance over every simple path of the complete graph."""
        self._check_size(dist)
        n = dist.size
        u = np.zeros((n, n))
        for i, j in itertools.combinations(range(n), 2):
            others = [node for node in range(n) if node not in (i, j)]
            best = np.inf
            for length in range(len(others) + 1):
                for middle in itertools.permutations(others, length):
                    path = (i,) + middle + (j,)
                    best = min(best, max(dist.d[a, b] for a, b in zip(path, path[1:])))
            u[i, j] = u[j, i] = best
        return UltrametricMatrix(symbols=dist.symbols, u=u)
