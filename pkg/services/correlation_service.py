"""
Correlation service: Pearson cross-correlations and the metric distance
d_ij = sqrt(2 (1 - c_ij)).
"""
import logging

import numpy as np

from domain.entities import CorrelationMatrix, DistanceMatrix, ReturnsMatrix
from domain.exceptions import DataValidationError, ZeroVarianceError

logger = logging.getLogger(__name__)


class CorrelationService:
    """Service computing correlation and distance matrices from returns."""

    def pearson_matrix(self, returns: ReturnsMatrix) -> CorrelationMatrix:
        """
        Time-averaged Pearson coefficients with population moments
        (division by T), clamped to [-1, 1].

        Every pair is summed with its own dot product over identical
        contiguous buffers, so a coefficient never depends on how many
        pairs or threads are computed alongside it, and two identical
        series correlate to exactly 1.
        """
        if returns.n_symbols < 2:
            raise DataValidationError("Correlation analysis needs at least 2 symbols")
        if returns.n_rows < 2:
            raise DataValidationError("Correlation analysis needs at least 2 rows")
        if returns.zero_variance:
            raise ZeroVarianceError(returns.zero_variance)

        n, t = returns.n_symbols, returns.n_rows
        centered = np.ascontiguousarray((returns.rows - returns.rows.mean(axis=0)).T)
        variance = np.array([np.dot(row, row) for row in centered]) / t
        if np.any(variance <= 0.0):
            raise ZeroVarianceError(
                [symbol for symbol, v in zip(returns.symbols, variance) if v <= 0.0]
            )

        c = np.eye(n)
        for i in range(n):
            for j in range(i + 1, n):
                covariance = np.dot(centered[i], centered[j]) / t
                c[i, j] = c[j, i] = covariance / np.sqrt(variance[i] * variance[j])
        np.clip(c, -1.0, 1.0, out=c)
        return CorrelationMatrix(symbols=returns.symbols, c=c)

    def correlation_to_distance(self, corr: CorrelationMatrix) -> DistanceMatrix:
        """d = sqrt(2 (1 - c)) with an exact zero diagonal."""
        d = np.sqrt(2.0 * (1.0 - corr.c))
        np.fill_diagonal(d, 0.0)
        return DistanceMatrix(symbols=corr.symbols, d=d, correlation=corr)

    def distance_from_returns(self, returns: ReturnsMatrix) -> DistanceMatrix:
        return self.correlation_to_distance(self.pearson_matrix(returns))
