"""
Returns service: loads price tables and turns them into aligned log returns.
"""
import logging
from typing import Dict, Sequence, Tuple

import numpy as np

from domain.entities import MissingDataPolicy, PriceTable, ReturnsMatrix
from domain.exceptions import DataValidationError
from domain.value_objects import IngestOptions, SymbolInfo
from repositories.interfaces import IMetadataRepository, IPriceRepository

logger = logging.getLogger(__name__)


class ReturnsService:
    """Service for price ingestion and log-return computation."""

    def __init__(self, price_repo: IPriceRepository, metadata_repo: IMetadataRepository):
        self.price_repo = price_repo
        self.metadata_repo = metadata_repo

    def load_csv(self, path: str, options: IngestOptions = IngestOptions()) -> PriceTable:
        """Load and validate a wide price CSV."""
        return self.price_repo.load(path, options)

    def load_metadata(self, path: str) -> Dict[str, SymbolInfo]:
        """Load the optional ``symbol,continent,name`` sidecar."""
        return self.metadata_repo.load(path)

    def select_symbols(self, prices: PriceTable, symbols: Sequence[str]) -> PriceTable:
        """Restrict a table to the given symbols, keeping their requested order."""
        if not symbols:
            return prices
        unknown = [symbol for symbol in symbols if symbol not in prices.symbols]
        if unknown:
            raise DataValidationError("Unknown symbols: " + ", ".join(unknown))
        if len(symbols) < 2:
            raise DataValidationError("At least 2 symbols are required")
        columns = [prices.symbols.index(symbol) for symbol in symbols]
        return PriceTable(
            dates=prices.dates,
            symbols=tuple(symbols),
            values=prices.values[:, columns],
            missing=prices.missing[:, columns],
        )

    def drop_incomplete_rows(self, prices: PriceTable) -> Tuple[PriceTable, Tuple[str, ...]]:
        """Listwise deletion: drop every month with at least one missing price."""
        incomplete = prices.missing.any(axis=1)
        if not incomplete.any():
            return prices, ()
        dropped = tuple(date for date, flag in zip(prices.dates, incomplete) if flag)
        keep = ~incomplete
        retained = PriceTable(
            dates=tuple(date for date, flag in zip(prices.dates, keep) if flag),
            symbols=prices.symbols,
            values=prices.values[keep],
            missing=prices.missing[keep],
        )
        logger.info("Dropped %d incomplete months: %s", len(dropped), ", ".join(dropped))
        return retained, dropped

    def compute_log_returns(self, prices: PriceTable, tau: int = 1,
                            policy: MissingDataPolicy = MissingDataPolicy.LISTWISE) -> ReturnsMatrix:
        """rows[t][i] = ln P_i(t + tau) - ln P_i(t) over the retained months."""
        if tau < 1:
            raise DataValidationError("tau must be at least 1")
        if policy is MissingDataPolicy.STRICT and prices.missing.any():
            row, col = np.argwhere(prices.missing)[0]
            raise DataValidationError(
                f"Missing price at {prices.dates[row]} for {prices.symbols[col]} (strict policy)"
            )

        retained, dropped = self.drop_incomplete_rows(prices)
        if retained.n_dates <= tau:
            raise DataValidationError(
                f"Only {retained.n_dates} complete months remain, need more than tau={tau}"
            )

        logs = np.log(retained.values)
        returns = ReturnsMatrix(
            symbols=retained.symbols,
            rows=logs[tau:] - logs[:-tau],
            tau=tau,
            dates=retained.dates[tau:],
            dropped_dates=dropped,
        )
        if returns.zero_variance:
            logger.warning("Constant return series: %s", ", ".join(returns.zero_variance))
        logger.info("Computed %d x %d log returns (tau=%d)", returns.n_rows, returns.n_symbols, tau)
        return returns

    def drop_constant_columns(self, returns: ReturnsMatrix) -> Tuple[ReturnsMatrix, Tuple[str, ...]]:
        """Remove zero-variance series so correlations are defined."""
        flagged = returns.zero_variance
        if not flagged:
            return returns, ()
        keep = [i for i, symbol in enumerate(returns.symbols) if symbol not in flagged]
        if not keep:
            raise DataValidationError("Every return series is constant")
        logger.warning("Dropping constant series: %s", ", ".join(flagged))
        trimmed = ReturnsMatrix(
            symbols=tuple(returns.symbols[i] for i in keep),
            rows=returns.rows[:, keep],
            tau=returns.tau,
            dates=returns.dates,
            dropped_dates=returns.dropped_dates,
        )
        return trimmed, flagged
