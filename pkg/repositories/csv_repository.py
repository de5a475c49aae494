"""
CSV repositories for wide monthly price tables and symbol metadata.

Price files look like::

    DATE,DEU,FRA,ITA
    1985-01,101.2,98.4,
    1985-02,102.0,97.9,55.1

An empty cell is a missing price; nonpositive prices are also treated as
missing because their logarithm is undefined.
"""
import logging
import os
from typing import Dict, Mapping

import numpy as np
import pandas as pd

import config
from domain.entities import PriceTable
from domain.exceptions import DataValidationError, InputIOError
from domain.value_objects import IngestOptions, SymbolInfo
from repositories.interfaces import IMetadataRepository, IPriceRepository

logger = logging.getLogger(__name__)


def _read_raw(path: str, **kwargs) -> pd.DataFrame:
    if not os.path.isfile(path):
        raise InputIOError(f"Input file does not exist: {path}")
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8", **kwargs)
    except pd.errors.EmptyDataError:
        raise DataValidationError(f"Input file is empty: {path}")
    except pd.errors.ParserError as e:
        raise DataValidationError(f"Malformed CSV {path}: {e}")
    except (OSError, UnicodeDecodeError) as e:
        raise InputIOError(f"Cannot read {path}: {e}")


class CsvPriceRepository(IPriceRepository):
    """pandas-backed reader and writer of wide price CSVs."""

    def load(self, path: str, options: IngestOptions) -> PriceTable:
        """Load a price CSV, marking empty and nonpositive cells as missing."""
        frame = _read_raw(path, header=None).fillna("")
        if frame.shape[0] < 1 or frame.shape[1] < 1:
            raise DataValidationError(f"Input file has no header: {path}")

        header = [cell.strip() for cell in frame.iloc[0]]
        if options.date_column is not None and header[0] != options.date_column:
            raise DataValidationError(
                f"First header cell must be {options.date_column!r}, got {header[0]!r}"
            )
        symbols = header[1:]
        seen = set()
        for symbol in symbols:
            if symbol in seen:
                raise DataValidationError(f"Duplicate symbol header: {symbol}")
            seen.add(symbol)
        if len(symbols) < 2:
            raise DataValidationError("At least 2 symbols are required")

        body = frame.iloc[1:]
        if len(body) < options.tau + 2:
            raise DataValidationError(
                f"At least {options.tau + 2} rows are required for tau={options.tau}, got {len(body)}"
            )

        dates = [cell.strip() for cell in body.iloc[:, 0]]
        cells = body.iloc[:, 1:].apply(lambda column: column.str.strip())
        numeric = cells.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
        blank = (cells == "").to_numpy()

        unparsable = np.isnan(numeric) & ~blank
        unparsable |= np.isinf(numeric)
        if unparsable.any():
            row, col = np.argwhere(unparsable)[0]
            raise DataValidationError(
                f"Unparsable price {cells.iat[row, col]!r} at {dates[row]} for {symbols[col]}"
            )

        nonpositive = ~blank & (numeric <= 0)
        for row, col in np.argwhere(nonpositive):
            logger.warning(
                "Nonpositive price %s at %s for %s marked missing",
                cells.iat[row, col], dates[row], symbols[col],
            )

        missing = blank | nonpositive
        values = np.where(missing, np.nan, numeric)
        prices = PriceTable(dates=dates, symbols=symbols, values=values, missing=missing)
        logger.info(
            "Loaded %d months x %d symbols from %s (%d missing cells)",
            prices.n_dates, prices.n_symbols, path, int(missing.sum()),
        )
        return prices

    def save(self, prices: PriceTable, path: str, date_column: str = config.DATE_COLUMN) -> str:
        """Write a price table; missing cells become empty."""
        frame = pd.DataFrame(
            np.where(prices.missing, np.nan, prices.values), columns=list(prices.symbols)
        )
        frame.insert(0, date_column, list(prices.dates))
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        frame.to_csv(path, index=False, na_rep="", lineterminator="\n")
        logger.info("Wrote %d months x %d symbols to %s", prices.n_dates, prices.n_symbols, path)
        return path


class CsvMetadataRepository(IMetadataRepository):
    """Sidecar metadata CSV with columns ``symbol,continent,name``."""

    COLUMNS = ("symbol", "continent", "name")

    def load(self, path: str) -> Dict[str, SymbolInfo]:
        frame = _read_raw(path).fillna("")
        frame.columns = [str(column).strip().lower() for column in frame.columns]
        if "symbol" not in frame.columns:
            raise DataValidationError(f"Metadata file {path} has no 'symbol' column")

        metadata: Dict[str, SymbolInfo] = {}
        for record in frame.to_dict(orient="records"):
            symbol = record["symbol"].strip()
            if symbol in metadata:
                raise DataValidationError(f"Duplicate metadata symbol: {symbol}")
            metadata[symbol] = SymbolInfo(
                symbol=symbol,
                continent=record.get("continent", "").strip() or None,
                name=record.get("name", "").strip() or None,
            )
        logger.info("Loaded metadata for %d symbols from %s", len(metadata), path)
        return metadata

    def save(self, metadata: Mapping[str, SymbolInfo], path: str) -> str:
        frame = pd.DataFrame(
            [[info.symbol, info.continent or "", info.name or ""] for info in metadata.values()],
            columns=list(self.COLUMNS),
        )
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator="\n")
        return path
