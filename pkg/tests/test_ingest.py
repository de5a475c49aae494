import logging
import math

import numpy as np
import pytest

from domain.entities import MissingDataPolicy, PriceTable
from domain.exceptions import DataValidationError, InputIOError
from domain.value_objects import IngestOptions


def test_load_three_row_csv(returns_service, write_csv):
    path = write_csv("prices.csv", "DATE,DEU,FRA\n1985-01,1.0,2.0\n1985-02,1.5,2.5\n1985-03,2.0,3.0\n")

    prices = returns_service.load_csv(path)

    assert prices.n_dates == 3
    assert prices.symbols == ("DEU", "FRA")
    assert not prices.missing.any()
    np.testing.assert_array_equal(prices.column("FRA"), [2.0, 2.5, 3.0])


def test_zero_and_blank_cells_are_missing(returns_service, write_csv, caplog):
    path = write_csv("prices.csv", "DATE,DEU,FRA\n1985-01,1.0,2.0\n1985-02,0,2.5\n1985-03,2.0,\n1985-04,2.2,3.1\n")

    with caplog.at_level(logging.WARNING):
        prices = returns_service.load_csv(path)

    np.testing.assert_array_equal(prices.missing, [[False, False], [True, False], [False, True], [False, False]])
    assert "Nonpositive price 0 at 1985-02 for DEU" in caplog.text


@pytest.mark.parametrize("body, message", [
    ("DATE,DEU,DEU\n1985-01,1,2\n1985-02,1,2\n1985-03,1,2\n", "Duplicate symbol header: DEU"),
    ("DATE,DEU,FRA\n1985-02,1,2\n1985-01,1,2\n1985-03,1,2\n", "Non-monotone dates"),
    ("DATE,DEU,FRA\n1985-01,1,2\n1985-01,1,2\n1985-03,1,2\n", "Duplicate date"),
    ("DATE,DEU,FRA\nJan 85,1,2\n1985-02,1,2\n1985-03,1,2\n", "Unparsable date"),
    ("DATE,DEU\n1985-01,1\n1985-02,1\n1985-03,1\n", "At least 2 symbols"),
    ("DATE,DEU,FRA\n1985-01,1,2\n1985-02,1,2\n", "At least 3 rows"),
    ("DATE,DEU,FRA\n1985-01,1,abc\n1985-02,1,2\n1985-03,1,2\n", "Unparsable price"),
])
def test_invalid_csv_rejected(returns_service, write_csv, body, message):
    path = write_csv("bad.csv", body)

    with pytest.raises(DataValidationError, match=message):
        returns_service.load_csv(path)


def test_row_requirement_grows_with_tau(returns_service, write_csv):
    path = write_csv("prices.csv", "DATE,A,B\n1985-01,1,2\n1985-02,1,3\n1985-03,2,2\n")

    with pytest.raises(DataValidationError, match="tau=2"):
        returns_service.load_csv(path, IngestOptions(tau=2))


def test_missing_file_is_io_error(returns_service, tmp_path):
    with pytest.raises(InputIOError):
        returns_service.load_csv(str(tmp_path / "nope.csv"))


def test_date_column_name_checked_when_given(returns_service, write_csv):
    path = write_csv("prices.csv", "MONTH,A,B\n1985-01,1,2\n1985-02,1,3\n1985-03,2,2\n")

    with pytest.raises(DataValidationError, match="'DATE'"):
        returns_service.load_csv(path, IngestOptions(date_column="DATE"))


def table(columns, dates=None, missing=None):
    values = np.column_stack(columns).astype(float)
    dates = dates or [f"{1990 + m // 12}-{m % 12 + 1:02d}" for m in range(values.shape[0])]
    missing = np.zeros(values.shape, dtype=bool) if missing is None else np.asarray(missing)
    return PriceTable(dates=dates, symbols=[f"X{i}" for i in range(values.shape[1])],
                      values=np.where(missing, 1.0, values), missing=missing)


def test_log_returns_of_powers_of_e(returns_service):
    prices = table([[1.0, math.e, math.e ** 2], [1.0, 2.0, 3.0]])

    returns = returns_service.compute_log_returns(prices)

    np.testing.assert_allclose(returns.rows[:, 0], [1.0, 1.0], rtol=0, atol=1e-15)
    assert returns.dates == ("1990-02", "1990-03")


def test_constant_prices_are_flagged(returns_service):
    prices = table([[100.0, 100.0, 100.0], [1.0, 2.0, 3.0]])

    returns = returns_service.compute_log_returns(prices)

    np.testing.assert_array_equal(returns.rows[:, 0], [0.0, 0.0])
    assert returns.zero_variance == ("X0",)


def test_log_returns_match_direct_recomputation(returns_service):
    rng = np.random.default_rng(7)
    values = rng.uniform(10.0, 200.0, size=(20, 3))

    returns = returns_service.compute_log_returns(table(list(values.T)))

    expected = np.log(values[1:]) - np.log(values[:-1])
    assert np.max(np.abs(returns.rows - expected)) <= 1e-12
    assert returns.dates[10:12] == ("1990-12", "1991-01")


def test_cumulative_returns_reconstruct_prices(returns_service):
    rng = np.random.default_rng(11)
    values = rng.uniform(1.0, 50.0, size=(30, 4))

    returns = returns_service.compute_log_returns(table(list(values.T)))

    rebuilt = np.exp(np.cumsum(returns.rows, axis=0))
    np.testing.assert_allclose(rebuilt, values[1:] / values[0], rtol=1e-10)


def test_tau_two_returns(returns_service):
    prices = table([[1.0, 2.0, 4.0, 8.0], [3.0, 1.0, 2.0, 5.0]])

    returns = returns_service.compute_log_returns(prices, tau=2)

    assert returns.n_rows == 2
    np.testing.assert_allclose(returns.rows[:, 0], [math.log(4.0), math.log(4.0)])


def test_listwise_deletion_drops_incomplete_months(returns_service):
    missing = np.zeros((5, 2), dtype=bool)
    missing[2, 1] = True
    prices = table([[1.0, 2.0, 3.0, 4.0, 5.0], [5.0, 4.0, 9.0, 2.0, 1.0]], missing=missing)

    returns = returns_service.compute_log_returns(prices)

    assert returns.dropped_dates == ("1990-03",)
    assert returns.n_rows == 3
    np.testing.assert_allclose(returns.rows[:, 0], np.diff(np.log([1.0, 2.0, 4.0, 5.0])))


def test_dropping_rows_first_gives_same_returns(returns_service):
    missing = np.zeros((6, 2), dtype=bool)
    missing[1, 0] = True
    missing[4, 1] = True
    prices = table([[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], [6.0, 3.0, 4.0, 2.0, 7.0, 1.0]], missing=missing)

    filtered, _ = returns_service.drop_incomplete_rows(prices)

    direct = returns_service.compute_log_returns(prices)
    prefiltered = returns_service.compute_log_returns(filtered)
    np.testing.assert_array_equal(direct.rows, prefiltered.rows)


def test_strict_policy_rejects_missing(returns_service):
    missing = np.zeros((3, 2), dtype=bool)
    missing[1, 1] = True
    prices = table([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]], missing=missing)

    with pytest.raises(DataValidationError, match="strict"):
        returns_service.compute_log_returns(prices, policy=MissingDataPolicy.STRICT)


def test_too_few_retained_months(returns_service):
    missing = np.zeros((3, 2), dtype=bool)
    missing[0, 0] = True
    missing[2, 1] = True
    prices = table([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]], missing=missing)

    with pytest.raises(DataValidationError, match="complete months"):
        returns_service.compute_log_returns(prices)


def test_drop_constant_columns(returns_service):
    prices = table([[1.0, 2.0, 3.0, 5.0], [7.0, 7.0, 7.0, 7.0], [4.0, 1.0, 2.0, 3.0]])
    returns = returns_service.compute_log_returns(prices)

    trimmed, flagged = returns_service.drop_constant_columns(returns)

    assert flagged == ("X1",)
    assert trimmed.symbols == ("X0", "X2")


def test_select_symbols_keeps_requested_order(returns_service):
    prices = table([[1.0, 2.0, 3.0], [3.0, 2.0, 1.0], [2.0, 2.5, 3.0]])

    selected = returns_service.select_symbols(prices, ["X2", "X0"])

    assert selected.symbols == ("X2", "X0")
    np.testing.assert_array_equal(selected.column("X2"), [2.0, 2.5, 3.0])
    with pytest.raises(DataValidationError, match="Unknown symbols: Q"):
        returns_service.select_symbols(prices, ["X0", "Q"])


def test_load_metadata(returns_service, write_csv):
    path = write_csv("meta.csv", "symbol,continent,name\nDEU,Europe,Germany\nJPN,Asia,\n")

    metadata = returns_service.load_metadata(path)

    assert metadata["DEU"].continent == "Europe"
    assert metadata["DEU"].name == "Germany"
    assert metadata["JPN"].name is None
