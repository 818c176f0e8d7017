"""Tests for core.presenter.as_rows and format_value."""

import pytest

from core.presenter import as_rows, format_value


@pytest.mark.parametrize(
    "value, expected",
    [(None, ""), (3, "3"), (0.5, "0.5"), (1.0 / 3.0, "0.333333333333"), ("sphere", "sphere")],
)
def test_format_value(value, expected):
    """Floats use 12 significant digits, None renders empty."""
    assert format_value(value) == expected


def test_as_rows_grid_layout():
    """Headers come first, one grid row per record, in column order."""
    lines = as_rows([{"k": 0, "tau": 1, "dim_V": 1}, {"k": 1, "tau": 3, "dim_V": 4}], ["k", "tau", "dim_V"])
    assert lines[0].startswith("+")
    header = lines[1]
    assert header.index("k") < header.index("tau") < header.index("dim_V")
    body = [line for line in lines if line.startswith("|")][1:]
    assert len(body) == 2
    assert "3" in body[1] and "4" in body[1]


def test_as_rows_keeps_big_integers():
    """Large exact integers are printed without float conversion."""
    lines = as_rows([{"n": 12345678901234567890}], ["n"])
    assert any("12345678901234567890" in line for line in lines)
