from __future__ import annotations

from typing import Any, Dict, Iterable, Sequence

from tabulate import tabulate

from config import SIGNIFICANT_DIGITS


def format_value(value: Any) -> str:
    """Render one cell: floats with SIGNIFICANT_DIGITS digits, None as empty."""
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def as_rows(rows: Iterable[Dict[str, Any]], columns: Sequence[str]) -> list[str]:
    """Return a grid-formatted table (split into lines) of the given columns."""
    rows_data = [[format_value(row.get(column)) for column in columns] for row in rows]
    table = tabulate(rows_data, headers=list(columns), tablefmt="grid", disable_numparse=True)
    return table.splitlines()


def print_table(rows: Iterable[Dict[str, Any]], columns: Sequence[str]) -> None:
    """Print as_rows to the console."""
    for line in as_rows(rows, columns):
        print(line)
