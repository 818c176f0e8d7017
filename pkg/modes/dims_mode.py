from __future__ import annotations

import logging

from core.errors import InvalidDimension, SchemaError
from core.manifold import iter_eigenspace_dims, make_manifold, parse_space_class
from core.presenter import print_table
from core.session_helpers import RunConfig
from persistence.file_handler import write_csv

logger = logging.getLogger(__name__)

COLUMNS = ["k", "tau", "dim_V"]


def dims_rows(space_class: str, d: int, k_max: int) -> list[dict]:
    """Rows (k, tau_k, dim V_k) for k = 0..k_max."""
    try:
        manifold = make_manifold(parse_space_class(space_class, "manifold"), d)
    except InvalidDimension as e:
        raise SchemaError("d", str(e)) from e
    rows, running = [], 0
    for k, tau in iter_eigenspace_dims(manifold, k_max):
        running += tau
        rows.append({"k": k, "tau": tau, "dim_V": running})
    return rows


def run_dims(config: RunConfig) -> None:
    """Print the eigenspace dimensions as a grid, or write them as CSV with --out."""
    if config.manifold is None or config.d is None:
        raise SchemaError("manifold", "dims needs --manifold and --d")
    rows = dims_rows(config.manifold, config.d, config.k_max)
    if config.out_path is None:
        print_table(rows, COLUMNS)
    else:
        write_csv(rows, COLUMNS, config.out_path)
