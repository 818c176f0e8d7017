from __future__ import annotations

from core.kernels import coefficient
from core.session_helpers import RunConfig
from persistence.file_handler import write_csv

COLUMNS = ["k", "a_k"]


def run_coeffs(config: RunConfig) -> None:
    """Write a_k for k = 0..k_max."""
    spec = config.load_kernel()
    rows = [{"k": k, "a_k": coefficient(spec, k)} for k in range(config.k_max + 1)]
    write_csv(rows, COLUMNS, config.out_path)
