from __future__ import annotations

from core.bounds import BoundCurve, bound_curve
from core.session_helpers import RunConfig
from persistence.file_handler import write_csv


def run_bounds(config: RunConfig) -> None:
    """Write the certified bound curve over the eps grid."""
    spec = config.load_kernel()
    curve = bound_curve(spec, config.eps_grid.values(), config.m_max)
    write_csv(curve.rows(), BoundCurve.COLUMNS, config.out_path)
