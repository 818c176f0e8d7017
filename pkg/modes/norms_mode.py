from __future__ import annotations

from core.errors import Unsupported
from core.kernels import embedding_norm, partial_norm, tail_bound, tail_norm
from core.session_helpers import RunConfig
from persistence.file_handler import write_csv

COLUMNS = ["m", "kappa", "kappa_m", "kappa_m_tail", "tail_bound"]


def run_norms(config: RunConfig) -> None:
    """Write kappa, kappa_m, kappa_m^s and the closed-form tail bound for m = 0..M.

    tail_bound is left empty for models without a closed-form envelope.
    """
    spec = config.load_kernel()
    kappa = embedding_norm(spec)
    rows = []
    for m in range(config.m + 1):
        try:
            bound = tail_bound(spec, m)
        except Unsupported:
            bound = None
        rows.append({
            "m": m,
            "kappa": kappa,
            "kappa_m": partial_norm(spec, m),
            "kappa_m_tail": tail_norm(spec, m),
            "tail_bound": bound,
        })
    write_csv(rows, COLUMNS, config.out_path)
