from __future__ import annotations

import logging

from core.empirical import default_plan, greedy_cover_heuristic, packing_lower_estimate
from core.session_helpers import RunConfig
from persistence.file_handler import write_json

logger = logging.getLogger(__name__)


def run_empirical(config: RunConfig) -> None:
    """Write one PackingEstimate per eps, with the greedy cover heuristic alongside."""
    spec = config.load_kernel()
    estimates = []
    for eps in config.eps_grid.values():
        plan = default_plan(spec, eps, seed=config.seed)
        estimate = packing_lower_estimate(spec, eps, plan)
        entry = estimate.as_dict()
        entry["cover_heuristic"] = greedy_cover_heuristic(spec, eps, plan)
        estimates.append(entry)
        logger.info("eps=%.3g: packing %d, cover heuristic %d", eps, estimate.count, entry["cover_heuristic"])
    write_json({"kernel": spec.as_dict(), "estimates": estimates}, config.out_path)
