from __future__ import annotations

import logging
import math
from typing import Optional

from core.bounds import (
    AsymptoticReport,
    Regime,
    asymptotic_constant,
    default_regimes,
    lower_bound_lnC,
    upper_bound_lnC,
)
from core.empirical import default_plan, feature_dim_fits, packing_lower_estimate
from core.kernels import KernelSpec
from core.manifold import SpaceClass
from core.session_helpers import RunConfig
from persistence.file_handler import write_csv

logger = logging.getLogger(__name__)

COLUMNS = ["eps", "ln_upper", "ln_lower", "upper_ratio", "lower_ratio", "packing_ln"]


def _report_for(spec: KernelSpec, candidates: tuple[Regime, ...]) -> Optional[AsymptoticReport]:
    regimes = default_regimes(spec)
    for regime in candidates:
        if regime in regimes:
            return asymptotic_constant(spec, regime)
    return None


def _ratio(value: float, report: Optional[AsymptoticReport], eps: float) -> Optional[float]:
    if report is None or not eps < 1:
        return None
    return (value - report.offset) / report.comparison(eps)


def run_report(config: RunConfig) -> None:
    """Write certified bounds, their ratios to the asymptotic comparison functions and,
    on S^1 and S^2, the empirical packing evidence, one row per eps.
    """
    spec = config.load_kernel()
    upper_report = _report_for(spec, (Regime.GEOMETRIC_UPPER, Regime.POWER_UPPER))
    lower_report = _report_for(spec, (Regime.GEOMETRIC_LOWER, Regime.POWER_LOWER))
    empirical = spec.manifold.space_class is SpaceClass.SPHERE and spec.manifold.d <= 2

    rows = []
    for eps in config.eps_grid.values():
        ln_upper, _ = upper_bound_lnC(spec, eps)
        ln_lower, _ = lower_bound_lnC(spec, eps, config.m_max)
        packing_ln = None
        if empirical:
            plan = default_plan(spec, eps, seed=config.seed)
            if feature_dim_fits(spec, plan):
                packing_ln = math.log(packing_lower_estimate(spec, eps, plan).count)
            else:
                logger.info("eps=%.3g: level %d is too large for a packing estimate", eps, plan.m)
        rows.append({
            "eps": eps,
            "ln_upper": ln_upper,
            "ln_lower": ln_lower,
            "upper_ratio": _ratio(ln_upper, upper_report, eps),
            "lower_ratio": _ratio(ln_lower, lower_report, eps),
            "packing_ln": packing_ln,
        })
    write_csv(rows, COLUMNS, config.out_path)
