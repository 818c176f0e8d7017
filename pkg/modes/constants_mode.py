from __future__ import annotations

import logging

from core.bounds import Regime, asymptotic_constant, default_regimes
from core.errors import HypothesisNotCertified, SchemaError
from core.session_helpers import RunConfig
from persistence.file_handler import write_json

logger = logging.getLogger(__name__)


def select_regimes(spec, regime: str | None) -> list[Regime]:
    """The --regime override, or every regime the model fits."""
    if regime is not None:
        try:
            return [Regime(regime)]
        except ValueError:
            allowed = "|".join(member.value for member in Regime)
            raise SchemaError("regime", f"expected one of {allowed}") from None
    regimes = default_regimes(spec)
    if not regimes:
        raise HypothesisNotCertified(f"no asymptotic regime applies to {spec.model.type}")
    return regimes


def run_constants(config: RunConfig) -> None:
    """Write one AsymptoticReport per selected regime."""
    spec = config.load_kernel()
    reports = [asymptotic_constant(spec, regime) for regime in select_regimes(spec, config.regime)]
    write_json(
        {"kernel": spec.as_dict(), "reports": [report.as_dict() for report in reports]},
        config.out_path,
    )
