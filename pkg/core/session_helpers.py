"""Run configuration shared by the CLI modes.

RunConfig carries everything a command needs: the kernel file, the eps grid,
the output path and the seed, plus the few command-specific options. It is
built once by main.py and handed to the mode runner.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from config import DEFAULT_EPS_COUNT, DEFAULT_EPS_MAX, DEFAULT_EPS_MIN, DEFAULT_SEED
from core.errors import SchemaError
from core.kernels import KernelSpec
from persistence.file_handler import load_kernel_spec

logger = logging.getLogger(__name__)

COMMANDS = ("dims", "coeffs", "norms", "bounds", "constants", "gaussian", "empirical", "report")


@dataclass(frozen=True)
class EpsGrid:
    """Geometric grid of count radii from min to max, both included."""

    min: float = DEFAULT_EPS_MIN
    max: float = DEFAULT_EPS_MAX
    count: int = DEFAULT_EPS_COUNT
    scale: str = "log"

    def __post_init__(self) -> None:
        if not self.min > 0:
            raise SchemaError("eps_grid.min", "must be positive")
        if not self.min < self.max:
            raise SchemaError("eps_grid.max", "must exceed eps_grid.min")
        if self.count < 2:
            raise SchemaError("eps_grid.count", "must be at least 2")
        if self.scale != "log":
            raise SchemaError("eps_grid.scale", "only 'log' is supported")

    def values(self) -> List[float]:
        """Grid points in increasing order."""
        return [float(eps) for eps in np.geomspace(self.min, self.max, self.count)]

    def as_dict(self) -> Dict[str, Any]:
        return {"min": self.min, "max": self.max, "count": self.count, "scale": self.scale}


@dataclass
class RunConfig:
    """One CLI invocation.

    Attributes:
    - command: one of COMMANDS.
    - kernel_path: KernelSpec JSON file (every command but dims).
    - eps_grid: radii for bounds, empirical and report.
    - out_path: output file; None writes to stdout.
    - seed: seed for the empirical commands.
    - manifold, d: the space for dims.
    - k_max: table length for dims, coeffs and gaussian.
    - m: largest truncation level listed by norms.
    - m_max: scan ceiling for lower bounds (None uses the model default).
    - regime: constants regime override (None auto-selects).
    """

    command: str
    kernel_path: Optional[str] = None
    eps_grid: EpsGrid = field(default_factory=EpsGrid)
    out_path: Optional[str] = None
    seed: int = DEFAULT_SEED
    manifold: Optional[str] = None
    d: Optional[int] = None
    k_max: int = 20
    m: int = 10
    m_max: Optional[int] = None
    regime: Optional[str] = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise SchemaError("command", f"expected one of {'|'.join(COMMANDS)}")
        if self.command != "dims" and not self.kernel_path:
            raise SchemaError("config", "a kernel file is required")
        if self.k_max < 0:
            raise SchemaError("k_max", "must be non-negative")
        if self.m < 0:
            raise SchemaError("m", "must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise SchemaError("seed", "must be an unsigned 64-bit integer")

    def load_kernel(self) -> KernelSpec:
        """Read and validate the kernel file."""
        spec = load_kernel_spec(self.kernel_path)
        logger.info("loaded %s kernel on %s from %s", spec.model.type, spec.manifold.label, self.kernel_path)
        return spec
