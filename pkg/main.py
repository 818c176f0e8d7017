"""Command-line entry point: one subcommand per mode.

    python main.py dims --manifold sphere --d 2 --k-max 10
    python main.py bounds --config data/kernels/geometric_s2.json --out bounds.csv

Exit status: 0 on success, 1 on I/O failure, 2 on invalid input, 3 on
numerical failure. Diagnostics go to stderr as "<ErrorName>: message".
"""

from __future__ import annotations

import argparse
import functools
import logging
import sys
from typing import Callable, Dict, Optional, Sequence

from config import DEFAULT_EPS_COUNT, DEFAULT_EPS_MAX, DEFAULT_EPS_MIN, DEFAULT_SEED, LOG_LEVEL
from core.errors import CoveringError, SchemaError
from core.manifold import SpaceClass
from core.session_helpers import EpsGrid, RunConfig
from modes.bounds_mode import run_bounds
from modes.coeffs_mode import run_coeffs
from modes.constants_mode import run_constants
from modes.dims_mode import run_dims
from modes.empirical_mode import run_empirical
from modes.gaussian_mode import run_gaussian
from modes.norms_mode import run_norms
from modes.report_mode import run_report

logger = logging.getLogger(__name__)

MODES: Dict[str, Callable[[RunConfig], None]] = {
    "dims": run_dims,
    "coeffs": run_coeffs,
    "norms": run_norms,
    "bounds": run_bounds,
    "constants": run_constants,
    "gaussian": run_gaussian,
    "empirical": run_empirical,
    "report": run_report,
}


def _exit_status(func):
    """Decorator that converts raised errors into CLI exit statuses.

    SchemaError -> 2, any other CoveringError -> 3, OSError -> 1.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            func(*args, **kwargs)
            return 0
        except SchemaError as e:
            print(f"SchemaError: {e}", file=sys.stderr)
            return 2
        except CoveringError as e:
            print(f"{type(e).__name__}: {e}", file=sys.stderr)
            return 3
        except OSError as e:
            print(f"{type(e).__name__}: {e}", file=sys.stderr)
            return 1

    return wrapper


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per mode."""
    parser = argparse.ArgumentParser(
        description="Certified covering-number bounds for zonal kernels on two-point homogeneous spaces"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="Output file (default: stdout)")
    common.add_argument("--log-level", default=None, help=f"Logging level (default: {LOG_LEVEL})")

    dims = subparsers.add_parser("dims", parents=[common], help="Eigenspace dimensions")
    dims.add_argument("--manifold", required=True, help="|".join(member.value for member in SpaceClass))
    dims.add_argument("--d", type=int, required=True, help="Real dimension")
    dims.add_argument("--k-max", type=int, default=20, help="Largest level (default: 20)")

    kernel = argparse.ArgumentParser(add_help=False, parents=[common])
    kernel.add_argument("--config", required=True, help="KernelSpec JSON file")
    kernel.add_argument("--eps-min", type=float, default=DEFAULT_EPS_MIN)
    kernel.add_argument("--eps-max", type=float, default=DEFAULT_EPS_MAX)
    kernel.add_argument("--eps-count", type=int, default=DEFAULT_EPS_COUNT)
    kernel.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for empirical runs")
    kernel.add_argument("--k-max", type=int, default=20, help="Table length for coeffs and gaussian")
    kernel.add_argument("--m", type=int, default=10, help="Largest truncation level for norms")
    kernel.add_argument("--m-max", type=int, default=None, help="Lower-bound scan ceiling")
    kernel.add_argument("--regime", default=None, help="Regime for constants (default: auto)")

    for name, help_text in (
            ("coeffs", "Coefficient table"),
            ("norms", "Embedding norms and tails"),
            ("bounds", "Certified bound curve (CSV)"),
            ("constants", "Asymptotic constants (JSON)"),
            ("gaussian", "Gaussian kernel eigenvalues (JSON)"),
            ("empirical", "Monte Carlo packing estimates (JSON)"),
            ("report", "Bounds, asymptotic ratios and packing evidence (CSV)"),
    ):
        subparsers.add_parser(name, parents=[kernel], help=help_text)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Build the RunConfig for parsed arguments."""
    if args.command == "dims":
        return RunConfig(
            command="dims", out_path=args.out, manifold=args.manifold, d=args.d, k_max=args.k_max
        )
    return RunConfig(
        command=args.command,
        kernel_path=args.config,
        eps_grid=EpsGrid(min=args.eps_min, max=args.eps_max, count=args.eps_count),
        out_path=args.out,
        seed=args.seed,
        k_max=args.k_max,
        m=args.m,
        m_max=args.m_max,
        regime=args.regime,
    )


@_exit_status
def run(config: RunConfig) -> None:
    """Dispatch a validated RunConfig to its mode runner."""
    logger.info("running %s", config.command)
    MODES[config.command](config)
    logger.info("finished %s", config.command)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, configure logging and run the command; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(
        level=(args.log_level or LOG_LEVEL).upper(),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = config_from_args(args)
    except SchemaError as e:
        print(f"SchemaError: {e}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
