"""Tests for core.session_helpers: the eps grid and run configuration."""

import os

import pytest

from config import KERNELS_DIR
from core.errors import SchemaError
from core.session_helpers import EpsGrid, RunConfig


def test_eps_grid_values():
    """Log-spaced, increasing, with both endpoints included."""
    values = EpsGrid(min=1e-4, max=1e-1, count=4).values()
    assert values == pytest.approx([1e-4, 1e-3, 1e-2, 1e-1], rel=1e-12)


@pytest.mark.parametrize(
    "kwargs, field",
    [
        ({"min": 0.0}, "eps_grid.min"),
        ({"min": 0.5, "max": 0.1}, "eps_grid.max"),
        ({"count": 1}, "eps_grid.count"),
        ({"scale": "linear"}, "eps_grid.scale"),
    ],
)
def test_eps_grid_validation(kwargs, field):
    """Invalid grids name the offending field."""
    with pytest.raises(SchemaError) as info:
        EpsGrid(**kwargs)
    assert info.value.field == field


def test_run_config_requires_kernel():
    """Every command but dims needs a kernel file."""
    with pytest.raises(SchemaError):
        RunConfig(command="bounds")
    RunConfig(command="dims", manifold="sphere", d=2)


def test_run_config_rejects_unknown_command():
    """Commands outside COMMANDS are rejected."""
    with pytest.raises(SchemaError):
        RunConfig(command="plot", kernel_path="x.json")


def test_load_kernel():
    """load_kernel reads the configured file."""
    config = RunConfig(command="coeffs", kernel_path=os.path.join(KERNELS_DIR, "geometric_s2.json"))
    spec = config.load_kernel()
    assert spec.manifold.label == "S^2"
    assert spec.model.type == "geometric"
