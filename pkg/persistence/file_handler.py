"""File I/O: KernelSpec JSON in, CSV and JSON results out.

Output is written only after a computation has finished, so a failed run
leaves no file behind. Floats are written with SIGNIFICANT_DIGITS digits and
JSON keys are sorted, which makes repeated runs byte-identical.
"""

from __future__ import annotations

import json
import logging
import math
import os
import sys
from typing import Any, Dict, Iterable, Optional, Sequence

import pandas as pd

from config import SIGNIFICANT_DIGITS
from core.errors import SchemaError
from core.kernels import KernelSpec

logger = logging.getLogger(__name__)


def ensure_parent_dir(path: str) -> None:
    """Create the directory that will hold path, if it is missing."""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def load_kernel_spec(path: str) -> KernelSpec:
    """Load and validate a KernelSpec JSON file.

    Raises:
    - SchemaError: malformed JSON (field "<root>") or a field that fails validation.
    - OSError: if the file cannot be read.
    """
    with open(path, "r", encoding="utf-8") as file:
        try:
            data = json.load(file)
        except json.JSONDecodeError as e:
            raise SchemaError("<root>", f"invalid JSON: {e}") from e
    return KernelSpec.from_dict(data)


def save_kernel_spec(spec: KernelSpec, path: str) -> None:
    """Persist a KernelSpec in the same JSON shape load_kernel_spec reads."""
    write_json(spec.as_dict(), path)


def _round(value: Any) -> Any:
    """Round floats to SIGNIFICANT_DIGITS digits, recursively; non-finite floats become None."""
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, dict):
        return {key: _round(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(item) for item in value]
    return value


def write_csv(
        rows: Iterable[Dict[str, Any]], columns: Sequence[str], path: Optional[str] = None
) -> None:
    """Write rows as CSV with the given header; path None writes to stdout."""
    frame = pd.DataFrame(list(rows), columns=list(columns))
    options = dict(float_format=f"%.{SIGNIFICANT_DIGITS}g", index=False, lineterminator="\n")
    if path is None:
        frame.to_csv(sys.stdout, **options)
        return
    ensure_parent_dir(path)
    frame.to_csv(path, **options)
    logger.info("wrote %d rows to %s", len(frame), path)


def write_json(payload: Dict[str, Any], path: Optional[str] = None) -> None:
    """Write sorted-key, 2-space indented JSON with a trailing newline."""
    text = json.dumps(_round(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    ensure_parent_dir(path)
    with open(path, "w", encoding="utf-8") as file:
        file.write(text)
    logger.info("wrote %s", path)
