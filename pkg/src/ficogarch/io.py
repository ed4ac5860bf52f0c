"""CSV helpers shared by the CLI and the path containers.

All numeric output is written with 17 significant digits so that a value
read back is bit-identical to the value written.
"""

from __future__ import annotations

import io
import os
import sys
from collections.abc import Mapping
from typing import IO

import numpy as np

FLOAT_FMT = "%.17g"


def format_row(values) -> str:
    return ",".join(
        str(v) if isinstance(v, (str, int, np.integer)) else FLOAT_FMT % v for v in values
    )


def write_columns(dest: str | os.PathLike | IO[str] | None, columns: Mapping[str, np.ndarray]) -> None:
    """Write equal-length columns as CSV with a header row.

    ``dest`` may be a path, an open text stream, or ``None`` for stdout.
    """
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    lengths = {a.shape[0] for a in arrays}
    if len(lengths) != 1:
        raise ValueError("all columns must have the same length")
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    for row in zip(*arrays):
        buf.write(format_row(row) + "\n")
    text = buf.getvalue()
    if dest is None:
        sys.stdout.write(text)
    elif hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", newline="") as fh:
            fh.write(text)


def read_columns(src: str | os.PathLike | IO[str]) -> dict[str, np.ndarray]:
    """Read a CSV written by :func:`write_columns` back into float arrays."""
    if hasattr(src, "read"):
        text = src.read()
    else:
        with open(src) as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty CSV input")
    names = [n.strip() for n in lines[0].split(",")]
    data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]], dtype=float)
    if data.size == 0:
        data = data.reshape(0, len(names))
    return {name: data[:, i] for i, name in enumerate(names)}
