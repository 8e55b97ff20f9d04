"""Deterministic report rendering.

Structured reports are JSON with a fixed key order and floats printed at
17 significant digits, so identical runs produce byte-identical files
and every value round-trips to the exact double that was computed.
Text reports are a human-oriented rendering of the same tree.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .errors import InputFormatError

__all__ = [
    "REPORT_NAME",
    "REPORT_VERSION",
    "float_repr",
    "render_structured",
    "render_text",
    "render_matrix_csv",
    "vector_map",
    "matrix_map",
    "write_text",
]

REPORT_NAME = "trade-clearing-run"
REPORT_VERSION = 1

_SCALARS = (str, bool, int, float, np.integer, np.floating, np.bool_)


def float_repr(value) -> str:
    """Shortest 17-significant-digit form; round-trips any finite double."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {value!r} cannot appear in a report")
    if value == 0.0:
        return "0"
    return "%.17g" % value


def vector_map(labels, values) -> dict:
    """Label -> value map preserving label order."""
    vec = np.asarray(values, dtype=float)
    return {str(label): float(v) for label, v in zip(labels, vec, strict=True)}


def matrix_map(row_labels, col_labels, values) -> dict:
    """Row label -> (column label -> value) nested map."""
    arr = np.asarray(values, dtype=float)
    return {
        str(label): vector_map(col_labels, row)
        for label, row in zip(row_labels, arr, strict=True)
    }


def render_structured(tree: dict) -> str:
    pieces: list[str] = []
    _emit(tree, 0, pieces)
    pieces.append("\n")
    return "".join(pieces)


def _emit(node, depth, out) -> None:
    pad = "  " * depth
    if isinstance(node, dict):
        if not node:
            out.append("{}")
            return
        out.append("{\n")
        last = len(node) - 1
        for pos, (key, value) in enumerate(node.items()):
            if not isinstance(key, str):
                raise ValueError(f"report keys must be strings, got {key!r}")
            out.append("  " * (depth + 1))
            out.append(json.dumps(key))
            out.append(": ")
            _emit(value, depth + 1, out)
            out.append(",\n" if pos != last else "\n")
        out.append(pad + "}")
    elif isinstance(node, (list, tuple)):
        if not node:
            out.append("[]")
            return
        out.append("[\n")
        last = len(node) - 1
        for pos, value in enumerate(node):
            out.append("  " * (depth + 1))
            _emit(value, depth + 1, out)
            out.append(",\n" if pos != last else "\n")
        out.append(pad + "]")
    elif isinstance(node, (bool, np.bool_)):
        out.append("true" if node else "false")
    elif isinstance(node, (int, np.integer)):
        out.append(str(int(node)))
    elif isinstance(node, (float, np.floating)):
        out.append(float_repr(node))
    elif isinstance(node, str):
        out.append(json.dumps(node))
    else:
        raise ValueError(f"cannot render a {type(node).__name__} in a report")


def _text_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.12g" % float(value)
    return str(value)


def _is_scalar(value) -> bool:
    return isinstance(value, _SCALARS)


def render_text(tree: dict) -> str:
    lines: list[str] = []
    for key, value in tree.items():
        _text_block(key, value, 0, lines)
    return "\n".join(lines) + "\n"


def _text_block(label, node, depth, lines) -> None:
    pad = "  " * depth
    if isinstance(node, dict):
        lines.append(f"{pad}{label}:")
        for key, value in node.items():
            _text_block(key, value, depth + 1, lines)
    elif isinstance(node, (list, tuple)):
        if all(_is_scalar(item) for item in node):
            body = ", ".join(_text_value(item) for item in node)
            lines.append(f"{pad}{label}: [{body}]")
        else:
            lines.append(f"{pad}{label}:")
            inner = "  " * (depth + 1)
            for item in node:
                if isinstance(item, dict) and all(_is_scalar(v) for v in item.values()):
                    body = " ".join(f"{k}={_text_value(v)}" for k, v in item.items())
                    lines.append(f"{inner}- {body}")
                elif isinstance(item, (list, tuple)) and all(_is_scalar(v) for v in item):
                    lines.append(f"{inner}- [{', '.join(_text_value(v) for v in item)}]")
                else:
                    raise ValueError("text reports support at most one level of list nesting")
    else:
        lines.append(f"{pad}{label}: {_text_value(node)}")


def render_matrix_csv(row_labels, col_labels, values, corner: str = "") -> str:
    """Matrix in the same labeled-grid format the loader accepts."""
    arr = np.asarray(values, dtype=float)
    lines = [",".join([corner, *map(str, col_labels)])]
    for label, row in zip(row_labels, arr, strict=True):
        lines.append(",".join([str(label), *(float_repr(v) for v in row)]))
    return "\n".join(lines) + "\n"


def write_text(path, text: str) -> None:
    """Write the file atomically: temp file in the target directory, then rename."""
    target = os.path.abspath(str(path))
    try:
        fd, temp_path = tempfile.mkstemp(
            dir=os.path.dirname(target), prefix=".tmp-report-"
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
            os.replace(temp_path, target)
        except BaseException:
            os.unlink(temp_path)
            raise
    except OSError as exc:
        raise InputFormatError(f"cannot write {path}: {exc}") from exc
