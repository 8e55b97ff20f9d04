"""File ingestion: long-form flow tables, labeled matrices, reduction factors.

Files are UTF-8 delimiter-separated text (comma, semicolon, or tab,
sniffed from the header line), LF or CRLF.  Numbers must be plain
decimal or scientific notation; anything locale-specific is rejected so
the same file parses identically everywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    EmptyInput,
    InputFormatError,
    NegativeQuantity,
    NonNumericCell,
    ParseError,
    RaggedRows,
    SelfFlow,
)
from .flows import BilateralFlowSet, _freeze

__all__ = [
    "LabeledMatrix",
    "LabeledVector",
    "read_flow_records",
    "load_flows",
    "flows_from_records",
    "load_matrix",
    "load_reduction_file",
    "parse_inline_reduction",
]

FLOWS_HEADER = ("exporter", "importer", "good", "quantity")
REDUCTION_HEADER = ("good", "factor")

_DELIMITERS = (",", ";", "\t")
_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class LabeledMatrix:
    """A numeric grid with row and column labels, orientation left to the caller."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        rows = tuple(str(label) for label in self.row_labels)
        cols = tuple(str(label) for label in self.col_labels)
        values = _freeze(self.values)
        if values.shape != (len(rows), len(cols)):
            raise ParseError(
                f"grid shape {values.shape} does not match {len(rows)} row "
                f"and {len(cols)} column labels"
            )
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class LabeledVector:
    """A numeric vector with one label per entry."""

    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        values = _freeze(self.values)
        if values.shape != (len(labels),):
            raise ParseError(
                f"{values.size} values do not match {len(labels)} labels"
            )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "values", values)


def _read_lines(path) -> list[tuple[int, str]]:
    """Nonempty lines of a text file with their 1-based line numbers."""
    try:
        with open(path, "r", encoding="utf-8-sig", newline="") as handle:
            text = handle.read()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    lines = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped:
            lines.append((number, stripped))
    return lines


def _sniff_delimiter(header: str) -> str:
    best, best_count = ",", -1
    for candidate in _DELIMITERS:
        count = header.count(candidate)
        if count > best_count:
            best, best_count = candidate, count
    return best


def _split(line: str, delimiter: str) -> list[str]:
    return [cell.strip() for cell in line.split(delimiter)]


def _parse_number(cell: str) -> float | None:
    if not _NUMBER.match(cell):
        return None
    value = float(cell)
    if not np.isfinite(value):
        return None
    return value


def read_flow_records(path) -> list[tuple[str, str, str, float]]:
    """Parse a long-form flow table with header exporter,importer,good,quantity.

    Returns the rows in file order; aggregation is a separate step so the
    same records can also travel over the wire unchanged.
    """
    lines = _read_lines(path)
    if not lines:
        raise EmptyInput(f"{path} is empty")
    header_line, header_text = lines[0]
    delimiter = _sniff_delimiter(header_text)
    header = [cell.lower() for cell in _split(header_text, delimiter)]
    if header != list(FLOWS_HEADER):
        raise ParseError(
            f"expected header {','.join(FLOWS_HEADER)!r}, got {header_text!r}",
            line=header_line,
        )
    records = []
    for number, line in lines[1:]:
        cells = _split(line, delimiter)
        if len(cells) != 4:
            raise RaggedRows(f"expected 4 cells, got {len(cells)}", line=number)
        exporter, importer, good, quantity_text = cells
        if not exporter or not importer or not good:
            raise ParseError("empty exporter, importer, or good label", line=number)
        if exporter == importer:
            raise SelfFlow(f"{exporter!r} ships goods to itself", line=number)
        quantity = _parse_number(quantity_text)
        if quantity is None:
            raise NonNumericCell(f"quantity {quantity_text!r} is not a number", line=number)
        if quantity < 0:
            raise NegativeQuantity(f"quantity {quantity} is negative", line=number)
        records.append((exporter, importer, good, quantity))
    if not records:
        raise EmptyInput(f"{path} has a header but no data rows")
    return records


def load_flows(path) -> BilateralFlowSet:
    """Parse and aggregate a long-form flow table; duplicate rows accumulate."""
    return flows_from_records(read_flow_records(path))


def flows_from_records(
    records: Iterable[tuple[str, str, str, float]],
) -> BilateralFlowSet:
    """Assemble a flow set from (exporter, importer, good, quantity) records.

    Countries and goods are ordered by first appearance; repeated records
    for the same route and good accumulate.
    """
    records = list(records)
    if not records:
        raise EmptyInput("no flow records")
    countries: dict[str, int] = {}
    goods: dict[str, int] = {}
    for exporter, importer, good, _ in records:
        if str(exporter) == str(importer):
            raise SelfFlow(f"country {exporter!r} ships goods to itself")
        countries.setdefault(str(exporter), len(countries))
        countries.setdefault(str(importer), len(countries))
        goods.setdefault(str(good), len(goods))
    flows: dict[tuple[int, int], np.ndarray] = {}
    for exporter, importer, good, quantity in records:
        key = (countries[str(exporter)], countries[str(importer)])
        vector = flows.setdefault(key, np.zeros(len(goods)))
        vector[goods[str(good)]] += float(quantity)
    return BilateralFlowSet(tuple(countries), tuple(goods), flows)


def load_matrix(path) -> LabeledMatrix:
    """Parse a labeled grid: first row column labels, first column row labels."""
    lines = _read_lines(path)
    if not lines:
        raise EmptyInput(f"{path} is empty")
    header_line, header_text = lines[0]
    delimiter = _sniff_delimiter(header_text)
    header = _split(header_text, delimiter)
    if len(header) < 2:
        raise ParseError("header must list at least one column label", line=header_line)
    col_labels = header[1:]
    if any(not label for label in col_labels):
        raise ParseError("empty column label", line=header_line)
    if len(set(col_labels)) != len(col_labels):
        raise ParseError("duplicate column labels", line=header_line)
    row_labels: list[str] = []
    rows: list[list[float]] = []
    for number, line in lines[1:]:
        cells = _split(line, delimiter)
        if len(cells) != len(header):
            raise RaggedRows(
                f"expected {len(header)} cells, got {len(cells)}", line=number
            )
        label = cells[0]
        if not label:
            raise ParseError("empty row label", line=number)
        if label in row_labels:
            raise ParseError(f"duplicate row label {label!r}", line=number)
        row = []
        for col_label, cell in zip(col_labels, cells[1:]):
            value = _parse_number(cell)
            if value is None:
                raise NonNumericCell(
                    f"row {label!r}, column {col_label!r}: {cell!r} is not a number",
                    line=number,
                )
            row.append(value)
        row_labels.append(label)
        rows.append(row)
    if not rows:
        raise EmptyInput(f"{path} has a header but no data rows")
    return LabeledMatrix(tuple(row_labels), tuple(col_labels), np.array(rows))


def load_reduction_file(path) -> LabeledVector:
    """Parse per-good reduction factors with header good,factor."""
    lines = _read_lines(path)
    if not lines:
        raise EmptyInput(f"{path} is empty")
    header_line, header_text = lines[0]
    delimiter = _sniff_delimiter(header_text)
    header = [cell.lower() for cell in _split(header_text, delimiter)]
    if header != list(REDUCTION_HEADER):
        raise ParseError(
            f"expected header {','.join(REDUCTION_HEADER)!r}, got {header_text!r}",
            line=header_line,
        )
    labels: list[str] = []
    values: list[float] = []
    for number, line in lines[1:]:
        cells = _split(line, delimiter)
        if len(cells) != 2:
            raise RaggedRows(f"expected 2 cells, got {len(cells)}", line=number)
        label, factor_text = cells
        if not label:
            raise ParseError("empty good label", line=number)
        if label in labels:
            raise ParseError(f"duplicate good label {label!r}", line=number)
        factor = _parse_number(factor_text)
        if factor is None:
            raise NonNumericCell(f"factor {factor_text!r} is not a number", line=number)
        labels.append(label)
        values.append(factor)
    if not labels:
        raise EmptyInput(f"{path} has a header but no data rows")
    return LabeledVector(tuple(labels), np.array(values))


def parse_inline_reduction(text: str) -> np.ndarray:
    """Parse an inline comma-separated factor list such as ``0.5,1.0``."""
    cells = [cell.strip() for cell in str(text).split(",")]
    if cells == [""]:
        raise EmptyInput("inline reduction list is empty")
    values = []
    for position, cell in enumerate(cells):
        value = _parse_number(cell)
        if value is None:
            raise NonNumericCell(f"entry {position} ({cell!r}) is not a number")
        values.append(value)
    return np.array(values)
