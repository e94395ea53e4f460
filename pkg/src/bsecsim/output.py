"""Delimited output: RFC-4180-style CSV with full-precision floats."""
from __future__ import annotations

import csv
import sys

__all__ = ["format_value", "write_csv"]


def format_value(value) -> str:
    """Render a cell: floats with 15 significant digits, bools lowercase."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".15g")
    return str(value)


def write_csv(fieldnames, rows, destination=None) -> None:
    """Write a header plus rows of cells to a path or standard output.

    Rows are iterables matching fieldnames; every row, including the last,
    is newline-terminated.
    """
    fieldnames = list(fieldnames)

    def _emit(stream):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            row = list(row)
            if len(row) != len(fieldnames):
                raise ValueError(
                    f"row has {len(row)} cells, schema has {len(fieldnames)}"
                )
            writer.writerow([format_value(v) for v in row])

    if destination in (None, "-"):
        _emit(sys.stdout)
    else:
        with open(destination, "w", newline="") as fh:
            _emit(fh)
