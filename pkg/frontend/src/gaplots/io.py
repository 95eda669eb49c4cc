"""Reading of graphalign schema-tagged CSVs.

The harness writes a comment line ``# schema=1`` before the header; files
without it are rejected. Rows come back as dicts of strings; numeric
conversion happens at plot time so unknown extra columns pass through.
"""

import csv
import os

SCHEMA_LINE = "# schema=1"


class SchemaMismatch(Exception):
    """Input CSV does not carry the expected schema tag or columns."""


class EmptyData(Exception):
    """Input CSV is valid but holds no data rows for the figure."""


def read_schema_csv(path):
    """Parse a schema-tagged CSV into (columns, rows-of-dicts)."""
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if first != SCHEMA_LINE:
            raise SchemaMismatch(f"{path}: missing '{SCHEMA_LINE}' tag")
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    try:
        columns = next(reader)
    except StopIteration:
        raise SchemaMismatch(f"{path}: missing header row")
    rows = []
    for rec in reader:
        if not rec:
            continue
        if len(rec) != len(columns):
            raise SchemaMismatch(f"{path}: row width {len(rec)} != header")
        rows.append(dict(zip(columns, rec)))
    return columns, rows


def require_columns(columns, needed, path):
    missing = [c for c in needed if c not in columns]
    if missing:
        raise SchemaMismatch(f"{path}: missing columns {missing}")


def load_many(paths, needed):
    """Read and concatenate several CSVs sharing the needed columns."""
    rows = []
    for path in paths:
        columns, part = read_schema_csv(path)
        require_columns(columns, needed, path)
        rows.extend(part)
    return rows
