"""Figure rendering for graphalign sweep and threshold CSVs."""

from .figures import BUILDERS, save_figure
from .io import EmptyData, SchemaMismatch, read_schema_csv

__all__ = [
    "BUILDERS",
    "save_figure",
    "read_schema_csv",
    "SchemaMismatch",
    "EmptyData",
]
