"""Figure scripts for schema-v1 CSV artifacts.

Renders asymmetry and entropy figures (time series with decay guides,
crossing markers, momentum-profile insets, and multi-panel sweeps) from
the CSV files the simulation CLI writes.  The CSV format is the only
coupling to the producer; nothing in this package imports it.
"""

from .csvio import SCHEMA, Table, TableError, column, read_table
from .render import FigureError, render
from .spec import FigureSpec, GuideLine, InsetSpec, SpecError, load_spec, parse_spec

__all__ = [
    "SCHEMA",
    "Table",
    "TableError",
    "column",
    "read_table",
    "FigureError",
    "render",
    "FigureSpec",
    "GuideLine",
    "InsetSpec",
    "SpecError",
    "load_spec",
    "parse_spec",
]
