"""Figure rendering for bsofdma experiment CSVs."""

__version__ = "0.1.0"

from .render import FigureSpec, render
from .schema import KIND_COLUMNS, SchemaError, Table, load_table

__all__ = ["FigureSpec", "KIND_COLUMNS", "SchemaError", "Table",
           "load_table", "render", "__version__"]
