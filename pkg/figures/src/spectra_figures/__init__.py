"""Figure rendering for channel-spectra experiment outputs."""

from .render import (FIGURE_KINDS, FigureSpec, SchemaError, Table,
                     load_table, manifest_checksum, render)

__all__ = ["FIGURE_KINDS", "FigureSpec", "SchemaError", "Table",
           "load_table", "manifest_checksum", "render"]

__version__ = "0.1.0"
