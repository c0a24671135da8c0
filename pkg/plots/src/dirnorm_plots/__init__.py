"""Panel figures from dirnorm expansion-sweep CSV files."""

from .render import EXPANSION_COLUMNS, FigureSpec, SchemaError, load_sweep, render

__all__ = ["EXPANSION_COLUMNS", "FigureSpec", "SchemaError", "load_sweep", "render"]
