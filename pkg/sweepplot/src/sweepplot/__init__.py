"""Static figure rendering for sweep CSVs."""

from .render import PlotSpec, SchemaError, load_curves, render

__all__ = ["PlotSpec", "SchemaError", "load_curves", "render"]
__version__ = "0.1.0"
