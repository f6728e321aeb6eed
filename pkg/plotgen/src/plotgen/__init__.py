"""Headless figure rendering for clms experiment CSVs."""

from .render import (
    KINDS,
    DataError,
    FigureJob,
    PlotgenError,
    RenderReport,
    SchemaError,
    job_from_glob,
    render,
)

__version__ = "0.1.0"
