"""Table exporters for the result rows.

This package contains one exporter per output format behind a factory.
"""

from bianchi.exporters.base import ExporterFactory, TableExporter
from bianchi.exporters.json_table import JsonTableExporter
from bianchi.exporters.text import TextTableExporter

__all__ = [
    "TableExporter",
    "ExporterFactory",
    "TextTableExporter",
    "JsonTableExporter",
]
