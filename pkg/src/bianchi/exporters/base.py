"""Base table exporter interface.

Exporters turn finished table rows into text for standard output, one
strategy per output format.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping, Sequence

from bianchi.core.models import TableRow

COLUMN_TITLES = ("Δ", "m", "class group", "H1_cusp", "Farrell supplement")


def sorted_rows(rows: Sequence[TableRow]) -> list[TableRow]:
    """Rows ordered by |Δ|, ties by m."""
    return sorted(rows, key=lambda row: (abs(row.discriminant), row.m))


class TableExporter(ABC):
    """Abstract base class for table exporters."""

    @abstractmethod
    def export(self, rows: Sequence[TableRow], failures: Mapping[int, str] | None = None) -> str:
        """Render the table.

        Args:
            rows: Finished rows in any order
            failures: Error message per m for fields that produced no row

        Returns:
            The rendered table
        """


class ExporterFactory:
    """Factory for table exporters."""

    @staticmethod
    def create_exporter(output_format: str) -> TableExporter:
        """Create an exporter for an output format.

        Args:
            output_format: 'text' or 'json'

        Raises:
            ValueError: If output_format is not recognized
        """
        from bianchi.exporters.json_table import JsonTableExporter
        from bianchi.exporters.text import TextTableExporter

        exporters = {
            "text": TextTableExporter,
            "json": JsonTableExporter,
        }

        exporter_class = exporters.get(output_format)
        if not exporter_class:
            raise ValueError(f"Unknown output format: {output_format}. Valid formats: {', '.join(exporters.keys())}")

        return exporter_class()
