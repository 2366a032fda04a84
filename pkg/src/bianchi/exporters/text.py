"""Plain-text table in the layout of the published result tables."""

from __future__ import annotations

import io
from collections.abc import Mapping, Sequence

from rich.console import Console
from rich.table import Table

from bianchi.core.models import TableRow
from bianchi.exporters.base import COLUMN_TITLES, TableExporter, sorted_rows


class TextTableExporter(TableExporter):
    """Renders rows as a rich table without colour.

    Attributes:
        width: Console width used for rendering
    """

    def __init__(self, width: int = 120):
        self.width = width

    def export(self, rows: Sequence[TableRow], failures: Mapping[int, str] | None = None) -> str:
        table = Table(box=None, show_edge=False, pad_edge=False)
        for title in COLUMN_TITLES:
            table.add_column(title, justify="right" if title in ("Δ", "m") else "left")
        for row in sorted_rows(rows):
            table.add_row(*row.columns())

        buffer = io.StringIO()
        console = Console(file=buffer, width=self.width, color_system=None, highlight=False)
        console.print(table)
        for m, message in sorted((failures or {}).items()):
            console.print(f"m={m}: FAILED ({message})", markup=False)
        return buffer.getvalue()
