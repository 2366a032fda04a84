"""JSON table with the schema header of the database files."""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence

from bianchi.core.models import TableRow
from bianchi.exporters.base import TableExporter, sorted_rows
from bianchi.storage.serialize import with_schema

TABLE_KIND = "table"


class JsonTableExporter(TableExporter):
    """Renders rows as an indented JSON document.

    Each row carries its rendered columns next to the structured groups, so
    the output is readable and machine-checkable at once.
    """

    def export(self, rows: Sequence[TableRow], failures: Mapping[int, str] | None = None) -> str:
        entries = []
        for row in sorted_rows(rows):
            _, _, class_group, h1_cusp, supplement = row.columns()
            entries.append(
                {
                    **row.to_dict(),
                    "rendered": {"class_group": class_group, "h1_cusp": h1_cusp, "farrell_supplement": supplement},
                }
            )
        document = with_schema(
            TABLE_KIND,
            {
                "rows": entries,
                "failures": [{"m": str(m), "error": message} for m, message in sorted((failures or {}).items())],
            },
        )
        return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
