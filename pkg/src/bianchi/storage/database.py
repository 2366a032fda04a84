"""Directory database of polyhedra, quotient complexes and table rows.

A record is valid when the artifacts it names exist and still hash to the
recorded values. Invalid or unreadable records are treated as missing, so
a corrupted file leads to recomputation and never to a wrong row.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable
from pathlib import Path

from bianchi.cells.complex import QuotientComplex
from bianchi.core.models import SCHEMA_VERSION, DbRecord
from bianchi.geometry.swan import Polyhedron
from bianchi.homology.invariants import PipelineResult
from bianchi.storage.integrity import ArtifactHasher
from bianchi.storage.paths import (
    COMPLEX_FILE,
    POLYHEDRON_FILE,
    RECORD_FILE,
    TIMINGS_FILE,
    artifact_path,
    atomic_write_bytes,
    index_path,
    read_bytes,
)
from bianchi.storage.serialize import (
    COMPLEX_KIND,
    INDEX_KIND,
    POLYHEDRON_KIND,
    RECORD_KIND,
    canonical_bytes,
    complex_from_dict,
    complex_to_dict,
    parse_document,
    polyhedron_from_dict,
    polyhedron_to_dict,
    record_from_dict,
    record_to_dict,
    with_schema,
)
from bianchi.utils.exceptions import DatabaseError

logger = logging.getLogger(__name__)


class Database:
    """Per-field records below a root directory.

    Attributes:
        root: Database directory
        hasher: Artifact hasher
    """

    def __init__(self, root: Path, hasher: ArtifactHasher | None = None):
        self.root = Path(root)
        self.hasher = hasher or ArtifactHasher()

    def _write(self, m: int, name: str, data: bytes) -> str:
        atomic_write_bytes(artifact_path(self.root, m, name), data)
        return self.hasher.hash_bytes(data)

    def _read_document(self, m: int, name: str, kind: str) -> dict | None:
        data = read_bytes(artifact_path(self.root, m, name))
        return None if data is None else parse_document(data, kind)

    # -- polyhedra ------------------------------------------------------------

    def store_polyhedron(self, polyhedron: Polyhedron) -> str:
        """Write the polyhedron file and return its hash."""
        return self._write(polyhedron.ctx.m, POLYHEDRON_FILE, canonical_bytes(polyhedron_to_dict(polyhedron)))

    def load_polyhedron(self, m: int, expected_sha256: str | None = None) -> Polyhedron | None:
        """Read a stored polyhedron, None if missing, corrupted or malformed."""
        path = artifact_path(self.root, m, POLYHEDRON_FILE)
        if expected_sha256 is not None and not self.hasher.matches(path, expected_sha256):
            return None
        try:
            document = self._read_document(m, POLYHEDRON_FILE, POLYHEDRON_KIND)
            return None if document is None else polyhedron_from_dict(document)
        except DatabaseError as e:
            logger.warning(f"m={m}: ignoring stored polyhedron ({e})")
            return None

    # -- complexes ------------------------------------------------------------

    def store_complex(self, qc: QuotientComplex) -> str:
        return self._write(qc.m, COMPLEX_FILE, canonical_bytes(complex_to_dict(qc)))

    def load_complex(self, m: int) -> QuotientComplex | None:
        try:
            document = self._read_document(m, COMPLEX_FILE, COMPLEX_KIND)
            return None if document is None else complex_from_dict(document)
        except DatabaseError as e:
            logger.warning(f"m={m}: ignoring stored quotient complex ({e})")
            return None

    # -- records --------------------------------------------------------------

    def store_result(self, result: PipelineResult, update_index: bool = True) -> DbRecord:
        """Write all artifacts of a pipeline run, then the record and the index.

        The record is written last, so an interrupted run leaves no record
        pointing at missing files.
        """
        polyhedron = result.polyhedron
        m = polyhedron.ctx.m
        record = DbRecord(
            m=m,
            schema=SCHEMA_VERSION,
            polyhedron_sha256=self.store_polyhedron(polyhedron),
            complex_sha256=self.store_complex(result.complex),
            row=result.row,
            timings=dict(result.timings),
            stats=polyhedron.stats(),
            prune_rule=polyhedron.prune_rule,
        )
        timings = json.dumps({k: round(v, 3) for k, v in sorted(record.timings.items())}, indent=2)
        atomic_write_bytes(artifact_path(self.root, m, TIMINGS_FILE), timings.encode("utf-8"))
        self._write(m, RECORD_FILE, canonical_bytes(record_to_dict(record)))
        if update_index:
            self.add_to_index([m])
        logger.debug(f"m={m}: stored record in {self.root}")
        return record

    def load_record(self, m: int) -> DbRecord | None:
        """Read the record of a field, None if absent or malformed."""
        try:
            document = self._read_document(m, RECORD_FILE, RECORD_KIND)
            return None if document is None else record_from_dict(document)
        except DatabaseError as e:
            logger.warning(f"m={m}: ignoring stored record ({e})")
            return None

    def valid_record(self, m: int, prune_rule: str | None = None) -> DbRecord | None:
        """The record of a field if every artifact it names is intact.

        Args:
            m: The field parameter
            prune_rule: Require a record computed with this erasure rule
        """
        record = self.load_record(m)
        if record is None or record.schema != SCHEMA_VERSION or record.m != m:
            return None
        if prune_rule is not None and record.prune_rule != prune_rule:
            logger.debug(f"m={m}: stored record used prune rule {record.prune_rule}")
            return None
        checks = (
            (POLYHEDRON_FILE, record.polyhedron_sha256),
            (COMPLEX_FILE, record.complex_sha256),
        )
        for name, expected in checks:
            if not self.hasher.matches(artifact_path(self.root, m, name), expected):
                return None
        return record

    # -- index ----------------------------------------------------------------

    def indexed_fields(self) -> list[int]:
        """Fields listed in the index, ascending."""
        data = read_bytes(index_path(self.root))
        if data is None:
            return []
        document = parse_document(data, INDEX_KIND)
        try:
            return sorted(int(m) for m in document["m_values"])
        except (KeyError, TypeError, ValueError) as e:
            raise DatabaseError(f"Malformed index: {e}") from e

    def add_to_index(self, m_values: Iterable[int]) -> None:
        """Add fields to the index. Only one process may call this at a time."""
        try:
            fields = set(self.indexed_fields())
        except DatabaseError as e:
            logger.warning(f"Rebuilding index ({e})")
            fields = set()
        fields.update(m_values)
        document = with_schema(INDEX_KIND, {"m_values": [str(v) for v in sorted(fields)]})
        atomic_write_bytes(index_path(self.root), canonical_bytes(document))
