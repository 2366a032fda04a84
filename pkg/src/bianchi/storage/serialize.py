"""Canonical JSON codecs for polyhedra, quotient complexes and records.

Canonical bytes use sorted keys, no whitespace and UTF-8. Every integer is
written as a decimal string, every rational as "p/q" and every field element
as "x + y*w", so equal objects always give equal bytes.
"""

from __future__ import annotations

import json
from typing import Any

from bianchi.arithmetic.field import AlgInt, FieldCtx, parse_rational, render_rational
from bianchi.cells.complex import QuotientComplex
from bianchi.core.models import SCHEMA_VERSION, DbRecord
from bianchi.geometry.hemispheres import Hemisphere, PointH
from bianchi.geometry.swan import Face, HemisphereList, Polyhedron, Vertex, VertexSet
from bianchi.utils.exceptions import DatabaseError

POLYHEDRON_KIND = "polyhedron"
COMPLEX_KIND = "quotient-complex"
RECORD_KIND = "record"
INDEX_KIND = "index"


def canonical_bytes(data: dict[str, Any]) -> bytes:
    """Serialize to the canonical byte form."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def with_schema(kind: str, payload: dict[str, Any]) -> dict[str, Any]:
    return {"schema": str(SCHEMA_VERSION), "kind": kind, **payload}


def parse_document(data: bytes, kind: str) -> dict[str, Any]:
    """Decode canonical bytes and check the schema and kind.

    Raises:
        DatabaseError: If the bytes are not JSON or carry another schema or kind
    """
    try:
        document = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DatabaseError(f"Malformed {kind} file: {e}") from e
    if not isinstance(document, dict):
        raise DatabaseError(f"Malformed {kind} file: top level is not an object")
    if document.get("schema") != str(SCHEMA_VERSION) or document.get("kind") != kind:
        raise DatabaseError(
            f"Expected {kind} with schema {SCHEMA_VERSION}, got {document.get('kind')} with schema {document.get('schema')}"
        )
    return document


def _point_to_dict(point: PointH) -> dict[str, str]:
    return {"z": str(point.z), "sq_height": render_rational(point.sq_height)}


def _point_from_dict(data: dict[str, str], ctx: FieldCtx) -> PointH:
    return PointH(ctx.parse(data["z"]), parse_rational(data["sq_height"]))


def polyhedron_to_dict(polyhedron: Polyhedron) -> dict[str, Any]:
    """Hemisphere list, vertices and cells of a polyhedron.

    Hemispheres are written as the integer coordinates (mu.a, mu.b, lam.a, lam.b).
    """
    vertex_set = polyhedron.vertex_set
    return with_schema(
        POLYHEDRON_KIND,
        {
            "m": str(polyhedron.ctx.m),
            "prune_rule": polyhedron.prune_rule,
            "horizon": str(polyhedron.horizon),
            "zeta_sq": render_rational(polyhedron.zeta_sq),
            "hemispheres": [[str(h.mu.a), str(h.mu.b), str(h.lam.a), str(h.lam.b)] for h in polyhedron.hemispheres],
            "vertices": [
                {**_point_to_dict(v.point), "supports": [str(i) for i in v.supports]} for v in vertex_set.vertices
            ],
            "faces": [
                {
                    "hemisphere": str(face.index),
                    "area": render_rational(face.area),
                    "points": [_point_to_dict(p) for p in face.points],
                }
                for face in vertex_set.faces
            ],
            "stats": polyhedron.stats().to_dict(),
        },
    )


def polyhedron_from_dict(data: dict[str, Any]) -> Polyhedron:
    """Rebuild a polyhedron written by :func:`polyhedron_to_dict`.

    Raises:
        DatabaseError: If a field is missing or malformed
    """
    try:
        ctx = FieldCtx(int(data["m"]))
        members = []
        for mu_a, mu_b, lam_a, lam_b in data["hemispheres"]:
            mu, lam = AlgInt(int(mu_a), int(mu_b), ctx), AlgInt(int(lam_a), int(lam_b), ctx)
            members.append(Hemisphere.from_pair(mu, lam))
        vertices = [
            Vertex(_point_from_dict(v, ctx), tuple(int(i) for i in v["supports"])) for v in data["vertices"]
        ]
        faces = [
            Face(
                int(f["hemisphere"]),
                tuple(_point_from_dict(p, ctx) for p in f["points"]),
                parse_rational(f["area"]),
            )
            for f in data["faces"]
        ]
        return Polyhedron(
            ctx=ctx,
            hemispheres=HemisphereList(ctx, members),
            vertex_set=VertexSet(vertices=vertices, faces=faces),
            zeta_sq=parse_rational(data["zeta_sq"]),
            horizon=int(data["horizon"]),
            prune_rule=data["prune_rule"],
        )
    except (KeyError, TypeError, ValueError) as e:
        raise DatabaseError(f"Malformed polyhedron data: {e}") from e


def complex_to_dict(qc: QuotientComplex) -> dict[str, Any]:
    return with_schema(COMPLEX_KIND, qc.to_dict())


def complex_from_dict(data: dict[str, Any]) -> QuotientComplex:
    """Rebuild a quotient complex.

    Raises:
        DatabaseError: If a field is missing or malformed
    """
    try:
        return QuotientComplex.from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise DatabaseError(f"Malformed quotient complex data: {e}") from e


def record_to_dict(record: DbRecord) -> dict[str, Any]:
    return with_schema(RECORD_KIND, {"record": record.to_dict()})


def record_from_dict(data: dict[str, Any]) -> DbRecord:
    """Rebuild a database record.

    Raises:
        DatabaseError: If a field is missing or malformed
    """
    try:
        return DbRecord.from_dict(data["record"])
    except (KeyError, TypeError, ValueError) as e:
        raise DatabaseError(f"Malformed record data: {e}") from e
