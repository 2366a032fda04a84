"""Shared builders for the test suite.

The synthetic quotient complexes and polyhedra built here are small enough to
check by hand and let the homology, storage and CLI layers be tested without
running Swan's reduction.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from bianchi.arithmetic.field import FieldCtx, FieldElem
from bianchi.cells.complex import QuotientComplex
from bianchi.core.models import AbelianGroup, TableRow
from bianchi.core.normal_forms import IntMatrix
from bianchi.geometry.hemispheres import Hemisphere, PointH
from bianchi.geometry.swan import Face, HemisphereList, Polyhedron, Vertex, VertexSet
from bianchi.homology.invariants import PipelineResult, SpectralReport


def point(ctx: FieldCtx, x: Fraction | int, y: Fraction | int, sq_height: Fraction | int) -> PointH:
    """PointH over x + y*w with the given squared height."""
    return PointH(FieldElem(Fraction(x), Fraction(y), ctx), Fraction(sq_height))


def make_complex(
    m: int,
    boundary_1: Sequence[Sequence[int]],
    boundary_2: Sequence[Sequence[int]],
    counts: tuple[int, int, int],
    farrell: Sequence[Sequence[int]] = (),
    vertex_tags: Sequence[str] | None = None,
) -> QuotientComplex:
    """Quotient complex from dense boundary matrices.

    Args:
        m: Field parameter stored in the complex
        boundary_1: V x E matrix rows
        boundary_2: E x F matrix rows
        counts: (V, E, F), needed when a matrix has no rows
        farrell: Relation rows of the Farrell supplement
        vertex_tags: Stabilizer tags per vertex, "1" by default
    """
    v, e, f = counts
    d1 = IntMatrix.from_dense(list(boundary_1), cols=e) if boundary_1 else IntMatrix(v, e)
    d2 = IntMatrix.from_dense(list(boundary_2), cols=f) if boundary_2 else IntMatrix(e, f)
    relations = IntMatrix.from_dense(list(farrell)) if farrell else IntMatrix(0, 0)
    return QuotientComplex(
        m=m,
        vertex_count=v,
        edge_count=e,
        face_count=f,
        boundary_1=d1,
        boundary_2=d2,
        vertex_tags=list(vertex_tags) if vertex_tags is not None else ["1"] * v,
        edge_tags=["1"] * e,
        face_tags=["1"] * f,
        farrell_relations=relations,
    )


def circle_complex(m: int = 7, farrell: Sequence[Sequence[int]] = ((2,),)) -> QuotientComplex:
    """One vertex and one loop: H0 = Z, H1 = Z, H2 = 0."""
    return make_complex(m, [[0]], [], (1, 1, 0), farrell=farrell)


def unit_square_polyhedron(m: int = 7, prune_rule: str = "three-vertex") -> Polyhedron:
    """A tiny stand-in polyhedron with one hemisphere and one triangular face.

    It is not the output of Swan's reduction, only a value that exercises
    the serializers and the database.
    """
    ctx = FieldCtx(m)
    hemisphere = Hemisphere.from_pair(ctx.one, ctx.zero)
    corners = (
        point(ctx, Fraction(1, 2), 0, Fraction(3, 4)),
        point(ctx, 0, 0, 1),
        point(ctx, 0, Fraction(1, 2), Fraction(1, 2)),
    )
    vertices = [Vertex(p, (0,)) for p in corners]
    face = Face(0, corners, Fraction(1, 8))
    return Polyhedron(
        ctx=ctx,
        hemispheres=HemisphereList(ctx, [hemisphere]),
        vertex_set=VertexSet(vertices=vertices, faces=[face]),
        zeta_sq=Fraction(1, 2),
        horizon=4,
        prune_rule=prune_rule,
    )


def row_for(m: int, class_group: AbelianGroup, h1_cusp: AbelianGroup, supplement: AbelianGroup) -> TableRow:
    ctx = FieldCtx(m)
    return TableRow(ctx.discriminant, m, class_group, h1_cusp, supplement)


def synthetic_result(m: int = 7, prune_rule: str = "three-vertex") -> PipelineResult:
    """Pipeline result for a circle complex with Farrell supplement Z/2."""
    qc = circle_complex(m)
    row = row_for(m, AbelianGroup(), AbelianGroup(), AbelianGroup(0, (2,)))
    report = SpectralReport(AbelianGroup(1), 0, 1, 0)
    return PipelineResult(unit_square_polyhedron(m, prune_rule), qc, row, report, {"polyhedron": 0.5, "complex": 0.25})
