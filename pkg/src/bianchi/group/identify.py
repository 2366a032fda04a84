"""Bounded search for the matrices of PSL2(O) identifying two points.

For g = (a b; c d) sending p = (z, zeta) to q = (z', zeta') the operation
equation gives |cz + d|**2 + zeta**2 |c|**2 = D with D = zeta/zeta'. So c
lies in the disk |c|**2 <= D/zeta**2, d on the circle |cz + d|**2 = D - zeta**2 |c|**2,
and a = c z' + conj(cz + d)/D, b = (ad - 1)/c. Every candidate is checked by
applying it.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

from bianchi.arithmetic.field import FieldCtx, as_elem, rational_sqrt
from bianchi.arithmetic.ideals import cusp_scale, lattice_points_in_disk, lattice_points_on_circle
from bianchi.geometry.hemispheres import PointH
from bianchi.group.matrices import FiniteGroup, Matrix2, apply, fixes, sq_height_ratio
from bianchi.utils.exceptions import IdentificationError

logger = logging.getLogger(__name__)


def identify(p: PointH, q: PointH, ctx: FieldCtx | None = None) -> list[Matrix2]:
    """All g with c != 0 and g.p = q, sorted by their coordinates.

    Raises:
        IdentificationError: If a point has height zero
    """
    ctx = ctx or p.z.ctx
    scale = rational_sqrt(sq_height_ratio(p, q))
    if scale is None:
        return []
    found: list[Matrix2] = []
    for c in lattice_points_in_disk(ctx.zero, scale / p.sq_height):
        if (c.a, c.b) <= (0, 0):
            continue
        rest = scale - p.sq_height * c.norm()
        for d in lattice_points_on_circle(-(c * p.z), rest):
            a = c * q.z + (c * p.z + d).conj() / scale
            if not a.is_integral():
                continue
            a_int = a.to_algint()
            b = (a_int * d - 1) / c
            if not b.is_integral():
                continue
            g = Matrix2.of(a_int, b.to_algint(), c, d)
            if apply(g, p) == q:
                found.append(g)
    found.sort(key=Matrix2.to_ints)
    return found


def identify_with_translations(p: PointH, q: PointH, ctx: FieldCtx | None = None) -> list[Matrix2]:
    """All g in PSL2(O) with g.p = q, translations included."""
    ctx = ctx or p.z.ctx
    found = identify(p, q, ctx)
    if p.sq_height == q.sq_height:
        shift = q.z - p.z
        if shift.is_integral():
            found.append(Matrix2.translation(shift.to_algint()))
    found.sort(key=Matrix2.to_ints)
    return found


def cusp_pair_anchor(p: PointH, q: PointH) -> PointH:
    """Point of the geodesic between two cusps that PSL2(O) carries along with them.

    The cusp lam/mu has the height function t / (s * (|z - lam/mu|**2 + t**2))
    with s = cusp_scale, invariant under the group. The anchor is the point
    of the geodesic where both heights agree. Writing it as p.z + u*(q.z - p.z)
    gives u = s_q / (s_p + s_q) and squared height |q.z - p.z|**2 * u * (1 - u).

    Raises:
        IdentificationError: If a point is not on the boundary or both coincide
    """
    if not (p.on_boundary and q.on_boundary) or p == q:
        raise IdentificationError(f"No geodesic between the cusps {p.z} and {q.z}")
    s_p, s_q = cusp_scale(p.z), cusp_scale(q.z)
    u = s_q / (s_p + s_q)
    chord = q.z - p.z
    return PointH(as_elem(p.z + chord * u), chord.norm() * u * (1 - u))


def stabilizer(p: PointH, ctx: FieldCtx | None = None) -> FiniteGroup:
    """Stabilizer of a point of positive height."""
    group = FiniteGroup(identify_with_translations(p, p, ctx))
    logger.debug(f"stabilizer of {p.z} at height^2 {p.sq_height}: {group.type_tag}")
    return group


def edge_stabilizer(p: PointH, q: PointH, ctx: FieldCtx | None = None) -> FiniteGroup:
    """Elements fixing both endpoints of an edge."""
    return stabilizer(p, ctx).subgroup(lambda g: fixes(g, q))


def pointwise_stabilizer(points: Sequence[PointH], ctx: FieldCtx | None = None) -> FiniteGroup:
    """Elements fixing every point of a cell of positive height somewhere.

    The first point of positive height anchors the search.
    """
    anchor = next((p for p in points if p.sq_height > 0), None)
    if anchor is None:
        raise IdentificationError("A cell needs a vertex of positive height")
    return stabilizer(anchor, ctx).subgroup(lambda g: all(fixes(g, p) for p in points))
