"""Swan's reduction: the hemisphere list and the Bianchi fundamental polyhedron.

The list starts with the unit hemispheres over the fundamental rectangle D0
and grows norm value by norm value. After each stretch the exact cell of every
hemisphere on the floor of the polyhedron is computed by clipping with the
half-planes where it is not below its neighbours. The lowest vertex height
decides whether any unrecorded hemisphere could still matter.
"""

from __future__ import annotations

import bisect
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from bianchi.arithmetic.field import AlgInt, FieldCtx, FieldElem, sqrt_upper_bound
from bianchi.arithmetic.forms import class_number
from bianchi.arithmetic.ideals import (
    elements_of_norm,
    in_rectangle,
    is_unimodular,
    lattice_key,
    lattice_points_in_disk,
    lattice_points_on_circle,
    norm_values,
    rectangle_area,
    rectangle_center,
    rectangle_lattice_points,
    rectangle_sq_half_diagonal,
    singular_points,
)
from bianchi.core.models import PolyhedronStats
from bianchi.geometry.erasure import ErasureRule, ErasureRuleFactory
from bianchi.geometry.hemispheres import (
    Hemisphere,
    PointH,
    agree_coefficients,
    everywhere_below,
    overlaps,
    point_strictly_below,
)
from bianchi.utils.exceptions import DegenerateCollectionError

logger = logging.getLogger(__name__)

Coords = tuple[Fraction, Fraction]


def _order_key(h: Hemisphere) -> tuple:
    return (h.norm_mu, h.center.coords(), (h.mu.a, h.mu.b, h.lam.a, h.lam.b))


class HemisphereList:
    """Ordered list of hemispheres with centers in D0.

    Members are kept sorted by norm(mu), then by center, and no two members
    share (center, squared radius).

    Attributes:
        ctx: Field context
        members: The hemispheres in list order
    """

    def __init__(self, ctx: FieldCtx, members: Sequence[Hemisphere] = ()):
        self.ctx = ctx
        self.members: list[Hemisphere] = []
        self._keys: set[tuple[Fraction, Fraction, Fraction]] = set()
        for h in members:
            self.add(h)

    def add(self, h: Hemisphere) -> bool:
        """Insert a hemisphere in order; returns False for a duplicate."""
        if h.key in self._keys:
            return False
        self._keys.add(h.key)
        bisect.insort(self.members, h, key=_order_key)
        return True

    def __contains__(self, h: Hemisphere) -> bool:
        return h.key in self._keys

    def __iter__(self) -> Iterator[Hemisphere]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, index: int) -> Hemisphere:
        return self.members[index]

    @property
    def max_norm(self) -> int:
        return max((h.norm_mu for h in self.members), default=0)

    def representatives(self) -> list[int]:
        """Indices of the first member of each orbit under translations by O."""
        seen: set[tuple] = set()
        indices = []
        for i, h in enumerate(self.members):
            orbit = (lattice_key(h.center), h.sq_radius)
            if orbit not in seen:
                seen.add(orbit)
                indices.append(i)
        return indices


class TranslateIndex:
    """Translates of list members whose centers lie near D0, on a grid.

    Every translate S + t with |center - center(D0)| <= half diagonal + reach
    is stored, so all translates within ``reach`` of a point of D0 are found.
    """

    def __init__(self, ctx: FieldCtx, members: Sequence[Hemisphere], reach: int):
        self.ctx = ctx
        self._row_scale = max(1, math.isqrt(ctx.m))
        self._cells: dict[tuple[int, int], list[tuple[int, Hemisphere]]] = {}
        middle = rectangle_center(ctx)
        bound = (sqrt_upper_bound(rectangle_sq_half_diagonal(ctx)) + reach) ** 2
        for index, h in enumerate(members):
            for t in lattice_points_in_disk(middle - h.center, bound):
                moved = h.translate(t)
                self._cells.setdefault(self._cell(*moved.center.coords()), []).append((index, moved))

    def _cell(self, x: Fraction, y: Fraction) -> tuple[int, int]:
        return math.floor(x), math.floor(y * self._row_scale)

    def near(self, z: AlgInt | FieldElem, reach: int) -> Iterator[tuple[int, Hemisphere]]:
        """Stored translates whose centers may lie within ``reach`` of z."""
        x, y = z.coords()
        reach_y = sqrt_upper_bound(Fraction(reach * reach, self.ctx.m))
        for i in range(math.floor(x - reach), math.floor(x + reach) + 1):
            for j in range(math.floor((y - reach_y) * self._row_scale), math.floor((y + reach_y) * self._row_scale) + 1):
                yield from self._cells.get((i, j), ())


# -- recording ----------------------------------------------------------------


def initial_step(ctx: FieldCtx) -> HemisphereList:
    """The unit hemispheres centered at the ring elements of D0.

    Examples:
        m=7: centers 0, w and 1 + w
    """
    hlist = HemisphereList(ctx, [Hemisphere.from_pair(ctx.one, t) for t in rectangle_lattice_points(ctx)])
    logger.debug(f"m={ctx.m}: {len(hlist)} unit hemispheres over D0")
    return hlist


def estimate_E(ctx: FieldCtx, h: int) -> Fraction:
    """Extrapolated largest norm(mu) needed, used as the first horizon.

    Examples:
        m=7, h=1: 4
        m=5, h=2: 115
    """
    if h < 1:
        raise ValueError(f"Class number must be positive, got {h}")
    m = ctx.m
    if ctx.three_mod_four:
        return Fraction(5 * m, 2) * h - 2 * m + Fraction(1, 2)
    return Fraction(21 * m * h - 19 * m)


def record_hemispheres(n_sq: int, hlist: HemisphereList) -> HemisphereList:
    """Record the hemispheres of squared radius 1/n_sq over D0.

    A candidate S(mu, lam) with lam/mu in D0 is kept when the pair is
    unimodular and the hemisphere is not everywhere below a translate of a
    member recorded earlier. ``hlist`` is extended in place and returned.
    """
    ctx = hlist.ctx
    index = TranslateIndex(ctx, hlist.members, reach=1)
    middle = rectangle_center(ctx)
    spread = n_sq * rectangle_sq_half_diagonal(ctx)
    added = 0
    for mu in elements_of_norm(n_sq, ctx):
        for lam in lattice_points_in_disk(mu * middle, spread):
            if not in_rectangle(lam / mu) or not is_unimodular(mu, lam):
                continue
            candidate = Hemisphere.from_pair(mu, lam, check=False)
            if candidate in hlist:
                continue
            if any(everywhere_below(candidate, other) for _, other in index.near(candidate.center, 1)):
                continue
            hlist.add(candidate)
            added += 1
    logger.debug(f"m={ctx.m}: norm {n_sq} recorded {added} hemispheres, list size {len(hlist)}")
    return hlist


# -- vertices -----------------------------------------------------------------


@dataclass(frozen=True)
class Vertex:
    """Vertex of the floor of the polyhedron.

    Attributes:
        point: The vertex, squared height 0 for singular points
        supports: List indices of the hemispheres whose cells contain it
    """
    point: PointH
    supports: tuple[int, ...]


@dataclass(frozen=True)
class Face:
    """Cell of one hemisphere on the floor of the polyhedron.

    Attributes:
        index: List index of the hemisphere
        points: Boundary cycle, counterclockwise in plane coordinates
        area: Area of the projection in plane coordinates
    """
    index: int
    points: tuple[PointH, ...]
    area: Fraction


@dataclass
class VertexSet:
    """Vertices and cells computed over a hemisphere list."""
    vertices: list[Vertex] = field(default_factory=list)
    faces: list[Face] = field(default_factory=list)
    survivors: dict[int, list[PointH]] = field(default_factory=dict)

    @property
    def min_sq_height(self) -> Fraction | None:
        heights = [v.point.sq_height for v in self.vertices if v.point.sq_height > 0]
        return min(heights) if heights else None


def _shoelace(points: Sequence[Coords]) -> Fraction:
    total = Fraction(0)
    for (x0, y0), (x1, y1) in zip(points, [*points[1:], points[0]], strict=True):
        total += x0 * y1 - x1 * y0
    return total / 2


def _clip(polygon: list[Coords], a: Fraction, b: Fraction, c: Fraction) -> list[Coords]:
    """Part of a convex polygon with a*x + b*y - c >= 0."""
    clipped: list[Coords] = []
    count = len(polygon)
    for i in range(count):
        current, following = polygon[i], polygon[(i + 1) % count]
        f_cur = a * current[0] + b * current[1] - c
        f_next = a * following[0] + b * following[1] - c
        if f_cur >= 0:
            clipped.append(current)
        if (f_cur > 0 > f_next) or (f_cur < 0 < f_next):
            t = f_cur / (f_cur - f_next)
            clipped.append((current[0] + t * (following[0] - current[0]), current[1] + t * (following[1] - current[1])))
    deduped: list[Coords] = []
    for point in clipped:
        if not deduped or deduped[-1] != point:
            deduped.append(point)
    while len(deduped) > 1 and deduped[0] == deduped[-1]:
        deduped.pop()
    return deduped


def _meets_open_disk(polygon: Sequence[Coords], center: Coords, sq_radius: Fraction, m: int) -> bool:
    """Whether a convex counterclockwise polygon meets the open disk."""
    cx, cy = center

    def dist(px: Fraction, py: Fraction) -> Fraction:
        return (px - cx) ** 2 + m * (py - cy) ** 2

    inside = True
    for (x0, y0), (x1, y1) in zip(polygon, [*polygon[1:], polygon[0]], strict=True):
        dx, dy = x1 - x0, y1 - y0
        if dx * (cy - y0) - dy * (cx - x0) < 0:
            inside = False
        length = dx * dx + m * dy * dy
        t = Fraction(0) if length == 0 else ((cx - x0) * dx + m * (cy - y0) * dy) / length
        t = min(max(t, Fraction(0)), Fraction(1))
        if dist(x0 + t * dx, y0 + t * dy) < sq_radius:
            return True
    return inside


def _angular_order(points: list[Coords]) -> list[Coords]:
    """Sort points counterclockwise around their centroid."""
    cx = sum((p[0] for p in points), Fraction(0)) / len(points)
    cy = sum((p[1] for p in points), Fraction(0)) / len(points)

    def half(p: Coords) -> int:
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if dy > 0 or (dy == 0 and dx > 0) else 1

    def compare(p: Coords, q: Coords) -> int:
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx)
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(points, key=cmp_to_key(compare))


class _CellBuilder:
    """Computes the cell of each list member on the floor of the polyhedron."""

    def __init__(self, hlist: HemisphereList):
        self.hlist = hlist
        self.ctx = hlist.ctx
        self.index = TranslateIndex(self.ctx, hlist.members, reach=2)
        self.singular = singular_points(self.ctx)
        self.singular_keys = {lattice_key(z) for z in self.singular}

    def neighbours(self, h: Hemisphere) -> list[Hemisphere]:
        """Translates whose closed disks meet the disk of h, h itself excluded."""
        found: dict[tuple, Hemisphere] = {}
        for _, other in self.index.near(h.center, 2):
            if other.key != h.key and other.key not in found and overlaps(h, other):
                found[other.key] = other
        return [found[k] for k in sorted(found)]

    def cell(self, h: Hemisphere) -> tuple[list[PointH], Face | None]:
        """Surviving vertices of h and its face when the cell is a polygon.

        Raises:
            DegenerateCollectionError: If points near the rim of h are uncovered
        """
        ctx = self.ctx
        neighbours = self.neighbours(h)
        cx, cy = h.center.coords()
        rx = sqrt_upper_bound(h.sq_radius)
        ry = sqrt_upper_bound(h.sq_radius / ctx.m)
        polygon: list[Coords] = [(cx - rx, cy - ry), (cx + rx, cy - ry), (cx + rx, cy + ry), (cx - rx, cy + ry)]
        for other in neighbours:
            a, b, c = agree_coefficients(h, other)
            if a == 0 and b == 0:
                if c > 0:
                    polygon = []
                continue
            polygon = _clip(polygon, a, b, c)
            if not polygon:
                break

        survivors: dict[Coords, PointH] = {}
        outside = False
        for x, y in polygon:
            z = ctx.from_coords(x, y)
            sq_height = h.sq_height_at(z)
            if sq_height < 0:
                outside = True
            else:
                survivors[(x, y)] = PointH(z, sq_height)
        if outside and len(polygon) >= 3 and _shoelace(polygon) != 0:
            if _meets_open_disk(polygon, (cx, cy), h.sq_radius, ctx.m):
                raise DegenerateCollectionError(f"uncovered points on the rim of {h}")

        for sigma in self.singular:
            for t in lattice_points_on_circle(h.center - sigma, h.sq_radius):
                point = PointH(sigma + t, Fraction(0))
                if not any(point_strictly_below(point, other) for other in neighbours):
                    survivors.setdefault(point.z.coords(), point)

        for point in survivors.values():
            if point.on_boundary and lattice_key(point.z) not in self.singular_keys:
                raise DegenerateCollectionError(f"uncovered non-singular point {point.z} on {h}")

        face = None
        if not outside and len(survivors) >= 3:
            ordered = _angular_order(list(survivors))
            area = _shoelace(ordered)
            if area > 0:
                face = Face(-1, tuple(survivors[p] for p in ordered), area)
        return list(survivors.values()), face


def _insert_edge_vertices(face: Face, classes: dict[tuple, FieldElem], h: Hemisphere) -> Face:
    """Subdivide the edges of a face at vertices lying inside them."""
    points = list(face.points)
    refined: list[PointH] = []
    for start, end in zip(points, [*points[1:], points[0]], strict=True):
        refined.append(start)
        middle = (start.z + end.z) * Fraction(1, 2)
        reach = (end.z - start.z).norm() / 4
        sx, sy = start.z.coords()
        ex, ey = end.z.coords()
        inner: list[tuple[Fraction, PointH]] = []
        for base in classes.values():
            for t in lattice_points_in_disk(middle - base, reach):
                z = base + t
                zx, zy = z.coords()
                if (ex - sx) * (zy - sy) - (ey - sy) * (zx - sx) != 0:
                    continue
                span = (ex - sx) if ex != sx else (ey - sy)
                param = ((zx - sx) if ex != sx else (zy - sy)) / span
                if 0 < param < 1:
                    inner.append((param, PointH(z, h.sq_height_at(z))))
        refined.extend(point for _, point in sorted(inner, key=lambda item: item[0]))
    return Face(face.index, tuple(refined), face.area)


def compute_vertices(hlist: HemisphereList) -> VertexSet:
    """Cells and vertices of the floor of the polyhedron defined by ``hlist``.

    Raises:
        DegenerateCollectionError: If the list does not cover the plane yet
    """
    ctx = hlist.ctx
    builder = _CellBuilder(hlist)
    result = VertexSet()
    merged: dict[tuple, tuple[PointH, set[int]]] = {}
    for i, h in enumerate(hlist):
        points, face = builder.cell(h)
        result.survivors[i] = points
        for point in points:
            merged.setdefault(point.z.key, (point, set()))[1].add(i)
        if face is not None:
            result.faces.append(Face(i, face.points, face.area))

    result.vertices = [Vertex(point, tuple(sorted(supports))) for point, supports in merged.values()]
    result.vertices.sort(key=lambda v: v.point.z.coords())
    if result.min_sq_height is None:
        raise DegenerateCollectionError("no vertex of positive height")

    representatives = set(hlist.representatives())
    covered = sum((face.area for face in result.faces if face.index in representatives), Fraction(0))
    if covered != rectangle_area(ctx):
        raise DegenerateCollectionError(f"cells cover area {covered} of {rectangle_area(ctx)}")
    boundary = {lattice_key(v.point.z) for v in result.vertices if v.point.on_boundary}
    if boundary != builder.singular_keys:
        raise DegenerateCollectionError("a singular point is not a vertex yet")

    classes = {lattice_key(v.point.z): v.point.z for v in result.vertices}
    result.faces = [_insert_edge_vertices(face, classes, hlist[face.index]) for face in result.faces]
    return result


def minimal_vertex_height(
    hlist: HemisphereList, rule: str | ErasureRule = "three-vertex"
) -> tuple[Fraction, HemisphereList, VertexSet]:
    """Lowest positive vertex height, the pruned list and its vertices.

    Hemispheres the erasure rule rejects are removed and the vertices are
    computed once more on the pruned list.

    Raises:
        DegenerateCollectionError: If the list does not cover the plane yet
    """
    if isinstance(rule, str):
        rule = ErasureRuleFactory.create_rule(rule)
    vertex_set = compute_vertices(hlist)
    kept = [
        h for i, h in enumerate(hlist) if rule.keeps([p.z.coords() for p in vertex_set.survivors.get(i, [])])
    ]
    if len(kept) < len(hlist):
        logger.debug(f"m={hlist.ctx.m}: erased {len(hlist) - len(kept)} hemispheres ({rule.name})")
        hlist = HemisphereList(hlist.ctx, kept)
        vertex_set = compute_vertices(hlist)
    zeta_sq = vertex_set.min_sq_height
    assert zeta_sq is not None
    logger.debug(f"m={hlist.ctx.m}: minimal vertex height squared {zeta_sq}, {len(vertex_set.vertices)} vertices")
    return zeta_sq, hlist, vertex_set


# -- the loop -----------------------------------------------------------------


@dataclass
class Polyhedron:
    """Result of Swan's reduction for one field.

    Attributes:
        ctx: Field context
        hemispheres: Final pruned hemisphere list
        vertex_set: Vertices and cells of the floor
        zeta_sq: Minimal positive squared vertex height
        horizon: Largest norm value recorded
        prune_rule: Erasure rule used
    """
    ctx: FieldCtx
    hemispheres: HemisphereList
    vertex_set: VertexSet
    zeta_sq: Fraction
    horizon: int
    prune_rule: str = "three-vertex"

    @property
    def vertices(self) -> list[Vertex]:
        return self.vertex_set.vertices

    @property
    def faces(self) -> list[Face]:
        return self.vertex_set.faces

    def stats(self) -> PolyhedronStats:
        return PolyhedronStats(
            hemispheres=len(self.hemispheres),
            vertices=len({lattice_key(v.point.z) for v in self.vertices}),
            max_norm=self.hemispheres.max_norm,
            min_sq_height=str(self.zeta_sq),
            horizon=self.horizon,
        )


def compute_polyhedron(
    ctx: FieldCtx, prune_rule: str = "three-vertex", horizon: int | None = None
) -> Polyhedron:
    """Run Swan's reduction until no unrecorded hemisphere can matter.

    Args:
        ctx: Field context
        prune_rule: Name of the erasure rule
        horizon: First norm horizon, defaults to the estimate from the class number

    Returns:
        The final polyhedron
    """
    rule = ErasureRuleFactory.create_rule(prune_rule)
    if horizon is None:
        horizon = max(1, math.ceil(estimate_E(ctx, class_number(ctx))))
    hlist = initial_step(ctx)
    values = norm_values(ctx, start=2)
    next_norm = next(values)
    while True:
        while next_norm <= horizon:
            record_hemispheres(next_norm, hlist)
            next_norm = next(values)
        try:
            zeta_sq, hlist, vertex_set = minimal_vertex_height(hlist, rule)
        except DegenerateCollectionError as e:
            extended = max(2 * horizon, next_norm)
            logger.info(f"m={ctx.m}: not a collection at horizon {horizon} ({e}), extending to {extended}")
            horizon = extended
            continue
        if zeta_sq * next_norm >= 1:
            break
        horizon = max(math.ceil(1 / zeta_sq), next_norm)
        logger.info(f"m={ctx.m}: vertex height squared {zeta_sq}, extending horizon to {horizon}")

    polyhedron = Polyhedron(ctx, hlist, vertex_set, zeta_sq, horizon, rule.name)
    stats = polyhedron.stats()
    logger.info(
        f"m={ctx.m}: polyhedron finished with {stats.hemispheres} hemispheres, "
        f"max norm {stats.max_norm}, zeta^2 {stats.min_sq_height}"
    )
    return polyhedron


# -- audits -------------------------------------------------------------------


def verify_termination(polyhedron: Polyhedron) -> int:
    """Count unimodular pairs with a vertex strictly below their hemisphere.

    Enumerates every pair (mu, lam) with norm(mu) up to the inverse of the
    lowest vertex height afresh, without any pruning. Zero means the stopping
    criterion really held.
    """
    ctx = polyhedron.ctx
    proper = [v.point for v in polyhedron.vertices if v.point.sq_height > 0]
    limit = math.floor(1 / polyhedron.zeta_sq)
    violations = 0
    for n_sq in norm_values(ctx):
        if n_sq > limit:
            break
        for mu in elements_of_norm(n_sq, ctx):
            for point in proper:
                room = 1 - n_sq * point.sq_height
                if room <= 0:
                    continue
                for lam in lattice_points_in_disk(mu * point.z, room, strict=True):
                    if is_unimodular(mu, lam):
                        logger.warning(f"m={ctx.m}: vertex {point.z} lies below S({mu}, {lam})")
                        violations += 1
    return violations


@dataclass(frozen=True)
class BoundAudit:
    """Largest norm(mu) of the final list against the known bound."""
    max_norm: int
    bound: Fraction | None

    @property
    def within(self) -> bool:
        return self.bound is None or self.max_norm <= self.bound


def bound_audit(polyhedron: Polyhedron, h: int) -> BoundAudit:
    """Compare the largest norm(mu) with the bound known for class number 1 or 2."""
    delta = abs(polyhedron.ctx.discriminant)
    if h == 1:
        bound: Fraction | None = Fraction(delta + 1, 2) ** 2
    elif h == 2:
        factor = Fraction(3) if polyhedron.ctx.three_mod_four else 5 + Fraction(61, 116)
        bound = (factor * delta) ** 2
    else:
        bound = None
    return BoundAudit(polyhedron.hemispheres.max_norm, bound)
