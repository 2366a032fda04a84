"""Cell structure of the floor of the fundamental polyhedron and its quotient.

The 2-cells of the patch are the polygons of the hemispheres on the floor of
the polyhedron, one per hemisphere orbit under translations, with their edges
and vertices taken at exact coordinates. Cells are matched under PSL2(O)
through the points spanning them, subdivided until every stabilizer fixes its
cell pointwise and glued into the quotient complex.

Subdivision vertices are abstract sites. The midpoint of an edge and the
centre of a 2-cell are determined by the sites they subdivide, so the group
acts on them by acting on those sites.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Union

from bianchi.arithmetic.field import FieldCtx
from bianchi.arithmetic.forms import BinaryQuadraticForm, class_number, ideal_class_of_cusp
from bianchi.arithmetic.ideals import lattice_key
from bianchi.core.normal_forms import IntMatrix
from bianchi.geometry.hemispheres import PointH
from bianchi.geometry.swan import HemisphereList, Polyhedron, TranslateIndex, VertexSet
from bianchi.group.identify import cusp_pair_anchor, identify_with_translations
from bianchi.group.matrices import FiniteGroup, Matrix2, apply
from bianchi.utils.exceptions import IdentificationError, InvariantViolationError, UnmatchedCellError

logger = logging.getLogger(__name__)

MAX_SUBDIVISION_ROUNDS = 3
CUSP_TAG = "cusp"


@dataclass(frozen=True)
class MidSite:
    """Midpoint vertex of an edge whose stabilizer swaps its endpoints."""
    ends: frozenset[Site]


@dataclass(frozen=True)
class CentreSite:
    """Cone vertex of a 2-cell whose stabilizer moves its vertices."""
    corners: frozenset[Site]


Site = Union[PointH, MidSite, CentreSite]


def site_key(site: Site) -> tuple:
    """Sort key of a site; points come first, then midpoints, then centres."""
    if isinstance(site, PointH):
        return (0, site.key)
    if isinstance(site, MidSite):
        return (1, tuple(sorted(site_key(s) for s in site.ends)))
    return (2, tuple(sorted(site_key(s) for s in site.corners)))


def site_points(site: Site) -> set[PointH]:
    """Points of the floor a site is determined by."""
    if isinstance(site, PointH):
        return {site}
    parents = site.ends if isinstance(site, MidSite) else site.corners
    return set().union(*(site_points(s) for s in parents))


def act(g: Matrix2, site: Site) -> Site:
    """Image of a site under g.

    Raises:
        IdentificationError: If a cusp of the site is sent to infinity
    """
    if isinstance(site, PointH):
        return apply(g, site)
    if isinstance(site, MidSite):
        return MidSite(frozenset(act(g, s) for s in site.ends))
    return CentreSite(frozenset(act(g, s) for s in site.corners))


@dataclass(frozen=True)
class Cell:
    """Cell of the fundamental patch.

    Attributes:
        dim: Dimension 0, 1 or 2
        sites: The vertex of a 0-cell, (tail, head) of an edge with the tail
            first in site order, the counterclockwise boundary cycle of a 2-cell
        hemisphere: List index of the hemisphere carrying a 2-cell
    """
    dim: int
    sites: tuple[Site, ...]
    hemisphere: int | None = field(default=None, compare=False)

    @property
    def key(self) -> tuple:
        return (self.dim, tuple(site_key(s) for s in self.sites))

    @property
    def points(self) -> tuple[PointH, ...]:
        """Distinct points of the floor spanning the cell, sorted."""
        found = set().union(*(site_points(s) for s in self.sites))
        return tuple(sorted(found, key=lambda p: p.key))

    @property
    def is_cusp(self) -> bool:
        """True for a 0-cell at a singular point."""
        return self.dim == 0 and isinstance(self.sites[0], PointH) and self.sites[0].on_boundary

    def edges(self) -> Iterator[tuple[Site, Site]]:
        """Consecutive site pairs along the boundary cycle of a 2-cell."""
        count = len(self.sites)
        for i in range(count):
            yield self.sites[i], self.sites[(i + 1) % count]


def vertex_cell(site: Site) -> Cell:
    return Cell(0, (site,))


def edge_cell(a: Site, b: Site) -> Cell:
    """The edge between two sites in canonical orientation."""
    tail, head = sorted((a, b), key=site_key)
    return Cell(1, (tail, head))


def _image(g: Matrix2, cell: Cell) -> tuple[Site, ...] | None:
    try:
        return tuple(act(g, s) for s in cell.sites)
    except IdentificationError:
        return None


def _match_sign(image: tuple[Site, ...], target: Cell) -> int | None:
    """+1 or -1 when ``image`` is ``target`` with equal or opposite orientation."""
    sites = target.sites
    if len(image) != len(sites):
        return None
    if target.dim == 0:
        return 1 if image == sites else None
    if target.dim == 1:
        if image == sites:
            return 1
        return -1 if image == sites[::-1] else None
    if image[0] not in sites:
        return None
    n, j = len(sites), sites.index(image[0])
    if image == tuple(sites[(j + i) % n] for i in range(n)):
        return 1
    if image == tuple(sites[(j - i) % n] for i in range(n)):
        return -1
    return None


def _fixes_pointwise(group: FiniteGroup | None, cell: Cell) -> bool:
    if group is None:
        return True
    return all(_image(g, cell) == cell.sites for g in group)


class _Matcher:
    """Finds the group elements carrying one cell onto another.

    Candidates come from identifying a point of positive height of the first
    cell with the points of the second that lie in the same vertex orbit.
    Cells spanned by cusps alone are anchored at ``cusp_pair_anchor`` of two
    of their cusps, which is matched against the anchors of every cusp pair
    of the second cell.
    """

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.vertex_orbit: dict[PointH, int] = {}
        self._cache: dict[tuple[PointH, PointH], list[Matrix2]] = {}

    def _identify(self, p: PointH, q: PointH) -> list[Matrix2]:
        key = (p, q)
        if key not in self._cache:
            self._cache[key] = identify_with_translations(p, q, self.ctx)
        return self._cache[key]

    def _cusp_candidates(self, source: Sequence[PointH], target: Sequence[PointH]) -> Iterator[Matrix2]:
        if len(source) < 2:
            return
        anchor = cusp_pair_anchor(source[0], source[1])
        orbits = self._pair_orbits(source[0], source[1])
        for q0, q1 in combinations(target, 2):
            pair = self._pair_orbits(q0, q1)
            if orbits is not None and pair is not None and pair != orbits:
                continue
            yield from self._identify(anchor, cusp_pair_anchor(q0, q1))

    def _pair_orbits(self, p: PointH, q: PointH) -> tuple[int, int] | None:
        if p not in self.vertex_orbit or q not in self.vertex_orbit:
            return None
        return tuple(sorted((self.vertex_orbit[p], self.vertex_orbit[q])))

    def _candidates(self, source: Sequence[PointH], target: Sequence[PointH]) -> Iterator[Matrix2]:
        anchor = next((p for p in source if not p.on_boundary), None)
        if anchor is None:
            yield from self._cusp_candidates(source, target)
            return
        orbit = self.vertex_orbit.get(anchor)
        for q in target:
            if q.on_boundary or (orbit is not None and self.vertex_orbit.get(q, orbit) != orbit):
                continue
            yield from self._identify(anchor, q)

    def transports(self, a: Cell, b: Cell, *, first: bool = False) -> list[tuple[Matrix2, int]]:
        """Pairs (g, sign) with g.a = b, sign comparing the orientations."""
        if a.dim != b.dim or len(a.sites) != len(b.sites):
            return []
        source, target = a.points, b.points
        if len(source) != len(target):
            return []
        found: list[tuple[Matrix2, int]] = []
        for g in self._candidates(source, target):
            image = _image(g, a)
            sign = None if image is None else _match_sign(image, b)
            if sign is not None:
                found.append((g, sign))
                if first:
                    break
        return found

    def setwise_stabilizer(self, cell: Cell) -> FiniteGroup | None:
        """Elements mapping the cell onto itself, None for a cusp."""
        if cell.is_cusp:
            return None
        return FiniteGroup(g for g, _ in self.transports(cell, cell))


# -- patch extraction ---------------------------------------------------------


def _check_convex(face_points: Sequence[PointH], index: int) -> None:
    coords = [p.z.coords() for p in face_points]
    count = len(coords)
    for i in range(count):
        (x0, y0), (x1, y1), (x2, y2) = coords[i], coords[(i + 1) % count], coords[(i + 2) % count]
        if (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1) < 0:
            raise InvariantViolationError(f"Cell of hemisphere {index} is not convex at {face_points[(i + 1) % count].z}")


def _on_second_hemisphere(a: PointH, b: PointH, own_key: tuple, index: TranslateIndex) -> bool:
    for _, other in index.near(a.z, 2):
        if other.key == own_key:
            continue
        if other.sq_height_at(a.z) == a.sq_height and other.sq_height_at(b.z) == b.sq_height:
            return True
    return False


def extract_boundary_cells(hlist: HemisphereList, vertex_set: VertexSet, ctx: FieldCtx) -> list[Cell]:
    """Cells of the floor of the polyhedron over one translation domain.

    One 2-cell is taken per hemisphere orbit under translations. Its edges
    and vertices follow with exact coordinates. Every edge is checked to lie
    on a second hemisphere, i.e. on an agree-line.

    Raises:
        InvariantViolationError: If a cell has fewer than 3 vertices, is not
            convex or has an edge on a single hemisphere
    """
    representatives = set(hlist.representatives())
    index = TranslateIndex(ctx, hlist.members, reach=2)
    cells: dict[Cell, None] = {}
    for face in vertex_set.faces:
        if face.index not in representatives:
            continue
        if len(face.points) < 3:
            raise InvariantViolationError(f"Cell of hemisphere {face.index} has {len(face.points)} vertices")
        _check_convex(face.points, face.index)
        own_key = hlist[face.index].key
        face_cell = Cell(2, tuple(face.points), face.index)
        for point in face.points:
            cells.setdefault(vertex_cell(point))
        for a, b in face_cell.edges():
            edge = edge_cell(a, b)
            if edge in cells:
                continue
            if not _on_second_hemisphere(a, b, own_key, index):
                raise InvariantViolationError(f"Edge {a.z} -> {b.z} lies on hemisphere {face.index} only")
            cells[edge] = None
        cells.setdefault(face_cell)
    result = sorted(cells, key=lambda c: c.key)
    counts = [sum(1 for c in result if c.dim == d) for d in range(3)]
    logger.debug(f"m={ctx.m}: patch with {counts[0]} vertices, {counts[1]} edges, {counts[2]} 2-cells")
    return result


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[Any, Any] = {}

    def find(self, x: Any) -> Any:
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: Any, y: Any) -> None:
        self.parent[self.find(x)] = self.find(y)


def floege_complex(cells: Iterable[Cell], ctx: FieldCtx) -> list[Cell]:
    """The fundamental patch of the retract onto the floor of the tessellation.

    Only floor cells exist in the patch, so no cell touches the cusp at
    infinity. Singular cusps enter as vertices of height 0. The patch must be
    connected modulo translations and has cusp vertices exactly when the
    class number exceeds 1.

    Raises:
        InvariantViolationError: If the patch is disconnected or its cusps
            disagree with the class number
    """
    cells = sorted(cells, key=lambda c: c.key)
    components = _UnionFind()

    def vertex_class(site: Site) -> tuple:
        return (lattice_key(site.z), site.sq_height) if isinstance(site, PointH) else site_key(site)

    for cell in cells:
        if cell.dim == 0:
            components.find(vertex_class(cell.sites[0]))
        elif cell.dim == 1:
            components.union(vertex_class(cell.sites[0]), vertex_class(cell.sites[1]))
    roots = {components.find(x) for x in list(components.parent)}
    if len(roots) != 1:
        raise InvariantViolationError(f"m={ctx.m}: patch has {len(roots)} components")

    has_cusps = any(cell.is_cusp for cell in cells)
    if has_cusps != (class_number(ctx) > 1):
        raise InvariantViolationError(f"m={ctx.m}: cusp vertices present={has_cusps} with class number {class_number(ctx)}")
    return cells


# -- orbits -------------------------------------------------------------------


@dataclass
class CellOrbits:
    """Orbits of the patch cells under PSL2(O).

    Attributes:
        representatives: Per dimension, the first cell of each orbit
        assignment: Cell -> (orbit, g, sign) with g carrying the
            representative onto the cell, None for cusps
        stabilizers: Representative -> setwise stabilizer, None for cusps
        cusp_classes: Vertex orbit -> ideal class of a cusp orbit
    """
    representatives: dict[int, list[Cell]]
    assignment: dict[Cell, tuple[int, Matrix2 | None, int]]
    stabilizers: dict[Cell, FiniteGroup | None]
    cusp_classes: dict[int, BinaryQuadraticForm] = field(default_factory=dict)

    def orbit(self, cell: Cell) -> int:
        return self.assignment[cell][0]

    def counts(self) -> tuple[int, int, int]:
        reps = self.representatives
        return len(reps[0]), len(reps[1]), len(reps[2])


def _signature(cell: Cell, matcher: _Matcher) -> tuple[int, ...]:
    return tuple(sorted(matcher.vertex_orbit[p] for p in cell.points))


def identify_cells(cells: Sequence[Cell], ctx: FieldCtx) -> CellOrbits:
    """Partition the patch cells into orbits and record the gluing matrices.

    Cells are visited in key order; each is compared with the orbit
    representatives found so far whose vertices lie in the same vertex
    orbits. Cusp vertices are sorted into orbits by their ideal class.
    """
    matcher = _Matcher(ctx)
    reps: dict[int, list[Cell]] = {0: [], 1: [], 2: []}
    assignment: dict[Cell, tuple[int, Matrix2 | None, int]] = {}
    cusp_orbits: dict[BinaryQuadraticForm, int] = {}
    signatures: dict[int, list[tuple[int, ...]]] = {1: [], 2: []}

    for cell in sorted(cells, key=lambda c: c.key):
        if cell.is_cusp:
            form = ideal_class_of_cusp(cell.sites[0].z)
            if form not in cusp_orbits:
                cusp_orbits[form] = len(reps[0])
                reps[0].append(cell)
            assignment[cell] = (cusp_orbits[form], None, 1)
            matcher.vertex_orbit[cell.sites[0]] = cusp_orbits[form]
            continue

        signature = _signature(cell, matcher) if cell.dim > 0 else ()
        match: tuple[int, Matrix2 | None, int] | None = None
        for k, rep in enumerate(reps[cell.dim]):
            if rep.is_cusp or (cell.dim > 0 and signatures[cell.dim][k] != signature):
                continue
            found = matcher.transports(rep, cell, first=True)
            if found:
                g, sign = found[0]
                match = (k, g, sign)
                break
        if match is None:
            match = (len(reps[cell.dim]), Matrix2.identity(ctx), 1)
            reps[cell.dim].append(cell)
            if cell.dim > 0:
                signatures[cell.dim].append(signature)
        assignment[cell] = match
        if cell.dim == 0 and isinstance(cell.sites[0], PointH):
            matcher.vertex_orbit[cell.sites[0]] = match[0]

    stabilizers = {rep: matcher.setwise_stabilizer(rep) for d in range(3) for rep in reps[d]}
    orbits = CellOrbits(reps, assignment, stabilizers, {k: form for form, k in cusp_orbits.items()})
    logger.debug(f"m={ctx.m}: orbit counts (V, E, F) = {orbits.counts()}, {len(cusp_orbits)} cusp orbits")
    return orbits


# -- subdivision --------------------------------------------------------------


def _refine(cells: Sequence[Cell], orbits: CellOrbits, flipped: set[int], moved: set[int]) -> list[Cell]:
    refined: dict[Cell, None] = {}
    mids: dict[frozenset[Site], MidSite] = {}
    for cell in cells:
        if cell.dim == 0:
            refined.setdefault(cell)
        elif cell.dim == 1 and orbits.orbit(cell) in flipped:
            tail, head = cell.sites
            mid = MidSite(frozenset(cell.sites))
            mids[frozenset(cell.sites)] = mid
            refined.setdefault(vertex_cell(mid))
            refined.setdefault(edge_cell(tail, mid))
            refined.setdefault(edge_cell(mid, head))
        elif cell.dim == 1:
            refined.setdefault(cell)

    for cell in cells:
        if cell.dim != 2:
            continue
        cycle: list[Site] = []
        for a, b in cell.edges():
            cycle.append(a)
            if frozenset((a, b)) in mids:
                cycle.append(mids[frozenset((a, b))])
        if orbits.orbit(cell) not in moved:
            refined.setdefault(Cell(2, tuple(cycle), cell.hemisphere))
            continue
        centre = CentreSite(frozenset(cycle))
        refined.setdefault(vertex_cell(centre))
        count = len(cycle)
        for i in range(count):
            refined.setdefault(edge_cell(centre, cycle[i]))
        for i in range(count):
            refined.setdefault(Cell(2, (centre, cycle[i], cycle[(i + 1) % count]), cell.hemisphere))
    return sorted(refined, key=lambda c: c.key)


def subdivide(cells: Sequence[Cell], orbits: CellOrbits, ctx: FieldCtx) -> tuple[list[Cell], CellOrbits]:
    """Subdivide until every stabilizer fixes its cell pointwise.

    Edges whose stabilizer swaps the endpoints get a midpoint vertex, 2-cells
    whose stabilizer moves a vertex are coned from a centre vertex. Orbits
    are recomputed on the refined patch.

    Raises:
        InvariantViolationError: If the subdivision does not settle
    """
    cells = list(cells)
    for round_number in range(MAX_SUBDIVISION_ROUNDS + 1):
        flipped = {k for k, rep in enumerate(orbits.representatives[1]) if not _fixes_pointwise(orbits.stabilizers[rep], rep)}
        moved = {k for k, rep in enumerate(orbits.representatives[2]) if not _fixes_pointwise(orbits.stabilizers[rep], rep)}
        if not flipped and not moved:
            return cells, orbits
        if round_number == MAX_SUBDIVISION_ROUNDS:
            break
        logger.debug(f"m={ctx.m}: subdividing {len(flipped)} edge orbits and {len(moved)} 2-cell orbits")
        cells = _refine(cells, orbits, flipped, moved)
        orbits = identify_cells(cells, ctx)
    raise InvariantViolationError(f"m={ctx.m}: stabilizers still move cells after {MAX_SUBDIVISION_ROUNDS} subdivisions")


# -- the quotient -------------------------------------------------------------


@dataclass
class QuotientComplex:
    """Quotient of the retract by PSL2(O), one cell per orbit.

    Attributes:
        m: The field parameter
        vertex_count: Number of vertex orbits
        edge_count: Number of edge orbits
        face_count: Number of 2-cell orbits
        boundary_1: Vertex x edge boundary matrix
        boundary_2: Edge x 2-cell boundary matrix
        vertex_tags: Stabilizer type per vertex orbit, "cusp" for singular cusps
        edge_tags: Stabilizer type per edge orbit
        face_tags: Stabilizer type per 2-cell orbit
        farrell_relations: Presentation of the cokernel of the stabilizer
            inclusion map over the vertex stabilizers
    """
    m: int
    vertex_count: int
    edge_count: int
    face_count: int
    boundary_1: IntMatrix
    boundary_2: IntMatrix
    vertex_tags: list[str]
    edge_tags: list[str]
    face_tags: list[str]
    farrell_relations: IntMatrix

    @property
    def singular(self) -> list[bool]:
        return [tag == CUSP_TAG for tag in self.vertex_tags]

    @property
    def cusp_count(self) -> int:
        return sum(self.singular)

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    def check_chain_complex(self) -> None:
        """Raise InvariantViolationError unless the boundary of a boundary vanishes."""
        if not (self.boundary_1 @ self.boundary_2).is_zero():
            raise InvariantViolationError(f"m={self.m}: boundary_1 * boundary_2 != 0")

    def to_dict(self) -> dict[str, Any]:
        def triples(matrix: IntMatrix) -> dict[str, Any]:
            return {
                "rows": str(matrix.rows),
                "cols": str(matrix.cols),
                "entries": [[str(i), str(j), str(v)] for i, j, v in matrix.triples()],
            }

        return {
            "m": str(self.m),
            "counts": {"vertices": str(self.vertex_count), "edges": str(self.edge_count), "faces": str(self.face_count)},
            "euler_characteristic": str(self.euler_characteristic),
            "boundary_1": triples(self.boundary_1),
            "boundary_2": triples(self.boundary_2),
            "stabilizers": {"vertices": self.vertex_tags, "edges": self.edge_tags, "faces": self.face_tags},
            "singular": [str(int(flag)) for flag in self.singular],
            "farrell_relations": triples(self.farrell_relations),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> QuotientComplex:
        def matrix(raw: dict[str, Any]) -> IntMatrix:
            return IntMatrix.from_triples(
                int(raw["rows"]), int(raw["cols"]), ((int(i), int(j), int(v)) for i, j, v in raw["entries"])
            )

        counts = data["counts"]
        return cls(
            m=int(data["m"]),
            vertex_count=int(counts["vertices"]),
            edge_count=int(counts["edges"]),
            face_count=int(counts["faces"]),
            boundary_1=matrix(data["boundary_1"]),
            boundary_2=matrix(data["boundary_2"]),
            vertex_tags=list(data["stabilizers"]["vertices"]),
            edge_tags=list(data["stabilizers"]["edges"]),
            face_tags=list(data["stabilizers"]["faces"]),
            farrell_relations=matrix(data["farrell_relations"]),
        )


def _farrell_relations(orbits: CellOrbits) -> IntMatrix:
    """Relations of the cokernel of the sum of edge stabilizers into the vertex stabilizers.

    Each vertex orbit of positive height contributes one generator per
    element of its stabilizer with the relations x_g + x_h = x_gh. Each
    element h of an edge stabilizer contributes the row x_h(head) - x_h(tail),
    both conjugated into the stabilizers of the orbit representatives.
    Cusps carry no generators.
    """
    vertex_reps = orbits.representatives[0]
    offsets: dict[int, int] = {}
    total = 0
    for k, rep in enumerate(vertex_reps):
        group = orbits.stabilizers[rep]
        if group is not None:
            offsets[k] = total
            total += len(group)

    triples: list[tuple[int, int, int]] = []
    row = 0
    for k, offset in offsets.items():
        group = orbits.stabilizers[vertex_reps[k]]
        assert group is not None
        size = len(group)
        for i in range(size):
            for j in range(size):
                triples += [(row, offset + i, 1), (row, offset + j, 1), (row, offset + group.product(i, j), -1)]
                row += 1

    for edge in orbits.representatives[1]:
        edge_group = orbits.stabilizers[edge]
        assert edge_group is not None
        for h in edge_group:
            for site, sign in ((edge.sites[0], -1), (edge.sites[1], 1)):
                k, g, _ = orbits.assignment[vertex_cell(site)]
                if k not in offsets or g is None:
                    continue
                group = orbits.stabilizers[vertex_reps[k]]
                assert group is not None
                triples.append((row, offsets[k] + group.index(g.inverse() * h * g), sign))
            row += 1
    return IntMatrix.from_triples(row, total, triples)


def quotient_complex(cells: Sequence[Cell], orbits: CellOrbits, ctx: FieldCtx) -> QuotientComplex:
    """Glue the subdivided patch into the quotient complex.

    Raises:
        UnmatchedCellError: If a boundary cell of a representative is missing from the patch
        InvariantViolationError: If the boundary maps do not compose to zero
    """
    present = set(cells)
    reps = orbits.representatives
    boundary_1 = IntMatrix(len(reps[0]), len(reps[1]))
    for e, edge in enumerate(reps[1]):
        tail, head = (vertex_cell(s) for s in edge.sites)
        if tail not in present or head not in present:
            raise UnmatchedCellError(f"Endpoint of edge {e} is not a vertex of the patch")
        boundary_1.add(orbits.orbit(head), e, 1)
        boundary_1.add(orbits.orbit(tail), e, -1)

    boundary_2 = IntMatrix(len(reps[1]), len(reps[2]))
    for f, face in enumerate(reps[2]):
        for a, b in face.edges():
            edge = edge_cell(a, b)
            if edge not in present:
                raise UnmatchedCellError(f"Edge {site_key(a)} -> {site_key(b)} of 2-cell {f} is not in the patch")
            k, _, sign = orbits.assignment[edge]
            direction = 1 if edge.sites == (a, b) else -1
            boundary_2.add(k, f, direction * sign)

    def tags(dim: int) -> list[str]:
        return [CUSP_TAG if (g := orbits.stabilizers[rep]) is None else g.type_tag for rep in reps[dim]]

    qc = QuotientComplex(
        m=ctx.m,
        vertex_count=len(reps[0]),
        edge_count=len(reps[1]),
        face_count=len(reps[2]),
        boundary_1=boundary_1,
        boundary_2=boundary_2,
        vertex_tags=tags(0),
        edge_tags=tags(1),
        face_tags=tags(2),
        farrell_relations=_farrell_relations(orbits),
    )
    qc.check_chain_complex()
    logger.info(
        f"m={ctx.m}: quotient complex with (V, E, F) = ({qc.vertex_count}, {qc.edge_count}, {qc.face_count}), "
        f"Euler characteristic {qc.euler_characteristic}"
    )
    return qc


def build_quotient(polyhedron: Polyhedron) -> QuotientComplex:
    """Run extraction, identification, subdivision and gluing on a polyhedron.

    Raises:
        InvariantViolationError: If the singular cusp orbits are not h - 1
    """
    ctx = polyhedron.ctx
    cells = extract_boundary_cells(polyhedron.hemispheres, polyhedron.vertex_set, ctx)
    cells = floege_complex(cells, ctx)
    orbits = identify_cells(cells, ctx)
    cells, orbits = subdivide(cells, orbits, ctx)
    qc = quotient_complex(cells, orbits, ctx)
    h = class_number(ctx)
    if qc.cusp_count != h - 1:
        raise InvariantViolationError(f"m={ctx.m}: {qc.cusp_count} singular cusp orbits with class number {h}")
    return qc
