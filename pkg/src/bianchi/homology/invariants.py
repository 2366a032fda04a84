"""Homology of the quotient complex and the columns of the result table.

The first homology of the quotient splits as the cuspidal part plus one free
summand. The Farrell supplement is the cokernel of the map from the first
homology of the edge stabilizers to that of the vertex stabilizers.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from bianchi.arithmetic.field import FieldCtx
from bianchi.arithmetic.forms import class_group, class_number
from bianchi.cells.complex import QuotientComplex, build_quotient
from bianchi.core.models import AbelianGroup, TableRow
from bianchi.core.normal_forms import smith_normal_form
from bianchi.geometry.swan import Polyhedron, bound_audit, compute_polyhedron, verify_termination
from bianchi.utils.exceptions import InvariantViolationError

logger = logging.getLogger(__name__)

SUPPLEMENT_PRIMES = (2, 3)


def homology_of_complex(qc: QuotientComplex) -> tuple[AbelianGroup, AbelianGroup, AbelianGroup]:
    """H0, H1 and H2 of the quotient complex over the integers.

    Raises:
        InvariantViolationError: If the boundary maps do not compose to zero
    """
    qc.check_chain_complex()
    d1 = smith_normal_form(qc.boundary_1)
    d2 = smith_normal_form(qc.boundary_2)
    h0 = AbelianGroup(qc.vertex_count - d1.rank, d1.torsion)
    h1 = AbelianGroup(qc.edge_count - d1.rank - d2.rank, d2.torsion)
    h2 = AbelianGroup(qc.face_count - d2.rank)
    logger.debug(f"m={qc.m}: H0 = {h0.render()}, H1 = {h1.render()}, H2 = {h2.render()}")
    return h0, h1, h2


def h1_cusp(qc: QuotientComplex, ctx: FieldCtx) -> AbelianGroup:
    """H1 of the quotient with one free summand removed.

    Raises:
        InvariantViolationError: If H1 of the quotient has no free summand
    """
    _, h1, _ = homology_of_complex(qc)
    if h1.free_rank == 0:
        raise InvariantViolationError(f"m={ctx.m}: H1 of the quotient {h1.render()} has no free summand")
    return h1.strip_free(1)


def farrell_supplement(qc: QuotientComplex, ctx: FieldCtx) -> AbelianGroup:
    """Cokernel of the stabilizer inclusion map.

    Raises:
        InvariantViolationError: If the cokernel is infinite or has torsion
            other than 2- and 3-torsion
    """
    supplement = AbelianGroup.cokernel(qc.farrell_relations)
    stray = [part for part in supplement.primary_parts() if all(part % p for p in SUPPLEMENT_PRIMES)]
    if supplement.free_rank or stray:
        raise InvariantViolationError(f"m={ctx.m}: Farrell supplement {supplement.render()} is not 2- and 3-torsion")
    return supplement


@dataclass(frozen=True)
class SpectralReport:
    """Checks on the bottom row of the equivariant spectral sequence.

    Attributes:
        h0: H0 of the quotient
        h2_rank: Rank of H2 of the quotient
        class_number: Class number h of the field
        cusp_orbits: Number of singular cusp orbits in the quotient
    """
    h0: AbelianGroup
    h2_rank: int
    class_number: int
    cusp_orbits: int

    @property
    def cusps_match(self) -> bool:
        return self.cusp_orbits == self.class_number - 1


def spectral_checks(qc: QuotientComplex, ctx: FieldCtx) -> SpectralReport:
    """Assert H0 = Z and rank H2 >= h - 1.

    Raises:
        InvariantViolationError: If either assertion fails
    """
    h0, _, h2 = homology_of_complex(qc)
    h = class_number(ctx)
    report = SpectralReport(h0, h2.free_rank, h, qc.cusp_count)
    if h0 != AbelianGroup(1):
        raise InvariantViolationError(f"m={ctx.m}: H0 of the quotient is {h0.render()}, expected Z")
    if h2.free_rank < h - 1:
        raise InvariantViolationError(f"m={ctx.m}: rank H2 = {h2.free_rank} is below h - 1 = {h - 1}")
    if not report.cusps_match:
        logger.warning(f"m={ctx.m}: {qc.cusp_count} singular cusp orbits but h - 1 = {h - 1}")
    return report


# -- pipeline -----------------------------------------------------------------


@dataclass
class PipelineResult:
    """Everything one field produces.

    Attributes:
        polyhedron: Result of Swan's reduction
        complex: The quotient complex
        row: The table row
        report: Spectral sequence checks
        timings: Wall-clock seconds per stage
    """
    polyhedron: Polyhedron
    complex: QuotientComplex
    row: TableRow
    report: SpectralReport
    timings: dict[str, float] = field(default_factory=dict)


def audit_polyhedron(polyhedron: Polyhedron) -> None:
    """Run the termination and bound audits.

    Raises:
        InvariantViolationError: If a vertex lies below some hemisphere or
            the largest norm exceeds the known bound
    """
    ctx = polyhedron.ctx
    violations = verify_termination(polyhedron)
    if violations:
        raise InvariantViolationError(f"m={ctx.m}: {violations} vertices lie strictly below a hemisphere")
    audit = bound_audit(polyhedron, class_number(ctx))
    if not audit.within:
        raise InvariantViolationError(f"m={ctx.m}: largest norm {audit.max_norm} exceeds the bound {audit.bound}")


def row_from_complex(qc: QuotientComplex, ctx: FieldCtx) -> TableRow:
    """Assemble the three table columns from a quotient complex."""
    return TableRow(
        discriminant=ctx.discriminant,
        m=ctx.m,
        class_group=class_group(ctx),
        h1_cusp=h1_cusp(qc, ctx),
        farrell_supplement=farrell_supplement(qc, ctx),
    )


def run_pipeline(
    ctx: FieldCtx, prune_rule: str = "three-vertex", polyhedron: Polyhedron | None = None
) -> PipelineResult:
    """Polyhedron, audits, quotient complex, checks and table row for one field.

    Args:
        ctx: Field context
        prune_rule: Erasure rule name
        polyhedron: Reuse an already computed polyhedron

    Returns:
        The pipeline result with per-stage timings
    """
    timings: dict[str, float] = {}
    started = time.perf_counter()
    if polyhedron is None:
        polyhedron = compute_polyhedron(ctx, prune_rule)
    audit_polyhedron(polyhedron)
    timings["polyhedron"] = time.perf_counter() - started

    started = time.perf_counter()
    qc = build_quotient(polyhedron)
    timings["complex"] = time.perf_counter() - started

    started = time.perf_counter()
    report = spectral_checks(qc, ctx)
    row = row_from_complex(qc, ctx)
    timings["homology"] = time.perf_counter() - started
    logger.info(f"m={ctx.m}: row {' | '.join(row.columns())}")
    return PipelineResult(polyhedron, qc, row, report, timings)


def table_row(ctx: FieldCtx, prune_rule: str = "three-vertex") -> TableRow:
    """Run the full pipeline and return the table row.

    Examples:
        m=7: (1, 0, Z/2)
        m=10: (Z/2, Z, (Z/2)^2 ⊕ Z/3)
    """
    return run_pipeline(ctx, prune_rule).row
