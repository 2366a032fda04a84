"""Domain models for the Bianchi pipeline.

This module defines the value records shared by the arithmetic, homology,
storage and CLI layers.
"""

from __future__ import annotations

import os
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from sympy import factorint

from bianchi.arithmetic.field import validate_m
from bianchi.core.normal_forms import IntMatrix, smith_normal_form

SCHEMA_VERSION = 1
DEFAULT_DB_DIRNAME = "bianchi-db"
DB_ENV_VAR = "BIANCHI_DB"
PRUNE_RULES = ("three-vertex", "nonempty")
OUTPUT_FORMATS = ("text", "json")


def _invariant_factors(orders: list[int]) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of a direct sum of cyclic groups."""
    prime_powers: dict[int, list[int]] = {}
    for order in orders:
        if order < 1:
            raise ValueError(f"Cyclic order must be positive, got {order}")
        for prime, exponent in factorint(order).items():
            prime_powers.setdefault(int(prime), []).append(int(prime) ** int(exponent))
    length = max((len(powers) for powers in prime_powers.values()), default=0)
    factors = [1] * length
    for powers in prime_powers.values():
        # largest powers go to the last factors
        for k, power in enumerate(sorted(powers, reverse=True)):
            factors[length - 1 - k] *= power
    return tuple(factors)


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group Z^r + Z/d1 + ... + Z/dk.

    Attributes:
        free_rank: Rank r of the free part
        torsion: Invariant factors d1 | d2 | ... | dk, each larger than one
    """
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError(f"Negative free rank {self.free_rank}")
        for d in self.torsion:
            if d <= 1:
                raise ValueError(f"Torsion invariants must exceed 1, got {self.torsion}")
        for d, e in zip(self.torsion, self.torsion[1:], strict=False):
            if e % d:
                raise ValueError(f"Torsion invariants {self.torsion} do not form a divisibility chain")

    @classmethod
    def from_cyclic_orders(cls, free_rank: int = 0, orders: list[int] | tuple[int, ...] = ()) -> AbelianGroup:
        """Normalize Z^free_rank + sum of Z/n for n in ``orders``.

        Examples:
            >>> AbelianGroup.from_cyclic_orders(0, [2, 3]).torsion
            (6,)
            >>> AbelianGroup.from_cyclic_orders(9, [2, 2]).render()
            'Z^9 ⊕ (Z/2)^2'
        """
        return cls(free_rank, _invariant_factors([n for n in orders if n != 1]))

    @classmethod
    def cokernel(cls, relations: IntMatrix) -> AbelianGroup:
        """The group Z^cols / (row span of ``relations``)."""
        form = smith_normal_form(relations)
        return cls(relations.cols - form.rank, form.torsion)

    @classmethod
    def from_multiplication_table(cls, size: int, product: Callable[[int, int], int]) -> AbelianGroup:
        """Abelianization of a finite group given by its multiplication table.

        Every element is a generator and every product g*h = k gives the
        relation x_g + x_h - x_k.

        Args:
            size: Number of elements, indexed 0 .. size-1
            product: Index of the product of two indexed elements
        """
        relations = IntMatrix(size * size, size)
        for g in range(size):
            for h in range(size):
                row = g * size + h
                relations.add(row, g, 1)
                relations.add(row, h, 1)
                relations.add(row, product(g, h), -1)
        return cls.cokernel(relations)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        """Order of the group, None if infinite."""
        if self.free_rank:
            return None
        result = 1
        for d in self.torsion:
            result *= d
        return result

    def primary_parts(self) -> list[int]:
        """Prime powers of the primary decomposition, ascending."""
        parts: list[int] = []
        for d in self.torsion:
            parts.extend(int(p) ** int(e) for p, e in factorint(d).items())
        return sorted(parts)

    def direct_sum(self, other: AbelianGroup) -> AbelianGroup:
        return AbelianGroup.from_cyclic_orders(self.free_rank + other.free_rank, [*self.torsion, *other.torsion])

    def strip_free(self, count: int = 1) -> AbelianGroup:
        """Remove ``count`` free summands.

        Raises:
            ValueError: If the free rank is smaller than ``count``
        """
        if self.free_rank < count:
            raise ValueError(f"Cannot strip {count} free summands from {self.render()}")
        return AbelianGroup(self.free_rank - count, self.torsion)

    def _free_text(self) -> list[str]:
        if not self.free_rank:
            return []
        return ["Z" if self.free_rank == 1 else f"Z^{self.free_rank}"]

    def render(self) -> str:
        """Render with primary torsion, e.g. "Z^9 ⊕ (Z/2)^2"; "0" when trivial."""
        terms = self._free_text()
        for power, count in sorted(Counter(self.primary_parts()).items()):
            terms.append(f"Z/{power}" if count == 1 else f"(Z/{power})^{count}")
        return " ⊕ ".join(terms) if terms else "0"

    def render_cyclic(self) -> str:
        """Render with invariant factors, e.g. "Z/2×Z/2"; "1" when trivial."""
        terms = self._free_text() + [f"Z/{d}" for d in self.torsion]
        return "×".join(terms) if terms else "1"

    def to_dict(self) -> dict[str, Any]:
        return {"free_rank": str(self.free_rank), "torsion": [str(d) for d in self.torsion]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AbelianGroup:
        return cls(int(data["free_rank"]), tuple(int(d) for d in data["torsion"]))


@dataclass(frozen=True)
class TableRow:
    """One row of the result table.

    Attributes:
        discriminant: Discriminant of the field (negative)
        m: The square-free integer defining Q(sqrt(-m))
        class_group: Ideal class group
        h1_cusp: Cuspidal part of the first homology of the quotient
        farrell_supplement: Cokernel of the stabilizer inclusion map
    """
    discriminant: int
    m: int
    class_group: AbelianGroup
    h1_cusp: AbelianGroup
    farrell_supplement: AbelianGroup

    def columns(self) -> tuple[str, str, str, str, str]:
        """Rendered cells in table order."""
        return (
            str(self.discriminant),
            str(self.m),
            self.class_group.render_cyclic(),
            self.h1_cusp.render(),
            self.farrell_supplement.render(),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "discriminant": str(self.discriminant),
            "m": str(self.m),
            "class_group": self.class_group.to_dict(),
            "h1_cusp": self.h1_cusp.to_dict(),
            "farrell_supplement": self.farrell_supplement.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TableRow:
        return cls(
            discriminant=int(data["discriminant"]),
            m=int(data["m"]),
            class_group=AbelianGroup.from_dict(data["class_group"]),
            h1_cusp=AbelianGroup.from_dict(data["h1_cusp"]),
            farrell_supplement=AbelianGroup.from_dict(data["farrell_supplement"]),
        )


def default_db_path() -> Path:
    """Database directory from ``BIANCHI_DB`` or ``./bianchi-db``."""
    return Path(os.environ.get(DB_ENV_VAR) or DEFAULT_DB_DIRNAME)


@dataclass
class RunConfig:
    """Configuration of a CLI run.

    Attributes:
        m_values: Fields to process, each a square-free m other than 1 and 3
        db_path: Directory of the result database
        prune_rule: Erasure rule name ('three-vertex' or 'nonempty')
        jobs: Worker processes for batch runs
        use_cache: Reuse valid database records instead of recomputing
        output_format: Table output format ('text' or 'json')
    """
    m_values: tuple[int, ...]
    db_path: Path = field(default_factory=default_db_path)
    prune_rule: str = "three-vertex"
    jobs: int = 1
    use_cache: bool = True
    output_format: str = "text"

    def __post_init__(self) -> None:
        for m in self.m_values:
            validate_m(m)
        if self.prune_rule not in PRUNE_RULES:
            raise ValueError(f"Unknown prune rule: {self.prune_rule}. Valid rules: {', '.join(PRUNE_RULES)}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"Unknown output format: {self.output_format}. Valid formats: {', '.join(OUTPUT_FORMATS)}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {self.jobs}")


@dataclass
class PolyhedronStats:
    """Summary of a finished polyhedron computation.

    Attributes:
        hemispheres: Size of the final hemisphere list
        vertices: Number of distinct vertices mod translations
        max_norm: Largest norm of mu in the final list
        min_sq_height: Minimal positive squared vertex height
        horizon: Last norm horizon the loop reached
    """
    hemispheres: int
    vertices: int
    max_norm: int
    min_sq_height: str
    horizon: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "hemispheres": str(self.hemispheres),
            "vertices": str(self.vertices),
            "max_norm": str(self.max_norm),
            "min_sq_height": self.min_sq_height,
            "horizon": str(self.horizon),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> PolyhedronStats:
        return cls(
            hemispheres=int(data["hemispheres"]),
            vertices=int(data["vertices"]),
            max_norm=int(data["max_norm"]),
            min_sq_height=data["min_sq_height"],
            horizon=int(data["horizon"]),
        )


@dataclass
class DbRecord:
    """Database record of one field.

    Attributes:
        m: The field parameter
        schema: Record schema version
        polyhedron_sha256: Hash of the canonical polyhedron file
        complex_sha256: Hash of the canonical quotient complex file
        row: The table row
        timings: Wall-clock seconds per pipeline stage (kept out of the canonical record)
        stats: Polyhedron summary
        prune_rule: Erasure rule the polyhedron was computed with
    """
    m: int
    schema: int
    polyhedron_sha256: str
    complex_sha256: str
    row: TableRow
    timings: dict[str, float] = field(default_factory=dict)
    stats: PolyhedronStats | None = None
    prune_rule: str = "three-vertex"

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": str(self.m),
            "schema": str(self.schema),
            "polyhedron_sha256": self.polyhedron_sha256,
            "complex_sha256": self.complex_sha256,
            "row": self.row.to_dict(),
            "stats": self.stats.to_dict() if self.stats else None,
            "prune_rule": self.prune_rule,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DbRecord:
        return cls(
            m=int(data["m"]),
            schema=int(data["schema"]),
            polyhedron_sha256=data["polyhedron_sha256"],
            complex_sha256=data["complex_sha256"],
            row=TableRow.from_dict(data["row"]),
            stats=PolyhedronStats.from_dict(data["stats"]) if data.get("stats") else None,
            prune_rule=data.get("prune_rule", "three-vertex"),
        )
