"""Integer matrices and their Hermite and Smith normal forms.

Boundary matrices of cell complexes are sparse with mostly unit entries, so
the Smith normal form first eliminates unit pivots on a sparse row store and
only then runs the dense minimal-pivot reduction on what is left.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from sympy.core.intfunc import igcdex

logger = logging.getLogger(__name__)


class IntMatrix:
    """Sparse integer matrix with arbitrary precision entries.

    Attributes:
        rows: Number of rows
        cols: Number of columns
        entries: Mapping (row, col) -> nonzero value
    """

    def __init__(self, rows: int, cols: int, entries: dict[tuple[int, int], int] | None = None):
        """Initialize a matrix of the given shape.

        Args:
            rows: Number of rows
            cols: Number of columns
            entries: Optional nonzero entries keyed by (row, col)

        Raises:
            ValueError: If an entry lies outside the shape
        """
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], int] = {}
        for (i, j), value in (entries or {}).items():
            self[i, j] = value

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        """Build from a list of rows (``cols`` is needed for matrices without rows)."""
        width = cols if cols is not None else (len(dense[0]) if dense else 0)
        matrix = cls(len(dense), width)
        for i, row in enumerate(dense):
            if len(row) != width:
                raise ValueError("Ragged matrix rows")
            for j, value in enumerate(row):
                if value:
                    matrix.entries[(i, j)] = int(value)
        return matrix

    @classmethod
    def from_triples(cls, rows: int, cols: int, triples: Iterable[tuple[int, int, int]]) -> IntMatrix:
        """Build from (row, col, value) triples; repeated positions are summed."""
        matrix = cls(rows, cols)
        for i, j, value in triples:
            matrix.add(i, j, value)
        return matrix

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def __setitem__(self, key: tuple[int, int], value: int) -> None:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise ValueError(f"Entry {key} outside a {self.rows}x{self.cols} matrix")
        if value:
            self.entries[key] = int(value)
        else:
            self.entries.pop(key, None)

    def add(self, i: int, j: int, value: int) -> None:
        """Add ``value`` to entry (i, j)."""
        self[i, j] = self[i, j] + value

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def to_dense(self) -> list[list[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            dense[i][j] = value
        return dense

    def triples(self) -> Iterator[tuple[int, int, int]]:
        """Nonzero entries in row-major order."""
        for (i, j) in sorted(self.entries):
            yield i, j, self.entries[(i, j)]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j), value in other.entries.items():
            by_row.setdefault(k, []).append((j, value))
        product = IntMatrix(self.rows, other.cols)
        for (i, k), left in self.entries.items():
            for j, right in by_row.get(k, ()):
                product.add(i, j, left * right)
        return product

    def is_zero(self) -> bool:
        return not self.entries


@dataclass(frozen=True)
class SmithForm:
    """Diagonal of the Smith normal form.

    Attributes:
        invariants: Nonzero diagonal entries d1 | d2 | ..., all positive
        rows: Row count of the reduced matrix
        cols: Column count of the reduced matrix
    """
    invariants: tuple[int, ...]
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def torsion(self) -> tuple[int, ...]:
        """Invariants larger than one."""
        return tuple(d for d in self.invariants if d > 1)


def _as_sparse_rows(matrix: IntMatrix | Sequence[Sequence[int]]) -> tuple[dict[int, dict[int, int]], int, int]:
    if not isinstance(matrix, IntMatrix):
        matrix = IntMatrix.from_dense(matrix)
    rows: dict[int, dict[int, int]] = {}
    for (i, j), value in matrix.entries.items():
        rows.setdefault(i, {})[j] = value
    return rows, matrix.rows, matrix.cols


def _eliminate_unit_pivots(rows: dict[int, dict[int, int]]) -> int:
    """Remove +-1 pivots in place and return how many were removed."""
    columns: dict[int, set[int]] = {}
    for i, row in rows.items():
        for j in row:
            columns.setdefault(j, set()).add(i)

    removed = 0
    while True:
        pivot = None
        best_cost = None
        for i in sorted(rows):
            row = rows[i]
            for j, value in row.items():
                if value in (1, -1):
                    cost = (len(row) - 1) * (len(columns[j]) - 1)
                    if best_cost is None or cost < best_cost:
                        pivot, best_cost = (i, j, value), cost
                        if cost == 0:
                            break
            if best_cost == 0:
                break
        if pivot is None:
            return removed

        r, c, unit = pivot
        pivot_row = rows[r]
        for i in sorted(columns[c] - {r}):
            row = rows[i]
            factor = row[c] * unit
            for j, value in pivot_row.items():
                updated = row.get(j, 0) - factor * value
                if updated:
                    if j not in row:
                        columns[j].add(i)
                    row[j] = updated
                elif j in row:
                    del row[j]
                    columns[j].discard(i)
            if not row:
                del rows[i]
        for j in pivot_row:
            columns[j].discard(r)
        del rows[r]
        del columns[c]
        removed += 1


def _dense_invariants(dense: list[list[int]]) -> list[int]:
    """Smith invariants of a dense matrix by minimal-absolute-value pivoting."""
    a = [row[:] for row in dense if any(row)]
    invariants: list[int] = []
    while a and a[0]:
        nonzero = [(abs(v), i, j) for i, row in enumerate(a) for j, v in enumerate(row) if v]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        pivot = a[pi][pj]

        reduced = True
        for i, row in enumerate(a):
            if i != pi and row[pj]:
                q = row[pj] // pivot
                a[i] = [x - q * y for x, y in zip(row, a[pi], strict=True)]
                if a[i][pj]:
                    reduced = False
        for j in range(len(a[pi])):
            if j != pj and a[pi][j]:
                q = a[pi][j] // pivot
                for row in a:
                    row[j] -= q * row[pj]
                if a[pi][j]:
                    reduced = False
        if not reduced:
            continue

        offender = next(
            (i for i, row in enumerate(a) if i != pi and any(v % pivot for j, v in enumerate(row) if j != pj)),
            None,
        )
        if offender is not None:
            a[pi] = [x + y for x, y in zip(a[pi], a[offender], strict=True)]
            # one column step leaves a remainder smaller than the pivot
            j = next(j for j, v in enumerate(a[pi]) if j != pj and v % pivot)
            q = a[pi][j] // pivot
            for row in a:
                row[j] -= q * row[pj]
            continue

        invariants.append(abs(pivot))
        a = [[v for j, v in enumerate(row) if j != pj] for i, row in enumerate(a) if i != pi]
        a = [row for row in a if any(row)]
    return invariants


def smith_normal_form(matrix: IntMatrix | Sequence[Sequence[int]]) -> SmithForm:
    """Compute the Smith invariants of an integer matrix.

    Args:
        matrix: Sparse :class:`IntMatrix` or a list of integer rows

    Returns:
        The nonzero invariants in divisibility order together with the shape

    Examples:
        >>> smith_normal_form([[2, 1], [1, 2]]).invariants
        (1, 3)
        >>> smith_normal_form([[2, 4], [6, 8]]).invariants
        (2, 4)
    """
    rows, n_rows, n_cols = _as_sparse_rows(matrix)
    units = _eliminate_unit_pivots(rows)

    remaining_cols = sorted({j for row in rows.values() for j in row})
    position = {j: k for k, j in enumerate(remaining_cols)}
    dense = []
    for i in sorted(rows):
        line = [0] * len(remaining_cols)
        for j, value in rows[i].items():
            line[position[j]] = value
        dense.append(line)
    logger.debug(
        f"SNF of {n_rows}x{n_cols}: {units} unit pivots, dense remainder {len(dense)}x{len(remaining_cols)}"
    )

    invariants = [1] * units + sorted(_dense_invariants(dense))
    return SmithForm(tuple(invariants), n_rows, n_cols)


def hermite_normal_form_2(vectors: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """Row Hermite normal form of a lattice in Z**2.

    The lattice spanned by ``vectors`` equals Z*(p, q) + Z*(0, r) with the
    returned (p, q, r), where p > 0, r > 0 and 0 <= q < r for a full-rank
    lattice.

    Args:
        vectors: Generators of the lattice

    Returns:
        The triple (p, q, r) of the upper triangular basis
    """
    p, q, r = 0, 0, 0
    for u, v in vectors:
        if u == 0:
            r = math.gcd(r, v)
            continue
        s, t, d = (int(x) for x in igcdex(p, u))
        eliminated = (u * q - p * v) // d
        p, q = d, s * q + t * v
        r = math.gcd(r, eliminated)
    if p < 0:
        p, q = -p, -q
    if r:
        q %= r
    return int(p), int(q), int(r)
