"""Rules deciding which hemispheres are erased after a vertex computation.

Each rule looks at the distinct surviving vertices of one hemisphere and
answers whether the hemisphere still contributes to the boundary of the
polyhedron. Rules follow the Strategy pattern and are chosen by name through
:class:`ErasureRuleFactory`.
"""

from abc import ABC, abstractmethod
from collections.abc import Sequence
from fractions import Fraction

Coords = tuple[Fraction, Fraction]


def _collinear(points: Sequence[Coords]) -> bool:
    (x0, y0), (x1, y1) = points[0], points[1]
    for x2, y2 in points[2:]:
        if (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0) != 0:
            return False
    return True


class ErasureRule(ABC):
    """Abstract base class for erasure rules."""

    name: str = ""

    @abstractmethod
    def keeps(self, points: Sequence[Coords]) -> bool:
        """Check whether a hemisphere with these surviving vertices is kept.

        Args:
            points: Distinct plane coordinates of the surviving vertices

        Returns:
            True if the hemisphere stays in the list, False to erase it
        """
        pass


class ThreeVertexRule(ErasureRule):
    """Keep hemispheres that carry a 2-cell.

    A hemisphere needs three non-collinear vertices to contribute a face.
    """

    name = "three-vertex"

    def keeps(self, points: Sequence[Coords]) -> bool:
        return len(points) >= 3 and not _collinear(points)


class NonemptyRule(ErasureRule):
    """Keep hemispheres with at least one surviving vertex."""

    name = "nonempty"

    def keeps(self, points: Sequence[Coords]) -> bool:
        return len(points) > 0


class ErasureRuleFactory:
    """Factory for erasure rules."""

    @staticmethod
    def create_rule(rule_name: str) -> ErasureRule:
        """Create an erasure rule by name.

        Args:
            rule_name: 'three-vertex' or 'nonempty'

        Returns:
            Rule instance

        Raises:
            ValueError: If rule_name is not recognized
        """
        rules: dict[str, type[ErasureRule]] = {
            ThreeVertexRule.name: ThreeVertexRule,
            NonemptyRule.name: NonemptyRule,
        }

        rule_class = rules.get(rule_name)
        if not rule_class:
            raise ValueError(f"Unknown prune rule: {rule_name}. Valid rules: {', '.join(rules.keys())}")

        return rule_class()
