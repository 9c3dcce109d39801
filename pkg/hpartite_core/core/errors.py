from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from hpartite_core.core.partite import ValidationReport


class InvalidPartiteGraphError(ValueError):
    """Raised when an operation needs a valid H-partite graph and validation found problems."""

    def __init__(self, report: ValidationReport) -> None:
        self.report = report
        super().__init__(f"Invalid H-partite graph: {report.summary()}")


class EnumerationCapError(ValueError):
    """The transversal product exceeds the enumeration cap."""

    def __init__(self, product: int, cap: int) -> None:
        self.product = product
        self.cap = cap
        super().__init__(
            f"Refusing to enumerate {product} transversals (cap {cap}); "
            "use the sampler for a Monte Carlo estimate instead"
        )


class DomainError(ValueError):
    """A parameter lies outside the domain of a construction or threshold."""


class SearchInfeasibleError(ValueError):
    """Exhaustive search would exceed its pattern budget."""
