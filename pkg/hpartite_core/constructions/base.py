from __future__ import annotations

import abc
import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, ClassVar

from hpartite_core import config
from hpartite_core.core.certify import check_family_free
from hpartite_core.core.errors import DomainError, EnumerationCapError
from hpartite_core.core.partite import density_profile, transversal_count, validate
from hpartite_core.get_version import get_task_logger

if TYPE_CHECKING:
    from hpartite_core.core.families import ForbiddenFamily
    from hpartite_core.core.partite import PartiteGraph, Transversal

shared_logger = get_task_logger(__name__)


@dataclass(frozen=True)
class ConstructionSpec:
    id: str
    params: dict[str, Any]
    claimed_density: float
    claimed_family: ForbiddenFamily

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "params": self.params,
            "claimed_density": self.claimed_density,
            "claimed_family": self.claimed_family.to_dict(),
        }


@dataclass(frozen=True)
class VerificationOutcome:
    spec: ConstructionSpec
    passed: bool
    density: float | None
    transversals: int
    seconds: float = field(compare=False)
    diagnostics: tuple[str, ...] = ()
    witness: Transversal | None = field(default=None, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec.to_dict(),
            "passed": self.passed,
            "density": self.density,
            "transversals": self.transversals,
            "diagnostics": list(self.diagnostics),
            "witness": None if self.witness is None else list(self.witness.choice),
        }


def require(condition: bool, message: str) -> None:
    if not condition:
        shared_logger.error(f"require(): {message}")
        raise DomainError(message)


class BaseConstruction(abc.ABC):
    """An explicit extremal construction together with the density and family it claims.

    Subclasses check their parameter domain in ``__init__`` and implement :meth:`build`,
    :meth:`claimed_density` and :meth:`claimed_family`. :meth:`verify` builds the graph and checks
    both claims by exhaustive enumeration.
    """

    construction_id: ClassVar[str]

    def __init__(self, **params: Any) -> None:
        self._params = params

    @property
    def params(self) -> dict[str, Any]:
        return dict(self._params)

    @abc.abstractmethod
    def build(self) -> PartiteGraph: ...

    @abc.abstractmethod
    def claimed_density(self) -> float: ...

    @abc.abstractmethod
    def claimed_family(self) -> ForbiddenFamily: ...

    def spec(self) -> ConstructionSpec:
        return ConstructionSpec(
            self.construction_id, self.params, self.claimed_density(), self.claimed_family()
        )

    def check_claim(self, g: PartiteGraph, cap: int | None) -> tuple[list[str], Transversal | None]:
        """Discrepancies in the structural claim; an empty list means it holds."""
        certificate = check_family_free(g, self.claimed_family(), cap)
        if certificate.family_free:
            return [], None
        return [
            f"transversal {list(certificate.witness.labels(g)) if certificate.witness else []} "
            f"contains a member of {self.claimed_family().describe()}"
        ], certificate.witness

    def verify(self, cap: int | None = None, tol: float | None = None) -> VerificationOutcome:
        start_time = time.time()
        tol = config.tolerance() if tol is None else tol
        spec = self.spec()
        g = self.build()
        diagnostics: list[str] = []
        report = validate(g)
        if not report.ok:
            diagnostics.append(f"invalid graph: {report.summary()}")
            return VerificationOutcome(spec, False, None, 0, time.time() - start_time, tuple(diagnostics))

        density = density_profile(g).minimum
        if abs(density - spec.claimed_density) > tol:
            diagnostics.append(
                f"density {density:.15g} differs from claimed {spec.claimed_density:.15g}"
            )
        witness = None
        try:
            problems, witness = self.check_claim(g, cap)
            diagnostics.extend(problems)
        except EnumerationCapError as e:
            diagnostics.append(str(e))

        seconds = time.time() - start_time
        passed = not diagnostics
        shared_logger.info(
            f"{type(self).__name__}.verify(): {self.construction_id} {self.params} "
            f"{'pass' if passed else 'FAIL'} d={density:.15g} ({seconds:.3f} seconds)"
        )
        return VerificationOutcome(
            spec, passed, density, transversal_count(g), seconds, tuple(diagnostics), witness
        )
