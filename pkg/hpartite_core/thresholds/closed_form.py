"""Closed-form threshold values and the roots of the two dead-end cubics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from hpartite_core.core.errors import DomainError
from hpartite_core.get_version import get_task_logger

if TYPE_CHECKING:
    from collections.abc import Callable

shared_logger = get_task_logger(__name__)

THRESHOLD_NAMES = (
    "golden_ratio",
    "turan_kt",
    "rho_b",
    "conn_upper_kr",
    "conn_upper_general",
    "conn_upper_k4",
    "star",
    "dirac_lower",
    "path_threshold",
    "k4mp3",
    "c5_conn",
    "pconn_path",
    "pconn_complete",
    "cycle_conn_lower",
    "cycle_conn_upper",
    # supplementary values
    "c4_ham_upper",
    "kr_minus_matching",
    "odd_cycles_lower",
    "path_host_upper",
    "ladder_upper",
    "palette_density",
    "palette_component",
    "hypercube_component",
    "leila_alpha",
    "dirac_certified",
)


@dataclass(frozen=True)
class ThresholdId:
    name: str
    r: int | None = None
    t: int | None = None
    d: int | None = None

    def describe(self) -> str:
        args = [f"{k}={v}" for k, v in (("r", self.r), ("t", self.t), ("d", self.d)) if v is not None]
        return f"{self.name}({', '.join(args)})" if args else self.name

    def to_dict(self) -> dict[str, Any]:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def _need(value: int | None, name: str, minimum: int, threshold: str) -> int:
    if value is None:
        raise DomainError(f"{threshold} needs parameter {name}")
    if value < minimum:
        shared_logger.error(f"_need(): {threshold} with {name}={value} < {minimum}")
        raise DomainError(f"{threshold} needs {name} >= {minimum}, got {name}={value}")
    return value


def bisect_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-14) -> float:
    f_lo = f(lo)
    if f_lo * f(hi) > 0:
        raise RuntimeError(f"bisect_root(): no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sign_changes(f: Callable[[float], float], lo: float, hi: float, step: float = 1e-3) -> int:
    count = 0
    previous = f(lo)
    steps = round((hi - lo) / step)
    for k in range(1, steps + 1):
        current = f(lo + k * step)
        if current == 0.0 or previous * current < 0:
            count += 1
        if current != 0.0:
            previous = current
    return count


def _unique_root(f: Callable[[float], float], label: str) -> float:
    if sign_changes(f, 0.5, 1.0) != 1:
        shared_logger.error(f"_unique_root(): {label} has no unique root in (1/2, 1)")
        raise RuntimeError(f"{label} has no unique root in (1/2, 1)")
    return bisect_root(f, 0.5, 1.0)


def dirac_cubic(r: int, p: float) -> float:
    return (r - 2) - (4 * r - 10) * p + (6 * r - 14) * p**2 - (4 * r - 8) * p**3


def dirac_pstar(r: int) -> float:
    """Root in (1/2, 1) of (r-2) - (4r-10)p + (6r-14)p^2 - (4r-8)p^3."""
    _need(r, "r", 4, "dirac_pstar")
    return _unique_root(lambda p: dirac_cubic(r, p), f"dirac cubic (r={r})")


def certified_cubic(r: int, p: float) -> float:
    """Equalises the four pair densities of the refined dead-end graph as it is actually wired.

    With p1 = p the classes are p^2+(1-p)^2, p*p2, (1-p1)+p1(1-p3)/(r-2) and (1-p2)+p2*p3.
    """
    return 2 * (2 * r - 3) * p**3 - (6 * r - 10) * p**2 + (4 * r - 8) * p - (r - 2)


def certified_pstar(r: int) -> float:
    _need(r, "r", 4, "certified_pstar")
    return _unique_root(lambda p: certified_cubic(r, p), f"certified dead-end cubic (r={r})")


def leila_alpha(r: int) -> float:
    _need(r, "r", 3, "leila_alpha")
    return (3 * r - 4 - math.sqrt(5 * r * r - 16 * r + 12)) / (2 * (r - 1))


def rho_b(r: int) -> float:
    _need(r, "r", 3, "rho_b")
    return (r - 2) / (2 * (r - 1) ** 2) * (3 * r - 4 - math.sqrt(5 * r * r - 16 * r + 12))


def hypercube_component(d: int) -> int:
    _need(d, "d", 2, "hypercube_component")
    return 1 + max(math.comb(d, j - 1) + math.comb(d, j) + math.comb(d, j + 1) for j in range(1, d))


def palette_component(t: int, r: int) -> int:
    _need(t, "t", 2, "palette_component")
    _need(r, "r", math.comb(2 * t - 1, t), "palette_component")
    return -(-t * r // (2 * t - 1))


def closed_form(tid: ThresholdId) -> float:
    """Evaluate a threshold formula; out-of-domain parameters raise :class:`DomainError`."""
    name = tid.name
    match name:
        case "golden_ratio":
            return (math.sqrt(5) - 1) / 2
        case "turan_kt":
            t = _need(tid.t, "t", 2, name)
            return (t - 2) / (t - 1)
        case "rho_b":
            return rho_b(_need(tid.r, "r", 3, name))
        case "conn_upper_kr":
            r = _need(tid.r, "r", 4, name)
            return 0.5 - 1 / (4 * r - 6)
        case "conn_upper_general" | "star":
            r = _need(tid.r, "r", 3, name)
            return (r - 2) / (r - 1)
        case "conn_upper_k4":
            return 2 - 2 * math.sqrt(2 / 3)
        case "dirac_lower":
            p = dirac_pstar(_need(tid.r, "r", 4, name))
            return p * p + (1 - p) ** 2
        case "dirac_certified":
            p = certified_pstar(_need(tid.r, "r", 4, name))
            return p * p + (1 - p) ** 2
        case "path_threshold":
            r = _need(tid.r, "r", 2, name)
            return 1 - 1 / (4 * math.cos(math.pi / (r + 1)) ** 2)
        case "k4mp3":
            return 4 - 2 * math.sqrt(3)
        case "c5_conn" | "kr_minus_matching" | "odd_cycles_lower":
            return 0.5
        case "pconn_path":
            r = _need(tid.r, "r", 2, name)
            return (3 - math.tan(math.pi / (2 * r)) ** 2) / 4
        case "pconn_complete":
            r = _need(tid.r, "r", 2, name)
            return (1 - math.tan(math.pi / (2 * r)) ** 2) / 2
        case "cycle_conn_lower":
            r = _need(tid.r, "r", 4, name)
            return (3 - math.tan(math.pi / (r // 2 + 2)) ** 2) / 4
        case "cycle_conn_upper":
            r = _need(tid.r, "r", 4, name)
            return (3 - math.tan(math.pi / (r + 2)) ** 2) / 4
        case "c4_ham_upper":
            return 1 / math.sqrt(3)
        case "path_host_upper":
            return 0.75
        case "ladder_upper":
            return 2 / 3
        case "palette_density":
            t = _need(tid.t, "t", 2, name)
            return 1 / t**2
        case "palette_component":
            return float(palette_component(_need(tid.t, "t", 2, name), _need(tid.r, "r", 1, name)))
        case "hypercube_component":
            return float(hypercube_component(_need(tid.d, "d", 2, name)))
        case "leila_alpha":
            return leila_alpha(_need(tid.r, "r", 3, name))
    raise DomainError(f"Unsupported threshold: {name}")
