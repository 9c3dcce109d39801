"""Maximin weight optimisation for a fixed combinatorial pattern.

The objective is min over host edges xy of w_x^T A_xy w_y on a product of probability simplices.
Projected gradient ascent runs on the soft-min -(1/β) log Σ exp(-β α_xy) for all starts at once,
with β ramped up. The best starts are then polished part by part with a linear program and
refined jointly by trust-region sequential linear programming.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.optimize import linprog

from hpartite_core.get_version import get_task_logger

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from hpartite_core.search.patterns import CombinatorialPattern

shared_logger = get_task_logger(__name__)

WEIGHT_FLOOR = 1e-12


def project_simplex(v: NDArray[np.float64]) -> NDArray[np.float64]:
    """Euclidean projection of every row of ``v`` onto the probability simplex."""
    n_features = v.shape[1]
    u = np.sort(v, axis=1)[:, ::-1]
    cssv = np.cumsum(u, axis=1) - 1.0
    ind = np.arange(n_features) + 1
    cond = u - cssv / ind > 0
    rho = np.count_nonzero(cond, axis=1)
    theta = cssv[np.arange(len(v)), rho - 1] / rho
    return np.maximum(v - theta[:, np.newaxis], 0.0)


def _renormalise(w: NDArray[np.float64]) -> NDArray[np.float64]:
    clipped = np.clip(w, 0.0, None)
    if clipped.sum() <= 0.0:
        # a part never empties: its largest coordinate is floored
        clipped = np.zeros_like(clipped)
        clipped[int(np.argmax(w))] = WEIGHT_FLOOR
    return clipped / clipped.sum()


@dataclass(frozen=True)
class OptimizerSettings:
    starts: int = 64
    betas: tuple[float, ...] = (10.0, 31.6, 100.0, 316.0, 1000.0, 3160.0, 10000.0)
    steps_per_beta: int = 60
    polished_starts: int = 2
    polish_rounds: int = 60
    dirichlet_concentration: float = 0.5
    refine_rounds: int = 200
    trust_radius: float = 0.05
    refine_tolerance: float = 1e-12


class WeightOptimizer:
    """Optimiser bound to one pattern: holds its biadjacency matrices in host-edge order."""

    def __init__(
        self, pattern: CombinatorialPattern, settings: OptimizerSettings | None = None
    ) -> None:
        self.pattern = pattern
        self.settings = settings or OptimizerSettings()
        self.sizes = pattern.part_sizes
        self.edges = [
            (x, y, pattern.matrix(k)) for k, (x, y) in enumerate(pattern.host.edges)
        ]

    # objective
    def pair_densities(self, weights: list[NDArray[np.float64]]) -> NDArray[np.float64]:
        """α for every start (rows) and host edge (columns); each weights[x] has shape (S, s_x)."""
        if not self.edges:
            return np.ones((weights[0].shape[0], 1))
        return np.stack(
            [np.einsum("si,ij,sj->s", weights[x], a, weights[y]) for x, y, a in self.edges], axis=1
        )

    def minimum(self, weights: list[NDArray[np.float64]]) -> float:
        single = [w[np.newaxis, :] for w in weights]
        return float(self.pair_densities(single).min())

    def initial_weights(self, rng: np.random.Generator) -> list[NDArray[np.float64]]:
        starts = max(1, self.settings.starts)
        weights = []
        for size in self.sizes:
            block = np.empty((starts, size))
            block[0] = 1.0 / size
            indicators = min(starts - 1, max(self.sizes))
            for k in range(indicators):
                block[1 + k] = 0.0
                block[1 + k, k % size] = 1.0
            rest = starts - 1 - indicators
            if rest > 0:
                block[1 + indicators :] = rng.dirichlet(
                    np.full(size, self.settings.dirichlet_concentration), size=rest
                )
            weights.append(block)
        return weights

    def ascend(
        self, rng: np.random.Generator
    ) -> tuple[list[NDArray[np.float64]], NDArray[np.float64]]:
        """Projected gradient ascent on the soft-min; returns the best iterate of every start."""
        weights = self.initial_weights(rng)
        best = [w.copy() for w in weights]
        best_value = self.pair_densities(weights).min(axis=1)
        if not self.edges:
            return best, best_value
        n_betas = len(self.settings.betas)
        for stage, beta in enumerate(self.settings.betas):
            step = 0.25 * (0.04 ** (stage / max(1, n_betas - 1)))
            for _ in range(self.settings.steps_per_beta):
                alphas = self.pair_densities(weights)
                z = -beta * alphas
                z -= z.max(axis=1, keepdims=True)
                soft = np.exp(z)
                soft /= soft.sum(axis=1, keepdims=True)
                grads = [np.zeros_like(w) for w in weights]
                for k, (x, y, a) in enumerate(self.edges):
                    grads[x] += soft[:, k, np.newaxis] * (weights[y] @ a.T)
                    grads[y] += soft[:, k, np.newaxis] * (weights[x] @ a)
                weights = [
                    project_simplex(w + step * g) if w.shape[1] > 1 else w
                    for w, g in zip(weights, grads, strict=True)
                ]
                value = self.pair_densities(weights).min(axis=1)
                improved = value > best_value
                if improved.any():
                    best_value = np.where(improved, value, best_value)
                    for b, w in zip(best, weights, strict=True):
                        b[improved] = w[improved]
        return best, best_value

    def polish(self, weights: list[NDArray[np.float64]]) -> list[NDArray[np.float64]]:
        """Coordinate-wise exact maximin: re-solve one part at a time as a linear program."""
        weights = [_renormalise(w) for w in weights]
        current = self.minimum(weights)
        for _ in range(self.settings.polish_rounds):
            start_round = current
            for x, size in enumerate(self.sizes):
                if size == 1:
                    continue
                rows = []
                others = []
                for a_x, a_y, a in self.edges:
                    if a_x == x:
                        rows.append(a @ weights[a_y])
                    elif a_y == x:
                        rows.append(a.T @ weights[a_x])
                    else:
                        others.append(float(weights[a_x] @ a @ weights[a_y]))
                if not rows:
                    continue
                # variables (w_x, t): maximise t subject to t <= c_k . w_x
                c = np.zeros(size + 1)
                c[-1] = -1.0
                a_ub = np.hstack([-np.asarray(rows), np.ones((len(rows), 1))])
                b_ub = np.zeros(len(rows))
                a_eq = np.hstack([np.ones((1, size)), np.zeros((1, 1))])
                upper = min(others) if others else None
                bounds = [(0.0, None)] * size + [(None, upper)]
                result = linprog(
                    c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0], bounds=bounds, method="highs"
                )
                if not result.success:
                    shared_logger.debug(f"WeightOptimizer.polish(): part {x}: {result.message}")
                    continue
                candidate = [*weights]
                candidate[x] = _renormalise(np.asarray(result.x[:size]))
                value = self.minimum(candidate)
                if value > current:
                    weights, current = candidate, value
            if current - start_round <= 1e-13:
                break
        return weights

    def refine(self, weights: list[NDArray[np.float64]]) -> list[NDArray[np.float64]]:
        """Joint sequential linear programming on all parts at once, inside a trust region.

        With the step written as ``d = radius * u`` and ``|u| <= 1``, each LP maximises ``s`` subject
        to ``radius * s <= α_k - current + radius * ∇α_k . u`` for every host edge, with zero
        per-part sums of ``u`` and ``w + d >= 0``. Steps are kept only when the true minimum improves.
        """
        weights = [_renormalise(w) for w in weights]
        if not self.edges:
            return weights
        offsets = np.concatenate([[0], np.cumsum(self.sizes)])
        n_vars = int(offsets[-1])
        a_eq = np.zeros((len(self.sizes), n_vars + 1))
        for x in range(len(self.sizes)):
            a_eq[x, offsets[x] : offsets[x + 1]] = 1.0
        c = np.zeros(n_vars + 1)
        c[-1] = -1.0
        current = self.minimum(weights)
        radius = self.settings.trust_radius
        for _ in range(self.settings.refine_rounds):
            if radius < self.settings.refine_tolerance:
                break
            flat = np.concatenate(weights)
            alphas = np.empty(len(self.edges))
            gradients = np.zeros((len(self.edges), n_vars))
            for k, (x, y, a) in enumerate(self.edges):
                alphas[k] = weights[x] @ a @ weights[y]
                gradients[k, offsets[x] : offsets[x + 1]] = a @ weights[y]
                gradients[k, offsets[y] : offsets[y + 1]] = a.T @ weights[x]
            bounds = [
                (0.0, 0.0)
                if self.sizes[x] == 1
                else (max(-flat[i] / radius, -1.0), min((1.0 - flat[i]) / radius, 1.0))
                for x in range(len(self.sizes))
                for i in range(offsets[x], offsets[x + 1])
            ]
            result = linprog(
                c,
                A_ub=np.hstack([-gradients, np.ones((len(self.edges), 1))]),
                b_ub=(alphas - current) / radius,
                A_eq=a_eq,
                b_eq=np.zeros(len(self.sizes)),
                bounds=[*bounds, (None, None)],
                method="highs",
            )
            if not result.success:
                shared_logger.debug(f"WeightOptimizer.refine(): {result.message}")
                break
            predicted = float(result.x[-1]) * radius
            if predicted <= self.settings.refine_tolerance:
                break
            step = flat + radius * np.asarray(result.x[:n_vars])
            candidate = [_renormalise(step[offsets[x] : offsets[x + 1]]) for x in range(len(self.sizes))]
            value = self.minimum(candidate)
            gain = value - current
            if gain > 0.0:
                weights, current = candidate, value
            if gain > 0.75 * predicted:
                radius = min(1.0, 2.0 * radius)
            elif gain < 0.25 * predicted:
                radius *= 0.25
        return weights

    def run(self, seed: int = 0) -> tuple[tuple[tuple[float, ...], ...], float]:
        rng = np.random.default_rng(seed)
        best, best_value = self.ascend(rng)
        order = np.argsort(-best_value, kind="stable")[: max(1, self.settings.polished_starts)]
        champion: list[NDArray[np.float64]] | None = None
        champion_value = -1.0
        for s in order:
            candidate = self.refine(self.polish([w[s] for w in best]))
            value = self.minimum(candidate)
            if value > champion_value:
                champion, champion_value = candidate, value
        assert champion is not None
        weights = tuple(tuple(float(v) for v in w) for w in champion)
        return weights, champion_value


def optimize_weights(
    p: CombinatorialPattern, seed: int = 0, settings: OptimizerSettings | None = None
) -> tuple[tuple[tuple[float, ...], ...], float]:
    """Locally optimal weights for ``p`` and the density they reach, a lower bound on the optimum."""
    weights, density = WeightOptimizer(p, settings).run(seed)
    shared_logger.debug(f"optimize_weights(): {p.part_sizes} -> {density:.12g}")
    return weights, density
