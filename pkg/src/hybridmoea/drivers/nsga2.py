"""NSGA-II: fast nondominated sorting with crowding-distance survival."""

from __future__ import annotations

import math

import numpy as np

from hybridmoea import kernels
from hybridmoea.core import Individual, Population, genotypes_of, objectives_of
from hybridmoea.hybrid import Driver
from hybridmoea.operators import binary_tournament, polynomial_mutation, sbx_crossover


def rank_and_crowding(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nondomination rank and within-front crowding distance of every row."""
    ranks = kernels.nondominated_ranks(F)
    crowd = np.zeros(F.shape[0])
    for r in np.unique(ranks):
        idx = np.flatnonzero(ranks == r)
        crowd[idx] = kernels.crowding_distance(F[idx])
    return ranks, crowd


def crowded_order(ranks: np.ndarray, crowd: np.ndarray) -> np.ndarray:
    """Indices sorted by rank, then by decreasing crowding; stable on ties."""
    return np.lexsort((-crowd, ranks))


def survival_selection(F: np.ndarray, size: int, protected: np.ndarray | None = None) -> np.ndarray:
    """Indices of the ``size`` rows kept by rank-fill with crowding truncation.

    Protected rows are always kept and the remaining slots are filled from the
    other rows. Returned indices are sorted.
    """
    n = F.shape[0]
    protected = np.zeros(n, dtype=bool) if protected is None else protected
    keep = list(np.flatnonzero(protected))
    free = size - len(keep)
    if free <= 0:
        return np.array(sorted(keep), dtype=np.int64)
    cand = np.flatnonzero(~protected)
    if cand.size <= free:
        return np.sort(np.concatenate([keep, cand]).astype(np.int64))
    ranks = kernels.nondominated_ranks(F[cand])
    for r in np.unique(ranks):
        front = cand[ranks == r]
        if front.size <= free:
            keep.extend(front)
            free -= front.size
        else:
            crowd = kernels.crowding_distance(F[front])
            keep.extend(front[np.argsort(-crowd, kind="stable")[:free]])
            free = 0
        if free == 0:
            break
    return np.array(sorted(keep), dtype=np.int64)


class NSGAII(Driver):
    token = "NSGAII"
    defaults = {
        "population_size": 64,
        "mating_population_size": 0.5,
        "crossover_rate": 0.9,
        "eta_c": 15.0,
        "mutation_rate": None,
        "eta_m": 20.0,
        "mutation_scale": 1.0,
    }

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self._pop: Population = []

    @property
    def population(self) -> Population:
        return self._pop

    def _set_population(self, pop: Population) -> None:
        self._pop = list(pop)

    def _ranking(self) -> list[int]:
        ranks, crowd = rank_and_crowding(objectives_of(self._pop))
        return crowded_order(ranks, crowd).tolist()

    def _advance(self) -> None:
        size = int(self.params["population_size"])
        if self.steps_taken == 0:
            self._pop = self._evaluate(self._initial_population(size))
            return
        pop = self._evaluate(self._pop)
        offspring = self._evaluate(self._make_offspring(pop, size))
        merged = pop + offspring
        protected = self._take_protected(merged)
        keep = survival_selection(objectives_of(merged), size, protected)
        self._pop = [merged[i] for i in keep]

    def _make_offspring(self, pop: Population, count: int) -> Population:
        p = self.params
        prob = self.problem
        ranks, crowd = rank_and_crowding(objectives_of(pop))
        pool_size = max(2, math.ceil(float(p["mating_population_size"]) * len(pop)))
        pool = binary_tournament(np.column_stack([ranks, -crowd]), pool_size, self.rng)
        G = genotypes_of(pop)[pool]
        pairs = math.ceil(count / 2)
        a = G[self.rng.integers(0, pool_size, pairs)]
        b = G[self.rng.integers(0, pool_size, pairs)]
        c1, c2 = sbx_crossover(a, b, p["eta_c"], p["crossover_rate"], self.rng, prob.lower, prob.upper)
        children = np.concatenate([c1, c2])[:count]
        rate = p["mutation_rate"] if p["mutation_rate"] is not None else 1.0 / prob.dimension
        children = polynomial_mutation(
            children, p["eta_m"], rate, self.rng, prob.lower, prob.upper, scale=float(p["mutation_scale"])
        )
        return [Individual(x) for x in children]
