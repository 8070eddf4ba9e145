"""SPEA2: strength fitness, k-NN density, truncating archive."""

from __future__ import annotations

import math

import numpy as np

from hybridmoea import kernels
from hybridmoea.core import Individual, Population, genotypes_of, objectives_of
from hybridmoea.hybrid import Driver
from hybridmoea.operators import binary_tournament, polynomial_mutation, sbx_crossover


def spea2_fitness(F: np.ndarray, k: int) -> np.ndarray:
    """Raw fitness plus density; values below 1 mark nondominated rows."""
    raw, density = kernels.spea2_fitness(F, k)
    return raw + density


def environmental_selection(F: np.ndarray, capacity: int, k: int, protected: np.ndarray | None = None) -> np.ndarray:
    """Sorted indices of the next archive.

    Nondominated rows are copied; an overfull set is truncated by iterated
    nearest-neighbour removal and an underfull one is filled with the best
    dominated rows. Protected rows always survive.
    """
    n = F.shape[0]
    protected = np.zeros(n, dtype=bool) if protected is None else protected
    fitness = spea2_fitness(F, k)
    keep = np.flatnonzero(protected)
    free = capacity - keep.size
    if free <= 0:
        return keep
    cand = np.flatnonzero(~protected)
    nd = cand[fitness[cand] < 1.0]
    if nd.size > free:
        chosen = nd[kernels.spea2_truncate(F[nd], free)]
    elif nd.size < free:
        dominated = cand[fitness[cand] >= 1.0]
        best = dominated[np.argsort(fitness[dominated], kind="stable")[: free - nd.size]]
        chosen = np.concatenate([nd, best])
    else:
        chosen = nd
    return np.sort(np.concatenate([keep, chosen]).astype(np.int64))


class SPEA2(Driver):
    """SPEA2 whose shared population is its archive."""

    token = "SPEA2"
    defaults = {
        "population_size": 64,
        "archive_size": None,
        "k": None,
        "mating_population_size": 0.5,
        "crossover_rate": 0.9,
        "eta_c": 15.0,
        "mutation_rate": None,
        "eta_m": 20.0,
        "mutation_scale": 1.0,
    }

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self._archive: Population = []
        self.offspring: Population = []

    @property
    def archive_size(self) -> int:
        a = self.params["archive_size"]
        return int(a) if a is not None else int(self.params["population_size"])

    @property
    def k(self) -> int:
        k = self.params["k"]
        return int(k) if k is not None else int(math.sqrt(int(self.params["population_size"]) + self.archive_size))

    @property
    def population(self) -> Population:
        return self._archive

    def _set_population(self, pop: Population) -> None:
        self._archive = list(pop)

    def _ranking(self) -> list[int]:
        fit = spea2_fitness(objectives_of(self._archive), self.k)
        return np.argsort(fit, kind="stable").tolist()

    def _advance(self) -> None:
        size = int(self.params["population_size"])
        if self.steps_taken == 0:
            self.offspring = self._evaluate(self._initial_population(size))
            union = self.offspring + self._archive
        else:
            self._archive = self._evaluate(self._archive)
            self.offspring = self._evaluate(self._make_offspring(self._archive, size))
            union = self.offspring + self._archive
        protected = self._take_protected(union)
        keep = environmental_selection(objectives_of(union), self.archive_size, self.k, protected)
        self._archive = [union[i] for i in keep]

    def _make_offspring(self, archive: Population, count: int) -> Population:
        p = self.params
        prob = self.problem
        fit = spea2_fitness(objectives_of(archive), self.k)
        pool_size = max(2, math.ceil(float(p["mating_population_size"]) * len(archive)))
        pool = binary_tournament(fit, pool_size, self.rng)
        G = genotypes_of(archive)[pool]
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
