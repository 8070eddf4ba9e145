"""OMOPSO: multi-objective PSO with crowding leaders, turbulence and an
epsilon-dominance archive."""

from __future__ import annotations

import numpy as np

from hybridmoea import kernels
from hybridmoea.core import Individual, Population, dominates, genotypes_of, objectives_of
from hybridmoea.hybrid import Driver
from hybridmoea.operators import binary_tournament, nonuniform_mutation, uniform_mutation


def epsilon_dominates(a: np.ndarray, b: np.ndarray, eps: np.ndarray | float) -> bool:
    """Additive epsilon dominance: ``a - eps <= b`` in every objective."""
    return bool(np.all(np.asarray(a) - eps <= np.asarray(b)))


class EpsilonArchive:
    """Unbounded archive in which no member epsilon-dominates another."""

    def __init__(self, epsilon: float | np.ndarray) -> None:
        self.epsilon = epsilon
        self.members: Population = []

    def add(self, ind: Individual) -> bool:
        """Insert ``ind`` unless a member epsilon-dominates it.

        Members epsilon-dominated by the newcomer are evicted. Returns whether
        it was inserted.
        """
        f = ind.objectives
        if self.members:
            M = objectives_of(self.members)
            if np.any(np.all(M - self.epsilon <= f, axis=1)):
                return False
            evict = np.all(f - self.epsilon <= M, axis=1)
            if evict.any():
                self.members = [m for m, gone in zip(self.members, evict) if not gone]
        self.members.append(ind)
        return True

    def __len__(self) -> int:
        return len(self.members)


def crowding_truncate(F: np.ndarray, capacity: int, protected: np.ndarray | None = None) -> np.ndarray:
    """Drop the most crowded unprotected row, one at a time, until ``capacity``."""
    alive = np.arange(F.shape[0])
    prot = np.zeros(F.shape[0], dtype=bool) if protected is None else protected
    while alive.size > capacity:
        crowd = kernels.crowding_distance(F[alive])
        crowd[prot[alive]] = np.inf
        worst = int(np.argmin(crowd))
        if not np.isfinite(crowd[worst]):
            break
        alive = np.delete(alive, worst)
    return alive


class OMOPSO(Driver):
    """OMOPSO; the shared population is the leaders archive.

    ``population_size`` is the swarm size. The epsilon archive is the final
    result returned by :meth:`finalize`.
    """

    token = "OMOPSO"
    defaults = {
        "population_size": 64,
        "leaders_size": None,
        "epsilon": 0.0075,
        "mutation_rate": None,
        "perturbation": 0.5,
        "max_iterations": 250,
        "mutation_scale": 1.0,
    }

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self.swarm: Population = []
        self.velocity = np.empty((0, self.problem.dimension))
        self.personal_best: Population = []
        self._leaders: Population = []
        self.epsilon_archive = EpsilonArchive(float(self.params["epsilon"]))

    @property
    def leaders_size(self) -> int:
        size = self.params["leaders_size"]
        return int(size) if size is not None else int(self.params["population_size"])

    @property
    def population(self) -> Population:
        return self._leaders

    def _set_population(self, pop: Population) -> None:
        self._leaders = list(pop)

    def _ranking(self) -> list[int]:
        crowd = kernels.crowding_distance(objectives_of(self._leaders))
        return np.argsort(-crowd, kind="stable").tolist()

    def _final_result(self) -> Population:
        return list(self.epsilon_archive.members)

    def _advance(self) -> None:
        if self.steps_taken == 0:
            self.swarm = self._evaluate(self._initial_population(int(self.params["population_size"])))
            self.velocity = np.zeros((len(self.swarm), self.problem.dimension))
            self.personal_best = list(self.swarm)
            self._update_archives(self._take_protected(self._leaders))
            return
        self._leaders = self._evaluate(self._leaders)
        self.swarm = self._evaluate(self._fly())
        for i, (new, best) in enumerate(zip(self.swarm, self.personal_best)):
            if not dominates(best.objectives, new.objectives):
                self.personal_best[i] = new
        self._update_archives(self._take_protected(self._leaders))

    def _fly(self) -> Population:
        prob, rng = self.problem, self.rng
        X = genotypes_of(self.swarm)
        P = genotypes_of(self.personal_best)
        n = X.shape[0]
        if self._leaders:
            crowd = kernels.crowding_distance(objectives_of(self._leaders))
            L = genotypes_of(self._leaders)[binary_tournament(-crowd, n, rng)]
        else:
            L = P
        r1, r2 = rng.random((n, 1)), rng.random((n, 1))
        c1, c2 = rng.uniform(1.5, 2.0, (n, 1)), rng.uniform(1.5, 2.0, (n, 1))
        w = rng.uniform(0.1, 0.5, (n, 1))
        V = w * self.velocity + c1 * r1 * (P - X) + c2 * r2 * (L - X)
        X = X + V
        low, high = X < prob.lower, X > prob.upper
        V[low | high] *= -1.0
        X = np.clip(X, prob.lower, prob.upper)

        rate = self.params["mutation_rate"] if self.params["mutation_rate"] is not None else 1.0 / prob.dimension
        pert = float(self.params["perturbation"])
        scale = float(self.params["mutation_scale"])
        progress = self.steps_taken / max(1, int(self.params["max_iterations"]))
        third = np.arange(n) % 3
        u, nu = third == 0, third == 1
        if u.any():
            X[u] = uniform_mutation(X[u], rate, pert, rng, prob.lower, prob.upper, scale)
        if nu.any():
            X[nu] = nonuniform_mutation(X[nu], rate, pert, progress, rng, prob.lower, prob.upper, scale)
        self.velocity = V
        return [Individual(x) for x in X]

    def _update_archives(self, leader_protected: np.ndarray) -> None:
        candidates = self._leaders + self.swarm
        prot = np.concatenate([leader_protected, np.zeros(len(self.swarm), dtype=bool)])
        F = objectives_of(candidates)
        mask = kernels.nondominated_mask(F) | prot
        # exact objective duplicates would zero out crowding; keep first copy
        _, first = np.unique(F, axis=0, return_index=True)
        unique = np.zeros(len(candidates), dtype=bool)
        unique[first] = True
        idx = np.flatnonzero(mask & (unique | prot))
        keep = idx[crowding_truncate(F[idx], self.leaders_size, prot[idx])]
        self._leaders = [candidates[i] for i in np.sort(keep)]
        for ind in self.swarm:
            self.epsilon_archive.add(ind)
