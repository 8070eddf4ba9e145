"""Hierarchic genetic strategy: a tree of demes grown by sprouting.

Each meta-epoch advances every node ``metaepoch_len`` steps in depth-first
order, then lets every node below ``max_level`` nominate delegates. A delegate
far enough from all existing sprout seeds becomes the seed of a child node
whose population is a Gaussian cloud around it, with a tighter spread and a
smaller mutation scale at every level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from hybridmoea.core import Individual, Population, clip_to_bounds
from hybridmoea.hybrid import MetaModel


@dataclass(eq=False)
class HgsNode:
    level: int
    deme: int
    seed_individual: Individual | None = None
    parent: int | None = None
    children: list[int] = field(default_factory=list)
    alive: bool = True


class HGS(MetaModel):
    token = "HGS"
    defaults = {
        "metaepoch_len": 5,
        "sproutiveness": 3,
        "max_sprouts_no": 16,
        "min_sprout_distance": None,
        "max_level": 2,
        "population_sizes": (100, 16, 8),
        "sprout_sigmas": (0.0, 0.1, 0.01),
        "mutation_scales": (1.0, 0.5, 0.25),
        # set by an enclosing meta-model
        "population_size": None,
        "mutation_scale": 1.0,
    }

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        p = self.params
        self.max_level = int(p["max_level"])
        for key in ("population_sizes", "sprout_sigmas", "mutation_scales"):
            if len(p[key]) < self.max_level + 1:
                raise ValueError(f"HGS {key} needs {self.max_level + 1} entries, got {len(p[key])}")
        self.population_sizes = [int(s) for s in p["population_sizes"]]
        if p["population_size"] is not None:
            self.population_sizes[0] = int(p["population_size"])
        d = p["min_sprout_distance"]
        self.min_sprout_distance = float(d) if d is not None else 0.05 * self.problem.diagonal
        self.nodes: list[HgsNode] = []
        self.inner_steps = 0

    @property
    def sprout_count(self) -> int:
        return len(self.nodes) - 1 if self.nodes else 0

    def sprout_seeds(self) -> np.ndarray:
        seeds = [n.seed_individual.genotype for n in self.nodes if n.seed_individual is not None]
        return np.array(seeds).reshape(len(seeds), self.problem.dimension)

    def _node_overrides(self, level: int) -> dict:
        return {
            "population_size": self.population_sizes[level],
            "mutation_scale": float(self.params["mutation_scales"][level]) * float(self.params["mutation_scale"]),
        }

    def tree_order(self) -> list[int]:
        order, stack = [], [0] if self.nodes else []
        while stack:
            i = stack.pop()
            order.append(i)
            stack.extend(reversed(self.nodes[i].children))
        return order

    def _advance(self) -> int:
        if not self.nodes:
            self._spawn(self._node_overrides(0), self._initial)
            self._initial = None
            self.nodes.append(HgsNode(level=0, deme=0))
        cost = 0
        for i in self.tree_order():
            node = self.nodes[i]
            if not node.alive:
                continue
            for _ in range(int(self.params["metaepoch_len"])):
                cost += self._step_deme(node.deme).step_cost
                self.inner_steps += 1
                if self.meter.exhausted:
                    return cost
        self.sprout()
        return cost

    def sprout(self) -> list[HgsNode]:
        """Create child nodes around delegates of the current nodes."""
        p = self.params
        created: list[HgsNode] = []
        max_sprouts = int(p["max_sprouts_no"])
        for i in self.tree_order():
            node = self.nodes[i]
            proxy = self._proxies[node.deme]
            if not node.alive or node.level >= self.max_level or proxy is None or node in created:
                continue
            for delegate in proxy.nominate_delegates(int(p["sproutiveness"])):
                if self.sprout_count >= max_sprouts:
                    return created
                seeds = self.sprout_seeds()
                if seeds.size and np.min(np.linalg.norm(seeds - delegate.genotype, axis=1)) < self.min_sprout_distance:
                    continue
                created.append(self._make_child(i, delegate))
        return created

    def _make_child(self, parent: int, delegate: Individual) -> HgsNode:
        level = self.nodes[parent].level + 1
        size = self.population_sizes[level]
        sigma = float(self.params["sprout_sigmas"][level]) * self.problem.width
        cloud = delegate.genotype + self.rng.normal(size=(size - 1, self.problem.dimension)) * sigma
        cloud = clip_to_bounds(self.problem, cloud)
        initial: Population = [delegate] + [Individual(x) for x in cloud]
        self._spawn(self._node_overrides(level), initial)
        node = HgsNode(level=level, deme=len(self._demes) - 1, seed_individual=delegate, parent=parent)
        self.nodes.append(node)
        self.nodes[parent].children.append(len(self.nodes) - 1)
        return node
