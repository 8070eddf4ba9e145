"""Driver / meta-model composition.

Every algorithm, single-deme or multi-deme, is a :class:`Driver`: it advances
in discrete steps and emits a :class:`Proxy` after each one. A meta-model owns
inner drivers, steps them, and talks to them only through the proxies they
return, so any meta-model can wrap any driver (including another meta-model).
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np

from hybridmoea.chain import AlgorithmChain
from hybridmoea.core import (
    BudgetMeter,
    ConfigurationError,
    ContractViolation,
    Individual,
    Population,
    Problem,
    evaluate_all,
    nondominated_filter,
)

log = logging.getLogger(__name__)


def child_seed(parent_seed: int, index: int) -> int:
    """Deterministic seed for the ``index``-th inner component."""
    ss = np.random.SeedSequence([int(parent_seed) & 0xFFFFFFFFFFFFFFFF, int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True, eq=False)
class Proxy:
    """What a driver hands to its meta-model after one step.

    ``population`` is a snapshot taken when the step ended. The three service
    methods act on the live driver.
    """

    population: tuple[Individual, ...]
    step_cost: int
    budget_exhausted: bool
    _driver: Driver = field(repr=False)

    def nominate_delegates(self, count: int) -> list[Individual]:
        return self._driver.nominate_delegates(count)

    def deport(self, count: int) -> list[Individual]:
        return self._driver.deport(count)

    def assimilate(self, immigrants: Sequence[Individual]) -> None:
        self._driver.assimilate(immigrants)


InnerFactory = Callable[..., "Driver"]


class Driver(ABC):
    """Base class for anything that can be stepped under a meta-model.

    Subclasses implement :meth:`_advance`, :meth:`_ranking`, expose the live
    population via :attr:`population` and may override :meth:`result`.

    Population changes made by :meth:`deport` and :meth:`assimilate` are seen
    by the next step. Immigrants are protected from the survival selection of
    that step.
    """

    token: ClassVar[str]
    defaults: ClassVar[Mapping[str, Any]] = {}
    is_metamodel: ClassVar[bool] = False

    def __init__(
        self,
        problem: Problem,
        meter: BudgetMeter,
        seed: int,
        params: Mapping[str, Any] | None = None,
        initial_population: Sequence[Individual] | None = None,
    ) -> None:
        self.problem = problem
        self.meter = meter
        self.seed = int(seed)
        self.rng = np.random.default_rng(self.seed)
        unknown = set(params or {}) - set(self.defaults)
        if unknown:
            log.warning("%s ignores unknown parameters %s", self.token, sorted(unknown))
        self.params: dict[str, Any] = {**self.defaults, **{k: v for k, v in (params or {}).items() if k in self.defaults}}
        self.steps_taken = 0
        self._finalized: Population | None = None
        self._protected: dict[int, Individual] = {}
        self._initial = list(initial_population) if initial_population is not None else None

    # -- subclass hooks ---------------------------------------------------

    @property
    @abstractmethod
    def population(self) -> Population:
        """The live population shared with the meta-model."""

    @abstractmethod
    def _advance(self) -> int | None:
        """Run one step. Return its cost, or None to use the meter delta."""

    @abstractmethod
    def _ranking(self) -> list[int]:
        """Indices of :attr:`population`, most promising first."""

    @abstractmethod
    def _set_population(self, pop: Population) -> None:
        """Replace the live population (used by deport / assimilate)."""

    def result(self) -> Population:
        """Current result population; the default is the live population."""
        return list(self.population)

    # -- contract ---------------------------------------------------------

    def step(self) -> Proxy:
        if self._finalized is not None:
            raise ContractViolation(f"{self.token}: step() after finalize()")
        before = self.meter.evaluations
        cost = self._advance()
        if cost is None:
            cost = self.meter.evaluations - before
        self.steps_taken += 1
        return Proxy(tuple(self.population), int(cost), self.meter.exhausted, self)

    def finalize(self) -> Population:
        if self._finalized is None:
            if self.steps_taken == 0:
                raise ContractViolation(f"{self.token}: finalize() before any step")
            self._finalized = self._final_result()
        return list(self._finalized)

    def _final_result(self) -> Population:
        return self.result()

    def nominate_delegates(self, count: int) -> list[Individual]:
        if count < 1:
            raise ContractViolation("count must be positive")
        pop = self.population
        if count >= len(pop):
            return list(pop)
        return [pop[i] for i in self._ranking()[:count]]

    def deport(self, count: int) -> list[Individual]:
        pop = self.population
        if count < 1 or count >= len(pop):
            raise ContractViolation(f"cannot deport {count} of {len(pop)} individuals")
        chosen = set(self._ranking()[:count])
        out = [ind for i, ind in enumerate(pop) if i in chosen]
        self._set_population([ind for i, ind in enumerate(pop) if i not in chosen])
        return out

    def assimilate(self, immigrants: Sequence[Individual]) -> None:
        immigrants = list(immigrants)
        if not immigrants:
            return
        for ind in immigrants:
            if ind.genotype.shape != (self.problem.dimension,):
                raise ContractViolation(
                    f"immigrant has {ind.genotype.size} variables, problem expects {self.problem.dimension}"
                )
        self._protected.update((id(ind), ind) for ind in immigrants)
        self._set_population(list(self.population) + immigrants)

    # -- helpers for subclasses ------------------------------------------

    def _evaluate(self, pop: Sequence[Individual]) -> Population:
        """Evaluate pending members, carrying immigrant protection across."""
        out = evaluate_all(self.problem, pop, self.meter)
        if self._protected:
            for old, new in zip(pop, out):
                if old is not new and id(old) in self._protected:
                    del self._protected[id(old)]
                    self._protected[id(new)] = new
        return out

    def _take_protected(self, pop: Sequence[Individual]) -> np.ndarray:
        """Mask of protected members of ``pop``; clears the protection."""
        mask = np.array([self._protected.get(id(ind)) is ind for ind in pop], dtype=bool)
        self._protected.clear()
        return mask

    def _initial_population(self, size: int) -> Population:
        if self._initial is not None:
            pop, self._initial = self._initial, None
            return pop
        return self.problem.random_individuals(size, self.rng)


class MetaModel(Driver):
    """A driver made of inner drivers built by ``inner_factory``.

    ``inner_factory(seed, overrides=None, initial_population=None, chain=None)``
    returns a fresh inner driver; ``chain`` replaces the default inner chain
    for that one deme. Subclasses keep the last proxy of every deme in
    ``self._proxies`` and interact with demes only through those proxies.
    """

    is_metamodel = True
    default_inner: ClassVar[str | None] = "NSGAII"

    def __init__(
        self,
        problem: Problem,
        meter: BudgetMeter,
        seed: int,
        params: Mapping[str, Any] | None = None,
        initial_population: Sequence[Individual] | None = None,
        *,
        inner_factory: InnerFactory,
    ) -> None:
        super().__init__(problem, meter, seed, params, initial_population)
        self.inner_factory = inner_factory
        self._children_made = 0
        self._demes: list[Driver] = []
        self._proxies: list[Proxy | None] = []

    def _spawn(self, overrides: Mapping[str, Any] | None = None, initial_population=None, chain=None) -> Driver:
        seed = child_seed(self.seed, self._children_made)
        self._children_made += 1
        kwargs = {"chain": chain} if chain is not None else {}
        deme = self.inner_factory(seed, overrides=dict(overrides or {}), initial_population=initial_population, **kwargs)
        self._demes.append(deme)
        self._proxies.append(None)
        return deme

    def _step_deme(self, index: int) -> Proxy:
        proxy = self._demes[index].step()
        self._proxies[index] = proxy
        return proxy

    @property
    def population(self) -> Population:
        union = [ind for p in self._proxies if p is not None for ind in p.population]
        return nondominated_filter(union)

    def _final_result(self) -> Population:
        union = [ind for i, d in enumerate(self._demes) if self._proxies[i] is not None for ind in d.finalize()]
        return nondominated_filter(union)

    # Services act on the primary deme (HGS root / first island) since a
    # meta-model's merged front is not a population it can edit directly.

    def _primary_proxy(self) -> Proxy:
        proxy = self._proxies[0] if self._proxies else None
        if proxy is None:
            raise ContractViolation(f"{self.token}: services unavailable before the first step")
        return proxy

    def nominate_delegates(self, count: int) -> list[Individual]:
        if count < 1:
            raise ContractViolation("count must be positive")
        return self._primary_proxy().nominate_delegates(count)

    def deport(self, count: int) -> list[Individual]:
        return self._primary_proxy().deport(count)

    def assimilate(self, immigrants: Sequence[Individual]) -> None:
        immigrants = list(immigrants)
        if immigrants:
            self._primary_proxy().assimilate(immigrants)

    def _ranking(self) -> list[int]:  # pragma: no cover - services are delegated
        return list(range(len(self.population)))

    def _set_population(self, pop: Population) -> None:  # pragma: no cover
        raise ContractViolation(f"{self.token}: population is derived from its demes")


# ---------------------------------------------------------------------------
# registry and composition
# ---------------------------------------------------------------------------

REGISTRY: dict[str, type[Driver]] = {}


def register(cls: type[Driver], token: str | None = None) -> type[Driver]:
    REGISTRY[(token or cls.token).upper()] = cls
    return cls


def unregister(token: str) -> None:
    REGISTRY.pop(token.upper(), None)


def validate_chain(chain: AlgorithmChain | str) -> AlgorithmChain:
    """Check every token is registered and only meta-models wrap others."""
    chain = AlgorithmChain.parse(chain)
    for pos, tok in enumerate(chain.elements):
        cls = REGISTRY.get(tok)
        if cls is None:
            raise ConfigurationError(f"unknown algorithm {tok!r} in chain {chain} (registered: {', '.join(sorted(REGISTRY))})")
        last = pos == len(chain) - 1
        if not last and not cls.is_metamodel:
            raise ConfigurationError(f"{tok} is a single-deme driver and cannot wrap {chain.segment(pos + 1, len(chain))}")
        if last and cls.is_metamodel and getattr(cls, "default_inner", None) is None:
            raise ConfigurationError(f"{tok} needs an inner driver, e.g. {tok}+NSGAII")
    return chain


def compose(
    chain: AlgorithmChain | str,
    problem: Problem,
    config=None,
    meter: BudgetMeter | None = None,
    seed: int = 0,
    *,
    overrides: Mapping[str, Any] | None = None,
    initial_population: Sequence[Individual] | None = None,
) -> Driver:
    """Build the driver described by ``chain``.

    Meta-models receive a factory that recursively composes the rest of the
    chain. Parameters are resolved per component from ``config`` (see
    :func:`hybridmoea.simulation.config.resolve_params`); ``overrides`` come
    from the enclosing meta-model and take precedence.
    """
    from hybridmoea.simulation.config import resolve_params

    chain = validate_chain(chain)
    meter = meter if meter is not None else BudgetMeter(2**62)
    cls = REGISTRY[chain.head]
    params = resolve_params(config, chain, 0)
    params.update(overrides or {})
    own = {k: v for k, v in params.items() if k in cls.defaults}
    forward = {k: v for k, v in params.items() if k not in cls.defaults}

    if not cls.is_metamodel:
        if forward:
            log.warning("%s ignores unknown parameters %s", cls.token, sorted(forward))
        return cls(problem, meter, seed, own, initial_population)

    inner_chain = chain.suffix(1) if len(chain) > 1 else AlgorithmChain((cls.default_inner,))

    def factory(inner_seed: int, overrides: Mapping[str, Any] | None = None, initial_population=None, chain=None) -> Driver:
        return compose(
            inner_chain if chain is None else chain,
            problem,
            config,
            meter,
            inner_seed,
            overrides={**forward, **(overrides or {})},
            initial_population=initial_population,
        )

    return cls(problem, meter, seed, own, initial_population, inner_factory=factory)
