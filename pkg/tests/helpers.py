"""Instrumented inner drivers for meta-model tests."""

from __future__ import annotations

from hybridmoea.drivers.nsga2 import NSGAII
from hybridmoea.hybrid import Proxy

SERVICES = {"step", "finalize", "nominate_delegates", "deport", "assimilate"}


class Spy:
    """Wraps a driver and lets a meta-model reach only the contract methods.

    Any other attribute access is logged as a violation.
    """

    def __init__(self, inner, log: list, index: int):
        object.__setattr__(self, "_inner", inner)
        object.__setattr__(self, "_log", log)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "violations", [])
        object.__setattr__(self, "steps", 0)

    def __getattr__(self, name):
        self.violations.append(name)
        raise AttributeError(name)

    def step(self):
        proxy = self._inner.step()
        self._log.append((self._index, "step", proxy.step_cost))
        object.__setattr__(self, "steps", self.steps + 1)
        return Proxy(proxy.population, proxy.step_cost, proxy.budget_exhausted, self)

    def finalize(self):
        self._log.append((self._index, "finalize", None))
        return self._inner.finalize()

    def nominate_delegates(self, count):
        out = self._inner.nominate_delegates(count)
        self._log.append((self._index, "nominate_delegates", out))
        return out

    def deport(self, count):
        out = self._inner.deport(count)
        self._log.append((self._index, "deport", out))
        return out

    def assimilate(self, immigrants):
        self._log.append((self._index, "assimilate", list(immigrants)))
        self._inner.assimilate(immigrants)

    @property
    def wrapped(self):
        return self._inner


def spy_factory(problem, meter, inner_cls=NSGAII, base_params=None):
    """Inner factory for a meta-model, returning spies over ``inner_cls``."""
    log: list = []
    spies: list[Spy] = []

    def factory(seed, overrides=None, initial_population=None, chain=None):
        params = {**(base_params or {}), **(overrides or {})}
        params = {k: v for k, v in params.items() if k in inner_cls.defaults}
        spy = Spy(inner_cls(problem, meter, seed, params, initial_population), log, len(spies))
        spies.append(spy)
        return spy

    return factory, log, spies
