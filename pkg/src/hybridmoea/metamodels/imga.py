"""Island model: independent demes interleaved with migration."""

from __future__ import annotations

import logging
import math

from hybridmoea.core import ConfigurationError, ContractViolation, Individual
from hybridmoea.hybrid import MetaModel

log = logging.getLogger(__name__)


def topology_edges(kind: str, islands: int) -> dict[int, list[int]]:
    """Out-neighbours of each island for a named topology."""
    if kind == "ring":
        return {i: [(i + 1) % islands] for i in range(islands)}
    if kind == "complete":
        return {i: [j for j in range(islands) if j != i] or [i] for i in range(islands)}
    raise ConfigurationError(f"unknown IMGA topology {kind!r} (expected 'ring' or 'complete')")


class IMGA(MetaModel):
    """Island model genetic algorithm.

    Every meta-epoch each island takes ``migration_interval`` steps (round
    robin); afterwards every island deports ``migrants_no`` individuals
    through its proxy and they are assimilated by its topology neighbours.
    With the complete topology the emigrants of one island are dealt out to
    its neighbours in turn.
    """

    token = "IMGA"
    defaults = {
        "islands_no": 4,
        "migration_interval": 5,
        "migrants_no": None,
        "topology": "ring",
        "island_chains": None,
        # set by an enclosing meta-model / per-island size
        "population_size": None,
    }

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self.islands_no = int(self.params["islands_no"])
        if self.islands_no < 1:
            raise ConfigurationError("IMGA needs at least one island")
        self.edges = topology_edges(str(self.params["topology"]), self.islands_no)
        chains = self.params["island_chains"]
        if chains is not None and len(chains) != self.islands_no:
            raise ConfigurationError(f"island_chains lists {len(chains)} chains for {self.islands_no} islands")
        self.migrations = 0

    def _migrants_for(self, island: int) -> int:
        m = self.params["migrants_no"]
        if m is not None:
            return int(m)
        return math.ceil(0.05 * len(self._proxies[island].population))

    def _advance(self) -> int:
        if not self._demes:
            self._create_islands()
        cost = 0
        for _ in range(int(self.params["migration_interval"])):
            for i in range(self.islands_no):
                cost += self._step_deme(i).step_cost
                if self.meter.exhausted:
                    return cost
        self.migrate()
        return cost

    def _create_islands(self) -> None:
        size = self.params["population_size"]
        overrides = {"population_size": int(size)} if size is not None else {}
        initial = self._initial
        self._initial = None
        chains = self.params["island_chains"]
        for i in range(self.islands_no):
            part = initial[i :: self.islands_no] if initial else None
            extra = {"chain": chains[i]} if chains is not None else {}
            self._spawn(overrides, part, **extra)

    def migrate(self) -> None:
        """Deport from every island first, then deliver along topology edges."""
        if self.islands_no < 2:
            return
        outgoing: list[list[Individual]] = []
        for i in range(self.islands_no):
            count = self._migrants_for(i)
            if count <= 0:
                outgoing.append([])
                continue
            try:
                outgoing.append(self._proxies[i].deport(count))
            except ContractViolation as exc:
                log.debug("island %d skips emigration: %s", i, exc)
                outgoing.append([])
        inbox: list[list[Individual]] = [[] for _ in range(self.islands_no)]
        for i, emigrants in enumerate(outgoing):
            targets = self.edges[i]
            for j, ind in enumerate(emigrants):
                inbox[targets[j % len(targets)]].append(ind)
        for i, immigrants in enumerate(inbox):
            if immigrants:
                self._proxies[i].assimilate(immigrants)
        self.migrations += 1
