import numpy as np
import pytest

from hybridmoea.chain import AlgorithmChain, normalize_token
from hybridmoea.core import BudgetMeter, ConfigurationError, ContractViolation, nondominated_filter, objectives_of
from hybridmoea.drivers.nsga2 import NSGAII
from hybridmoea.hybrid import REGISTRY, Driver, MetaModel, child_seed, compose, register, unregister, validate_chain
from hybridmoea.metamodels.hgs import HGS
from hybridmoea.metamodels.imga import IMGA

from helpers import SERVICES, spy_factory

CHAINS = ["NSGAII", "SPEA2", "OMOPSO", "HGS+NSGAII", "IMGA+SPEA2", "IMGA+HGS+NSGAII", "HGS+OMOPSO", "IMGA+IMGA+NSGAII", "HGS"]
SMALL = {"population_size": 8}


def small_config():
    from hybridmoea.simulation.config import RunConfig

    return RunConfig.from_mapping(
        {
            "NSGAII": SMALL,
            "SPEA2": SMALL,
            "OMOPSO": SMALL,
            "HGS": {"population_sizes": [12, 8, 6], "metaepoch_len": 2},
            "IMGA": {"islands_no": 3, "migration_interval": 2, "population_size": 8},
        }
    )


def test_chain_parsing():
    c = AlgorithmChain.parse(" hgs + nsgai ")
    assert c.elements == ("HGS", "NSGAII") and str(c) == "HGS+NSGAII"
    assert c.head == "HGS" and len(c) == 2
    assert str(c.suffix(1)) == "NSGAII" and c.segment(0, 2) == "HGS+NSGAII"
    assert normalize_token("nsgai") == "NSGAII"
    assert str(AlgorithmChain.parse("JGBL+HGS+NSGAI")) == "JGBL+HGS+NSGAII"
    with pytest.raises(ValueError):
        AlgorithmChain.parse("HGS++NSGAII")


def test_compose_examples(zdt1):
    assert type(compose("NSGAI", zdt1)) is NSGAII
    h = compose("HGS+NSGAII", zdt1, small_config())
    assert type(h) is HGS
    h.step()
    assert all(type(d) is NSGAII for d in h._demes)
    i = compose("IMGA+HGS+NSGAII", zdt1, small_config())
    i.step()
    assert all(type(d) is HGS for d in i._demes)
    assert all(type(dd) is NSGAII for d in i._demes for dd in d._demes)


def test_unknown_token_named(zdt1):
    with pytest.raises(ConfigurationError, match="JGBL"):
        compose("JGBL+HGS+NSGAI", zdt1)


def test_driver_cannot_wrap(zdt1):
    with pytest.raises(ConfigurationError, match="NSGAII"):
        validate_chain("NSGAII+HGS")


def test_metamodel_without_default_inner_rejected(zdt1):
    class Bare(HGS):
        token = "BARE"
        default_inner = None

    register(Bare)
    try:
        with pytest.raises(ConfigurationError, match="inner"):
            validate_chain("BARE")
        validate_chain("BARE+NSGAII")
    finally:
        unregister("BARE")


def test_registry_open_for_extension(zdt1):
    class Random(Driver):
        token = "RANDOMSEARCH"
        defaults = {"population_size": 5}

        def __init__(self, *a, **k):
            super().__init__(*a, **k)
            self._pop = []

        @property
        def population(self):
            return self._pop

        def _set_population(self, pop):
            self._pop = list(pop)

        def _ranking(self):
            return list(range(len(self._pop)))

        def _advance(self):
            self._pop = nondominated_filter(self._pop + self._evaluate(self._initial_population(5)))
            self._initial = None

    register(Random)
    try:
        d = compose("HGS+RANDOMSEARCH", zdt1, small_config())
        for _ in range(3):
            d.step()
        assert d.finalize()
    finally:
        unregister("RANDOMSEARCH")
    assert "RANDOMSEARCH" not in REGISTRY


@pytest.mark.parametrize("chain", CHAINS)
def test_budget_conservation_and_contract(chain, zdt1):
    meter = BudgetMeter(3000)
    d = compose(chain, zdt1, small_config(), meter, seed=3)
    total = 0
    while not meter.exhausted:
        proxy = d.step()
        total += proxy.step_cost
        assert proxy.budget_exhausted == meter.exhausted
    assert total == meter.consumed
    final = d.finalize()
    assert final and final == d.finalize()
    F = objectives_of(final)
    if isinstance(d, MetaModel):
        from hybridmoea.kernels import nondominated_mask

        assert nondominated_mask(F).all()
    with pytest.raises(ContractViolation):
        d.step()


@pytest.mark.parametrize("chain", CHAINS)
def test_determinism(chain, zdt1):
    def run():
        d = compose(chain, zdt1, small_config(), BudgetMeter(1500), seed=42)
        out = []
        while not d.meter.exhausted:
            out.append(objectives_of(list(d.step().population)))
        return out

    a, b = run(), run()
    assert len(a) == len(b)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)


@pytest.mark.parametrize("chain", ["NSGAII", "HGS+NSGAII", "IMGA+SPEA2"])
def test_step_by_step_equals_uninterrupted(chain, zdt1):
    a = compose(chain, zdt1, small_config(), BudgetMeter(10**6), seed=9)
    b = compose(chain, zdt1, small_config(), BudgetMeter(10**6), seed=9)
    for _ in range(4):
        a.step()
    snaps = [b.step() for _ in range(4)]
    np.testing.assert_array_equal(objectives_of(a.population), objectives_of(list(snaps[-1].population)))


@pytest.mark.parametrize("chain", ["HGS+NSGAII", "IMGA+SPEA2", "IMGA+HGS+NSGAII"])
def test_metamodel_services_are_valid(chain, zdt1):
    d = compose(chain, zdt1, small_config(), BudgetMeter(10**6), seed=1)
    with pytest.raises(ContractViolation):
        d.nominate_delegates(1)
    proxy = d.step()
    assert 1 <= len(proxy.nominate_delegates(2)) <= 2
    out = proxy.deport(1)
    assert len(out) == 1
    proxy.assimilate(out)
    d.step()


def test_child_seed_deterministic_and_distinct():
    assert child_seed(1, 0) == child_seed(1, 0)
    assert len({child_seed(1, i) for i in range(100)}) == 100
    assert child_seed(1, 0) != child_seed(2, 0)


@pytest.mark.parametrize("cls", [HGS, IMGA])
def test_metamodel_cost_is_sum_of_inner_costs(cls, zdt1):
    meter = BudgetMeter(10**6)
    factory, log, spies = spy_factory(zdt1, meter, base_params={"population_size": 10})
    params = {"population_sizes": (10, 6, 4), "metaepoch_len": 3} if cls is HGS else {"islands_no": 3}
    m = cls(zdt1, meter, 0, params, inner_factory=factory)
    total = 0
    for _ in range(3):
        seen = len(log)
        cost = m.step().step_cost
        assert cost == sum(c for _, name, c in log[seen:] if name == "step")
        total += cost
    assert total == meter.consumed


@pytest.mark.parametrize("cls", [HGS, IMGA])
def test_proxy_isolation(cls, zdt1):
    meter = BudgetMeter(10**6)
    factory, log, spies = spy_factory(zdt1, meter, base_params={"population_size": 10})
    params = {"population_sizes": (10, 8, 6)} if cls is HGS else {"islands_no": 3, "migration_interval": 2}
    m = cls(zdt1, meter, 0, params, inner_factory=factory)
    for _ in range(5):
        m.step()
    m.finalize()
    called = {name for _, name, _ in log}
    assert called <= SERVICES
    assert all(not s.violations for s in spies)
    if cls is HGS:
        assert "nominate_delegates" in called and not called & {"deport", "assimilate"}
    else:
        assert {"deport", "assimilate"} <= called and "nominate_delegates" not in called
