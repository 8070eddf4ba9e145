import numpy as np
import pytest

from hybridmoea.benchmarks import get_problem
from hybridmoea.core import BudgetMeter, ContractViolation, Individual, Problem, evaluate_all, objectives_of
from hybridmoea.drivers.nsga2 import NSGAII, survival_selection
from hybridmoea.drivers.omopso import OMOPSO, EpsilonArchive, epsilon_dominates
from hybridmoea.drivers.spea2 import SPEA2, environmental_selection, spea2_fitness

DRIVERS = [NSGAII, SPEA2, OMOPSO]


def counting(problem):
    calls = {"rows": 0}

    def f(X):
        calls["rows"] += X.shape[0]
        return problem.function(X)

    wrapped = Problem(problem.name, problem.dimension, problem.objective_count, problem.lower, problem.upper, f, problem.front)
    return wrapped, calls


def elite(driver):
    F = objectives_of(driver.population)
    return F


def test_nsga2_step_cost_is_population_size(zdt1):
    d = NSGAII(zdt1, BudgetMeter(10_000), 1, {"population_size": 40})
    costs = [d.step().step_cost for _ in range(4)]
    assert costs == [40, 40, 40, 40]
    assert len(d.population) == 40


@pytest.mark.parametrize("cls", DRIVERS)
def test_step_cost_matches_evaluator_calls(cls, zdt1):
    prob, calls = counting(zdt1)
    meter = BudgetMeter(10_000)
    d = cls(prob, meter, 3, {"population_size": 12})
    total = 0
    for _ in range(6):
        total += d.step().step_cost
        assert total == calls["rows"] == meter.consumed


@pytest.mark.parametrize("cls", DRIVERS)
def test_seeded_runs_are_identical(cls, zdt1):
    def run():
        d = cls(zdt1, BudgetMeter(10_000), 7, {"population_size": 10})
        return [objectives_of(d.step().population) for _ in range(5)]

    for a, b in zip(run(), run()):
        np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("cls", DRIVERS)
def test_offspring_in_bounds_fuzz(cls):
    prob = get_problem("ZDT4")
    d = cls(prob, BudgetMeter(10**9), 11, {"population_size": 6})
    steps = 10_000 if cls is not SPEA2 else 4_000
    for _ in range(steps):
        d.step()
        G = np.stack([i.genotype for i in d.population])
        assert np.all(prob.in_bounds(G))
    if cls is OMOPSO:
        assert np.all(prob.in_bounds(np.stack([i.genotype for i in d.swarm])))


@pytest.mark.parametrize("cls", DRIVERS)
def test_elite_extremes_never_worsen(cls, zdt1):
    d = cls(zdt1, BudgetMeter(10**9), 5, {"population_size": 20})
    d.step()
    best = elite(d).min(axis=0)
    for _ in range(40):
        d.step()
        now = elite(d).min(axis=0)
        assert np.all(now <= best)
        best = now


@pytest.mark.parametrize("cls", DRIVERS)
def test_finalize_contract(cls, zdt1):
    d = cls(zdt1, BudgetMeter(1000), 0, {"population_size": 8})
    with pytest.raises(ContractViolation):
        d.finalize()
    d.step()
    first = d.finalize()
    assert [id(i) for i in d.finalize()] == [id(i) for i in first]
    with pytest.raises(ContractViolation):
        d.step()


# -- NSGA-II ---------------------------------------------------------------


def crowded_sort_oracle(F):
    n = len(F)
    dom = lambda a, b: np.all(a <= b) and np.any(a < b)  # noqa: E731
    rank = np.full(n, -1)
    left, r = set(range(n)), 0
    while left:
        front = [i for i in left if not any(dom(F[j], F[i]) for j in left if j != i)]
        for i in front:
            rank[i] = r
        left -= set(front)
        r += 1
    crowd = np.zeros(n)
    for r in set(rank):
        idx = np.flatnonzero(rank == r)
        if len(idx) <= 2:
            crowd[idx] = np.inf
            continue
        for k in range(F.shape[1]):
            order = idx[np.argsort(F[idx, k], kind="mergesort")]
            span = F[order[-1], k] - F[order[0], k]
            crowd[order[0]] = crowd[order[-1]] = np.inf
            for a in range(1, len(order) - 1):
                if span > 0:
                    crowd[order[a]] += (F[order[a + 1], k] - F[order[a - 1], k]) / span
    return sorted(range(n), key=lambda i: (rank[i], -crowd[i], i))


def test_nominate_matches_crowded_sort_oracle(zdt1):
    d = NSGAII(zdt1, BudgetMeter(10_000), 2, {"population_size": 30})
    for _ in range(3):
        d.step()
    F = objectives_of(d.population)
    chosen = d.nominate_delegates(3)
    expected = [d.population[i] for i in crowded_sort_oracle(F)[:3]]
    assert [id(i) for i in chosen] == [id(i) for i in expected]


def test_nominate_unique_best_and_whole_population(zdt1):
    d = NSGAII(zdt1, BudgetMeter(10_000), 2, {"population_size": 10})
    d.step()
    pop = [Individual(np.zeros(30), np.array([0.0, 0.0]))] + [
        Individual(np.zeros(30), np.array([1.0 + i, 1.0 + i])) for i in range(5)
    ]
    d._set_population(pop)
    assert d.nominate_delegates(1)[0] is pop[0]
    assert d.nominate_delegates(10) == pop
    assert d.population == pop  # nomination never edits the population


def test_deport_partition_and_round_trip(zdt1):
    d = NSGAII(zdt1, BudgetMeter(10_000), 4, {"population_size": 10})
    d.step()
    before = list(d.population)
    ranking = [before[i] for i in d._ranking()]
    out = d.deport(2)
    assert len(d.population) == 8
    assert {id(i) for i in out} | {id(i) for i in d.population} == {id(i) for i in before}
    assert {id(i) for i in out} == {id(i) for i in ranking[:2]}
    d.assimilate(out)
    assert sorted(map(id, d.population)) == sorted(map(id, before))
    with pytest.raises(ContractViolation):
        d.deport(10)
    with pytest.raises(ContractViolation):
        d.deport(0)


def test_assimilate_empty_and_dimension_check(zdt1):
    d = NSGAII(zdt1, BudgetMeter(10_000), 4, {"population_size": 10})
    d.step()
    before = list(d.population)
    d.assimilate([])
    assert d.population == before
    with pytest.raises(ContractViolation):
        d.assimilate([Individual(np.zeros(3))])
    d.assimilate([Individual(np.full(30, 0.5)) for _ in range(3)])
    assert len(d.population) == 13


def test_dominating_immigrant_survives_next_step(zdt1):
    d = NSGAII(zdt1, BudgetMeter(10_000), 4, {"population_size": 10})
    d.step()
    best = Individual(np.zeros(30))  # (0, 1) sits on the true front
    d.assimilate([best])
    d.step()
    assert any(np.array_equal(i.genotype, best.genotype) for i in d.population)
    assert len(d.population) == 10


def test_weak_immigrants_also_survive_one_step(zdt1):
    d = NSGAII(zdt1, BudgetMeter(10_000), 4, {"population_size": 10})
    d.step()
    weak = [Individual(np.ones(30)) for _ in range(3)]
    d.assimilate(weak)
    d.step()
    kept = sum(any(i.genotype is w.genotype for i in d.population) for w in weak)
    assert kept == 3


def test_survival_rank0_elitism(rng):
    for _ in range(50):
        F = rng.integers(0, 5, size=(30, 2)).astype(float)
        keep = survival_selection(F, 15)
        from hybridmoea.kernels import nondominated_ranks

        ranks = nondominated_ranks(F)
        kept0 = set(np.flatnonzero(ranks == 0)) <= set(keep)
        if (ranks[keep] >= 1).any():
            assert kept0


def test_survival_keeps_front_boundaries():
    F = np.array([[0, 4], [1, 3], [1.1, 2.9], [1.2, 2.8], [4, 0], [5, 5]], dtype=float)
    keep = survival_selection(F, 3)
    assert 0 in keep and 4 in keep


# -- SPEA2 -----------------------------------------------------------------


def test_spea2_antichain_fills_archive():
    F = np.array([[i, 9 - i] for i in range(10)], dtype=float)
    np.testing.assert_array_equal(environmental_selection(F, 10, 3), np.arange(10))


def test_spea2_nondominated_raw_fitness_zero():
    from hybridmoea import kernels

    F = np.array([[0, 1], [1, 0], [2, 2], [3, 3]], dtype=float)
    raw, density = kernels.spea2_fitness(F, 1)
    np.testing.assert_array_equal(raw[:2], 0)
    assert raw[2] == 4 and raw[3] == 5  # dominator strengths 2+2, 2+2+1
    assert np.all(density < 1)
    assert np.all(spea2_fitness(F, 1)[:2] < 1)


def test_spea2_underfull_archive_takes_best_dominated():
    F = np.array([[0, 0], [1, 1], [2, 2], [3, 3]], dtype=float)
    np.testing.assert_array_equal(environmental_selection(F, 2, 1), [0, 1])


def test_spea2_archive_nondominated_and_capped(zdt1):
    d = SPEA2(zdt1, BudgetMeter(10**6), 8, {"population_size": 20, "archive_size": 10})
    for _ in range(30):
        d.step()
    assert len(d.population) <= 10
    from hybridmoea.kernels import nondominated_mask

    assert nondominated_mask(objectives_of(d.population)).all()


# -- OMOPSO ----------------------------------------------------------------


def test_epsilon_archive_rejects_covered_candidate():
    arch = EpsilonArchive(0.1)
    arch.add(Individual(np.zeros(1), np.array([0.9, 0.9])))
    assert not arch.add(Individual(np.zeros(1), np.array([0.95, 1.0])))
    assert epsilon_dominates([0.9, 0.9], [0.95, 1.0], 0.1)
    assert len(arch) == 1


def test_epsilon_archive_members_never_cover_each_other(rng):
    arch = EpsilonArchive(0.05)
    for p in rng.random((500, 2)):
        arch.add(Individual(np.zeros(1), p))
    M = objectives_of(arch.members)
    for i in range(len(M)):
        for j in range(len(M)):
            if i != j:
                assert not epsilon_dominates(M[i], M[j], 0.05)


def test_zero_epsilon_archive_is_plain_nondominated_archive(zdt1):
    from hybridmoea.kernels import nondominated_mask

    d = OMOPSO(zdt1, BudgetMeter(10**6), 9, {"population_size": 15, "epsilon": 0.0})
    seen = []
    for _ in range(10):
        d.step()
        seen.extend(d.swarm)
    F = objectives_of(seen)
    _, first = np.unique(F, axis=0, return_index=True)
    F = F[np.sort(first)]
    expected = F[nondominated_mask(F)]
    got = objectives_of(d.finalize())
    assert sorted(map(tuple, got)) == sorted(map(tuple, expected))


def test_omopso_proxy_shows_leaders(zdt1):
    from hybridmoea.kernels import nondominated_mask

    d = OMOPSO(zdt1, BudgetMeter(10**6), 10, {"population_size": 15})
    for _ in range(5):
        proxy = d.step()
    assert list(proxy.population) == d.population
    assert len(d.population) <= 15
    assert nondominated_mask(objectives_of(d.population)).all()


def test_meter_is_shared_and_billing_exact(zdt1):
    meter = BudgetMeter(10**6)
    d = NSGAII(zdt1, meter, 0, {"population_size": 10})
    pop = evaluate_all(zdt1, zdt1.random_individuals(3, np.random.default_rng(0)), meter)
    assert meter.consumed == 3
    d.step()
    assert meter.consumed == 13
    assert len(pop) == 3
