import math

import numpy as np
import pytest

from hybridmoea.benchmarks import (
    PROBLEMS,
    get_problem,
    kursawe_evaluate,
    reference_front,
    uf1_evaluate,
    zdt3_segments,
    zdt6_min_f1,
    zdt_evaluate,
)
from hybridmoea.core import ConfigurationError, DomainError
from hybridmoea.kernels import nondominated_mask

ALL = ["ZDT1", "ZDT2", "ZDT3", "ZDT4", "ZDT6", "UF1", "kursawe"]


def test_zdt_examples():
    np.testing.assert_allclose(zdt_evaluate(1, np.zeros(30)), [0, 1])
    x = np.zeros(30)
    x[0] = 0.5
    np.testing.assert_allclose(zdt_evaluate(2, x), [0.5, 0.75])
    x = np.zeros(10)
    x[0] = 0.25
    np.testing.assert_allclose(zdt_evaluate(4, x), [0.25, 0.5])
    with pytest.raises(ConfigurationError):
        zdt_evaluate(5, x)


def test_zdt_bounds():
    assert get_problem("ZDT4").lower[0] == 0 and get_problem("ZDT4").upper[0] == 1
    np.testing.assert_array_equal(get_problem("ZDT4").lower[1:], -5)
    assert get_problem("ZDT6").dimension == 10 and get_problem("ZDT3").dimension == 30
    with pytest.raises(DomainError):
        zdt_evaluate(1, np.full(30, -0.1))


def uf1_on_front(x1):
    n = 30
    j = np.arange(2, n + 1)
    return np.concatenate([[x1], np.sin(6 * np.pi * x1 + j * np.pi / n)])


@pytest.mark.parametrize("x1, expected", [(0.25, (0.25, 0.5)), (1.0, (1.0, 0.0)), (0.0, (0.0, 1.0))])
def test_uf1_examples(x1, expected):
    np.testing.assert_allclose(uf1_evaluate(uf1_on_front(x1)), expected, atol=1e-12)


def kursawe_by_hand(x):
    f1 = sum(-10 * math.exp(-0.2 * math.sqrt(x[i] ** 2 + x[i + 1] ** 2)) for i in range(2))
    f2 = sum(abs(v) ** 0.8 + 5 * math.sin(v**3) for v in x)
    return f1, f2


def test_kursawe_examples(rng):
    np.testing.assert_allclose(kursawe_evaluate([0, 0, 0]), [-20, 0])
    for _ in range(20):
        x = rng.uniform(-5, 5, 3)
        np.testing.assert_allclose(kursawe_evaluate(x), kursawe_by_hand(x), rtol=1e-12)
        assert kursawe_evaluate(x)[0] == pytest.approx(kursawe_evaluate(-x)[0], rel=1e-15)
    with pytest.raises(DomainError):
        kursawe_evaluate([6, 0, 0])


def test_zdt1_front_three_points():
    np.testing.assert_allclose(reference_front("ZDT1", 3), [[0, 1], [0.5, 1 - math.sqrt(0.5)], [1, 0]])


@pytest.mark.parametrize("name", ALL)
def test_fronts_are_nondominated(name):
    F = reference_front(name)
    assert nondominated_mask(F).all()
    assert 2 <= F.shape[0] <= 1000


def test_front_shapes():
    F = reference_front("ZDT2", 11)
    np.testing.assert_allclose(F[:, 1], 1 - F[:, 0] ** 2)
    F = reference_front("ZDT6", 5)
    assert F[0, 0] == pytest.approx(0.2807753, abs=1e-6)
    assert zdt6_min_f1() == pytest.approx(0.28077531, abs=1e-7)
    F = reference_front("UF1", 5)
    np.testing.assert_allclose(F[:, 1], 1 - np.sqrt(F[:, 0]))


def test_zdt3_excludes_dominated_curve():
    segs = zdt3_segments()
    assert len(segs) == 5
    f1 = np.linspace(0, 1, 200_001)
    curve = np.column_stack([f1, 1 - np.sqrt(f1) - f1 * np.sin(10 * np.pi * f1)])
    F = reference_front("ZDT3")
    # every front point is undominated by the dense curve
    for p in F[::50]:
        assert not np.any(np.all(curve <= p, axis=1) & np.any(curve < p, axis=1))
    # and a dominated portion of the curve is absent
    assert not np.any((F[:, 0] > 0.1) & (F[:, 0] < 0.18))


@pytest.mark.parametrize("name", ALL)
def test_front_optimality_fuzz(name):
    prob = get_problem(name)
    rng = np.random.default_rng(99)
    X = rng.uniform(prob.lower, prob.upper, size=(100_000, prob.dimension))
    P = prob(X)
    F = reference_front(prob)
    for chunk in np.array_split(P, 20):
        le = np.all(chunk[:, None, :] <= F[None, :, :], axis=2)
        lt = np.any(chunk[:, None, :] < F[None, :, :], axis=2)
        assert not np.any(le & lt)


@pytest.mark.parametrize("name", ALL)
def test_evaluators_pure(name, rng):
    prob = get_problem(name)
    X = rng.uniform(prob.lower, prob.upper, size=(50, prob.dimension))
    np.testing.assert_array_equal(prob(X), prob(X))


def test_registry_case_insensitive_and_errors():
    assert get_problem("zdt1") is get_problem(" ZDT1 ")
    assert get_problem("KURSAWE").name == "kursawe"
    with pytest.raises(ConfigurationError, match="ackley"):
        get_problem("ackley")
    with pytest.raises(ValueError):
        reference_front("ZDT1", 1)
    assert set(PROBLEMS) >= {"ZDT1", "ZDT2", "ZDT3", "ZDT4", "ZDT6", "UF1", "KURSAWE"}


def test_kursawe_data_file_format():
    from importlib import resources

    lines = resources.files("hybridmoea.data").joinpath("kursawe_front.txt").read_text().splitlines()
    assert len(lines) >= 500
    for line in lines[:20]:
        a, b = line.split(" ")
        float(a), float(b)
