"""Compiled loop kernels and numpy kernels must agree."""

import numpy as np
import pytest

from hybridmoea import kernels
from hybridmoea.kernels import LOOP, NUMPY


def random_sets(seed, count=25, max_n=40):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, max_n))
        m = int(rng.integers(2, 5))
        # coarse grid so ties and duplicates occur
        yield np.ascontiguousarray(rng.integers(0, 6, size=(n, m)).astype(float))


@pytest.mark.parametrize("name", ["dominance_matrix", "nondominated_mask", "nondominated_ranks", "pairwise_distances"])
def test_exact_agreement(name):
    for F in random_sets(1):
        np.testing.assert_array_equal(getattr(LOOP, name)(F), getattr(NUMPY, name)(F))


def test_crowding_agreement():
    rng = np.random.default_rng(2)
    for n in (1, 2, 3, 10, 40):
        F = rng.random((n, 3))
        np.testing.assert_allclose(LOOP.crowding_distance(F), NUMPY.crowding_distance(F))


def test_distance_kernels_agree():
    rng = np.random.default_rng(3)
    A, B = rng.random((30, 2)), rng.random((17, 2))
    np.testing.assert_allclose(LOOP.nearest_distances(A, B), NUMPY.nearest_distances(A, B))
    np.testing.assert_allclose(LOOP.nearest_manhattan(A), NUMPY.nearest_manhattan(A))


def test_spea2_kernels_agree():
    for F in random_sets(4, max_n=25):
        if F.shape[0] < 2:
            continue
        raw_l, den_l = LOOP.spea2_fitness(F, 3)
        raw_n, den_n = NUMPY.spea2_fitness(F, 3)
        np.testing.assert_array_equal(raw_l, raw_n)
        np.testing.assert_allclose(den_l, den_n)
        cap = max(1, F.shape[0] // 2)
        np.testing.assert_array_equal(np.sort(LOOP.spea2_truncate(F, cap)), NUMPY.spea2_truncate(F, cap))


def test_hv2d_agree():
    rng = np.random.default_rng(5)
    for _ in range(20):
        F = rng.random((int(rng.integers(1, 30)), 2))
        assert LOOP.hv2d(F, np.array([1.1, 1.1])) == pytest.approx(NUMPY.hv2d(F, np.array([1.1, 1.1])), rel=1e-12)


def test_ranks_definition():
    F = np.array([[0, 0], [1, 1], [2, 2], [0, 3], [3, 0]], dtype=float)
    np.testing.assert_array_equal(kernels.nondominated_ranks(F), [0, 1, 2, 1, 1])


def test_crowding_extremes_infinite():
    F = np.array([[0, 4], [1, 2], [2, 1], [4, 0]], dtype=float)
    cd = kernels.crowding_distance(F)
    assert np.isinf(cd[0]) and np.isinf(cd[3])
    np.testing.assert_allclose(cd[1:3], [(2 / 4 + 3 / 4), (3 / 4 + 2 / 4)])


def test_spea2_truncate_oracle():
    """Remove the point closest to its neighbours, comparing sorted distance lists."""
    rng = np.random.default_rng(6)
    for _ in range(30):
        n = int(rng.integers(3, 20))
        F = rng.random((n, 2))
        cap = int(rng.integers(1, n))
        alive = list(range(n))
        while len(alive) > cap:
            rows = {
                i: sorted(float(np.linalg.norm(F[i] - F[j])) for j in alive if j != i)
                for i in alive
            }
            alive.remove(min(alive, key=lambda i: (rows[i], i)))
        np.testing.assert_array_equal(kernels.spea2_truncate(F, cap), alive)


def test_empty_inputs():
    assert kernels.nondominated_mask(np.empty((0, 2))).shape == (0,)
    assert kernels.hv2d(np.empty((0, 2)), [1, 1]) == 0.0
