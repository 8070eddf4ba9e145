"""Benchmark problems and their reference Pareto fronts.

Problems: ZDT1, ZDT2, ZDT3, ZDT4, ZDT6 (Zitzler, Deb & Thiele 2000), UF1 from
the CEC 2009 suite, and Kursawe. New problems are added with
:func:`register_problem`.
"""

from __future__ import annotations

from collections.abc import Callable
from functools import lru_cache
from importlib import resources

import numpy as np

from hybridmoea.core import ConfigurationError, Problem

DEFAULT_FRONT_POINTS = 1000


def _g_sum(X: np.ndarray) -> np.ndarray:
    return 1.0 + 9.0 * X[:, 1:].sum(axis=1) / (X.shape[1] - 1)


def zdt1(X: np.ndarray) -> np.ndarray:
    f1 = X[:, 0]
    g = _g_sum(X)
    return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])


def zdt2(X: np.ndarray) -> np.ndarray:
    f1 = X[:, 0]
    g = _g_sum(X)
    return np.column_stack([f1, g * (1.0 - (f1 / g) ** 2)])


def zdt3(X: np.ndarray) -> np.ndarray:
    f1 = X[:, 0]
    g = _g_sum(X)
    h = 1.0 - np.sqrt(f1 / g) - (f1 / g) * np.sin(10.0 * np.pi * f1)
    return np.column_stack([f1, g * h])


def zdt4(X: np.ndarray) -> np.ndarray:
    f1 = X[:, 0]
    rest = X[:, 1:]
    g = 1.0 + 10.0 * rest.shape[1] + (rest**2 - 10.0 * np.cos(4.0 * np.pi * rest)).sum(axis=1)
    return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])


def zdt6(X: np.ndarray) -> np.ndarray:
    x1 = X[:, 0]
    f1 = 1.0 - np.exp(-4.0 * x1) * np.sin(6.0 * np.pi * x1) ** 6
    g = 1.0 + 9.0 * (X[:, 1:].sum(axis=1) / (X.shape[1] - 1)) ** 0.25
    return np.column_stack([f1, g * (1.0 - (f1 / g) ** 2)])


def uf1(X: np.ndarray) -> np.ndarray:
    n = X.shape[1]
    x1 = X[:, [0]]
    j = np.arange(2, n + 1)
    y = X[:, 1:] - np.sin(6.0 * np.pi * x1 + j * np.pi / n)
    odd, even = j % 2 == 1, j % 2 == 0
    f1 = X[:, 0] + 2.0 / odd.sum() * (y[:, odd] ** 2).sum(axis=1)
    f2 = 1.0 - np.sqrt(X[:, 0]) + 2.0 / even.sum() * (y[:, even] ** 2).sum(axis=1)
    return np.column_stack([f1, f2])


def kursawe(X: np.ndarray) -> np.ndarray:
    a, b = X[:, :-1], X[:, 1:]
    f1 = (-10.0 * np.exp(-0.2 * np.sqrt(a**2 + b**2))).sum(axis=1)
    f2 = (np.abs(X) ** 0.8 + 5.0 * np.sin(X**3)).sum(axis=1)
    return np.column_stack([f1, f2])


# ---------------------------------------------------------------------------
# reference fronts
# ---------------------------------------------------------------------------


def front_mask_2d(F: np.ndarray) -> np.ndarray:
    """Nondominated mask for bi-objective points by an O(n log n) sweep.

    Of several identical points only the first is kept.
    """
    order = np.lexsort((F[:, 1], F[:, 0]))
    f2 = F[order, 1]
    best_before = np.concatenate(([np.inf], np.minimum.accumulate(f2)[:-1]))
    keep = np.zeros(F.shape[0], dtype=bool)
    keep[order[f2 < best_before]] = True
    return keep


def _convex_front(point_count: int) -> np.ndarray:
    f1 = np.linspace(0.0, 1.0, point_count)
    return np.column_stack([f1, 1.0 - np.sqrt(f1)])


def _concave_front(f1_min: float) -> Callable[[int], np.ndarray]:
    def front(point_count: int) -> np.ndarray:
        f1 = np.linspace(f1_min, 1.0, point_count)
        return np.column_stack([f1, 1.0 - f1**2])

    return front


@lru_cache(maxsize=1)
def zdt6_min_f1() -> float:
    """Smallest attainable ZDT6 first objective (about 0.2807753)."""
    from scipy.optimize import minimize_scalar

    x = np.linspace(0.0, 1.0, 100_001)
    f = 1.0 - np.exp(-4.0 * x) * np.sin(6.0 * np.pi * x) ** 6
    i = int(np.argmin(f))
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, x.size - 1)]
    res = minimize_scalar(
        lambda t: 1.0 - np.exp(-4.0 * t) * np.sin(6.0 * np.pi * t) ** 6,
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(min(res.fun, f[i]))


@lru_cache(maxsize=1)
def zdt3_segments(resolution: int = 200_001) -> tuple[tuple[float, float], ...]:
    """Disconnected pieces of the ZDT3 front as ``(f1_start, f1_end)`` pairs."""
    f1 = np.linspace(0.0, 1.0, resolution)
    f2 = 1.0 - np.sqrt(f1) - f1 * np.sin(10.0 * np.pi * f1)
    idx = np.flatnonzero(front_mask_2d(np.column_stack([f1, f2])))
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([idx[0]], idx[breaks + 1]))
    ends = np.concatenate((idx[breaks], [idx[-1]]))
    return tuple((float(f1[s]), float(f1[e])) for s, e in zip(starts, ends))


def _zdt3_front(point_count: int) -> np.ndarray:
    segs = np.array(zdt3_segments())
    lengths = segs[:, 1] - segs[:, 0]
    cum = np.concatenate(([0.0], np.cumsum(lengths)))
    t = np.linspace(0.0, cum[-1], point_count)
    which = np.clip(np.searchsorted(cum, t, side="right") - 1, 0, len(segs) - 1)
    f1 = segs[which, 0] + (t - cum[which])
    f1 = np.minimum(f1, segs[which, 1])
    f2 = 1.0 - np.sqrt(f1) - f1 * np.sin(10.0 * np.pi * f1)
    F = np.column_stack([f1, f2])
    return F[front_mask_2d(F)]


@lru_cache(maxsize=1)
def kursawe_front_data() -> np.ndarray:
    """Packaged Kursawe front (see ``scripts/make_kursawe_front.py``)."""
    text = resources.files("hybridmoea.data").joinpath("kursawe_front.txt").read_text(encoding="utf-8")
    return np.loadtxt(text.splitlines(), ndmin=2)


def _kursawe_front(point_count: int) -> np.ndarray:
    F = kursawe_front_data()
    if point_count >= F.shape[0]:
        return F.copy()
    idx = np.unique(np.round(np.linspace(0, F.shape[0] - 1, point_count)).astype(int))
    return F[idx]


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

PROBLEMS: dict[str, Problem] = {}


def register_problem(problem: Problem) -> Problem:
    PROBLEMS[problem.name.upper()] = problem
    return problem


def get_problem(token: str) -> Problem:
    try:
        return PROBLEMS[token.strip().upper()]
    except KeyError:
        raise ConfigurationError(f"unknown problem {token!r} (known: {', '.join(sorted(PROBLEMS))})") from None


def reference_front(problem: Problem | str, point_count: int = DEFAULT_FRONT_POINTS) -> np.ndarray:
    if point_count < 2:
        raise ValueError("point_count must be at least 2")
    if isinstance(problem, str):
        problem = get_problem(problem)
    front = problem.reference_front(point_count)
    if front is None:
        raise ConfigurationError(f"problem {problem.name} has no reference front")
    return front


def _zdt4_bounds() -> tuple[np.ndarray, np.ndarray]:
    lower = np.full(10, -5.0)
    upper = np.full(10, 5.0)
    lower[0], upper[0] = 0.0, 1.0
    return lower, upper


def _uf1_bounds() -> tuple[np.ndarray, np.ndarray]:
    lower = np.full(30, -1.0)
    lower[0] = 0.0
    return lower, np.ones(30)


register_problem(Problem("ZDT1", 30, 2, 0.0, 1.0, zdt1, _convex_front))
register_problem(Problem("ZDT2", 30, 2, 0.0, 1.0, zdt2, _concave_front(0.0)))
register_problem(Problem("ZDT3", 30, 2, 0.0, 1.0, zdt3, _zdt3_front))
register_problem(Problem("ZDT4", 10, 2, *_zdt4_bounds(), zdt4, _convex_front))
register_problem(Problem("ZDT6", 10, 2, 0.0, 1.0, zdt6, lambda n: _concave_front(zdt6_min_f1())(n)))
register_problem(Problem("UF1", 30, 2, *_uf1_bounds(), uf1, _convex_front))
register_problem(Problem("kursawe", 3, 2, -5.0, 5.0, kursawe, _kursawe_front))


def zdt_evaluate(variant: int, genotype) -> np.ndarray:
    if variant not in (1, 2, 3, 4, 6):
        raise ConfigurationError(f"ZDT{variant} is not a ZDT variant")
    return PROBLEMS[f"ZDT{variant}"](genotype)[0]


def uf1_evaluate(genotype) -> np.ndarray:
    return PROBLEMS["UF1"](genotype)[0]


def kursawe_evaluate(genotype) -> np.ndarray:
    return PROBLEMS["KURSAWE"](genotype)[0]
