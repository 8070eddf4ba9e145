"""Real-coded variation operators shared by the drivers.

All operators work on a single genotype (1-D) or on a batch (2-D, one genotype
per row) and return clipped arrays; they never modify their inputs.
"""

from __future__ import annotations

import numpy as np


def sbx_crossover(
    parent_a: np.ndarray,
    parent_b: np.ndarray,
    eta_c: float,
    rate: float,
    rng: np.random.Generator,
    lower: np.ndarray | float = -np.inf,
    upper: np.ndarray | float = np.inf,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover.

    Each variable is recombined with probability ``rate``; otherwise both
    children copy their parents' values. Recombined pairs are swapped with
    probability 1/2 so that neither child is biased towards one parent.

    Args:
        parent_a, parent_b: Parents of equal shape.
        eta_c: Distribution index. Larger values keep children nearer to the
            parents.
        rate: Per-variable recombination probability.
        rng: Random generator.
        lower, upper: Box bounds; children are clipped into them.

    Returns:
        The two children, same shape as the parents.
    """
    a = np.asarray(parent_a, dtype=np.float64)
    b = np.asarray(parent_b, dtype=np.float64)
    u = rng.random(a.shape)
    beta = np.where(
        u <= 0.5,
        (2.0 * u) ** (1.0 / (eta_c + 1.0)),
        (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta_c + 1.0)),
    )
    c1 = 0.5 * ((1.0 + beta) * a + (1.0 - beta) * b)
    c2 = 0.5 * ((1.0 - beta) * a + (1.0 + beta) * b)
    swap = rng.random(a.shape) < 0.5
    c1, c2 = np.where(swap, c2, c1), np.where(swap, c1, c2)
    cross = rng.random(a.shape) < rate
    c1 = np.where(cross, c1, a)
    c2 = np.where(cross, c2, b)
    return np.clip(c1, lower, upper), np.clip(c2, lower, upper)


def polynomial_mutation(
    genotype: np.ndarray,
    eta_m: float,
    rate: float,
    rng: np.random.Generator,
    lower: np.ndarray,
    upper: np.ndarray,
    scale: float = 1.0,
) -> np.ndarray:
    """Bounded polynomial mutation.

    ``scale`` shrinks the perturbation range to ``scale * (upper - lower)``;
    HGS uses it to tighten search on deeper tree levels. A variable sitting
    on a bound can only move inward.
    """
    x = np.asarray(genotype, dtype=np.float64)
    lower = np.broadcast_to(lower, x.shape[-1:])
    upper = np.broadcast_to(upper, x.shape[-1:])
    span = (upper - lower) * scale
    mutate = rng.random(x.shape) < rate
    u = rng.random(x.shape)
    delta_l = np.clip((x - lower) / span, 0.0, 1.0)
    delta_r = np.clip((upper - x) / span, 0.0, 1.0)
    power = 1.0 / (eta_m + 1.0)
    with np.errstate(invalid="ignore"):
        down = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - delta_l) ** (eta_m + 1.0)
        up = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - delta_r) ** (eta_m + 1.0)
        delta_q = np.where(u < 0.5, down**power - 1.0, 1.0 - up**power)
    out = np.where(mutate, x + delta_q * span, x)
    return np.clip(out, lower, upper)


def uniform_mutation(
    genotype: np.ndarray,
    rate: float,
    perturbation: float,
    rng: np.random.Generator,
    lower: np.ndarray,
    upper: np.ndarray,
    scale: float = 1.0,
) -> np.ndarray:
    """Add ``(u - 1/2) * perturbation * width`` to each selected variable."""
    x = np.asarray(genotype, dtype=np.float64)
    width = (np.broadcast_to(upper, x.shape[-1:]) - np.broadcast_to(lower, x.shape[-1:])) * scale
    mutate = rng.random(x.shape) < rate
    step = (rng.random(x.shape) - 0.5) * perturbation * width
    return np.clip(np.where(mutate, x + step, x), lower, upper)


def nonuniform_mutation(
    genotype: np.ndarray,
    rate: float,
    perturbation: float,
    progress: float,
    rng: np.random.Generator,
    lower: np.ndarray,
    upper: np.ndarray,
    scale: float = 1.0,
) -> np.ndarray:
    """Michalewicz non-uniform mutation.

    ``progress`` in [0, 1] is the fraction of the run elapsed; perturbations
    shrink towards zero as it approaches 1.
    """
    x = np.asarray(genotype, dtype=np.float64)
    lower = np.broadcast_to(lower, x.shape[-1:])
    upper = np.broadcast_to(upper, x.shape[-1:])
    progress = min(max(progress, 0.0), 1.0)
    mutate = rng.random(x.shape) < rate
    r = rng.random(x.shape)
    shrink = 1.0 - r ** ((1.0 - progress) ** perturbation)
    toward_upper = rng.random(x.shape) <= 0.5
    step = np.where(toward_upper, (upper - x) * shrink, -(x - lower) * shrink) * scale
    return np.clip(np.where(mutate, x + step, x), lower, upper)


def binary_tournament(keys: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Pick ``count`` winners by binary tournament.

    ``keys`` has one row per candidate; rows are compared lexicographically and
    the smaller one wins. Exact ties are decided uniformly at random.
    """
    keys = np.asarray(keys, dtype=np.float64)
    if keys.ndim == 1:
        keys = keys[:, None]
    n = keys.shape[0]
    a = rng.integers(0, n, size=count)
    b = rng.integers(0, n, size=count)
    coin = rng.random(count) < 0.5
    winners = np.empty(count, dtype=np.int64)
    for t in range(count):
        ka, kb = keys[a[t]], keys[b[t]]
        diff = np.flatnonzero(ka != kb)
        if diff.size == 0:
            winners[t] = a[t] if coin[t] else b[t]
        else:
            winners[t] = a[t] if ka[diff[0]] < kb[diff[0]] else b[t]
    return winners
