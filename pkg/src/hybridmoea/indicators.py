"""Quality indicators for front approximations.

All functions take ``(n, m)`` arrays (or anything ``np.asarray`` accepts) of
objective vectors under minimization. None of them filters dominated points;
:func:`hybridmoea.simulation.metrics.compute_metrics` does that before
scoring a result population.

Tokens used in metric files and on the command line are listed in
:data:`INDICATORS`.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from hybridmoea import kernels
from hybridmoea.core import DomainError

MAX_HV_OBJECTIVES = 4


def _points(X, name: str) -> np.ndarray:
    A = np.asarray(X, dtype=np.float64)
    if A.ndim == 1:
        A = A[None, :] if A.size else A.reshape(0, 0)
    if A.shape[0] == 0:
        raise DomainError(f"{name} must be nonempty")
    return A


def _pair(result, reference) -> tuple[np.ndarray, np.ndarray]:
    A = _points(result, "result")
    R = _points(reference, "reference")
    if A.shape[1] != R.shape[1]:
        raise DomainError(f"objective counts differ: {A.shape[1]} vs {R.shape[1]}")
    return A, R


def gd(result, reference, p: float = 2.0) -> float:
    """Generational distance: power mean (p=2) of result-to-reference distances."""
    A, R = _pair(result, reference)
    d = kernels.nearest_distances(A, R)
    return float(np.mean(d**p) ** (1.0 / p))


def igd(result, reference, p: float = 2.0) -> float:
    """Inverted generational distance, ``gd(reference, result)``."""
    A, R = _pair(result, reference)
    return gd(R, A, p)


def ahd(result, reference, p: float = 2.0) -> float:
    """Averaged Hausdorff distance, ``max(gd, igd)``."""
    return max(gd(result, reference, p), igd(result, reference, p))


def _hv_recursive(F: np.ndarray, ref: np.ndarray) -> float:
    m = F.shape[1]
    if F.shape[0] == 0:
        return 0.0
    if m == 1:
        return float(ref[0] - F[:, 0].min())
    if m == 2:
        return kernels.hv2d(F, ref)
    # sweep along the last objective; each slab is a (m-1)-dimensional problem
    order = np.argsort(F[:, -1], kind="stable")
    F = F[order]
    volume = 0.0
    for i in range(F.shape[0]):
        upper = F[i + 1, -1] if i + 1 < F.shape[0] else ref[-1]
        depth = upper - F[i, -1]
        if depth > 0.0:
            volume += depth * _hv_recursive(F[: i + 1, :-1], ref[:-1])
    return volume


def hypervolume(result, ref_point) -> float:
    """Exact dominated hypervolume by dimension-sweep recursion.

    Points that are not strictly better than ``ref_point`` in every objective
    contribute nothing. Supports up to four objectives.
    """
    ref = np.asarray(ref_point, dtype=np.float64).ravel()
    F = np.asarray(result, dtype=np.float64)
    if F.size == 0:
        return 0.0
    F = F.reshape(-1, F.shape[-1])
    if F.shape[1] != ref.size:
        raise DomainError(f"reference point has {ref.size} coordinates, points have {F.shape[1]}")
    if ref.size > MAX_HV_OBJECTIVES:
        raise DomainError(f"exact hypervolume supports at most {MAX_HV_OBJECTIVES} objectives, got {ref.size}")
    F = F[np.all(F < ref, axis=1)]
    if F.shape[0] == 0:
        return 0.0
    F = F[kernels.nondominated_mask(F)]
    return float(_hv_recursive(F, ref))


def spacing(result) -> float:
    """Schott's spacing over Manhattan nearest-neighbour distances."""
    F = _points(result, "result")
    if F.shape[0] < 2:
        raise DomainError("spacing needs at least two points")
    d = kernels.nearest_manhattan(F)
    return float(np.sqrt(((d - d.mean()) ** 2).sum() / (F.shape[0] - 1)))


def epsilon(result, reference) -> float:
    """Additive epsilon: smallest shift making ``result`` weakly cover ``reference``."""
    A, R = _pair(result, reference)
    gap = (A[None, :, :] - R[:, None, :]).max(axis=2)
    return float(gap.min(axis=1).max())


def extent(result) -> float:
    """Euclidean norm of the per-objective ranges (maximum spread)."""
    F = _points(result, "result")
    return float(np.linalg.norm(F.max(axis=0) - F.min(axis=0)))


def pdi(result, reference) -> float:
    """Fraction of result points not dominated by any reference point."""
    A, R = _pair(result, reference)
    both = np.concatenate([R, A])
    dom = kernels.dominance_matrix(both)[: R.shape[0], R.shape[0] :]
    return float(np.mean(~dom.any(axis=0)))


def default_reference_point(front) -> np.ndarray:
    """Hypervolume reference point derived from a reference front.

    Each coordinate is the front's maximum moved outward by 10% of its
    magnitude, or by 0.1 when the maximum is zero.
    """
    worst = np.asarray(front, dtype=np.float64).max(axis=0)
    return np.where(worst == 0.0, 0.1, worst + 0.1 * np.abs(worst))


@dataclass(frozen=True)
class Indicator:
    token: str
    function: Callable[..., float]
    needs_reference: bool
    needs_ref_point: bool = False
    min_points: int = 1


INDICATORS: dict[str, Indicator] = {
    ind.token: ind
    for ind in (
        Indicator("hv", hypervolume, False, needs_ref_point=True),
        Indicator("gd", gd, True),
        Indicator("igd", igd, True),
        Indicator("ahd", ahd, True),
        Indicator("epsilon", epsilon, True),
        Indicator("extent", extent, False),
        Indicator("spacing", spacing, False, min_points=2),
        Indicator("pdi", pdi, True),
    )
}


def parse_indicator_list(text: str | None) -> list[str]:
    """Comma-separated tokens, or every indicator when empty."""
    if not text:
        return list(INDICATORS)
    tokens = [t.strip().lower() for t in text.split(",") if t.strip()]
    unknown = [t for t in tokens if t not in INDICATORS]
    if unknown:
        raise ValueError(f"unknown indicator(s) {', '.join(unknown)}; known: {', '.join(INDICATORS)}")
    return tokens
