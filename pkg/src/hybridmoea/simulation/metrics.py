"""Indicator values cached inside chunk files."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence

import numpy as np

from hybridmoea import kernels
from hybridmoea.benchmarks import DEFAULT_FRONT_POINTS, get_problem, reference_front
from hybridmoea.core import ConfigurationError
from hybridmoea.indicators import INDICATORS, default_reference_point
from hybridmoea.simulation.persistence import ResultChunk, persist_chunk

log = logging.getLogger(__name__)


def score(objectives: np.ndarray, token: str, front: np.ndarray | None) -> float | None:
    """Indicator ``token`` for a result population; None if undefined.

    Dominated members are dropped first; duplicates are kept.
    """
    ind = INDICATORS[token]
    F = np.asarray(objectives, dtype=np.float64)
    if F.shape[0]:
        F = F[kernels.nondominated_mask(F)]
    if F.shape[0] < ind.min_points:
        return None
    if ind.needs_ref_point:
        if front is None:
            return None
        return float(ind.function(F, default_reference_point(front)))
    if ind.needs_reference:
        if front is None:
            return None
        return float(ind.function(F, front))
    return float(ind.function(F))


def compute_metrics(
    chunks: Iterable[ResultChunk],
    indicators: Sequence[str],
    front_points: int = DEFAULT_FRONT_POINTS,
    write_back: bool = True,
) -> int:
    """Fill missing indicator values and write changed chunks back in place.

    Values already cached in a chunk are never recomputed. Returns the number
    of indicator evaluations performed.
    """
    fronts: dict[str, np.ndarray | None] = {}
    computed = 0
    for chunk in chunks:
        todo = [t for t in indicators if t not in chunk.metrics]
        if not todo:
            continue
        if chunk.problem not in fronts:
            try:
                fronts[chunk.problem] = reference_front(get_problem(chunk.problem), front_points)
            except ConfigurationError as exc:
                log.warning("%s", exc)
                fronts[chunk.problem] = None
        front = fronts[chunk.problem]
        changed = False
        for token in todo:
            value = score(chunk.objectives, token, front)
            computed += 1
            if value is None:
                log.warning("%s/%s run %d @%d: %s undefined, skipped", chunk.problem, chunk.chain, chunk.run, chunk.checkpoint, token)
                continue
            chunk.metrics[token] = value
            changed = True
        if changed and write_back and chunk.path is not None:
            persist_chunk(chunk)
    return computed
