"""Hot numeric kernels.

Every kernel exists twice: an explicit-loop version compiled with numba, and a
vectorized numpy version. The module-level names dispatch to one of them based
on :data:`hybridmoea._accel.USE_NUMBA`. Both are exported through
:data:`LOOP` and :data:`NUMPY` so tests and the benchmark script can compare
them directly.

All kernels take ``float64`` C-contiguous 2-D arrays with one point per row and
assume minimization.
"""

from __future__ import annotations

from types import SimpleNamespace

import numpy as np

from hybridmoea._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# loop kernels (numba)
# ---------------------------------------------------------------------------


@njit
def _dominates_row(F, i, j):
    better = False
    for k in range(F.shape[1]):
        if F[i, k] > F[j, k]:
            return False
        if F[i, k] < F[j, k]:
            better = True
    return better


@njit
def _dominance_matrix_loop(F):
    n = F.shape[0]
    dom = np.zeros((n, n), dtype=np.bool_)
    for i in range(n):
        for j in range(i + 1, n):
            if _dominates_row(F, i, j):
                dom[i, j] = True
            elif _dominates_row(F, j, i):
                dom[j, i] = True
    return dom


@njit
def _nondominated_mask_loop(F):
    n = F.shape[0]
    mask = np.ones(n, dtype=np.bool_)
    for i in range(n):
        for j in range(n):
            if i != j and _dominates_row(F, j, i):
                mask[i] = False
                break
    return mask


@njit
def _nondominated_ranks_loop(F):
    n = F.shape[0]
    dom = _dominance_matrix_loop(F)
    count = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if dom[j, i]:
                count[i] += 1
    ranks = np.full(n, -1, dtype=np.int64)
    current = np.empty(n, dtype=np.int64)
    size = 0
    for i in range(n):
        if count[i] == 0:
            ranks[i] = 0
            current[size] = i
            size += 1
    level = 0
    nxt = np.empty(n, dtype=np.int64)
    while size > 0:
        nsize = 0
        for a in range(size):
            i = current[a]
            for j in range(n):
                if dom[i, j]:
                    count[j] -= 1
                    if count[j] == 0:
                        ranks[j] = level + 1
                        nxt[nsize] = j
                        nsize += 1
        level += 1
        current, nxt = nxt, current
        size = nsize
    return ranks


@njit
def _crowding_distance_loop(F):
    n, m = F.shape
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for k in range(m):
        order = np.argsort(F[:, k], kind="mergesort")
        lo = F[order[0], k]
        hi = F[order[n - 1], k]
        dist[order[0]] = np.inf
        dist[order[n - 1]] = np.inf
        span = hi - lo
        if span <= 0.0:
            continue
        for a in range(1, n - 1):
            dist[order[a]] += (F[order[a + 1], k] - F[order[a - 1], k]) / span
    return dist


@njit
def _nearest_distances_loop(A, B):
    out = np.empty(A.shape[0])
    for i in range(A.shape[0]):
        best = np.inf
        for j in range(B.shape[0]):
            s = 0.0
            for k in range(A.shape[1]):
                d = A[i, k] - B[j, k]
                s += d * d
            if s < best:
                best = s
        out[i] = np.sqrt(best)
    return out


@njit
def _nearest_manhattan_loop(F):
    n = F.shape[0]
    out = np.empty(n)
    for i in range(n):
        best = np.inf
        for j in range(n):
            if i == j:
                continue
            s = 0.0
            for k in range(F.shape[1]):
                s += abs(F[i, k] - F[j, k])
            if s < best:
                best = s
        out[i] = best
    return out


@njit
def _pairwise_distances_loop(F):
    n = F.shape[0]
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for k in range(F.shape[1]):
                d = F[i, k] - F[j, k]
                s += d * d
            D[i, j] = np.sqrt(s)
            D[j, i] = D[i, j]
    return D


@njit
def _spea2_fitness_loop(F, k):
    n = F.shape[0]
    dom = _dominance_matrix_loop(F)
    strength = np.zeros(n)
    for i in range(n):
        for j in range(n):
            if dom[i, j]:
                strength[i] += 1.0
    raw = np.zeros(n)
    for i in range(n):
        for j in range(n):
            if dom[j, i]:
                raw[i] += strength[j]
    D = _pairwise_distances_loop(F)
    kk = min(k, n - 1)
    density = np.empty(n)
    for i in range(n):
        row = np.sort(D[i])
        density[i] = 1.0 / (row[kk] + 2.0)
    return raw, density


@njit
def _lex_less(a, b):
    for t in range(a.shape[0]):
        if a[t] < b[t]:
            return True
        if a[t] > b[t]:
            return False
    return False


@njit
def _spea2_truncate_loop(F, capacity):
    # each row holds the sorted distances to the other live points; removing a
    # point deletes one entry per row instead of re-sorting
    n = F.shape[0]
    D = _pairwise_distances_loop(F)
    rows = np.empty((n, max(n - 1, 0)))
    for i in range(n):
        c = 0
        for j in range(n):
            if j != i:
                rows[i, c] = D[i, j]
                c += 1
        rows[i] = np.sort(rows[i])
    alive = np.ones(n, dtype=np.bool_)
    length = n - 1
    while length + 1 > capacity:
        worst = -1
        for i in range(n):
            if not alive[i]:
                continue
            if worst < 0 or _lex_less(rows[i, :length], rows[worst, :length]):
                worst = i
        alive[worst] = False
        for i in range(n):
            if alive[i]:
                pos = np.searchsorted(rows[i, :length], D[i, worst])
                rows[i, pos : length - 1] = rows[i, pos + 1 : length]
        length -= 1
    return np.nonzero(alive)[0]


@njit
def _hv2d_loop(F, ref):
    order = np.argsort(F[:, 0], kind="mergesort")
    area = 0.0
    cur = ref[1]
    for a in range(order.shape[0]):
        i = order[a]
        if F[i, 0] >= ref[0] or F[i, 1] >= ref[1]:
            continue
        if F[i, 1] < cur:
            area += (ref[0] - F[i, 0]) * (cur - F[i, 1])
            cur = F[i, 1]
    return area


# ---------------------------------------------------------------------------
# numpy kernels
# ---------------------------------------------------------------------------


def _dominance_matrix_np(F: np.ndarray) -> np.ndarray:
    a = F[:, None, :]
    b = F[None, :, :]
    return (a <= b).all(axis=2) & (a < b).any(axis=2)


def _nondominated_mask_np(F: np.ndarray) -> np.ndarray:
    if F.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return ~_dominance_matrix_np(F).any(axis=0)


def _nondominated_ranks_np(F: np.ndarray) -> np.ndarray:
    n = F.shape[0]
    dom = _dominance_matrix_np(F)
    ranks = np.full(n, -1, dtype=np.int64)
    remaining = np.ones(n, dtype=bool)
    level = 0
    while remaining.any():
        dominated = dom[remaining][:, remaining].any(axis=0)
        idx = np.flatnonzero(remaining)[~dominated]
        ranks[idx] = level
        remaining[idx] = False
        level += 1
    return ranks


def _crowding_distance_np(F: np.ndarray) -> np.ndarray:
    n, m = F.shape
    if n <= 2:
        return np.full(n, np.inf)
    dist = np.zeros(n)
    for k in range(m):
        order = np.argsort(F[:, k], kind="stable")
        col = F[order, k]
        span = col[-1] - col[0]
        if span > 0.0:
            dist[order[1:-1]] += (col[2:] - col[:-2]) / span
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
    return dist


def _nearest_distances_np(A: np.ndarray, B: np.ndarray, chunk: int = 2048) -> np.ndarray:
    out = np.empty(A.shape[0])
    for s in range(0, A.shape[0], chunk):
        diff = A[s : s + chunk, None, :] - B[None, :, :]
        out[s : s + chunk] = np.sqrt((diff * diff).sum(axis=2).min(axis=1))
    return out


def _nearest_manhattan_np(F: np.ndarray) -> np.ndarray:
    D = np.abs(F[:, None, :] - F[None, :, :]).sum(axis=2)
    np.fill_diagonal(D, np.inf)
    return D.min(axis=1)


def _pairwise_distances_np(F: np.ndarray) -> np.ndarray:
    diff = F[:, None, :] - F[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def _spea2_fitness_np(F: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    n = F.shape[0]
    dom = _dominance_matrix_np(F)
    strength = dom.sum(axis=1).astype(float)
    raw = (dom * strength[:, None]).sum(axis=0)
    D = np.sort(_pairwise_distances_np(F), axis=1)
    density = 1.0 / (D[:, min(k, n - 1)] + 2.0)
    return raw, density


def _spea2_truncate_np(F: np.ndarray, capacity: int) -> np.ndarray:
    D = _pairwise_distances_np(F)
    alive = np.arange(F.shape[0])
    while alive.size > capacity:
        sub = D[np.ix_(alive, alive)]
        np.fill_diagonal(sub, np.inf)
        rows = np.sort(sub, axis=1)[:, :-1]
        # lexsort uses the last key as primary; ties resolve to the lowest index
        order = np.lexsort(rows.T[::-1]) if rows.shape[1] else np.arange(alive.size)
        alive = np.delete(alive, order[0])
    return alive


def _hv2d_np(F: np.ndarray, ref: np.ndarray) -> float:
    F = F[(F[:, 0] < ref[0]) & (F[:, 1] < ref[1])]
    if F.shape[0] == 0:
        return 0.0
    F = F[np.argsort(F[:, 0], kind="stable")]
    best = np.minimum.accumulate(F[:, 1])
    prev = np.concatenate(([ref[1]], best[:-1]))
    return float(((ref[0] - F[:, 0]) * np.maximum(prev - F[:, 1], 0.0)).sum())


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

LOOP = SimpleNamespace(
    dominance_matrix=_dominance_matrix_loop,
    nondominated_mask=_nondominated_mask_loop,
    nondominated_ranks=_nondominated_ranks_loop,
    crowding_distance=_crowding_distance_loop,
    nearest_distances=_nearest_distances_loop,
    nearest_manhattan=_nearest_manhattan_loop,
    pairwise_distances=_pairwise_distances_loop,
    spea2_fitness=_spea2_fitness_loop,
    spea2_truncate=_spea2_truncate_loop,
    hv2d=_hv2d_loop,
)

NUMPY = SimpleNamespace(
    dominance_matrix=_dominance_matrix_np,
    nondominated_mask=_nondominated_mask_np,
    nondominated_ranks=_nondominated_ranks_np,
    crowding_distance=_crowding_distance_np,
    nearest_distances=_nearest_distances_np,
    nearest_manhattan=_nearest_manhattan_np,
    pairwise_distances=_pairwise_distances_np,
    spea2_fitness=_spea2_fitness_np,
    spea2_truncate=_spea2_truncate_np,
    hv2d=_hv2d_np,
)

ACTIVE = LOOP if USE_NUMBA else NUMPY
BACKEND = "numba" if USE_NUMBA else "numpy"


def _f64(F) -> np.ndarray:
    return np.ascontiguousarray(F, dtype=np.float64)


def dominance_matrix(F) -> np.ndarray:
    """``out[i, j]`` is true iff row ``i`` Pareto-dominates row ``j``."""
    return ACTIVE.dominance_matrix(_f64(F))


def nondominated_mask(F) -> np.ndarray:
    """Boolean mask of rows not dominated by any other row."""
    F = _f64(F)
    if F.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return ACTIVE.nondominated_mask(F)


def nondominated_ranks(F) -> np.ndarray:
    """Front index of every row (0 = nondominated), by fast nondominated sort."""
    F = _f64(F)
    if F.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return ACTIVE.nondominated_ranks(F)


def crowding_distance(F) -> np.ndarray:
    """Crowding distance of each row within one front; extremes get ``inf``."""
    return ACTIVE.crowding_distance(_f64(F))


def nearest_distances(A, B) -> np.ndarray:
    """Euclidean distance from every row of ``A`` to its nearest row of ``B``."""
    return ACTIVE.nearest_distances(_f64(A), _f64(B))


def nearest_manhattan(F) -> np.ndarray:
    """Manhattan distance from every row to its nearest other row."""
    return ACTIVE.nearest_manhattan(_f64(F))


def pairwise_distances(F) -> np.ndarray:
    return ACTIVE.pairwise_distances(_f64(F))


def spea2_fitness(F, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Raw (strength-sum) fitness and k-th-nearest-neighbour density."""
    return ACTIVE.spea2_fitness(_f64(F), int(k))


def spea2_truncate(F, capacity: int) -> np.ndarray:
    """Indices kept after iterative nearest-neighbour truncation to ``capacity``.

    At each round the point whose sorted distance list to the other survivors
    is lexicographically smallest is removed.
    """
    F = _f64(F)
    if F.shape[0] <= capacity:
        return np.arange(F.shape[0])
    return np.asarray(ACTIVE.spea2_truncate(F, int(capacity)), dtype=np.int64)


def hv2d(F, ref) -> float:
    """Exact bi-objective hypervolume of the rows of ``F`` against ``ref``."""
    F = _f64(F).reshape(-1, 2)
    if F.shape[0] == 0:
        return 0.0
    return float(ACTIVE.hv2d(F, _f64(ref)))
