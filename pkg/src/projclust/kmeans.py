"""l2-squared (k-means) clustering by Lloyd iterations plus single-swap local search.

The solver is deterministic given ``seed``: the seed only picks the first
farthest-point center, and every later decision depends on pairwise
distances alone, with ties going to the lowest point or center index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

__all__ = ["L22Solution", "solve_l22", "brute_force_l22", "l22_cost"]

SWAP_THRESHOLD = 1e-6
LLOYD_RTOL = 1e-9
LLOYD_MAX_ITER = 500
MAX_SWAPS = 200
BRUTE_FORCE_LIMIT = 12


@dataclass(frozen=True)
class L22Solution:
    """Centers (rows), per-point assignment and total squared distance.

    ``cost_history`` records the objective after farthest-point
    initialisation, after each Lloyd update and after each accepted swap.
    """

    centers: np.ndarray
    assignment: np.ndarray
    cost: float
    cost_history: tuple = field(default=(), repr=False)

    @property
    def k(self) -> int:
        return self.centers.shape[0]


def _points(points, k):
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError("points must be an (l, d) array")
    if k < 1:
        raise ValueError("k must be at least 1")
    if X.shape[0] < k:
        raise ValueError(f"need at least k={k} points, got {X.shape[0]}")
    if not np.all(np.isfinite(X)):
        raise ValueError("points must be finite")
    return X


def l22_cost(points, centers, assignment) -> float:
    X = np.asarray(points, dtype=float)
    diff = X - np.asarray(centers, dtype=float)[assignment]
    return float(np.einsum("ij,ij->", diff, diff))


def _nearest(X, C):
    d2 = cdist(X, C, "sqeuclidean")
    # argmin returns the first minimum, i.e. the lowest center index
    return np.argmin(d2, axis=1), d2


def _means(X, labels, k):
    C = np.zeros((k, X.shape[1]))
    np.add.at(C, labels, X)
    counts = np.bincount(labels, minlength=k)
    return C / counts[:, None]


def _repair_empty(X, labels, C, k):
    """Move points into empty clusters, farthest-from-own-center first."""
    labels = labels.copy()
    counts = np.bincount(labels, minlength=k)
    for r in np.flatnonzero(counts == 0):
        d2 = np.einsum("ij,ij->i", X - C[labels], X - C[labels])
        movable = counts[labels] > 1
        d2 = np.where(movable, d2, -1.0)
        j = int(np.argmax(d2))
        counts[labels[j]] -= 1
        labels[j] = r
        counts[r] += 1
        C = C.copy()
        C[r] = X[j]
    return labels


def _farthest_first(X, k, seed):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    chosen = [int(rng.integers(X.shape[0]))]
    dmin = cdist(X, X[chosen], "sqeuclidean")[:, 0]
    for _ in range(1, k):
        j = int(np.argmax(dmin))
        chosen.append(j)
        dmin = np.minimum(dmin, cdist(X, X[j:j + 1], "sqeuclidean")[:, 0])
    return X[chosen].copy()


def _lloyd(X, C, k, history, max_iter=LLOYD_MAX_ITER, rtol=LLOYD_RTOL):
    labels, _ = _nearest(X, C)
    labels = _repair_empty(X, labels, C, k)
    C = _means(X, labels, k)
    cost = l22_cost(X, C, labels)
    history.append(cost)
    for _ in range(max_iter):
        new_labels, _ = _nearest(X, C)
        new_labels = _repair_empty(X, new_labels, C, k)
        if np.array_equal(new_labels, labels):
            break
        new_C = _means(X, new_labels, k)
        new_cost = l22_cost(X, new_C, new_labels)
        if new_cost > cost:
            break
        improved = cost - new_cost
        labels, C, cost = new_labels, new_C, new_cost
        history.append(cost)
        if improved <= rtol * cost:
            break
    return C, labels, cost


def _best_swap(X, D, C):
    """Cheapest replacement of one center by one input point.

    ``D`` holds pairwise squared distances between points. Returns
    ``(cost, center_index, point_index)``.
    """
    d2 = cdist(X, C, "sqeuclidean")
    k = C.shape[0]
    best = (np.inf, -1, -1)
    for i in range(k):
        others = np.delete(d2, i, axis=1)
        keep = others.min(axis=1) if k > 1 else np.full(X.shape[0], np.inf)
        costs = np.minimum(keep[:, None], D).sum(axis=0)
        p = int(np.argmin(costs))
        if costs[p] < best[0]:
            best = (float(costs[p]), i, p)
    return best


def solve_l22(points, k: int, seed: int = 0, *, max_swaps: int = MAX_SWAPS,
              lloyd_max_iter: int = LLOYD_MAX_ITER) -> L22Solution:
    """Approximately minimise the sum of squared distances to ``k`` centers.

    Farthest-point initialisation, Lloyd iterations to convergence, then
    single-swap local search over the input points: the swap that lowers
    the cost most is applied if it improves by more than a relative 1e-6,
    followed by Lloyd re-convergence. Terminates when no swap qualifies
    or after ``max_swaps`` accepted swaps.

    Parameters
    ----------
    points : array of shape (l, d)
        One point per row.
    k : int
        Number of centers, ``1 <= k <= l``.
    seed : int
        Selects the first center of the farthest-point initialisation.
    """
    X = _points(points, k)
    history: list[float] = []
    C = _farthest_first(X, k, seed)
    history.append(l22_cost(X, C, _nearest(X, C)[0]))
    C, labels, cost = _lloyd(X, C, k, history, max_iter=lloyd_max_iter)
    if k < X.shape[0] and cost > 0:
        D = cdist(X, X, "sqeuclidean")
        for _ in range(max_swaps):
            swap_cost, i, p = _best_swap(X, D, C)
            if not swap_cost < cost * (1.0 - SWAP_THRESHOLD):
                break
            C = C.copy()
            C[i] = X[p]
            history.append(swap_cost)
            C, labels, cost = _lloyd(X, C, k, history, max_iter=lloyd_max_iter)
    return L22Solution(
        centers=C, assignment=labels, cost=cost, cost_history=tuple(history)
    )


def _partitions(n, k):
    """Restricted-growth strings of length n using exactly k blocks."""
    labels = [0] * n

    def rec(i, used):
        if n - i < k - used:
            return
        if i == n:
            if used == k:
                yield tuple(labels)
            return
        for b in range(min(used + 1, k)):
            labels[i] = b
            yield from rec(i + 1, max(used, b + 1))

    labels[0] = 0
    yield from rec(1, 1)


def brute_force_l22(points, k: int) -> L22Solution:
    """Exact optimum by enumerating every partition into ``k`` groups.

    Partitions with fewer than ``k`` groups are skipped: splitting a group
    never raises the cost, so the optimum is always attained with exactly
    ``k`` non-empty groups when there are at least ``k`` points.
    """
    X = _points(points, k)
    l = X.shape[0]
    if l > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_LIMIT} points")
    best_cost, best_labels = np.inf, None
    for part in _partitions(l, k):
        labels = np.asarray(part)
        C = _means(X, labels, k)
        cost = l22_cost(X, C, labels)
        if cost < best_cost:
            best_cost, best_labels = cost, labels
    C = _means(X, best_labels, k)
    return L22Solution(centers=C, assignment=best_labels, cost=best_cost,
                       cost_history=(best_cost,))
