"""Cross-half projection clustering.

Samples are split into two random halves. Each half yields approximate
centers (rank-k approximation, then l2-squared clustering of its columns,
then averaging of the raw columns in every group). Each half is then
assigned with the centers of the *other* half, and the two labelings are
merged by matching the center sets.

Sub-procedure seeds are forked from the caller's seed as
``SeedSequence(seed, spawn_key=(label,))`` with fixed labels
(:data:`SPLIT_STREAM`, :data:`KMEANS_STREAMS`).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .kmeans import L22Solution, solve_l22
from .linalg import DEFAULT_TOL, rank_k_approx

__all__ = [
    "Clustering",
    "SplitPlan",
    "CenterSet",
    "ClusterRun",
    "split",
    "centers",
    "project_assign",
    "projection_statistics",
    "match_clusters",
    "cluster",
    "cluster_run",
]

SPLIT_STREAM = 0
KMEANS_STREAMS = (1, 2)


@dataclass(frozen=True)
class Clustering:
    assignment: np.ndarray
    k: int

    def groups(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.assignment == r) for r in range(self.k)]


@dataclass(frozen=True)
class SplitPlan:
    half1: np.ndarray
    half2: np.ndarray
    seed: int


@dataclass(frozen=True)
class CenterSet:
    """k estimated centers stored as rows of a ``(k, n)`` array."""

    centers: np.ndarray
    solution: L22Solution | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        C = np.array(self.centers, dtype=float, ndmin=2)
        if not np.all(np.isfinite(C)):
            raise ValueError("centers must be finite")
        C.setflags(write=False)
        object.__setattr__(self, "centers", C)

    @property
    def k(self) -> int:
        return self.centers.shape[0]

    def permuted(self, order) -> "CenterSet":
        return CenterSet(self.centers[np.asarray(order)])


def _fork(seed: int, label: int) -> int:
    ss = np.random.SeedSequence(seed, spawn_key=(label,))
    return int(ss.generate_state(2, np.uint64)[0])


def split(m: int, seed: int = 0, k: int = 1) -> SplitPlan:
    """Uniform random balanced split of ``range(m)``.

    The first half has ``ceil(m / 2)`` indices. Both halves are sorted.
    """
    if m < 2 * k:
        raise ValueError(f"m={m} is too small to split for k={k}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    perm = rng.permutation(m)
    h = (m + 1) // 2
    return SplitPlan(np.sort(perm[:h]), np.sort(perm[h:]), seed)


def centers(A_half, k: int, seed: int = 0, tol: float = DEFAULT_TOL,
            method: str = "full", timings: dict | None = None) -> CenterSet:
    """Approximate centers from one half of the samples.

    The l2-squared problem is solved on the columns of the best rank-k
    approximation; the returned centers are means of the *original*
    columns in each group.
    """
    A_half = np.asarray(A_half, dtype=float)
    if A_half.shape[1] < k:
        raise ValueError("need at least k columns")
    t0 = time.perf_counter()
    approx = rank_k_approx(A_half, k, tol=tol, method=method).approx
    t1 = time.perf_counter()
    sol = solve_l22(approx.T, k, seed=seed)
    t2 = time.perf_counter()
    if timings is not None:
        timings["svd"] = timings.get("svd", 0.0) + 1e3 * (t1 - t0)
        timings["kmeans"] = timings.get("kmeans", 0.0) + 1e3 * (t2 - t1)
    counts = np.bincount(sol.assignment, minlength=k)
    if np.any(counts == 0):
        raise RuntimeError("l2-squared solver returned an empty cluster")
    C = np.zeros((k, A_half.shape[0]))
    np.add.at(C, sol.assignment, A_half.T)
    return CenterSet(C / counts[:, None], solution=sol)


def projection_statistics(samples, C) -> np.ndarray:
    """``S[j, r, s] = |(v_j - c_r) . (c_s - c_r)|`` for every sample and pair."""
    V = np.asarray(samples, dtype=float)
    C = np.asarray(C, dtype=float)
    k = C.shape[0]
    S = np.zeros((V.shape[1], k, k))
    for r in range(k):
        centred = V - C[r][:, None]
        for s in range(k):
            if s != r:
                S[:, r, s] = np.abs(centred.T @ (C[s] - C[r]))
    return S


def project_assign(samples, estimated) -> Clustering:
    """Assign each column of ``samples`` by pairwise projections.

    Sample ``v`` qualifies for cluster ``r`` when, for every other ``s``,
    ``|(v - c_r).(c_s - c_r)| <= |(v - c_s).(c_r - c_s)|``. The lowest
    qualifying index wins. If rounding leaves no qualifier the sample goes
    to ``argmin_r max_s |(v - c_r).(c_s - c_r)|``.
    """
    C = estimated.centers if isinstance(estimated, CenterSet) else np.asarray(estimated, dtype=float)
    V = np.asarray(samples, dtype=float)
    if V.ndim != 2:
        raise ValueError("samples must be an (n, m) matrix")
    k = C.shape[0]
    if k == 0:
        raise ValueError("need at least one center")
    if V.shape[0] != C.shape[1]:
        raise ValueError(f"sample dimension {V.shape[0]} != center dimension {C.shape[1]}")
    S = projection_statistics(V, C)
    qualifies = np.all(S <= np.swapaxes(S, 1, 2), axis=2)
    first = np.argmax(qualifies, axis=1)
    fallback = np.argmin(S.max(axis=2), axis=1)
    labels = np.where(qualifies.any(axis=1), first, fallback)
    return Clustering(labels.astype(np.int64), k)


def match_clusters(theta, nu) -> np.ndarray:
    """Permutation ``pi`` minimising ``sum_r ||theta_r - nu_pi(r)||^2``."""
    T = theta.centers if isinstance(theta, CenterSet) else np.asarray(theta, dtype=float)
    N = nu.centers if isinstance(nu, CenterSet) else np.asarray(nu, dtype=float)
    if T.shape != N.shape:
        raise ValueError(f"center sets differ in shape: {T.shape} vs {N.shape}")
    diff = T[:, None, :] - N[None, :, :]
    cost = np.einsum("rsi,rsi->rs", diff, diff)
    rows, cols = linear_sum_assignment(cost)
    return cols[np.argsort(rows)]


@dataclass(frozen=True)
class ClusterRun:
    """Everything produced by one run of :func:`cluster_run`.

    ``theta`` are centers estimated from ``plan.half1`` (used to assign
    half 2) and ``nu`` from ``plan.half2`` (used to assign half 1), both
    indexed in the final label order.
    """

    clustering: Clustering
    plan: SplitPlan
    theta: CenterSet
    nu: CenterSet
    timings_ms: dict


def cluster_run(A, k: int, seed: int = 0, tol: float = DEFAULT_TOL,
                method: str = "full") -> ClusterRun:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("A must be an (n, m) matrix")
    m = A.shape[1]
    timings = {"svd": 0.0, "kmeans": 0.0}
    plan = split(m, _fork(seed, SPLIT_STREAM), k)
    A1, A2 = A[:, plan.half1], A[:, plan.half2]
    theta = centers(A1, k, _fork(seed, KMEANS_STREAMS[0]), tol, method, timings)
    nu = centers(A2, k, _fork(seed, KMEANS_STREAMS[1]), tol, method, timings)
    t1 = time.perf_counter()
    P1 = project_assign(A1, nu)
    P2 = project_assign(A2, theta)
    t2 = time.perf_counter()
    pi = match_clusters(theta, nu)
    # nu index pi[r] corresponds to theta index r
    to_theta = np.argsort(pi)
    labels = np.empty(m, dtype=np.int64)
    labels[plan.half1] = to_theta[P1.assignment]
    labels[plan.half2] = P2.assignment
    timings["project"] = 1e3 * (t2 - t1)
    return ClusterRun(
        clustering=Clustering(labels, k),
        plan=plan,
        theta=theta,
        nu=CenterSet(nu.centers[pi], solution=nu.solution),
        timings_ms=timings,
    )


def cluster(A, k: int, seed: int = 0, tol: float = DEFAULT_TOL) -> Clustering:
    """Cluster the columns of ``A`` into ``k`` groups."""
    return cluster_run(A, k, seed, tol).clustering
