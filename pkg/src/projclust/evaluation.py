"""Scoring against ground truth and empirical checks of the analysis bounds.

Every check returns a :class:`BoundReport`. Apart from
:func:`frobenius_bound_check`, which tests an inequality that holds for
every matrix, the reports are advisory: they describe one instance and
are meant to be aggregated over seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .linalg import frobenius_norm_sq, rank_k_approx, spectral_norm
from .model import DataMatrix, MixtureParams
from .pipeline import CenterSet, Clustering, SplitPlan, match_clusters

__all__ = [
    "AccuracyReport",
    "BoundReport",
    "accuracy",
    "align_to_truth",
    "spectral_constant",
    "spectral_bound_report",
    "frobenius_bound_check",
    "deviation_check",
    "center_error_report",
    "cross_term_check",
]

FROBENIUS_SLACK = 1e-8


@dataclass(frozen=True)
class AccuracyReport:
    best_permutation: np.ndarray
    accuracy: float
    confusion: np.ndarray


@dataclass(frozen=True)
class BoundReport:
    name: str
    measured: float
    bound: float
    context: dict = field(default_factory=dict)
    satisfied: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "satisfied", bool(self.measured <= self.bound))

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": self.measured,
            "bound": self.bound,
            "satisfied": self.satisfied,
            **{f"context.{key}": value for key, value in self.context.items()},
        }


def accuracy(predicted, truth, k: int | None = None) -> AccuracyReport:
    """Fraction of samples labelled correctly under the best relabelling.

    ``best_permutation[p]`` is the true label matched to predicted label
    ``p``. The permutation maximises the confusion-matrix trace.
    """
    pred = predicted.assignment if isinstance(predicted, Clustering) else np.asarray(predicted)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError("predicted and true labelings differ in length")
    if k is None:
        k = predicted.k if isinstance(predicted, Clustering) else int(max(pred.max(), truth.max())) + 1
    if pred.size and (pred.max() >= k or truth.max() >= k):
        raise ValueError(f"labels exceed k={k}")
    confusion = np.zeros((k, k), dtype=np.int64)
    np.add.at(confusion, (truth, pred), 1)
    rows, cols = linear_sum_assignment(-confusion)
    perm = np.empty(k, dtype=np.int64)
    perm[cols] = rows
    hits = confusion[rows, cols].sum()
    return AccuracyReport(perm, float(hits / truth.size) if truth.size else 1.0, confusion)


def align_to_truth(estimated: CenterSet, truth) -> CenterSet:
    """Reorder ``estimated`` so that row ``r`` estimates true center ``r``."""
    T = truth.centers if isinstance(truth, (CenterSet, MixtureParams)) else np.asarray(truth, dtype=float)
    pi = match_clusters(T, estimated.centers)
    return estimated.permuted(pi)


def _require_truth(data: DataMatrix):
    if not data.has_truth:
        raise ValueError("data matrix carries no ground truth")


def spectral_constant(data: DataMatrix, sigma_sq: float) -> float:
    """Measured ``||A - E(A)||^2 / (sigma^2 (m + n))``."""
    _require_truth(data)
    return spectral_norm(data.noise()) ** 2 / (sigma_sq * (data.m + data.n))


def spectral_bound_report(data: DataMatrix, sigma_sq: float, c_max: float = 4.0) -> BoundReport:
    c_hat = spectral_constant(data, sigma_sq)
    return BoundReport("spectral_norm", c_hat, c_max,
                       {"sigma_sq": sigma_sq, "n": data.n, "m": data.m})


def frobenius_bound_check(data: DataMatrix, k: int) -> BoundReport:
    """``||A^(k) - E(A)||_F^2`` against ``8 k ||A - E(A)||^2``.

    This holds for every matrix ``A`` and every rank-``k`` ``E(A)``, so the
    bound only carries a relative slack of :data:`FROBENIUS_SLACK` plus the
    rounding floor ``(FROBENIUS_SLACK * ||A||_F)^2`` of the SVD
    reconstruction, which matters when ``A = E(A)``.
    """
    _require_truth(data)
    approx = rank_k_approx(data.values, k).approx
    measured = frobenius_norm_sq(approx - data.expected)
    bound = 8 * k * spectral_norm(data.noise()) ** 2
    floor = FROBENIUS_SLACK**2 * frobenius_norm_sq(data.values)
    return BoundReport("frobenius_rank_k", measured, bound * (1 + FROBENIUS_SLACK) + floor,
                       {"k": k, "raw_bound": bound})


def deviation_check(data: DataMatrix, threshold: float = 0.01) -> BoundReport:
    """Fraction of (sample, foreign center) pairs with a large deviation.

    A pair ``(v, s)`` with ``v`` drawn from component ``r`` violates when
    ``|(v - mu_r).(mu_s - mu_r)| > ||mu_s - mu_r||^2 / 10``. Foreign centers
    equal to the sample's own center are skipped.
    """
    _require_truth(data)
    labels = data.labels
    k = int(labels.max()) + 1
    mus = np.zeros((k, data.n))
    for r in range(k):
        cols = np.flatnonzero(labels == r)
        if cols.size:
            mus[r] = data.expected[:, cols[0]]
    dev = data.noise()
    violations = 0
    pairs = 0
    for r in range(k):
        cols = labels == r
        for s in range(k):
            gap = mus[s] - mus[r]
            gap_sq = float(gap @ gap)
            if s == r or gap_sq == 0.0 or not cols.any():
                continue
            proj = np.abs(dev[:, cols].T @ gap)
            violations += int(np.count_nonzero(proj > 0.1 * gap_sq))
            pairs += int(cols.sum())
    measured = violations / pairs if pairs else 0.0
    return BoundReport("deviation", measured, threshold,
                       {"pairs": pairs, "violations": violations})


def center_error_report(estimated: CenterSet, truth, params: MixtureParams, m: int,
                        c_hat: float) -> BoundReport:
    """``max_r ||mu*_r - mu_r||^2`` against ``81 c k sigma^2 / w_min (1 + n/m)``.

    ``estimated`` must already be aligned with ``truth`` row by row.
    """
    E = estimated.centers if isinstance(estimated, CenterSet) else np.asarray(estimated, dtype=float)
    T = truth.centers if isinstance(truth, (CenterSet, MixtureParams)) else np.asarray(truth, dtype=float)
    if E.shape != T.shape:
        raise ValueError(f"center sets differ in shape: {E.shape} vs {T.shape}")
    diff = E - T
    measured = float(np.einsum("ri,ri->r", diff, diff).max())
    bound = 81 * c_hat * params.k * params.sigma_sq / params.w_min * (1 + params.n / m)
    return BoundReport("center_error", measured, bound, {"c_hat": c_hat})


def cross_term_check(data: DataMatrix, theta: CenterSet, nu: CenterSet, plan: SplitPlan,
                     params: MixtureParams, c_hat: float) -> BoundReport:
    """Largest ``|(u - mu_r).(delta_r + delta_t)|`` over samples and ``t != r``.

    ``theta`` (from half 1) supplies the errors ``delta`` for samples in
    half 2 and ``nu`` (from half 2) for samples in half 1, so each sample
    is independent of the errors it is paired with. Both sets must be
    aligned with the true centers. The context also carries the smallest
    squared gap between true centers, the scale the cross term must stay
    well below for assignment to succeed.
    """
    _require_truth(data)
    if plan is None:
        raise ValueError("a split plan is required")
    T = params.centers
    k = params.k
    dev = data.noise()
    labels = data.labels
    measured = 0.0
    for own, other in ((plan.half2, theta), (plan.half1, nu)):
        delta = other.centers - T
        for r in range(k):
            cols = own[labels[own] == r]
            if cols.size == 0:
                continue
            for t in range(k):
                if t == r:
                    continue
                vals = np.abs(dev[:, cols].T @ (delta[r] + delta[t]))
                measured = max(measured, float(vals.max()))
    m = data.m
    bound = (15 * c_hat * k * params.sigma_sq / params.w_min
             * (1 + params.n / m + math.log(m)))
    gaps = [float(np.sum((T[r] - T[s]) ** 2)) for r in range(k) for s in range(r + 1, k)]
    return BoundReport("cross_term", measured, bound,
                       {"c_hat": c_hat, "min_separation_sq": min(gaps) if gaps else 0.0})
