"""Mixture model: parameters, synthetic sampling and the separation condition.

Samples are the *columns* of an ``n x m`` data matrix. Randomness is drawn
from numpy's ``PCG64`` bit generator; column ``j`` of a sample uses the
stream ``SeedSequence(seed, spawn_key=(j,))``, so every column is
reproducible on its own and independent of generation order.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Family",
    "MixtureParams",
    "DataMatrix",
    "SeparationReport",
    "SigmaFloorWarning",
    "component_sizes",
    "block_centers",
    "sample_mixture",
    "separation_report",
    "separation_bound",
]


class SigmaFloorWarning(UserWarning):
    """sigma_sq is below the log(n)**6 / n floor assumed by the model."""


class Family(str, enum.Enum):
    BERNOULLI = "bernoulli"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class MixtureParams:
    """Ground-truth description of a k-component mixture in R^n.

    Parameters
    ----------
    centers : array of shape (k, n)
        Component means, one per row.
    weights : array of shape (k,)
        Mixing weights; must sum to one.
    sigma_sq : float
        For Bernoulli mixtures an upper bound on every center coordinate,
        for spherical Gaussians the per-coordinate variance.
    family : Family
    """

    centers: np.ndarray
    weights: np.ndarray
    sigma_sq: float
    family: Family = Family.BERNOULLI

    def __post_init__(self):
        centers = np.array(self.centers, dtype=float, ndmin=2)
        weights = np.array(self.weights, dtype=float).ravel()
        family = Family(self.family)
        if centers.shape[0] != weights.shape[0]:
            raise ValueError(
                f"got {centers.shape[0]} centers but {weights.shape[0]} weights"
            )
        if not np.all(np.isfinite(centers)):
            raise ValueError("centers must be finite")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be non-negative and sum to 1")
        if not 0.0 < self.sigma_sq <= 1.0:
            raise ValueError("sigma_sq must lie in (0, 1]")
        if family is Family.BERNOULLI and (
            centers.min() < 0.0 or centers.max() > self.sigma_sq
        ):
            raise ValueError("Bernoulli centers must satisfy 0 <= mu <= sigma_sq")
        centers.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "sigma_sq", float(self.sigma_sq))
        object.__setattr__(self, "family", family)

    @property
    def k(self) -> int:
        return self.centers.shape[0]

    @property
    def n(self) -> int:
        return self.centers.shape[1]

    @property
    def w_min(self) -> float:
        return float(self.weights.min())

    def sigma_floor_ok(self) -> bool:
        """Whether sigma_sq >= log(n)**6 / n."""
        return self.sigma_sq >= math.log(self.n) ** 6 / self.n

    def permuted(self, order) -> "MixtureParams":
        order = np.asarray(order)
        return MixtureParams(
            self.centers[order], self.weights[order], self.sigma_sq, self.family
        )


@dataclass(frozen=True)
class DataMatrix:
    """An ``n x m`` data matrix with samples as columns.

    ``labels[j]`` is the component that generated column ``j`` and
    ``expected[:, j]`` its center; both are ``None`` for unlabelled data.
    """

    values: np.ndarray
    labels: np.ndarray | None = None
    expected: np.ndarray | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float, ndmin=2)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.labels is not None:
            labels = np.array(self.labels, dtype=np.int64).ravel()
            if labels.shape[0] != values.shape[1]:
                raise ValueError("need one label per column")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)
        if self.expected is not None:
            expected = np.array(self.expected, dtype=float)
            if expected.shape != values.shape:
                raise ValueError("expected must have the shape of values")
            expected.setflags(write=False)
            object.__setattr__(self, "expected", expected)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def has_truth(self) -> bool:
        return self.labels is not None and self.expected is not None

    def noise(self) -> np.ndarray:
        """``A - E(A)``."""
        if self.expected is None:
            raise ValueError("data matrix carries no ground truth")
        return self.values - self.expected


@dataclass(frozen=True)
class SeparationReport:
    pair_distances_sq: np.ndarray
    required_bound: float
    c: float
    w_min: float
    margin: float
    sigma_floor_ok: bool = True
    satisfied: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "satisfied", bool(self.margin >= 1.0))


def component_sizes(weights, m: int) -> np.ndarray:
    """Split ``m`` into per-component counts by largest-remainder rounding.

    Remainders that tie are resolved in favour of the lower component index.
    """
    weights = np.asarray(weights, dtype=float)
    exact = weights * m
    sizes = np.floor(exact).astype(np.int64)
    short = m - int(sizes.sum())
    # stable sort keeps lower indices first among equal remainders
    order = np.argsort(-(exact - sizes), kind="stable")
    sizes[order[:short]] += 1
    return sizes


def block_centers(k: int, n: int, level: float, background: float = 0.0) -> np.ndarray:
    """Centers that equal ``level`` on disjoint coordinate blocks.

    Center ``r`` is ``level`` on the ``r``-th of ``k`` equal blocks of
    ``floor(n / k)`` coordinates and ``background`` elsewhere; leftover
    coordinates stay at ``background`` for every center. Pairwise squared
    distances are ``2 * floor(n / k) * (level - background)**2``.
    """
    b = n // k
    if b == 0:
        raise ValueError("need n >= k")
    centers = np.full((k, n), float(background))
    for r in range(k):
        centers[r, r * b:(r + 1) * b] = level
    return centers


def sample_mixture(params: MixtureParams, m: int, seed: int = 0) -> DataMatrix:
    """Draw ``m`` samples; component ``r`` gets a contiguous block of columns.

    Column counts come from :func:`component_sizes`. Bernoulli coordinates
    are independent 0/1 draws with success probability ``mu_r(i)``;
    Gaussian coordinates are ``mu_r(i) + N(0, sigma_sq)``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    sizes = component_sizes(params.weights, m)
    if np.any(sizes == 0):
        raise ValueError(
            f"component sizes {sizes.tolist()} leave a component empty at m={m}"
        )
    labels = np.repeat(np.arange(params.k), sizes)
    expected = params.centers[labels].T
    values = np.empty((params.n, m))
    scale = math.sqrt(params.sigma_sq)
    for j in range(m):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(j,)))
        )
        mu = expected[:, j]
        if params.family is Family.BERNOULLI:
            values[:, j] = rng.random(params.n) < mu
        else:
            values[:, j] = mu + scale * rng.standard_normal(params.n)
    return DataMatrix(values, labels, expected)


def separation_bound(params: MixtureParams, m: int, c: float = 1.0) -> float:
    """Right-hand side ``8100 c k sigma^2 / w_min * (1 + n/m + ln m)``."""
    return (
        8100.0 * c * params.k * params.sigma_sq / params.w_min
        * (1.0 + params.n / m + math.log(m))
    )


def separation_report(params: MixtureParams, m: int, c: float = 1.0) -> SeparationReport:
    """Compare all pairwise squared center distances with the required bound.

    The report is advisory. A warning is emitted when sigma_sq falls below
    the ``log(n)**6 / n`` floor, which is normal for small instances.
    """
    if params.k < 2:
        raise ValueError("separation needs at least two components")
    if c <= 0:
        raise ValueError("c must be positive")
    diff = params.centers[:, None, :] - params.centers[None, :, :]
    dist_sq = np.einsum("rsi,rsi->rs", diff, diff)
    bound = separation_bound(params, m, c)
    off_diag = dist_sq[~np.eye(params.k, dtype=bool)]
    floor_ok = params.sigma_floor_ok()
    if not floor_ok:
        warnings.warn(
            f"sigma_sq={params.sigma_sq:g} is below log(n)^6/n "
            f"={math.log(params.n) ** 6 / params.n:.3g}",
            SigmaFloorWarning,
            stacklevel=2,
        )
    return SeparationReport(
        pair_distances_sq=dist_sq,
        required_bound=bound,
        c=float(c),
        w_min=params.w_min,
        margin=float(off_diag.min() / bound),
        sigma_floor_ok=floor_ok,
    )
