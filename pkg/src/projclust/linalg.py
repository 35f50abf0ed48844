"""Dense kernels: best rank-k approximation, spectral and Frobenius norms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConvergenceError",
    "RankKResult",
    "rank_k_approx",
    "spectral_norm",
    "frobenius_norm_sq",
]

DEFAULT_TOL = 1e-10


class ConvergenceError(ArithmeticError):
    """An iterative eigensolver hit its sweep cap."""


@dataclass(frozen=True)
class RankKResult:
    approx: np.ndarray
    singular_values: np.ndarray
    k_used: int


def _check(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def _full_svd(A):
    try:
        return np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc


def _subspace_iteration(A, k, tol, max_sweeps, seed=0):
    """Top singular triples by block power iteration.

    Each sweep multiplies by ``A A^T`` and re-orthonormalises. Iteration
    stops once the residual ``||A v_i - s_i u_i||`` of each of the leading
    ``k`` triples is below ``tol * s_1``.
    """
    n, m = A.shape
    rng = np.random.default_rng(seed)
    width = min(k + 5, min(n, m))
    Q, _ = np.linalg.qr(A @ rng.standard_normal((m, width)))
    for _ in range(max_sweeps):
        Z, _ = np.linalg.qr(A.T @ Q)
        Q, _ = np.linalg.qr(A @ Z)
        U_small, s, Vt = np.linalg.svd(Q.T @ A, full_matrices=False)
        U = Q @ U_small
        resid = A @ Vt[:k].T - U[:, :k] * s[:k]
        if np.all(np.linalg.norm(resid, axis=0) <= tol * max(s[0], np.finfo(float).tiny)):
            return U, s, Vt
    raise ConvergenceError(f"subspace iteration did not converge in {max_sweeps} sweeps")


def rank_k_approx(A, k: int, tol: float = DEFAULT_TOL, method: str = "full",
                  max_sweeps: int | None = None) -> RankKResult:
    """Best rank-``k`` approximation ``sum_{i<=k} s_i u_i v_i^T``.

    Parameters
    ----------
    A : array of shape (n, m)
    k : int
        Target rank; values ``>= min(n, m)`` return ``A`` itself.
    tol : float
        Relative convergence tolerance of the iterative path.
    method : {"full", "power"}
        ``"full"`` uses LAPACK's divide-and-conquer SVD. ``"power"`` uses
        block subspace iteration, which only returns the leading
        ``k + 5`` singular values.
    max_sweeps : int, optional
        Sweep cap for ``"power"``; defaults to ``10 * min(n, m)``.
    """
    A = _check(A)
    if k < 1:
        raise ValueError("k must be at least 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    r = min(A.shape)
    k_used = min(k, r)
    if method == "full":
        U, s, Vt = _full_svd(A)
    elif method == "power":
        cap = max_sweeps if max_sweeps is not None else 10 * r
        U, s, Vt = _subspace_iteration(A, k_used, tol, cap)
    else:
        raise ValueError(f"unknown method {method!r}")
    approx = (U[:, :k_used] * s[:k_used]) @ Vt[:k_used]
    return RankKResult(approx=approx, singular_values=s, k_used=k_used)


def spectral_norm(A, tol: float = DEFAULT_TOL, method: str = "full",
                  max_sweeps: int | None = None) -> float:
    """Largest singular value of ``A``."""
    A = _check(A)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if A.size == 0 or not A.any():
        return 0.0
    if method == "full":
        try:
            return float(np.linalg.svd(A, compute_uv=False)[0])
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(str(exc)) from exc
    cap = max_sweeps if max_sweeps is not None else 10 * min(A.shape)
    return float(_subspace_iteration(A, 1, tol, cap)[1][0])


def frobenius_norm_sq(A) -> float:
    """Sum of squared entries, accumulated with ``math.fsum``."""
    A = np.asarray(A, dtype=float)
    return math.fsum(np.square(A).ravel().tolist())
