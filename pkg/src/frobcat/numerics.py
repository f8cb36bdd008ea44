"""Scalar tolerance policy and dense linear-algebra primitives.

All Hom-space dimensions in the package are computed as numerical ranks
or null-space dimensions with the cutoffs held in a :class:`Tolerance`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "NotIdempotent",
    "NotConverged",
    "approx_eq",
    "rank_factorize",
    "solve_intertwiner_space",
    "perron_vector",
    "perron_eigenvalue",
    "max_abs",
    "round_to_int",
]


class NotIdempotent(ValueError):
    """Raised when a matrix fails the P @ P == P test."""


class NotConverged(RuntimeError):
    """Raised when an iterative eigen-solve does not settle."""


@dataclass(frozen=True)
class Tolerance:
    """Absolute, relative and singular-value cutoffs.

    Parameters
    ----------
    abs_eps, rel_eps : float
        Used by :func:`approx_eq` and all residual checks.
    rank_eps : float
        Singular values below ``rank_eps * max(1, s_max)`` count as zero.
    """

    abs_eps: float = 1e-9
    rel_eps: float = 1e-9
    rank_eps: float = 1e-7

    def __post_init__(self):
        for name in ("abs_eps", "rel_eps", "rank_eps"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")

    def with_eps(self, eps: float) -> "Tolerance":
        """Copy with ``abs_eps`` and ``rel_eps`` replaced by `eps`."""
        return Tolerance(abs_eps=eps, rel_eps=eps, rank_eps=max(self.rank_eps, eps))


DEFAULT_TOL = Tolerance()


def approx_eq(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``|a-b| <= abs_eps + rel_eps * max(|a|, |b|)``."""
    a = complex(a)
    b = complex(b)
    return abs(a - b) <= tol.abs_eps + tol.rel_eps * max(abs(a), abs(b))


def max_abs(x) -> float:
    """Infinity norm of an array (0 for empty input)."""
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def _as_matrix(P) -> np.ndarray:
    P = np.asarray(P, dtype=complex)
    if P.ndim != 2:
        raise ValueError("expected a 2d array")
    if not np.all(np.isfinite(P)):
        raise ValueError("non-finite entries")
    return P


def rank_factorize(P, tol: Tolerance = DEFAULT_TOL):
    """Split an idempotent as ``P = E @ R`` with ``R @ E = I_r``.

    Returns
    -------
    E : (n, r) ndarray
    R : (r, n) ndarray
    r : int
        Numerical rank.

    Raises
    ------
    NotIdempotent
        If ``||P @ P - P||_inf > abs_eps * max(1, ||P||_inf)``.

    Examples
    --------
    >>> E, R, r = rank_factorize([[1, 0], [0, 0]])
    >>> r
    1
    """
    P = _as_matrix(P)
    n, n2 = P.shape
    if n != n2:
        raise ValueError("idempotent must be square")
    if n == 0:
        return np.zeros((0, 0), complex), np.zeros((0, 0), complex), 0
    scale = max(1.0, max_abs(P))
    if max_abs(P @ P - P) > tol.abs_eps * scale:
        raise NotIdempotent(f"||P^2 - P|| = {max_abs(P @ P - P):.3e}")
    U, s, _ = np.linalg.svd(P)
    r = int(np.sum(s > tol.rank_eps * max(1.0, s[0])))
    if r == 0:
        return np.zeros((n, 0), complex), np.zeros((0, n), complex), 0
    # columns of U span the image; R = (U^H P) restricted, so that R E = I
    E = U[:, :r]
    R = E.conj().T @ P
    # R @ E = U^H P U restricted; P acts as identity on its image
    RE = R @ E
    R = np.linalg.solve(RE, R)
    return E, R, r


def solve_intertwiner_space(constraint_rows, tol: Tolerance = DEFAULT_TOL):
    """Orthonormal basis of the null space of `constraint_rows`.

    Returns a list of 1d arrays. The number of vectors is the Hom-space
    dimension reported by every intertwiner computation in the package.
    """
    C = np.asarray(constraint_rows, dtype=complex)
    if C.ndim != 2:
        raise ValueError("constraint matrix must be 2d")
    n = C.shape[1]
    if n == 0:
        return []
    if C.shape[0] == 0:
        return [v for v in np.eye(n, dtype=complex)]
    _, s, Vh = sla.svd(C, full_matrices=True, lapack_driver="gesvd")
    cut = tol.rank_eps * max(1.0, s[0] if s.size else 0.0)
    r = int(np.sum(s > cut))
    return [Vh[k].conj().copy() for k in range(r, n)]


def perron_eigenvalue(M, max_iter: int = 10_000) -> float:
    """Largest real eigenvalue of a nonnegative matrix."""
    v = perron_vector(M, max_iter=max_iter)
    M = np.asarray(M, dtype=float)
    return float((M @ v)[0] / v[0])


def perron_vector(M, max_iter: int = 10_000, tol: float = 1e-14):
    """Perron eigenvector normalized to first entry 1.

    Power iteration on ``M + I`` (the shift removes periodicity of
    irreducible nonnegative matrices).

    Raises
    ------
    NotConverged
        If the iterate has not settled after `max_iter` steps.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("M must be square")
    if np.any(M < 0):
        raise ValueError("M must be nonnegative")
    n = M.shape[0]
    S = M + np.eye(n)
    v = np.ones(n) / np.sqrt(n)
    for _ in range(max_iter):
        w = S @ v
        w /= np.linalg.norm(w)
        if np.linalg.norm(w - v) < tol:
            v = w
            break
        v = w
    else:
        raise NotConverged("power iteration did not converge")
    if abs(v[0]) < 1e-300:
        raise NotConverged("first Perron entry vanishes")
    return v / v[0]


def round_to_int(x: float, slack: float = 1e-6) -> int:
    """Round `x` to the nearest integer, refusing values far from one."""
    k = int(round(float(np.real(x))))
    if abs(x - k) > slack:
        raise ValueError(f"{x} is not within {slack} of an integer")
    return k
