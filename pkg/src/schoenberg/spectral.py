"""Symmetric eigendecomposition and definiteness tests.

Two solvers are available behind :func:`decompose`: LAPACK's divide-and-conquer
routine through :func:`numpy.linalg.eigh` (the default, used for the n = 1000
experiments) and a cyclic Jacobi solver written here, which is slower but
independent of LAPACK and serves as a cross-check on small matrices.

"Positive definite" follows the semi-definite convention throughout: a matrix
is p.d. when none of its eigenvalues is significantly negative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ValidationError

DEFAULT_TOL = 1e-9
MAX_SWEEPS = 100

# Asymmetry tolerated (relative to the largest entry) before symmetrizing.
_SYMMETRY_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Eigenvalues sorted descending with orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def order(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.T


def as_symmetric(M, name="matrix") -> np.ndarray:
    """Return ``M`` as an exactly symmetric float array.

    Round-off asymmetry is averaged away; anything larger is rejected.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {M.shape}")
    if M.shape[0] == 0:
        raise ValidationError(f"{name} is empty")
    if not np.all(np.isfinite(M)):
        raise ValidationError(f"{name} has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(M))))
    gap = float(np.max(np.abs(M - M.T)))
    if gap > _SYMMETRY_RTOL * scale:
        raise ValidationError(f"{name} is not symmetric (max asymmetry {gap:.3g})")
    return 0.5 * (M + M.T)


def _fix_signs(U: np.ndarray) -> np.ndarray:
    # Largest-magnitude component of each column made nonnegative; first index wins ties.
    idx = np.argmax(np.abs(U), axis=0)
    signs = np.where(U[idx, np.arange(U.shape[1])] < 0, -1.0, 1.0)
    return U * signs


def _sorted_system(w: np.ndarray, U: np.ndarray) -> EigenSystem:
    order = np.argsort(-w, kind="stable")
    return EigenSystem(w[order], _fix_signs(U[:, order]))


def jacobi_eigh(M, max_sweeps: int = MAX_SWEEPS, eps: float = 1e-15):
    """Cyclic Jacobi eigenvalue iteration for a symmetric matrix.

    Returns unsorted ``(eigenvalues, eigenvectors)``. Raises
    :class:`ConvergenceError` when the off-diagonal mass has not fallen below
    ``eps * ||M||_F`` after ``max_sweeps`` sweeps.
    """
    A = np.array(M, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    norm = np.linalg.norm(A)
    offdiag = ~np.eye(n, dtype=bool)
    for sweep in range(max_sweeps + 1):
        off = np.linalg.norm(A[offdiag])
        if off <= eps * norm:
            return np.diag(A).copy(), V
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    raise ConvergenceError(
        f"Jacobi iteration on a {n}x{n} matrix did not converge in {max_sweeps} sweeps"
    )


def decompose(M, method: str = "lapack") -> EigenSystem:
    """Spectral decomposition ``M = U diag(w) U'`` of a symmetric matrix.

    Parameters
    ----------
    M : (n, n) array_like
        Symmetric matrix.
    method : {"lapack", "jacobi"}
        Solver backend.

    Returns
    -------
    EigenSystem
        Eigenvalues in descending order. Each eigenvector column has its
        largest-magnitude component made nonnegative, so results are
        reproducible. Order among tied eigenvalues is not guaranteed.
    """
    M = as_symmetric(M)
    n = M.shape[0]
    if n == 1:
        return EigenSystem(M[0].copy(), np.ones((1, 1)))
    if method == "lapack":
        try:
            w, U = np.linalg.eigh(M)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(
                f"eigendecomposition of a {n}x{n} matrix did not converge"
            ) from exc
    elif method == "jacobi":
        w, U = jacobi_eigh(M)
    else:
        raise ValidationError(f"unknown eigensolver {method!r}")
    return _sorted_system(w, U)


def eigenvalues(M) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, descending."""
    M = as_symmetric(M)
    return np.linalg.eigvalsh(M)[::-1].copy()


def negativity_threshold(w: np.ndarray, tol: float) -> float:
    """Eigenvalues below the returned (nonpositive) value count as genuinely negative."""
    if tol < 0:
        raise ValidationError(f"tolerance must be nonnegative, got {tol}")
    return -tol * max(1.0, float(np.max(np.abs(w))))


def is_pd(M, tol: float = DEFAULT_TOL) -> bool:
    """True iff the smallest eigenvalue is at least ``-tol * max(1, max|w|)``."""
    w = eigenvalues(M)
    return bool(w[-1] >= negativity_threshold(w, tol))


def uniform_centered_products(M) -> np.ndarray:
    """``-1/2 H M H'`` for the uniform centering matrix ``H = I - 11'/n``."""
    M = as_symmetric(M)
    rm = M.mean(axis=1)
    B = M - rm[:, None] - rm[None, :] + M.mean()
    return -0.5 * B


def is_cnd(M, tol: float = DEFAULT_TOL) -> bool:
    """Conditional negative definiteness via the uniformly centred matrix.

    ``M`` is c.n.d. iff ``-1/2 H M H'`` is p.d. for any (here: the uniform)
    signed distribution.
    """
    return is_pd(uniform_centered_products(M), tol)
