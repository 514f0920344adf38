"""Classical and weighted multidimensional scaling.

Weighted MDS separates the choice of origin ``a`` (any signed distribution)
from the object masses ``f`` (strictly positive). Coordinates are
``x_ia = sqrt(lambda_a / f_i) u_ia`` where ``(lambda, u)`` diagonalize the
weighted scalar products ``K_ij(a) = sqrt(f_i f_j) B_ij(a)``. With uniform
``f`` the eigenvalues are those of classical MDS divided by ``n``, and the
coordinates coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial.distance import cdist

from . import spectral
from .distgeom import (
    as_signed_distribution,
    as_squared_distances,
    as_weights,
    scalar_products,
    uniform,
)
from .errors import NotEuclideanError, ValidationError
from .spectral import DEFAULT_TOL

# Eigenvalues at or below this fraction of the largest are treated as null space.
ZERO_CUTOFF = 1e-9


@dataclass(frozen=True, eq=False)
class Embedding:
    """Coordinates of ``n`` objects in ``p`` principal dimensions.

    ``total_inertia`` is the eigenvalue sum of the untruncated embedding, so
    proportions stay relative to the whole cloud after :func:`truncate`.
    """

    coordinates: np.ndarray
    eigenvalues: np.ndarray
    origin: np.ndarray
    weights: np.ndarray
    total_inertia: float

    @property
    def dims(self) -> int:
        return self.coordinates.shape[1]

    def squared_distances(self) -> np.ndarray:
        n = self.coordinates.shape[0]
        if self.dims == 0:
            return np.zeros((n, n))
        return cdist(self.coordinates, self.coordinates, "sqeuclidean")


def _spectrum(M, tol, method):
    system = spectral.decompose(M, method=method)
    w = system.eigenvalues
    if w[-1] < spectral.negativity_threshold(w, tol):
        raise NotEuclideanError(w[-1])
    w = np.clip(w, 0.0, None)
    keep = w > ZERO_CUTOFF * w[0] if w[0] > 0 else np.zeros(w.size, dtype=bool)
    # at least one null direction (B(a) a = 0)
    keep[w.size - 1:] = False
    return w[keep], system.eigenvectors[:, keep]


def weighted_mds(D, f=None, a=None, tol: float = DEFAULT_TOL, method: str = "lapack") -> Embedding:
    """Weighted MDS of a squared Euclidean distance matrix.

    Parameters
    ----------
    D : (n, n) array_like
        Squared distances.
    f : (n,) array_like, optional
        Strictly positive object weights; uniform by default.
    a : (n,) array_like, optional
        Signed distribution fixing the origin; defaults to ``f``.
    tol : float
        Relative tolerance below which a negative eigenvalue is round-off.

    Raises
    ------
    NotEuclideanError
        If the weighted scalar products have an eigenvalue below
        ``-tol * max(1, max|lambda|)``.
    """
    D = as_squared_distances(D)
    n = D.shape[0]
    f = uniform(n) if f is None else as_weights(f, n)
    a = f.copy() if a is None else as_signed_distribution(a, n, "origin")
    root = np.sqrt(f)
    K = root[:, None] * scalar_products(D, a) * root[None, :]
    lam, U = _spectrum(K, tol, method)
    X = U * np.sqrt(lam)[None, :] / root[:, None]
    return Embedding(X, lam, a, f, float(lam.sum()))


def classical_mds(D, a=None, tol: float = DEFAULT_TOL, method: str = "lapack") -> Embedding:
    """Classical MDS, ``x_ia = sqrt(lambda_a) u_ia`` from ``B(a) = U diag(lambda) U'``.

    ``a`` defaults to the uniform distribution.
    """
    D = as_squared_distances(D)
    n = D.shape[0]
    a = uniform(n) if a is None else as_signed_distribution(a, n, "origin")
    lam, U = _spectrum(scalar_products(D, a), tol, method)
    X = U * np.sqrt(lam)[None, :]
    return Embedding(X, lam, a, uniform(n), float(lam.sum()))


def reconstruction_proportions(E: Embedding) -> np.ndarray:
    """Share of the total inertia carried by each retained dimension."""
    if E.total_inertia <= 0 or E.eigenvalues.size == 0:
        return np.zeros(0)
    if np.any(E.eigenvalues < 0):
        raise ValidationError("eigenvalues must be nonnegative")
    return E.eigenvalues / E.total_inertia


def truncate(E: Embedding, dims: int) -> Embedding:
    """Keep the ``dims`` leading dimensions."""
    if not 1 <= dims <= E.dims:
        raise ValidationError(f"dims must lie in 1..{E.dims}, got {dims}")
    return replace(E, coordinates=E.coordinates[:, :dims].copy(), eigenvalues=E.eigenvalues[:dims].copy())
