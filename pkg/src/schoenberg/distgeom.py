"""Distance calculus on squared Euclidean distance matrices.

Everything here works on distances alone (the "distance trick"): centring
with respect to a signed distribution, scalar products, dispersion, Huygens
decomposition and squared distances between barycenters never require the
underlying coordinates.

Validated inputs are plain numpy arrays. The ``as_*`` helpers enforce the
invariants of each kind of argument and are called at every public entry
point.
"""

from __future__ import annotations

import numpy as np

from .errors import NotEuclideanError, ValidationError
from .spectral import DEFAULT_TOL, as_symmetric, eigenvalues, negativity_threshold, uniform_centered_products

# |sum(a) - 1| up to this is renormalized silently; beyond, rejected.
NORMALIZATION_DRIFT = 1e-8
# Negative distance entries down to -this are clamped to zero.
NEGATIVE_CLAMP = 1e-12


def as_signed_distribution(a, n=None, name="distribution") -> np.ndarray:
    """Validate a signed distribution (components sum to one, signs free)."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValidationError(f"{name} must be a nonempty vector")
    if n is not None and a.size != n:
        raise ValidationError(f"{name} has length {a.size}, expected {n}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite components")
    total = float(a.sum())
    if abs(total - 1.0) > NORMALIZATION_DRIFT:
        raise ValidationError(f"{name} sums to {total!r}, not 1")
    return a / total


def as_weights(f, n=None, name="weights") -> np.ndarray:
    """Validate a strictly positive distribution summing to one."""
    f = np.asarray(f, dtype=float)
    if f.ndim == 1 and f.size and np.any(f <= 0):
        raise ValidationError(f"{name} must be strictly positive")
    return as_signed_distribution(f, n, name)


def uniform(n: int) -> np.ndarray:
    return np.full(n, 1.0 / n)


def point_mass(n: int, k: int) -> np.ndarray:
    """Distribution concentrated on object ``k`` (0-based)."""
    if not 0 <= k < n:
        raise ValidationError(f"point mass index {k} out of range for {n} objects")
    a = np.zeros(n)
    a[k] = 1.0
    return a


def as_labels(labels) -> np.ndarray:
    """Validate group labels: integers 1..m with every group nonempty."""
    arr = np.asarray(labels)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError("labels must be a nonempty vector")
    if not np.all(np.equal(np.mod(arr, 1), 0)):
        raise ValidationError("labels must be integers")
    arr = arr.astype(int)
    if arr.min() < 1:
        raise ValidationError("labels must be positive integers 1..m")
    m = int(arr.max())
    missing = sorted(set(range(1, m + 1)) - set(arr.tolist()))
    if missing:
        raise ValidationError(f"groups {missing} are empty")
    return arr


def as_squared_distances(D, check_cnd=False, tol=DEFAULT_TOL) -> np.ndarray:
    """Validate a squared distance matrix.

    Symmetry, an exactly zero diagonal and nonnegativity are always checked;
    entries in ``[-1e-12, 0)`` are clamped to zero. The c.n.d. check needs a
    full eigendecomposition and only runs when ``check_cnd`` is set, raising
    :class:`NotEuclideanError` on failure.
    """
    D = as_symmetric(D, "distance matrix")
    if np.any(np.diag(D) != 0):
        raise ValidationError("distance matrix must have a zero diagonal")
    if np.any(D < -NEGATIVE_CLAMP):
        raise ValidationError(f"distance matrix has negative entries (min {D.min():.3g})")
    D = np.where(D < 0, 0.0, D)
    if check_cnd:
        w = eigenvalues(uniform_centered_products(D))
        if w[-1] < negativity_threshold(w, tol):
            raise NotEuclideanError(w[-1])
    return D


def _check_order(M, a):
    if M.shape[0] != a.shape[0]:
        raise ValidationError(f"matrix of order {M.shape[0]} paired with distribution of length {a.shape[0]}")


def centering_matrix(a) -> np.ndarray:
    """``H(a) = I - 1 a'``, with entries ``delta_ij - a_j``. Not symmetric in general."""
    a = as_signed_distribution(a)
    return np.eye(a.size) - a[None, :]


def scalar_products(C, a) -> np.ndarray:
    """``B(a) = -1/2 H(a) C H(a)'`` for a symmetric matrix ``C``.

    ``B(a) a = 0`` always; ``B(a)`` is p.d. exactly when ``C`` is c.n.d.
    """
    C = as_symmetric(C)
    a = as_signed_distribution(a)
    _check_order(C, a)
    Ca = C @ a
    B = C - Ca[:, None] - Ca[None, :] + a @ Ca
    B *= -0.5
    return 0.5 * (B + B.T)


def zero_diagonal_associate(C) -> np.ndarray:
    """``c_ij - c_ii/2 - c_jj/2``; leaves every ``B(a)`` unchanged."""
    C = as_symmetric(C)
    d = np.diag(C)
    out = C - 0.5 * d[:, None] - 0.5 * d[None, :]
    np.fill_diagonal(out, 0.0)
    return out


def dispersion(D, a) -> float:
    """``1/2 sum_ij a_i a_j D_ij``; may be negative for signed ``a``."""
    D = as_squared_distances(D)
    a = as_signed_distribution(a)
    _check_order(D, a)
    return 0.5 * float(a @ D @ a)


def distances_to_barycenter(D, a) -> np.ndarray:
    """Squared distances from each object to the ``a``-barycenter (Huygens)."""
    D = as_squared_distances(D)
    a = as_signed_distribution(a)
    _check_order(D, a)
    Da = D @ a
    return Da - 0.5 * float(a @ Da)


def barycenter_squared_distance(D, a, b) -> float:
    """Squared distance between the ``a``- and ``b``-barycenters."""
    D = as_squared_distances(D)
    a = as_signed_distribution(a, D.shape[0], "a")
    b = as_signed_distribution(b, D.shape[0], "b")
    z = a - b
    return -0.5 * float(z @ D @ z)
