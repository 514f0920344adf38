"""Distance-based discriminant analysis on transformed distances.

Each object is assigned to the group whose centroid is nearest in the space
induced by ``phi(D)``. Centroid distances come from the Huygens decomposition,
so no coordinates are ever formed::

    D~_ig = sum_j f^g_j phi(D_ij) - 1/2 sum_jk f^g_j f^g_k phi(D_jk)

with ``f^g`` uniform on the members of group ``g``. Accuracy is measured on
the training objects themselves (resubstitution).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import transforms as tr
from .distgeom import as_labels, as_squared_distances
from .errors import ValidationError
from .spectral import DEFAULT_TOL, is_cnd

FAMILIES = ("power", "log", "gaussian")
_CLAMP = 1e-10


@dataclass(frozen=True, eq=False)
class ClassificationResult:
    assignments: np.ndarray  # group numbers 1..m
    accuracy: float
    centroid_distances: np.ndarray  # n x m


@dataclass(frozen=True, eq=False)
class SweepResult:
    family: str
    grid: np.ndarray
    accuracy: np.ndarray
    invalid_transform: np.ndarray


def group_distributions(labels) -> np.ndarray:
    """Columns ``f^g`` (n x m): ``1/n_g`` on the members of group ``g``, 0 elsewhere."""
    labels = as_labels(labels)
    m = labels.max()
    member = labels[:, None] == np.arange(1, m + 1)[None, :]
    return member / member.sum(axis=0, keepdims=True)


def centroid_distances(Dt, labels) -> np.ndarray:
    """Squared distances from every object to every group centroid.

    Values within ``1e-10`` (relative) below zero are round-off and clamped;
    larger negative values can only come from a non-Euclidean ``Dt`` and are
    kept as they are.
    """
    F = group_distributions(labels)
    Dt = np.asarray(Dt, dtype=float)
    DF = Dt @ F
    within = 0.5 * np.einsum("jg,jg->g", F, DF)
    out = DF - within[None, :]
    floor = -_CLAMP * max(1.0, float(np.max(np.abs(Dt))))
    return np.where((out < 0) & (out >= floor), 0.0, out)


def assign(Dg) -> np.ndarray:
    """Argmin over groups; ties go to the lowest group number."""
    return np.argmin(Dg, axis=1) + 1


def classify_transformed(Dt, labels) -> ClassificationResult:
    labels = as_labels(labels)
    Dg = centroid_distances(Dt, labels)
    a = assign(Dg)
    return ClassificationResult(a, float(np.mean(a == labels)), Dg)


def classify(D, labels, t: tr.SchoenbergTransform = None, check: bool = True) -> ClassificationResult:
    """Transform ``D`` with ``t`` (identity by default) and classify every object."""
    t = tr.identity() if t is None else t
    Dt = tr.apply(t, D, check=check)
    return classify_transformed(Dt, labels)


def family_transform(family: str, a: float) -> tr.SchoenbergTransform:
    """Member of a one-parameter family as used in parameter sweeps.

    ``power``: ``D^a``; ``log``: ``ln(1 + a D)``; ``gaussian``: ``1 - exp(-a D)``.
    """
    if family not in FAMILIES:
        raise ValidationError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if a <= 0:
        raise ValidationError(f"{family} parameter must be positive, got {a!r}")
    if family == "power":
        return tr.power(a)
    if family == "log":
        return tr.log(1.0 / a)
    return tr.gaussian(a)


def _sweep_point(D, labels, family, a, tol):
    if family == "power" and a > 1:
        # not a Schoenberg transformation; kept to show the failure mode
        Dt = D**a
    else:
        Dt = tr.apply(family_transform(family, a), D, check=False)
    invalid = not is_cnd(Dt, tol)
    return classify_transformed(Dt, labels).accuracy, invalid


def parameter_sweep(D, labels, family: str, grid, tol: float = DEFAULT_TOL) -> SweepResult:
    """Resubstitution accuracy for each parameter value of a transform family.

    Power exponents above 1 are allowed and mapped entrywise without any
    Euclidean guarantee. Every grid point records whether the transformed
    matrix failed the c.n.d. test (``invalid_transform``).
    """
    if family not in FAMILIES:
        raise ValidationError(f"unknown family {family!r}; expected one of {FAMILIES}")
    D = as_squared_distances(D)
    labels = as_labels(labels)
    if labels.size != D.shape[0]:
        raise ValidationError(f"{labels.size} labels for a matrix of order {D.shape[0]}")
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise ValidationError("empty parameter grid")
    bad = grid[~(grid > 0)]
    if bad.size:
        raise ValidationError(f"{family} grid values must be positive, got {bad[0]!r}")
    acc = np.empty(grid.size)
    invalid = np.empty(grid.size, dtype=bool)
    for k, a in enumerate(grid):
        acc[k], invalid[k] = _sweep_point(D, labels, family, float(a), tol)
    return SweepResult(family, grid, acc, invalid)
