"""Synthetic configurations, CSV ingestion and distance construction.

Random draws come from numpy's PCG64 bit generator seeded directly with the
integer seed. Uniform variates use ``Generator.random`` (53 random bits per
double) and normal variates ``Generator.standard_normal`` (ziggurat), so a
given seed reproduces the same cloud on every platform numpy supports.

CSV layout: UTF-8, comma separated, a header line ``x1,...,xp`` and an
optional trailing ``label`` column holding group numbers 1..m.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from .distgeom import as_labels
from .errors import ParseError, SingularCovarianceError, ValidationError

log = logging.getLogger(__name__)

CIRCLE_RADII = (1.0, 3.0, 5.0)
CIRCLE_SDS = (0.1, 0.3, 0.2)


@dataclass(frozen=True, eq=False)
class PointCloud:
    coordinates: np.ndarray
    labels: Optional[np.ndarray] = None
    provenance: str = ""

    def __post_init__(self):
        X = np.asarray(self.coordinates, dtype=float)
        if X.ndim != 2 or X.shape[0] == 0:
            raise ValidationError(f"coordinates must be a nonempty n x p array, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValidationError("coordinates must be finite")
        object.__setattr__(self, "coordinates", X)
        if self.labels is not None:
            labels = as_labels(self.labels)
            if labels.size != X.shape[0]:
                raise ValidationError(f"{labels.size} labels for {X.shape[0]} points")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.coordinates.shape[0]

    @property
    def p(self) -> int:
        return self.coordinates.shape[1]


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def generate_grid(side: int = 10, spacing: float = 1.0) -> PointCloud:
    """``side**2`` points on a square lattice, row-major in the first axis."""
    if side < 2:
        raise ValidationError("grid side must be at least 2")
    if spacing <= 0:
        raise ValidationError("grid spacing must be positive")
    i, j = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    X = spacing * np.column_stack([i.ravel(), j.ravel()]).astype(float)
    return PointCloud(X, provenance=f"grid(side={side}, spacing={spacing})")


def generate_rod(n: int = 1000, seed: int = 0) -> PointCloud:
    """A thin rod: first coordinate U(0, 1000), second U(0, 1).

    All first coordinates are drawn before the second ones.
    """
    if n < 2:
        raise ValidationError("rod needs at least 2 points")
    rng = _rng(seed)
    x1 = 1000.0 * rng.random(n)
    x2 = rng.random(n)
    return PointCloud(np.column_stack([x1, x2]), provenance=f"rod(n={n}, seed={seed})")


def generate_circles(per_group: int = 50, seed: int = 0, radii=CIRCLE_RADII, sds=CIRCLE_SDS) -> PointCloud:
    """Three noisy concentric circles, labelled 1..3 from the inside out.

    For each group in turn, ``per_group`` angles are drawn uniformly on
    [0, 2 pi), then ``per_group`` radii ``r_g + s_g Z`` with Z standard
    normal. Negative radii are kept (the point reflects through the origin).
    """
    if per_group < 1:
        raise ValidationError("per_group must be at least 1")
    rng = _rng(seed)
    blocks, labels = [], []
    for g, (r, s) in enumerate(zip(radii, sds), start=1):
        theta = 2.0 * math.pi * rng.random(per_group)
        rad = r + s * rng.standard_normal(per_group)
        blocks.append(np.column_stack([rad * np.cos(theta), rad * np.sin(theta)]))
        labels.append(np.full(per_group, g))
    return PointCloud(
        np.vstack(blocks),
        np.concatenate(labels),
        provenance=f"circles(per_group={per_group}, seed={seed})",
    )


def squared_distances(X) -> np.ndarray:
    """``D_ij = sum_a (x_ia - x_ja)^2`` computed from coordinate differences."""
    if isinstance(X, PointCloud):
        X = X.coordinates
    X = np.asarray(X, dtype=float)
    D = cdist(X, X, "sqeuclidean")
    np.fill_diagonal(D, 0.0)
    return D


def _pooled_within_covariance(X, labels):
    groups = np.unique(labels)
    S = np.zeros((X.shape[1], X.shape[1]))
    for g in groups:
        Xg = X[labels == g]
        Xg = Xg - Xg.mean(axis=0)
        S += Xg.T @ Xg
    dof = X.shape[0] - groups.size
    if dof < 1:
        raise ValidationError("pooled covariance needs more points than groups")
    return S / dof


def mahalanobis_standardize(
    cloud: PointCloud,
    within_groups: bool = False,
    rank_tol: float = 1e-10,
    variance_tol: float = 1e-12,
) -> PointCloud:
    """Whiten coordinates so Euclidean distances become Mahalanobis distances.

    The cloud is centred and multiplied by ``S^(-1/2)``, the symmetric inverse
    square root of a covariance ``S`` (unbiased, ``n - 1`` or ``n - m``
    denominators). By default ``S`` is the total sample covariance. With
    ``within_groups`` it is the pooled within-group covariance of the
    labelled cloud, the metric of Fisher's linear discriminant; the pooled
    covariance of the output is then the identity.

    Columns whose variance is at most ``variance_tol`` times the largest are
    dropped first. A covariance whose smallest eigenvalue is at most
    ``rank_tol`` times its largest raises :class:`SingularCovarianceError`.
    """
    X = cloud.coordinates
    if X.shape[0] < 2:
        raise ValidationError("standardization needs at least 2 points")
    var = X.var(axis=0)
    keep = var > variance_tol * var.max() if var.max() > 0 else np.zeros(X.shape[1], dtype=bool)
    if not keep.any():
        raise SingularCovarianceError("all columns are constant", np.eye(X.shape[1]))
    if not keep.all():
        log.warning("dropping near-constant columns %s", (np.flatnonzero(~keep) + 1).tolist())
        X = X[:, keep]
    if within_groups:
        if cloud.labels is None:
            raise ValidationError("within-group standardization needs labels")
        S = _pooled_within_covariance(X, cloud.labels)
    else:
        S = np.cov(X, rowvar=False).reshape(X.shape[1], X.shape[1])
    w, U = np.linalg.eigh(S)
    deficient = w <= rank_tol * w[-1]
    if deficient.any():
        dirs = U[:, deficient].T
        raise SingularCovarianceError(
            "covariance is singular along directions "
            + "; ".join("(" + ", ".join(f"{c:.4g}" for c in d) + ")" for d in dirs),
            dirs,
        )
    W = (U / np.sqrt(w)) @ U.T
    Z = (X - X.mean(axis=0)) @ W
    return replace(cloud, coordinates=Z, provenance=f"mahalanobis({cloud.provenance})")


def load_csv(path) -> PointCloud:
    """Read a cloud written in the ``x1..xp[,label]`` layout."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise ParseError(f"{path}: empty file", line=1)
    header = [h.strip() for h in rows[0]]
    has_label = header[-1] == "label"
    coord_cols = header[:-1] if has_label else header
    expected = [f"x{k}" for k in range(1, len(coord_cols) + 1)]
    if not coord_cols or coord_cols != expected:
        bad = next((h for h, e in zip(coord_cols, expected) if h != e), header[0])
        raise ParseError(f"{path}: unknown header column {bad!r}; expected x1..xp[,label]", line=1)
    body = [(i, r) for i, r in enumerate(rows[1:], start=2) if any(c.strip() for c in r)]
    if not body:
        raise ParseError(f"{path}: no data rows", line=2)
    coords, labels = [], []
    for lineno, row in body:
        if len(row) != len(header):
            raise ParseError(f"{path}: expected {len(header)} fields, got {len(row)}", line=lineno)
        try:
            coords.append([float(c) for c in row[: len(coord_cols)]])
        except ValueError:
            raise ParseError(f"{path}: non-numeric cell in {row!r}", line=lineno) from None
        if has_label:
            try:
                labels.append(int(row[-1]))
            except ValueError:
                raise ParseError(f"{path}: label {row[-1]!r} is not an integer", line=lineno) from None
    try:
        return PointCloud(np.array(coords), np.array(labels) if has_label else None, provenance=str(path))
    except ValidationError as exc:
        raise ParseError(f"{path}: {exc}") from None


def format_number(x) -> str:
    """Shortest repr that round-trips; keeps written files byte-reproducible."""
    return repr(float(x))


def write_csv(path_or_file, X, labels=None, prefix="x") -> None:
    """Write rows of ``X`` under headers ``<prefix>1..<prefix>p`` (plus ``label``)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    header = [f"{prefix}{k}" for k in range(1, X.shape[1] + 1)]
    if labels is not None:
        header.append("label")

    def emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, row in enumerate(X):
            cells = [format_number(v) for v in row]
            if labels is not None:
                cells.append(str(int(labels[i])))
            w.writerow(cells)

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            emit(fh)


def load_matrix(path) -> np.ndarray:
    """Read a square headerless numeric CSV matrix."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError(f"{path}: empty file", line=1)
    n = len(rows)
    M = np.empty((n, n))
    for k, (lineno, row) in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"{path}: matrix row has {len(row)} fields, expected {n}", line=lineno)
        try:
            M[k] = [float(c) for c in row]
        except ValueError:
            raise ParseError(f"{path}: non-numeric cell in {row!r}", line=lineno) from None
    return M


def load_vector(path) -> np.ndarray:
    """Read one number per line (no header)."""
    path = Path(path)
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            cell = line.strip().rstrip(",")
            if not cell:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(f"{path}: non-numeric value {cell!r}", line=lineno) from None
    if not values:
        raise ParseError(f"{path}: empty file", line=1)
    return np.array(values)
