"""Schoenberg transformations of squared Euclidean distances.

Submodules
----------
spectral      symmetric eigendecomposition, p.d. and c.n.d. tests
distgeom      centring, scalar products, Huygens decomposition
mds           classical and weighted multidimensional scaling
transforms    catalog of Schoenberg transformations and their geometry
discriminant  nearest-centroid classification on transformed distances
datasets      synthetic clouds, CSV I/O, Mahalanobis standardization
cli           command-line interface
"""

from .errors import (
    ConvergenceError,
    NotEuclideanError,
    ParseError,
    SchoenbergError,
    ValidationError,
)
from .mds import Embedding, classical_mds, reconstruction_proportions, truncate, weighted_mds
from .transforms import SchoenbergTransform, apply, parse_transform

__version__ = "0.1.0"
