"""PCA coordinates via the iterated power method with deflation.

Used to export 2-d plot coordinates for embedding clouds.  Components are
ordered by decreasing explained variance; each component's sign is fixed so
its largest-magnitude loading is positive, making coordinates reproducible.
"""

import warnings

import numpy as np

from .embedding import EmbeddingMatrix
from .errors import DataError
from .validation import as_float_matrix

_MAX_ITER = 1000
_TOL = 1e-12


def _power_iteration(cov, start):
    v = start / np.linalg.norm(start)
    lam = 0.0
    for _ in range(_MAX_ITER):
        w = cov @ v
        norm = np.linalg.norm(w)
        if norm <= _TOL:
            return 0.0, v
        w /= norm
        converged = abs(1.0 - abs(w @ v)) < _TOL
        v = w
        lam = float(v @ (cov @ v))
        if converged:
            break
    return lam, v


def _top_components(x, k):
    """(components (k, d), variances (k,), index of first zero-filled comp)."""
    n, d = x.shape
    centered = x - x.mean(axis=0)
    cov = (centered.T @ centered) / (n - 1)
    scale = max(float(np.trace(cov)), 1.0)
    rng = np.random.default_rng(0)
    components = np.zeros((k, d))
    variances = np.zeros(k)
    deflated = cov.copy()
    rank_deficient_from = None
    for c in range(k):
        lam, v = _power_iteration(deflated, rng.standard_normal(d))
        if lam <= scale * 1e-12:
            rank_deficient_from = c
            break
        j = int(np.argmax(np.abs(v)))
        if v[j] < 0:
            v = -v
        components[c] = v
        variances[c] = lam
        deflated = deflated - lam * np.outer(v, v)
    return components, variances, rank_deficient_from


def _as_matrix(x):
    if isinstance(x, EmbeddingMatrix):
        x = x.vectors
    return as_float_matrix(x, "x")


def pca_project(x, k=2):
    """Center the rows of ``x`` and project onto the top-k principal axes.

    Returns an (n, k) coordinate array.  Rank-deficient trailing components
    are zero-filled with a warning.
    """
    x = _as_matrix(x)
    n, d = x.shape
    if n < 2:
        raise DataError("need at least 2 rows for PCA")
    if not 1 <= k <= d:
        raise DataError("k must lie in [1, %d], got %d" % (d, k))
    components, _, rank_deficient_from = _top_components(x, k)
    if rank_deficient_from is not None:
        warnings.warn(
            "data rank < k; components %d.. are zero-filled" % rank_deficient_from,
            stacklevel=2,
        )
    return (x - x.mean(axis=0)) @ components.T


def explained_variances(x, k=2):
    """Top-k eigenvalues of the sample covariance, by the same iteration."""
    x = _as_matrix(x)
    _, variances, _ = _top_components(x, k)
    return variances


def write_coordinates(coords, labels, path):
    """Tab-separated ``label c1 ... ck`` rows (repr floats)."""
    coords = as_float_matrix(coords, "coords")
    if len(labels) != coords.shape[0]:
        raise DataError("label count does not match coordinate rows")
    with open(path, "w", encoding="utf-8") as fh:
        for lab, row in zip(labels, coords):
            fh.write("%s\t%s\n" % (lab, "\t".join(repr(float(v)) for v in row)))
