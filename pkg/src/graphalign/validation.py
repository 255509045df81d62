"""Small input-validation helpers used across the package.

Every public entry point funnels its array/scalar checking through these so
error messages stay uniform and the numeric code can assume clean inputs.
"""

import numpy as np

from .errors import DataError


def as_float_matrix(x, name="x"):
    """Coerce to a 2-D float64 array, rejecting non-finite entries."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise DataError("%s must be 2-D, got shape %s" % (name, (a.shape,)))
    if a.shape[0] == 0 or a.shape[1] == 0:
        raise DataError("%s must be non-empty, got shape %s" % (name, (a.shape,)))
    check_finite(a, name)
    return a


def as_float_vector(x, name="x"):
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 1:
        raise DataError("%s must be 1-D, got shape %s" % (name, (a.shape,)))
    check_finite(a, name)
    return a


def check_finite(a, name="array"):
    if not np.all(np.isfinite(a)):
        raise DataError("%s contains non-finite values" % name)


def check_same_dim(a, b, name_a="a", name_b="b"):
    if a.shape[-1] != b.shape[-1]:
        raise DataError(
            "dimension mismatch: %s has d=%d, %s has d=%d"
            % (name_a, a.shape[-1], name_b, b.shape[-1])
        )


def check_fraction(f, name="fraction"):
    f = float(f)
    if not 0.0 <= f <= 1.0:
        raise DataError("%s must lie in [0, 1], got %r" % (name, f))
    return f


def check_positive(v, name="value"):
    if not v > 0:
        raise DataError("%s must be strictly positive, got %r" % (name, v))
    return v


def check_count(v, name="count", minimum=1):
    v = int(v)
    if v < minimum:
        raise DataError("%s must be >= %d, got %d" % (name, minimum, v))
    return v


def check_choice(v, choices, name="value"):
    if v not in choices:
        raise DataError("%s must be one of %s, got %r" % (name, sorted(choices), v))
    return v
