import numpy as np
import pytest

from graphalign.graph import graph_from_edges


@pytest.fixture
def triangle():
    return graph_from_edges([("a", "b"), ("b", "c"), ("a", "c")])


@pytest.fixture
def path4():
    """Path a-b-c-d."""
    return graph_from_edges([("a", "b"), ("b", "c"), ("c", "d")])


@pytest.fixture
def ring(request):
    n = getattr(request, "param", 12)
    return graph_from_edges([(str(i), str((i + 1) % n)) for i in range(n)])


@pytest.fixture
def rng():
    return np.random.default_rng(0)
