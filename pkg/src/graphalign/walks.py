"""Second-order biased random walks over a graph.

The walk bias follows the usual return/in-out parameterization: from the
current node, stepping back to the previous node carries unnormalized weight
1/p, moving to a common neighbor of the previous node weight 1, and moving
two hops away from the previous node weight 1/q.  The first step of a walk is
uniform over neighbors.

Each (seed, start node, walk repeat) triple owns an independent random
stream, so walk generation is reproducible regardless of execution order and
could be fanned out across workers without changing the output.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .validation import check_count, check_positive


@dataclass
class WalkConfig:
    walks_per_node: int = 10
    walk_length: int = 80
    p: float = 1.0
    q: float = 1.0
    seed: int = 0

    def validate(self):
        check_count(self.walks_per_node, "walks_per_node", 1)
        check_count(self.walk_length, "walk_length", 2)
        check_positive(self.p, "p")
        check_positive(self.q, "q")
        return self


def step_distribution(g, prev, cur, p=1.0, q=1.0):
    """Transition probabilities over ``g.adjacency[cur]`` (in that order).

    ``prev=None`` marks the first step of a walk (uniform).  Raises
    :class:`DataError` for isolated ``cur``; callers skip isolated nodes.
    """
    check_positive(p, "p")
    check_positive(q, "q")
    nbrs = g.adjacency[cur]
    if not nbrs:
        raise DataError("node %d is isolated; no step distribution" % cur)
    if prev is None:
        return np.full(len(nbrs), 1.0 / len(nbrs))
    w = _step_weights(g, prev, cur, p, q)
    return w / w.sum()


def _step_weights(g, prev, cur, p, q):
    nbrs = g.adjacency[cur]
    prev_nbrs = set(g.adjacency[prev])
    w = np.empty(len(nbrs))
    for k, nb in enumerate(nbrs):
        if nb == prev:
            w[k] = 1.0 / p
        elif nb in prev_nbrs:
            w[k] = 1.0
        else:
            w[k] = 1.0 / q
    return w


def generate_walks(g, cfg):
    """Run ``cfg.walks_per_node`` biased walks from every non-isolated node.

    Returns a list of int64 index arrays of length ``cfg.walk_length``
    (shorter only if a dead end were reachable, which cannot happen on an
    undirected graph once a first step exists).  Isolated nodes are skipped.
    """
    cfg.validate()
    walks = []
    for node in range(g.num_nodes):
        if not g.adjacency[node]:
            continue
        for rep in range(cfg.walks_per_node):
            rng = np.random.default_rng([cfg.seed, node, rep])
            walks.append(_one_walk(g, node, cfg, rng))
    return walks


def _one_walk(g, start, cfg, rng):
    walk = np.empty(cfg.walk_length, dtype=np.int64)
    walk[0] = start
    prev = None
    cur = start
    steps = 1
    for t in range(1, cfg.walk_length):
        nbrs = g.adjacency[cur]
        if not nbrs:
            break
        if prev is None:
            k = int(rng.integers(0, len(nbrs)))
        else:
            w = _step_weights(g, prev, cur, cfg.p, cfg.q)
            cum = np.cumsum(w)
            u = rng.random() * cum[-1]
            k = min(int(np.searchsorted(cum, u, side="right")), len(nbrs) - 1)
        prev, cur = cur, nbrs[k]
        walk[t] = cur
        steps += 1
    return walk[:steps]


def isolated_nodes(g):
    return [i for i in range(g.num_nodes) if not g.adjacency[i]]
