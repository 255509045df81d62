"""Thin scikit-learn style facade over the functional API.

Three estimators cover the pipeline stages: ``NodeEmbedder`` (graph ->
embedding matrix), ``DistributionAligner`` (two embedding matrices -> fitted
mappers), and ``NearestNodeMatcher`` (mapped vectors -> target indices).
Hyper-parameters are plain ``__init__`` args so ``get_params`` /
``set_params`` / ``clone`` work the usual way; fitted state lives in
trailing-underscore attributes.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .embedding import embed_graph
from .kdtree import KdTree
from .skipgram import SkipGramConfig
from .training import TrainConfig, model_select, train
from .validation import as_float_matrix, check_same_dim
from .walks import WalkConfig


def _require_fitted(est, attr):
    if not hasattr(est, attr):
        raise NotFittedError(
            "%s is not fitted yet; call fit() first" % type(est).__name__
        )


class NodeEmbedder(BaseEstimator):
    """Random-walk + skip-gram node embeddings with an estimator interface."""

    def __init__(
        self,
        walks_per_node=10,
        walk_length=80,
        p=1.0,
        q=1.0,
        dim=64,
        window=10,
        negatives=5,
        epochs=5,
        learning_rate=0.025,
        seed=0,
    ):
        self.walks_per_node = walks_per_node
        self.walk_length = walk_length
        self.p = p
        self.q = q
        self.dim = dim
        self.window = window
        self.negatives = negatives
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed

    def _configs(self):
        walk = WalkConfig(
            walks_per_node=self.walks_per_node,
            walk_length=self.walk_length,
            p=self.p,
            q=self.q,
            seed=self.seed,
        )
        sg = SkipGramConfig(
            dim=self.dim,
            window=self.window,
            negatives=self.negatives,
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            seed=self.seed,
        )
        return walk, sg

    def fit(self, graph, y=None):
        walk, sg = self._configs()
        self.embedding_ = embed_graph(graph, walk, sg)
        return self

    def transform(self, graph=None):
        """Vectors for the graph seen at fit time (stateful transform)."""
        _require_fitted(self, "embedding_")
        return self.embedding_.vectors

    def fit_transform(self, graph, y=None):
        return self.fit(graph).transform()


class DistributionAligner(BaseEstimator):
    """Bidirectional adversarial alignment of two embedding distributions."""

    def __init__(
        self,
        lam=10.0,
        eta=1,
        epochs=200,
        batch_size=32,
        seed=0,
        mapper_variant="linear",
        snapshot_every=10,
        grid=None,
    ):
        self.lam = lam
        self.eta = eta
        self.epochs = epochs
        self.batch_size = batch_size
        self.seed = seed
        self.mapper_variant = mapper_variant
        self.snapshot_every = snapshot_every
        self.grid = grid

    def _base_config(self):
        return TrainConfig(
            lam=self.lam,
            eta=self.eta,
            epochs=self.epochs,
            batch_size=self.batch_size,
            seed=self.seed,
            mapper_variant=self.mapper_variant,
            snapshot_every=self.snapshot_every,
        )

    def fit(self, x1, x2):
        x1 = as_float_matrix(x1, "x1")
        x2 = as_float_matrix(x2, "x2")
        check_same_dim(x1, x2)
        if self.grid is not None:
            self.aligner_, self.selection_ = model_select(x1, x2, list(self.grid))
        else:
            self.aligner_ = train(x1, x2, self._base_config())
            self.selection_ = None
        return self

    def transform(self, x, direction="1to2"):
        _require_fitted(self, "aligner_")
        x = as_float_matrix(x, "x")
        return self.aligner_.map_points(x, direction)

    @property
    def history_(self):
        _require_fitted(self, "aligner_")
        return self.aligner_.history


class NearestNodeMatcher(BaseEstimator):
    """Exact nearest-neighbour matcher over a fixed target point set."""

    def __init__(self, leaf_size=16):
        self.leaf_size = leaf_size

    def fit(self, targets, y=None):
        targets = as_float_matrix(targets, "targets")
        self.tree_ = KdTree(targets, leaf_size=self.leaf_size)
        return self

    def predict(self, queries):
        _require_fitted(self, "tree_")
        queries = as_float_matrix(queries, "queries")
        indices, _ = self.tree_.query_many(queries)
        return indices

    def kneighbors(self, queries):
        """Indices and distances of the single nearest target per query."""
        _require_fitted(self, "tree_")
        queries = as_float_matrix(queries, "queries")
        indices, distances = self.tree_.query_many(queries)
        return np.asarray(indices), np.asarray(distances)
