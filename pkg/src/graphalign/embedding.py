"""Embedding matrices: the walk+skip-gram front end and the text file format.

The file format follows the word2vec text convention — first line ``n d``,
then one ``label v1 ... vd`` line per node — so embeddings produced elsewhere
can be dropped into the pipeline in place of this module's output.  Floats
are written with ``repr`` and therefore round-trip exactly.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataError, ParseError
from .skipgram import SkipGramConfig, train_skipgram
from .validation import as_float_matrix
from .walks import WalkConfig, generate_walks, isolated_nodes


@dataclass
class EmbeddingMatrix:
    vectors: np.ndarray  # (n, d) float64
    labels: list  # index -> node identifier

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2:
            raise DataError("embedding vectors must be 2-D")
        if len(self.labels) != self.vectors.shape[0]:
            raise DataError("label count does not match row count")
        if len(set(self.labels)) != len(self.labels):
            raise DataError("duplicate embedding labels")
        if not np.all(np.isfinite(self.vectors)):
            raise DataError("embedding contains non-finite values")

    @property
    def n(self):
        return self.vectors.shape[0]

    @property
    def dim(self):
        return self.vectors.shape[1]


def embed_graph(g, wcfg=None, scfg=None):
    """Walks + skip-gram for one graph; isolated nodes get the zero vector."""
    wcfg = wcfg or WalkConfig()
    scfg = scfg or SkipGramConfig()
    walks = generate_walks(g, wcfg)
    if not walks:
        raise DataError("graph has no edges; nothing to embed")
    vectors, _ = train_skipgram(walks, g.num_nodes, scfg)
    isolates = isolated_nodes(g)
    if isolates:
        warnings.warn(
            "%d isolated node(s) received the zero vector" % len(isolates),
            stacklevel=2,
        )
        vectors[isolates] = 0.0
    return EmbeddingMatrix(vectors, list(g.labels))


def standardize_embeddings(emb):
    """Per-dimension standardization: subtract the mean, divide by the
    standard deviation (dimensions with zero spread are left centered)."""
    x = emb.vectors
    mu = x.mean(axis=0)
    sd = x.std(axis=0)
    sd = np.where(sd > 0, sd, 1.0)
    return EmbeddingMatrix((x - mu) / sd, list(emb.labels))


def write_embeddings(emb, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%d %d\n" % (emb.n, emb.dim))
        for i in range(emb.n):
            label = str(emb.labels[i])
            if any(ch.isspace() for ch in label):
                raise DataError("label %r contains whitespace" % label)
            row = " ".join(repr(float(v)) for v in emb.vectors[i])
            fh.write("%s %s\n" % (label, row))


def read_embeddings(path):
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError("expected header 'n d'", 1)
        try:
            n, d = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError("non-integer header 'n d'", 1) from None
        labels = []
        vectors = np.empty((n, d))
        for i in range(n):
            line = fh.readline()
            if not line:
                raise ParseError("expected %d rows, file ended at %d" % (n, i), i + 1)
            tokens = line.split()
            if len(tokens) != d + 1:
                raise ParseError(
                    "expected %d values after the label, got %d" % (d, len(tokens) - 1),
                    i + 2,
                )
            labels.append(tokens[0])
            try:
                vectors[i] = [float(t) for t in tokens[1:]]
            except ValueError:
                raise ParseError("non-numeric vector entry", i + 2) from None
    as_float_matrix(vectors, "embedding")
    return EmbeddingMatrix(vectors, labels)
