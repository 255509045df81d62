"""Node-to-node matching: map one embedding space into the other, pair every
source node with its exact nearest neighbor, and pick the better direction.

Matches are many-to-one by construction — each source node independently
takes its nearest target — and the bidirectional step keeps whichever
direction achieves the lower mean nearest-neighbor distance (exact ties
prefer 1-to-2).
"""

from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingMatrix
from .errors import DataError, ParseError
from .kdtree import KdTree
from .nets import mapper_forward
from .validation import check_same_dim

DIRECTION_1TO2 = "1to2"
DIRECTION_2TO1 = "2to1"


@dataclass
class AlignmentResult:
    pairs: list  # (source label, target label), one per source node
    direction: str
    mean_nn_distance: float
    per_pair_distance: list

    def as_dict(self):
        return dict(self.pairs)


def as_embedding(x):
    """Wrap a raw matrix as an EmbeddingMatrix with row-index labels."""
    if isinstance(x, EmbeddingMatrix):
        return x
    x = np.asarray(x, dtype=np.float64)
    return EmbeddingMatrix(x, [str(i) for i in range(x.shape[0])])


def align_direction(mapper, source, target, direction=DIRECTION_1TO2):
    """Map every source row through ``mapper`` and pair it with its exact
    nearest neighbor among the target rows."""
    src = as_embedding(source)
    tgt = as_embedding(target)
    check_same_dim(src.vectors, tgt.vectors, "source", "target")
    mapped = mapper_forward(mapper, src.vectors)
    idx, dist = KdTree(tgt.vectors).query_many(mapped)
    pairs = [(src.labels[i], tgt.labels[idx[i]]) for i in range(src.n)]
    return AlignmentResult(
        pairs=pairs,
        direction=direction,
        mean_nn_distance=float(dist.mean()),
        per_pair_distance=dist.tolist(),
    )


def align_bidirectional(aligner, x1, x2):
    """Run both directions and keep the one with the strictly lower mean
    nearest-neighbor distance (tie -> 1-to-2).  Pairs always read
    (node in the chosen source graph, matched node in the other graph)."""
    a1 = align_direction(aligner.g12, x1, x2, DIRECTION_1TO2)
    a2 = align_direction(aligner.g21, x2, x1, DIRECTION_2TO1)
    return a1 if a1.mean_nn_distance <= a2.mean_nn_distance else a2


def write_alignment(result, path):
    """Tab-separated ``source target distance`` lines behind a header
    comment recording the chosen direction and its mean distance."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            "# direction=%s mean_nn_distance=%s\n"
            % (result.direction, repr(result.mean_nn_distance))
        )
        for (src, tgt), dist in zip(result.pairs, result.per_pair_distance):
            fh.write("%s\t%s\t%s\n" % (src, tgt, repr(dist)))


def read_alignment(path):
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("# direction="):
            raise ParseError("missing alignment header", 1)
        fields = dict(
            part.split("=", 1) for part in header[2:].split() if "=" in part
        )
        direction = fields.get("direction")
        if direction not in (DIRECTION_1TO2, DIRECTION_2TO1):
            raise ParseError("unknown direction %r" % direction, 1)
        try:
            mean_dist = float(fields.get("mean_nn_distance", "nan"))
        except ValueError:
            raise ParseError("bad mean_nn_distance", 1) from None
        pairs = []
        dists = []
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError("expected 3 tab-separated fields", lineno)
            try:
                dists.append(float(parts[2]))
            except ValueError:
                raise ParseError("non-numeric distance", lineno) from None
            pairs.append((parts[0], parts[1]))
    if not pairs:
        raise DataError("alignment file has no pairs: %s" % path)
    return AlignmentResult(pairs, direction, mean_dist, dists)
