"""Evaluation: alignment accuracy against ground truth, and the
snapshot-by-snapshot diagnostic table relating the unsupervised
nearest-neighbor heuristic to the accuracy it is meant to track.
"""

from .errors import DataError
from .matching import DIRECTION_2TO1, align_bidirectional


def accuracy(result, truth):
    """Fraction of ground-truth pairs the alignment recovers exactly.

    ``truth`` pairs are oriented (label in graph 1, label in graph 2) and are
    flipped automatically when the result's chosen direction is 2-to-1.  The
    denominator is the number of ground-truth pairs whose source label occurs
    among the result's source nodes.
    """
    if not truth.pairs:
        raise DataError("empty ground-truth correspondence")
    predicted = result.as_dict()
    pairs = truth.pairs
    if result.direction == DIRECTION_2TO1:
        pairs = [(b, a) for a, b in pairs]
    evaluated = 0
    correct = 0
    for src, tgt in pairs:
        if src not in predicted:
            continue
        evaluated += 1
        if predicted[src] == tgt:
            correct += 1
    if evaluated == 0:
        raise DataError("no ground-truth source labels occur in the alignment")
    return correct / evaluated


def heuristic_report(aligner, truth, x1, x2):
    """Per-snapshot table of (epoch, heuristic distance, accuracy).

    Re-runs the bidirectional alignment at every stored snapshot, pairing the
    recorded direction-averaged mean nearest-neighbor distance with the
    accuracy that snapshot would have achieved.
    """
    from .training import TrainedAligner  # local import to avoid a cycle

    if not aligner.snapshots:
        raise DataError("aligner has no stored snapshots")
    rows = []
    for record, params in zip(aligner.history.records, aligner.snapshots):
        g12, g21, d1, d2 = params
        snap = TrainedAligner(g12, g21, d1, d2, aligner.history, [], aligner.config)
        result = align_bidirectional(snap, x1, x2)
        rows.append((record.epoch, record.heuristic, accuracy(result, truth)))
    return rows


def write_heuristic_report(rows, path):
    with open(path, "w", encoding="utf-8") as fh:
        for epoch, dist, acc in rows:
            fh.write("%d\t%s\t%s\n" % (epoch, repr(dist), repr(acc)))
