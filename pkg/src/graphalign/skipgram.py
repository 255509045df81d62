"""Skip-gram with negative sampling over walk corpora.

The inner loop is compiled with numba; everything is single-threaded and
seeded so repeated runs produce bit-identical matrices.  Negative samples are
drawn from the unigram distribution of the walk corpus raised to the 3/4
power.  The learning rate decays linearly from ``learning_rate`` down to a
floor of 1e-4 over all (center, context) pairs of all epochs.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DataError
from .validation import check_count, check_positive

LR_FLOOR = 1e-4


@dataclass
class SkipGramConfig:
    dim: int = 64
    window: int = 10
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    seed: int = 0

    def validate(self):
        check_count(self.dim, "dim", 1)
        check_count(self.window, "window", 1)
        check_count(self.negatives, "negatives", 1)
        check_count(self.epochs, "epochs", 1)
        check_positive(self.learning_rate, "learning_rate")
        return self


@njit(cache=True)
def _sgns_epochs(flat, offsets, w_in, w_out, cdf, window, k_neg, epochs, lr0, lr_min, seed):
    np.random.seed(seed)
    n_walks = offsets.shape[0] - 1
    dim = w_in.shape[1]
    total = 0
    for wi in range(n_walks):
        length = offsets[wi + 1] - offsets[wi]
        for t in range(length):
            lo = max(0, t - window)
            hi = min(length - 1, t + window)
            total += hi - lo
    total *= epochs
    losses = np.zeros(epochs)
    done = 0
    upd_c = np.empty(dim)
    for ep in range(epochs):
        loss_sum = 0.0
        loss_n = 0
        for wi in range(n_walks):
            start = offsets[wi]
            length = offsets[wi + 1] - start
            for t in range(length):
                c = flat[start + t]
                lo = max(0, t - window)
                hi = min(length - 1, t + window)
                for pos in range(lo, hi + 1):
                    if pos == t:
                        continue
                    o = flat[start + pos]
                    lr = lr0 * (1.0 - done / total)
                    if lr < lr_min:
                        lr = lr_min
                    done += 1
                    for k in range(dim):
                        upd_c[k] = 0.0
                    pair_loss = 0.0
                    # positive pair: push score up
                    z = 0.0
                    for k in range(dim):
                        z += w_in[c, k] * w_out[o, k]
                    if z >= 0.0:
                        s = 1.0 / (1.0 + np.exp(-z))
                    else:
                        e = np.exp(z)
                        s = e / (1.0 + e)
                    g = (1.0 - s) * lr
                    pair_loss -= np.log(max(s, 1e-12))
                    for k in range(dim):
                        upd_c[k] += g * w_out[o, k]
                        w_out[o, k] += g * w_in[c, k]
                    # negatives: push scores down
                    for _ in range(k_neg):
                        r = np.random.random()
                        neg = np.searchsorted(cdf, r)
                        if neg == o:
                            continue
                        z = 0.0
                        for k in range(dim):
                            z += w_in[c, k] * w_out[neg, k]
                        if z >= 0.0:
                            s = 1.0 / (1.0 + np.exp(-z))
                        else:
                            e = np.exp(z)
                            s = e / (1.0 + e)
                        pair_loss -= np.log(max(1.0 - s, 1e-12))
                        for k in range(dim):
                            upd_c[k] -= s * lr * w_out[neg, k]
                            w_out[neg, k] -= s * lr * w_in[c, k]
                    for k in range(dim):
                        w_in[c, k] += upd_c[k]
                    loss_sum += pair_loss
                    loss_n += 1
        losses[ep] = loss_sum / max(1, loss_n)
    return losses


def _flatten_walks(walks):
    flat = np.concatenate([np.asarray(w, dtype=np.int64) for w in walks])
    offsets = np.zeros(len(walks) + 1, dtype=np.int64)
    for i, w in enumerate(walks):
        offsets[i + 1] = offsets[i] + len(w)
    return flat, offsets


def negative_sampling_cdf(flat, vocab_size):
    """Cumulative distribution of corpus unigram frequencies ^ 0.75."""
    counts = np.bincount(flat, minlength=vocab_size).astype(np.float64)
    probs = counts**0.75
    s = probs.sum()
    if s <= 0:
        raise DataError("walk corpus is empty")
    return np.cumsum(probs / s)


def train_skipgram(walks, vocab_size, cfg):
    """Train embeddings over a walk corpus.

    Returns ``(matrix, epoch_losses)``: the input-side vector table of shape
    (vocab_size, dim) and the mean per-pair objective of each epoch.  The
    context-side table is discarded.  Fixed seed, fixed corpus => identical
    outputs.
    """
    cfg.validate()
    if not walks:
        raise DataError("empty walk list")
    flat, offsets = _flatten_walks(walks)
    if flat.min() < 0 or flat.max() >= vocab_size:
        raise DataError("walk entries must lie in [0, vocab_size)")
    cdf = negative_sampling_cdf(flat, vocab_size)
    rng = np.random.default_rng(cfg.seed)
    w_in = rng.uniform(-0.5 / cfg.dim, 0.5 / cfg.dim, (vocab_size, cfg.dim))
    w_out = np.zeros((vocab_size, cfg.dim))
    losses = _sgns_epochs(
        flat,
        offsets,
        w_in,
        w_out,
        cdf,
        cfg.window,
        cfg.negatives,
        cfg.epochs,
        cfg.learning_rate,
        LR_FLOOR,
        cfg.seed % (2**31 - 1),
    )
    if not np.all(np.isfinite(w_in)):
        raise DataError("training produced non-finite embeddings")
    return w_in, losses
