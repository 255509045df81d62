"""Bidirectional cycle-consistent adversarial training of two mappers.

One run owns four networks — mappers g12/g21 and critics d1/d2 — plus two
ADAM optimizers (one per side of the game).  Every epoch shuffles both
embedding matrices independently and pairs them into mini-batches (when the
sizes differ, the smaller matrix is resampled with replacement to cover the
larger).  Per batch the mappers take ``eta`` joint descent steps on the
composed loss, then both critics take one joint ascent step on the
adversarial values, computed against fresh mapper outputs.

Snapshots (losses on the full matrices plus both mean nearest-neighbor
distances) are recorded at epoch 0, every ``snapshot_every`` epochs, and at
the final epoch; parameter copies are stored with each record so the
snapshot with the smallest direction-averaged mean nearest-neighbor distance
— the unsupervised model-selection signal — can be restored afterwards.

Reproducibility contract: a single generator seeded with ``cfg.seed`` drives,
in order, g12 init, g21 init, d1 init (w1 then w2), d2 init, then per epoch
one permutation of each matrix (plus one resample draw when sizes differ).
Identical configs therefore yield bit-identical histories and parameters.
"""

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .embedding import EmbeddingMatrix
from .errors import DataError, NumericError
from .kdtree import KdTree
from .losses import (
    GENERATOR_LOSS_MODES,
    adv_loss_1to2,
    adv_loss_2to1,
    cycle_loss,
    discriminator_step_grads,
    generator_step_grads,
)
from .nets import (
    MAPPER_VARIANTS,
    adam_step,
    critic_from_dict,
    critic_param_list,
    critic_to_dict,
    init_critic,
    init_mapper,
    make_adam,
    mapper_forward,
    mapper_from_dict,
    mapper_param_list,
    mapper_to_dict,
)
from .validation import as_float_matrix, check_choice, check_count, check_positive, check_same_dim


@dataclass
class TrainConfig:
    lam: float = 10.0
    eta: int = 1
    epochs: int = 200
    batch_size: int = 32
    seed: int = 0
    mapper_variant: str = "linear"
    snapshot_every: int = 10
    generator_loss_mode: str = "nonsaturating"
    lr_g: float = 0.1
    lr_d: float = 0.1
    beta1: float = 0.5
    beta2: float = 0.999
    adam_eps: float = 1e-8
    hidden_units: int = 512
    critic_init_scale: float = 3.0
    mapper_init_noise: float = 0.01
    leaky_slope: float = 0.2

    def validate(self):
        if self.lam < 0:
            raise DataError("lam must be >= 0")
        check_count(self.eta, "eta", 1)
        check_count(self.epochs, "epochs", 0)
        check_count(self.batch_size, "batch_size", 1)
        check_count(self.snapshot_every, "snapshot_every", 1)
        check_choice(self.mapper_variant, MAPPER_VARIANTS, "mapper_variant")
        check_choice(self.generator_loss_mode, GENERATOR_LOSS_MODES, "generator_loss_mode")
        check_positive(self.lr_g, "lr_g")
        check_positive(self.lr_d, "lr_d")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise DataError("beta1/beta2 must lie in [0, 1)")
        check_count(self.hidden_units, "hidden_units", 1)
        check_positive(self.critic_init_scale, "critic_init_scale")
        if self.mapper_init_noise < 0:
            raise DataError("mapper_init_noise must be >= 0")
        if not 0.0 < self.leaky_slope < 1.0:
            raise DataError("leaky_slope must lie in (0, 1)")
        return self


@dataclass
class SnapshotRecord:
    epoch: int
    adv12: float
    adv21: float
    cyc: float
    total: float
    nn12: float
    nn21: float

    @property
    def heuristic(self):
        """Direction-averaged mean nearest-neighbor distance."""
        return 0.5 * (self.nn12 + self.nn21)


@dataclass
class TrainHistory:
    records: list = field(default_factory=list)
    best_snapshot: int = None


@dataclass
class TrainedAligner:
    g12: object
    g21: object
    d1: object
    d2: object
    history: TrainHistory
    snapshots: list  # parameter copies (g12, g21, d1, d2) per record
    config: TrainConfig

    def map_points(self, x, direction="1to2"):
        """Push vectors through the mapper for ``direction``."""
        v = _vectors(x, "x")
        if direction == "1to2":
            return mapper_forward(self.g12, v)
        if direction == "2to1":
            return mapper_forward(self.g21, v)
        raise DataError("unknown direction %r" % (direction,))


def _vectors(x, name):
    if isinstance(x, EmbeddingMatrix):
        return x.vectors
    return as_float_matrix(x, name)


def mean_nn_distance(mapped, target):
    """Mean Euclidean distance from each mapped row to its nearest target row."""
    m = _vectors(mapped, "mapped")
    t = _vectors(target, "target")
    check_same_dim(m, t, "mapped", "target")
    _, dist = KdTree(t).query_many(m)
    return float(dist.mean())


def train(x1, x2, cfg=None):
    """Run the adversarial alignment loop; see the module docstring.

    ``epochs=0`` returns the seeded initialization unchanged with an empty
    history.  Raises :class:`NumericError` (with the latest snapshot
    attached) if a non-finite loss appears.
    """
    cfg = (cfg or TrainConfig()).validate()
    mat1 = _vectors(x1, "x1")
    mat2 = _vectors(x2, "x2")
    check_same_dim(mat1, mat2, "x1", "x2")
    n1, dim = mat1.shape
    n2 = mat2.shape[0]

    rng = np.random.default_rng(cfg.seed)
    g12 = init_mapper(dim, rng, cfg.mapper_variant, cfg.mapper_init_noise, cfg.leaky_slope)
    g21 = init_mapper(dim, rng, cfg.mapper_variant, cfg.mapper_init_noise, cfg.leaky_slope)
    d1 = init_critic(dim, rng, cfg.hidden_units, cfg.critic_init_scale, cfg.leaky_slope)
    d2 = init_critic(dim, rng, cfg.hidden_units, cfg.critic_init_scale, cfg.leaky_slope)

    history = TrainHistory()
    snapshots = []
    if cfg.epochs == 0:
        return TrainedAligner(g12, g21, d1, d2, history, snapshots, cfg)

    tree1 = KdTree(mat1)
    tree2 = KdTree(mat2)

    def take_snapshot(epoch):
        a12 = adv_loss_1to2(g12, d2, mat1, mat2)
        a21 = adv_loss_2to1(g21, d1, mat1, mat2)
        cyc = cycle_loss(g12, g21, mat1, mat2)
        nn12 = float(tree2.query_many(mapper_forward(g12, mat1))[1].mean())
        nn21 = float(tree1.query_many(mapper_forward(g21, mat2))[1].mean())
        history.records.append(
            SnapshotRecord(epoch, a12, a21, cyc, a12 + a21 + cfg.lam * cyc, nn12, nn21)
        )
        snapshots.append((g12.copy(), g21.copy(), d1.copy(), d2.copy()))

    opt_g = make_adam(
        mapper_param_list(g12) + mapper_param_list(g21),
        cfg.lr_g,
        cfg.beta1,
        cfg.beta2,
        cfg.adam_eps,
    )
    opt_d = make_adam(
        critic_param_list(d1) + critic_param_list(d2),
        cfg.lr_d,
        cfg.beta1,
        cfg.beta2,
        cfg.adam_eps,
    )

    def fail(epoch, what):
        raise NumericError(
            "non-finite %s at epoch %d; aborting" % (what, epoch),
            snapshot=history.records[-1] if history.records else None,
        )

    take_snapshot(0)
    n_big = max(n1, n2)
    for epoch in range(1, cfg.epochs + 1):
        perm1 = rng.permutation(n1)
        perm2 = rng.permutation(n2)
        if n1 == n2:
            idx1, idx2 = perm1, perm2
        elif n1 < n2:
            idx1, idx2 = rng.integers(0, n1, n2), perm2
        else:
            idx1, idx2 = perm1, rng.integers(0, n2, n1)
        for s in range(0, n_big, cfg.batch_size):
            b1 = mat1[idx1[s : s + cfg.batch_size]]
            b2 = mat2[idx2[s : s + cfg.batch_size]]
            for _ in range(cfg.eta):
                value, grads12, grads21 = generator_step_grads(
                    g12, g21, d1, d2, b1, b2, cfg.lam, cfg.generator_loss_mode
                )
                if not np.isfinite(value):
                    fail(epoch, "generator loss")
                adam_step(
                    opt_g,
                    mapper_param_list(g12) + mapper_param_list(g21),
                    grads12 + grads21,
                )
            v12, v21, d1_grads, d2_grads = discriminator_step_grads(
                g12, g21, d1, d2, b1, b2
            )
            if not (np.isfinite(v12) and np.isfinite(v21)):
                fail(epoch, "discriminator loss")
            adam_step(
                opt_d,
                critic_param_list(d1) + critic_param_list(d2),
                [-g for g in d1_grads + d2_grads],
            )
        if epoch % cfg.snapshot_every == 0 or epoch == cfg.epochs:
            take_snapshot(epoch)

    heuristics = [r.heuristic for r in history.records]
    history.best_snapshot = int(np.argmin(heuristics))
    return TrainedAligner(g12, g21, d1, d2, history, snapshots, cfg)


def select_best(aligner):
    """Aligner with parameters restored from the best-heuristic snapshot."""
    b = aligner.history.best_snapshot
    if b is None or not aligner.snapshots:
        return aligner
    g12, g21, d1, d2 = (p.copy() for p in aligner.snapshots[b])
    return TrainedAligner(
        g12, g21, d1, d2, aligner.history, aligner.snapshots, aligner.config
    )


def best_heuristic_value(aligner):
    if not aligner.history.records:
        return float("inf")
    return min(r.heuristic for r in aligner.history.records)


def model_select(x1, x2, grid):
    """Train every config in ``grid``; return the aligner whose best snapshot
    attains the smallest direction-averaged mean nearest-neighbor distance
    (parameters restored from that snapshot), with its config.  Ties keep the
    earliest grid entry."""
    if not grid:
        raise DataError("model_select requires a non-empty grid")
    best = None
    best_cfg = None
    best_val = np.inf
    for cfg in grid:
        aligner = train(x1, x2, cfg)
        val = best_heuristic_value(aligner)
        if best is None or val < best_val:
            best, best_cfg, best_val = aligner, cfg, val
    return select_best(best), best_cfg


def write_train_log(history, path):
    """One tab-separated line per snapshot:
    ``epoch adv12 adv21 cyc total nn12 nn21``."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in history.records:
            fh.write(
                "%d\t%s\t%s\t%s\t%s\t%s\t%s\n"
                % (
                    r.epoch,
                    repr(r.adv12),
                    repr(r.adv21),
                    repr(r.cyc),
                    repr(r.total),
                    repr(r.nn12),
                    repr(r.nn21),
                )
            )


def save_aligner(aligner, path):
    """Checkpoint the four networks plus the config echo (JSON; exact
    float round trip via repr)."""
    payload = {
        "format": "aligner-v1",
        "config": asdict(aligner.config),
        "g12": mapper_to_dict(aligner.g12),
        "g21": mapper_to_dict(aligner.g21),
        "d1": critic_to_dict(aligner.d1),
        "d2": critic_to_dict(aligner.d2),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_aligner(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError("not an aligner checkpoint: %s (%s)" % (path, exc))
    if not isinstance(payload, dict) or payload.get("format") != "aligner-v1":
        raise DataError("not an aligner checkpoint: %s" % path)
    cfg = TrainConfig(**payload["config"])
    return TrainedAligner(
        mapper_from_dict(payload["g12"]),
        mapper_from_dict(payload["g21"]),
        critic_from_dict(payload["d1"]),
        critic_from_dict(payload["d2"]),
        TrainHistory(),
        [],
        cfg,
    )
