"""End-to-end pipelines and benchmark harnesses.

``run_pipeline`` chains embed -> model_select -> bidirectional matching for a
pair of graphs; ``run_noise_experiment`` builds pseudo-ground-truth pairs by
permuting a graph and deleting a growing fraction of its edges, then measures
alignment accuracy per noise level.  Also here: seeded synthetic fixtures —
a small-world benchmark graph and the rotated-gaussian distribution-recovery
task used throughout the tests.
"""

import json
import os
import time
from dataclasses import asdict, dataclass, field

import networkx as nx
import numpy as np

from .embedding import embed_graph, write_embeddings
from .errors import DataError, GraphAlignError
from .graph import correspondence_from_permutation, graph_from_edges, permute_nodes, remove_edges
from .matching import align_bidirectional, write_alignment
from .metrics import accuracy
from .skipgram import SkipGramConfig
from .training import TrainConfig, model_select, save_aligner, write_train_log
from .validation import check_fraction
from .walks import WalkConfig


@dataclass
class PipelineConfig:
    """Per-graph embedding configs plus the training grid and output dir."""

    walk1: WalkConfig = field(default_factory=WalkConfig)
    skipgram1: SkipGramConfig = field(default_factory=SkipGramConfig)
    walk2: WalkConfig = field(default_factory=WalkConfig)
    skipgram2: SkipGramConfig = field(default_factory=SkipGramConfig)
    grid: list = field(default_factory=lambda: [TrainConfig()])
    outdir: str = None

    @classmethod
    def shared(cls, walk=None, skipgram=None, grid=None, outdir=None, seed_offset=1):
        """Same embedding settings for both graphs, with graph 2's seeds
        shifted by ``seed_offset`` so the two embeddings stay independent."""
        walk = walk or WalkConfig()
        skipgram = skipgram or SkipGramConfig()
        walk2 = WalkConfig(**{**asdict(walk), "seed": walk.seed + seed_offset})
        skipgram2 = SkipGramConfig(**{**asdict(skipgram), "seed": skipgram.seed + seed_offset})
        return cls(
            walk1=walk,
            skipgram1=skipgram,
            walk2=walk2,
            skipgram2=skipgram2,
            grid=grid or [TrainConfig()],
            outdir=outdir,
        )

    def validate(self):
        self.walk1.validate()
        self.walk2.validate()
        self.skipgram1.validate()
        self.skipgram2.validate()
        if not self.grid:
            raise DataError("pipeline grid must be non-empty")
        for cfg in self.grid:
            cfg.validate()
        return self


@dataclass
class NoiseRecord:
    noise: float
    accuracy: float
    mean_nn_distance: float
    direction: str
    runtime_seconds: float


@dataclass
class ExperimentReport:
    records: list
    config: dict
    seed: int


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except GraphAlignError as err:
        wrapped = type(err)("%s stage: %s" % (name, err))
        wrapped.__dict__.update(err.__dict__)
        raise wrapped from err


def run_pipeline(g1, g2, cfg=None):
    """embed -> model_select -> align, persisting artifacts when ``outdir``
    is set.  Returns ``(AlignmentResult, TrainHistory)``."""
    cfg = (cfg or PipelineConfig()).validate()
    x1 = _stage("embed", embed_graph, g1, cfg.walk1, cfg.skipgram1)
    x2 = _stage("embed", embed_graph, g2, cfg.walk2, cfg.skipgram2)
    aligner, _ = _stage("train", model_select, x1, x2, cfg.grid)
    result = _stage("align", align_bidirectional, aligner, x1, x2)
    if cfg.outdir:
        os.makedirs(cfg.outdir, exist_ok=True)
        write_embeddings(x1, os.path.join(cfg.outdir, "embeddings1.txt"))
        write_embeddings(x2, os.path.join(cfg.outdir, "embeddings2.txt"))
        save_aligner(aligner, os.path.join(cfg.outdir, "aligner.json"))
        write_train_log(aligner.history, os.path.join(cfg.outdir, "train_log.tsv"))
        write_alignment(result, os.path.join(cfg.outdir, "alignment.tsv"))
    return result, aligner.history


def perturbed_copy(g, noise, seed=0):
    """Pseudo-ground-truth pair: permute ``g``, drop ``noise`` of the edges.

    Returns ``(perturbed graph, truth correspondence)``; the original graph
    plays the role of graph 2.
    """
    permuted, _ = permute_nodes(g, seed=seed)
    noisy = remove_edges(permuted, noise, seed=seed + 1)
    return noisy, correspondence_from_permutation(g)


def run_noise_experiment(g, noise_levels, cfg=None, seed=0, embed_fn=None):
    """Accuracy of the full pipeline at each noise level.

    ``noise_levels`` must be strictly increasing fractions.  ``embed_fn``
    (graph, walk config, skip-gram config) -> EmbeddingMatrix overrides the
    embedding front end (test hook).
    """
    cfg = (cfg or PipelineConfig()).validate()
    levels = [check_fraction(f, "noise level") for f in noise_levels]
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise DataError("noise levels must be strictly increasing")
    embed_fn = embed_fn or embed_graph
    records = []
    for i, level in enumerate(levels):
        t0 = time.monotonic()
        g1, truth = perturbed_copy(g, level, seed=seed + 7919 * i)
        x1 = _stage("embed", embed_fn, g1, cfg.walk1, cfg.skipgram1)
        x2 = _stage("embed", embed_fn, g, cfg.walk2, cfg.skipgram2)
        aligner, _ = _stage("train", model_select, x1, x2, cfg.grid)
        result = _stage("align", align_bidirectional, aligner, x1, x2)
        acc = _stage("eval", accuracy, result, truth)
        records.append(
            NoiseRecord(
                noise=level,
                accuracy=acc,
                mean_nn_distance=result.mean_nn_distance,
                direction=result.direction,
                runtime_seconds=time.monotonic() - t0,
            )
        )
    echo = {
        "walk1": asdict(cfg.walk1),
        "skipgram1": asdict(cfg.skipgram1),
        "walk2": asdict(cfg.walk2),
        "skipgram2": asdict(cfg.skipgram2),
        "grid": [asdict(c) for c in cfg.grid],
    }
    return ExperimentReport(records=records, config=echo, seed=seed)


def report_to_json(report):
    return json.dumps(
        {
            "seed": report.seed,
            "config": report.config,
            "records": [asdict(r) for r in report.records],
        }
    )


def report_from_json(text):
    raw = json.loads(text)
    return ExperimentReport(
        records=[NoiseRecord(**r) for r in raw["records"]],
        config=raw["config"],
        seed=raw["seed"],
    )


def watts_strogatz_benchmark(n=500, k=10, beta=0.1, seed=0):
    """Seeded small-world benchmark graph with string labels '0'..'n-1'."""
    ws = nx.watts_strogatz_graph(n, k, beta, seed=seed)
    edges = [(str(u), str(v)) for u, v in ws.edges()]
    return graph_from_edges(edges, extra_labels=[str(i) for i in range(n)])


def rotation_task(seed=0, n=300, d=8, scale=4.0, decay=0.7):
    """Distribution-recovery fixture: seeded gaussian cloud (per-dimension
    spread ``scale * decay**j``) and a copy rotated by a seeded random
    orthogonal matrix with determinant +1.  Returns ``(x1, x2, q)`` with
    ``x2 = x1 @ q``."""
    rng = np.random.default_rng(seed)
    x1 = rng.standard_normal((n, d)) * (scale * decay ** np.arange(d))
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return x1, x1 @ q, q
