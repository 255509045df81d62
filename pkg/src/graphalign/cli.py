"""Command-line interface tying the pipeline stages together.

Subcommands: embed, perturb, train, select, align, eval, pipeline, pca,
stats.  Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric
failure.  Every command is seeded and writes deterministic files, so a rerun
with the same arguments is byte-identical.
"""

import argparse
import sys
from dataclasses import fields

from .embedding import embed_graph, read_embeddings, standardize_embeddings, write_embeddings
from .errors import DataError, GraphAlignError, NumericError, ParseError, UsageError
from .experiments import PipelineConfig, perturbed_copy, run_pipeline
from .graph import (
    graph_stats,
    read_correspondence,
    read_graph,
    write_correspondence,
    write_edge_list,
)
from .matching import align_bidirectional, read_alignment, write_alignment
from .metrics import accuracy
from .pca import pca_project, write_coordinates
from .skipgram import SkipGramConfig
from .training import TrainConfig, load_aligner, model_select, save_aligner, train, write_train_log
from .walks import WalkConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

# Short names accepted in grid/config files and mapped onto TrainConfig fields.
_TRAIN_ALIASES = {"lambda": "lam", "batch": "batch_size", "variant": "mapper_variant"}


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; the contract here is 1."""

    def error(self, message):
        raise UsageError("%s: %s" % (self.prog, message))


def _split_outputs(arg, count, what):
    parts = [p.strip() for p in arg.split(",")]
    if len(parts) != count or any(not p for p in parts):
        raise UsageError(
            "-o expects %d comma-separated paths (%s), got %r" % (count, what, arg)
        )
    return parts


def _read_kv_lines(path):
    """key=value per line; '#' starts a comment; blank lines skipped."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as err:
        raise DataError("cannot read %s: %s" % (path, err)) from err
    pairs = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ParseError("expected key=value in %s" % path, line=lineno)
        key, value = text.split("=", 1)
        pairs.append((lineno, key.strip(), value.strip()))
    return pairs


def _coerce_like(default, value, key, lineno=None):
    kind = type(default)
    try:
        if kind is bool:
            return value.lower() in ("1", "true", "yes")
        return kind(value)
    except ValueError as err:
        raise ParseError("bad value for %s: %r" % (key, value), line=lineno) from err


def _train_config_from_items(items, base=None):
    cfg = base or TrainConfig()
    valid = {f.name for f in fields(TrainConfig)}
    updates = {}
    for lineno, key, value in items:
        name = _TRAIN_ALIASES.get(key, key)
        if name not in valid:
            raise ParseError("unknown training option %r" % key, line=lineno)
        updates[name] = _coerce_like(getattr(cfg, name), value, key, lineno)
    return TrainConfig(**{**{f.name: getattr(cfg, f.name) for f in fields(TrainConfig)}, **updates})


def read_grid_file(path):
    """One training configuration per line, whitespace-separated key=value."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as err:
        raise DataError("cannot read %s: %s" % (path, err)) from err
    grid = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        items = []
        for token in text.split():
            if "=" not in token:
                raise ParseError("expected key=value token, got %r" % token, line=lineno)
            key, value = token.split("=", 1)
            items.append((lineno, key.strip(), value.strip()))
        grid.append(_train_config_from_items(items))
    if not grid:
        raise DataError("grid file %s holds no configurations" % path)
    return grid


def _walk_flags(parser):
    parser.add_argument("--walks", type=int, default=10, help="walks per node")
    parser.add_argument("--length", type=int, default=80, help="steps per walk")
    parser.add_argument("--p", type=float, default=1.0, help="return parameter")
    parser.add_argument("--q", type=float, default=1.0, help="in-out parameter")


def _skipgram_flags(parser):
    parser.add_argument("--dim", type=int, default=64, help="embedding dimension")
    parser.add_argument("--window", type=int, default=10, help="context window")
    parser.add_argument("--negatives", type=int, default=5, help="negative samples per pair")
    parser.add_argument("--epochs", type=int, default=5, help="skip-gram epochs")
    parser.add_argument("--lr", type=float, default=0.025, help="initial learning rate")


def _train_flags(parser):
    parser.add_argument("--lambda", dest="lam", type=float, default=10.0,
                        help="cycle-consistency weight")
    parser.add_argument("--eta", type=int, default=1, help="mapper steps per critic step")
    parser.add_argument("--epochs", type=int, default=200, help="training epochs")
    parser.add_argument("--batch", type=int, default=32, help="mini-batch size")
    parser.add_argument("--variant", choices=("linear", "nonlinear"), default="linear",
                        help="mapper architecture")
    parser.add_argument("--snapshot-every", type=int, default=10,
                        help="epochs between recorded snapshots")


def _train_config_from_args(args):
    return TrainConfig(
        lam=args.lam,
        eta=args.eta,
        epochs=args.epochs,
        batch_size=args.batch,
        seed=args.seed,
        mapper_variant=args.variant,
        snapshot_every=args.snapshot_every,
    )


def cmd_embed(args):
    g = read_graph(args.graph)
    walk = WalkConfig(walks_per_node=args.walks, walk_length=args.length,
                      p=args.p, q=args.q, seed=args.seed)
    sg = SkipGramConfig(dim=args.dim, window=args.window, negatives=args.negatives,
                        epochs=args.epochs, learning_rate=args.lr, seed=args.seed)
    emb = embed_graph(g, walk, sg)
    if args.standardize:
        emb = standardize_embeddings(emb)
    write_embeddings(emb, args.output)
    return EXIT_OK


def cmd_perturb(args):
    graph_path, truth_path = _split_outputs(args.output, 2, "graph,truth")
    g = read_graph(args.graph)
    noisy, truth = perturbed_copy(g, args.noise, seed=args.seed)
    write_edge_list(noisy, graph_path)
    write_correspondence(truth, truth_path)
    return EXIT_OK


def cmd_train(args):
    ckpt_path, log_path = _split_outputs(args.output, 2, "checkpoint,log")
    x1 = read_embeddings(args.emb1)
    x2 = read_embeddings(args.emb2)
    aligner = train(x1, x2, _train_config_from_args(args))
    save_aligner(aligner, ckpt_path)
    write_train_log(aligner.history, log_path)
    return EXIT_OK


def cmd_select(args):
    ckpt_path, log_path = _split_outputs(args.output, 2, "checkpoint,log")
    x1 = read_embeddings(args.emb1)
    x2 = read_embeddings(args.emb2)
    grid = read_grid_file(args.grid)
    aligner, best = model_select(x1, x2, grid)
    save_aligner(aligner, ckpt_path)
    write_train_log(aligner.history, log_path)
    print("selected\t%d" % grid.index(best))
    return EXIT_OK


def cmd_align(args):
    aligner = load_aligner(args.checkpoint)
    x1 = read_embeddings(args.emb1)
    x2 = read_embeddings(args.emb2)
    result = align_bidirectional(aligner, x1, x2)
    write_alignment(result, args.output)
    return EXIT_OK


def cmd_eval(args):
    result = read_alignment(args.alignment)
    truth = read_correspondence(args.truth)
    print("accuracy\t%s" % repr(accuracy(result, truth)))
    return EXIT_OK


# Pipeline settings: flag name -> default.  The config file uses the same
# names; explicit flags override file values which override these defaults.
_PIPELINE_DEFAULTS = {
    "walks": 10,
    "length": 80,
    "p": 1.0,
    "q": 1.0,
    "dim": 64,
    "window": 10,
    "negatives": 5,
    "embed_epochs": 5,
    "lr": 0.025,
    "embed_seed": 0,
    "lam": 10.0,
    "eta": 1,
    "epochs": 200,
    "batch": 32,
    "variant": "linear",
    "snapshot_every": 10,
    "seed": 0,
    "seed_offset": 1,
    "outdir": "pipeline_out",
}

_PIPELINE_ALIASES = {"lambda": "lam"}


def _pipeline_settings(args):
    merged = dict(_PIPELINE_DEFAULTS)
    if args.config:
        for lineno, key, value in _read_kv_lines(args.config):
            name = _PIPELINE_ALIASES.get(key, key)
            if name not in merged:
                raise ParseError("unknown pipeline option %r" % key, line=lineno)
            merged[name] = _coerce_like(_PIPELINE_DEFAULTS[name], value, key, lineno)
    for name in merged:
        flag_value = getattr(args, name, None)
        if flag_value is not None:
            merged[name] = flag_value
    return merged


def cmd_pipeline(args):
    g1 = read_graph(args.graph1)
    g2 = read_graph(args.graph2)
    s = _pipeline_settings(args)
    walk = WalkConfig(walks_per_node=s["walks"], walk_length=s["length"],
                      p=s["p"], q=s["q"], seed=s["embed_seed"])
    sg = SkipGramConfig(dim=s["dim"], window=s["window"], negatives=s["negatives"],
                        epochs=s["embed_epochs"], learning_rate=s["lr"], seed=s["embed_seed"])
    tcfg = TrainConfig(lam=s["lam"], eta=s["eta"], epochs=s["epochs"],
                       batch_size=s["batch"], seed=s["seed"],
                       mapper_variant=s["variant"], snapshot_every=s["snapshot_every"])
    cfg = PipelineConfig.shared(walk=walk, skipgram=sg, grid=[tcfg],
                                outdir=s["outdir"], seed_offset=s["seed_offset"])
    result, _ = run_pipeline(g1, g2, cfg)
    print("direction\t%s" % result.direction)
    print("mean_nn_distance\t%s" % repr(result.mean_nn_distance))
    return EXIT_OK


def cmd_pca(args):
    emb = read_embeddings(args.embeddings)
    coords = pca_project(emb.vectors, args.k)
    write_coordinates(coords, emb.labels, args.output)
    return EXIT_OK


def cmd_stats(args):
    if args.truth and not args.graph2:
        raise UsageError("stats: truth file requires a second graph")
    g1 = read_graph(args.graph1)
    g2 = read_graph(args.graph2) if args.graph2 else None
    corr = read_correspondence(args.truth) if args.truth else None
    st = graph_stats(g1, g2, corr)
    for name in ("num_nodes", "num_edges", "num_nodes2", "num_edges2",
                 "overlap_nodes", "overlap_edges"):
        value = getattr(st, name)
        if value is not None:
            print("%s\t%d" % (name, value))
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="graphalign",
                     description="Unsupervised graph alignment via embedding-distribution matching.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("embed", help="embed a graph with random walks + skip-gram")
    p.add_argument("graph", help="edge-list file")
    _walk_flags(p)
    _skipgram_flags(p)
    p.add_argument("--standardize", action="store_true",
                   help="per-dimension standardize the vectors")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="embedding file")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("perturb", help="permute a graph and delete a fraction of its edges")
    p.add_argument("graph")
    p.add_argument("--noise", type=float, required=True, help="fraction of edges to delete")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, metavar="GRAPH,TRUTH",
                   help="perturbed graph and ground-truth correspondence")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("train", help="fit the adversarial aligner on two embedding files")
    p.add_argument("emb1")
    p.add_argument("emb2")
    _train_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, metavar="CKPT,LOG",
                   help="checkpoint and training-log paths")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("select", help="train a config grid, keep the best snapshot")
    p.add_argument("emb1")
    p.add_argument("emb2")
    p.add_argument("--grid", required=True, help="one key=value config per line")
    p.add_argument("-o", "--output", required=True, metavar="CKPT,LOG")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("align", help="match nodes with a trained checkpoint")
    p.add_argument("checkpoint")
    p.add_argument("emb1")
    p.add_argument("emb2")
    p.add_argument("-o", "--output", required=True, help="alignment TSV")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("eval", help="score an alignment against ground truth")
    p.add_argument("alignment")
    p.add_argument("truth")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("pipeline", help="embed, train, and align two graphs end to end")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.add_argument("--config", help="flat key=value settings file")
    for name, default in _PIPELINE_DEFAULTS.items():
        flag = "--" + name.replace("_", "-")
        if name == "lam":
            p.add_argument("--lambda", dest="lam", type=float, default=None)
        elif name == "variant":
            p.add_argument(flag, choices=("linear", "nonlinear"), default=None)
        elif name == "outdir":
            p.add_argument(flag, default=None, help="artifact directory")
        else:
            p.add_argument(flag, type=type(default), default=None)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("pca", help="project an embedding file to top-k components")
    p.add_argument("embeddings")
    p.add_argument("-k", type=int, default=2, help="number of components")
    p.add_argument("-o", "--output", required=True, help="coordinates TSV")
    p.set_defaults(func=cmd_pca)

    p = sub.add_parser("stats", help="node/edge counts and overlap of one or two graphs")
    p.add_argument("graph1")
    p.add_argument("graph2", nargs="?", default=None)
    p.add_argument("truth", nargs="?", default=None)
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as err:
        print("usage error: %s" % err, file=sys.stderr)
        return EXIT_USAGE
    except NumericError as err:
        print("numeric failure: %s" % err, file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, OSError) as err:
        print("data error: %s" % err, file=sys.stderr)
        return EXIT_DATA
    except GraphAlignError as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
