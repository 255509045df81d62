"""Unsupervised network alignment via adversarial embedding matching.

Pipeline: random-walk + skip-gram node embeddings for each graph, a
bidirectional cycle-consistent adversarial aligner between the two embedding
distributions, and exact nearest-neighbor node matching, with an unsupervised
mean-NN-distance heuristic for model selection.
"""

from .embedding import (
    EmbeddingMatrix,
    embed_graph,
    read_embeddings,
    standardize_embeddings,
    write_embeddings,
)
from .errors import DataError, GraphAlignError, NumericError, ParseError, UsageError
from .estimators import DistributionAligner, NearestNodeMatcher, NodeEmbedder
from .experiments import (
    ExperimentReport,
    NoiseRecord,
    PipelineConfig,
    perturbed_copy,
    report_from_json,
    report_to_json,
    rotation_task,
    run_noise_experiment,
    run_pipeline,
    watts_strogatz_benchmark,
)
from .graph import (
    Correspondence,
    Graph,
    GraphStats,
    correspondence_from_permutation,
    graph_from_edges,
    graph_stats,
    parse_edge_list,
    permute_nodes,
    read_correspondence,
    read_graph,
    remove_edges,
    validate_graph,
    write_correspondence,
    write_edge_list,
)
from .kdtree import KdTree, linear_scan_nn
from .losses import (
    adv_loss_1to2,
    adv_loss_2to1,
    cycle_loss,
    total_loss,
)
from .matching import (
    AlignmentResult,
    align_bidirectional,
    align_direction,
    read_alignment,
    write_alignment,
)
from .metrics import accuracy, heuristic_report, write_heuristic_report
from .nets import CriticParams, MapperParams, critic_forward, init_critic, init_mapper, mapper_forward
from .pca import explained_variances, pca_project, write_coordinates
from .skipgram import SkipGramConfig, train_skipgram
from .training import (
    TrainConfig,
    TrainedAligner,
    TrainHistory,
    load_aligner,
    mean_nn_distance,
    model_select,
    save_aligner,
    train,
    write_train_log,
)
from .walks import WalkConfig, generate_walks

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "Correspondence",
    "CriticParams",
    "DataError",
    "DistributionAligner",
    "EmbeddingMatrix",
    "ExperimentReport",
    "Graph",
    "GraphAlignError",
    "GraphStats",
    "KdTree",
    "MapperParams",
    "NearestNodeMatcher",
    "NodeEmbedder",
    "NoiseRecord",
    "NumericError",
    "ParseError",
    "PipelineConfig",
    "SkipGramConfig",
    "TrainConfig",
    "TrainHistory",
    "TrainedAligner",
    "UsageError",
    "WalkConfig",
    "accuracy",
    "adv_loss_1to2",
    "adv_loss_2to1",
    "align_bidirectional",
    "align_direction",
    "correspondence_from_permutation",
    "critic_forward",
    "cycle_loss",
    "embed_graph",
    "explained_variances",
    "generate_walks",
    "graph_from_edges",
    "graph_stats",
    "heuristic_report",
    "init_critic",
    "init_mapper",
    "linear_scan_nn",
    "load_aligner",
    "mapper_forward",
    "mean_nn_distance",
    "model_select",
    "parse_edge_list",
    "pca_project",
    "permute_nodes",
    "perturbed_copy",
    "read_alignment",
    "read_correspondence",
    "read_embeddings",
    "read_graph",
    "remove_edges",
    "report_from_json",
    "report_to_json",
    "rotation_task",
    "run_noise_experiment",
    "run_pipeline",
    "save_aligner",
    "standardize_embeddings",
    "total_loss",
    "train",
    "train_skipgram",
    "validate_graph",
    "watts_strogatz_benchmark",
    "write_alignment",
    "write_coordinates",
    "write_correspondence",
    "write_edge_list",
    "write_embeddings",
    "write_heuristic_report",
    "write_train_log",
]
