"""Undirected simple graphs: parsing, perturbation, and summary statistics.

Graphs keep a dense 0..n-1 index space internally (first-appearance order of
labels in the input) plus the original string labels, so downstream stages can
work on integer indices while reports speak in the user's identifiers.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ParseError
from .validation import check_fraction


@dataclass
class Graph:
    """Simple undirected graph with sorted adjacency lists.

    Invariants (enforced by :func:`validate_graph`): adjacency is symmetric,
    there are no self-loops or duplicate neighbors, and ``labels`` has one
    entry per node.
    """

    num_nodes: int
    adjacency: list  # list of sorted lists of neighbor indices
    labels: list  # index -> original identifier (string)
    _label_index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._label_index is None:
            self._label_index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def num_edges(self):
        return sum(len(a) for a in self.adjacency) // 2

    def degree(self, i):
        return len(self.adjacency[i])

    def index_of(self, label):
        try:
            return self._label_index[label]
        except KeyError:
            raise DataError("unknown node label %r" % (label,)) from None

    def has_label(self, label):
        return label in self._label_index

    def edges(self):
        """Iterate canonical (i, j) edges with i < j, in sorted order."""
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if i < j:
                    yield (i, j)

    def edge_set(self):
        return set(self.edges())


@dataclass
class Correspondence:
    """Ground-truth node pairs: (label in graph 1, label in graph 2)."""

    pairs: list

    def __post_init__(self):
        left = [a for a, _ in self.pairs]
        right = [b for _, b in self.pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise DataError("correspondence is not one-to-one")

    def as_dict(self):
        return dict(self.pairs)


@dataclass
class GraphStats:
    num_nodes: int
    num_edges: int
    num_nodes2: int = None
    num_edges2: int = None
    overlap_nodes: int = None
    overlap_edges: int = None


def _add_edge(adj_sets, u, v):
    if u == v:
        return
    adj_sets[u].add(v)
    adj_sets[v].add(u)


def graph_from_edges(edge_labels, extra_labels=()):
    """Build a Graph from (label, label) pairs.

    ``extra_labels`` are interned first, then edge endpoints, so passing the
    full endpoint stream as extras pins the index order to first appearance
    in the input and registers nodes whose every edge was dropped.
    """
    labels = []
    index = {}

    def intern(lab):
        if lab not in index:
            index[lab] = len(labels)
            labels.append(lab)
        return index[lab]

    for lab in extra_labels:
        intern(lab)
    pairs = [(intern(a), intern(b)) for a, b in edge_labels]
    adj_sets = [set() for _ in labels]
    for u, v in pairs:
        _add_edge(adj_sets, u, v)
    adjacency = [sorted(s) for s in adj_sets]
    return Graph(len(labels), adjacency, labels)


def _scan_edge_lines(lines, signed_mode):
    """Yield (edges, endpoint stream, data-line count) from edge-list lines."""
    edges = []
    nodes_seen = []
    data_lines = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        data_lines += 1
        tokens = line.split()
        if len(tokens) < 2:
            raise ParseError("expected at least 2 tokens, got %d" % len(tokens), lineno)
        src, dst = tokens[0], tokens[1]
        weight = 1.0
        if len(tokens) >= 3:
            try:
                weight = float(tokens[2])
            except ValueError:
                raise ParseError(
                    "non-numeric weight %r" % tokens[2], lineno
                ) from None
            if not math.isfinite(weight):
                raise ParseError("non-finite weight %r" % tokens[2], lineno)
        nodes_seen.append(src)
        nodes_seen.append(dst)
        if weight < 0 and not signed_mode:
            continue
        edges.append((src, dst))
    return edges, nodes_seen, data_lines


def _as_lines(text):
    if isinstance(text, str):
        return text.splitlines()
    return [ln.rstrip("\n") for ln in text]


def parse_edge_list(text, signed_mode=False):
    """Parse whitespace-separated ``src dst [weight]`` lines into a Graph.

    ``#``-prefixed lines are comments.  Duplicate edges collapse, self-loops
    are dropped.  A third token, when present, must be numeric; edges with a
    negative weight are discarded unless ``signed_mode`` is set, in which case
    they are kept as plain unsigned edges.  Tokens beyond the third are
    ignored.  Raises :class:`ParseError` on malformed lines and on empty
    input.
    """
    edges, nodes_seen, data_lines = _scan_edge_lines(_as_lines(text), signed_mode)
    if data_lines == 0:
        raise ParseError("empty edge list")
    return graph_from_edges(edges, extra_labels=nodes_seen)


def read_graph(path, signed_mode=False):
    with open(path, "r", encoding="utf-8") as fh:
        return read_edge_list_text(fh, signed_mode=signed_mode)


def write_edge_list(g, path=None):
    """Serialize to canonical edge-list text.

    A ``# node <label>`` comment per node (in index order) pins the node set
    and index order — including isolated nodes — followed by one ``src dst``
    line per edge sorted by index pair.  Plain edge-list consumers see the
    comments as ordinary comment lines; :func:`read_edge_list_text` and
    :func:`read_graph` use them for an exact round trip.
    """
    out = ["# node %s" % lab for lab in g.labels]
    for i, j in g.edges():
        out.append("%s %s" % (g.labels[i], g.labels[j]))
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def read_edge_list_text(text, signed_mode=False):
    """Parse edge-list text, honoring ``# node <label>`` records emitted by
    :func:`write_edge_list` so serialization round-trips exactly (node set,
    index order, and isolated nodes included)."""
    lines = _as_lines(text)
    declared = []
    for raw in lines:
        parts = raw.strip().split()
        if parts[:2] == ["#", "node"] and len(parts) == 3:
            declared.append(parts[2])
    if not declared:
        return parse_edge_list(lines, signed_mode=signed_mode)
    edges, nodes_seen, data_lines = _scan_edge_lines(lines, signed_mode)
    if data_lines == 0 and not declared:
        raise ParseError("empty edge list")
    return graph_from_edges(edges, extra_labels=declared + nodes_seen)


def validate_graph(g):
    """Check structural invariants; raises DataError on violation."""
    if len(g.adjacency) != g.num_nodes or len(g.labels) != g.num_nodes:
        raise DataError("graph field lengths disagree with num_nodes")
    if len(set(g.labels)) != g.num_nodes:
        raise DataError("duplicate node labels")
    for i, nbrs in enumerate(g.adjacency):
        if any(j < 0 or j >= g.num_nodes for j in nbrs):
            raise DataError("neighbor index out of range at node %d" % i)
        if i in nbrs:
            raise DataError("self-loop at node %d" % i)
        if len(set(nbrs)) != len(nbrs):
            raise DataError("duplicate neighbors at node %d" % i)
        if sorted(nbrs) != list(nbrs):
            raise DataError("unsorted adjacency at node %d" % i)
        for j in nbrs:
            if i not in g.adjacency[j]:
                raise DataError("asymmetric edge (%d, %d)" % (i, j))
    return True


def permute_nodes(g, seed=0, permutation=None):
    """Relabel node indices by a random permutation.

    Returns ``(permuted graph, perm)`` where ``perm[old] = new``.  Labels
    travel with their nodes, so the permuted graph is isomorphic to the input
    under ``perm`` and the identity on labels is the ground-truth
    correspondence.  ``permutation`` overrides the seeded draw (test hook).
    """
    n = g.num_nodes
    if permutation is None:
        perm = np.random.default_rng(seed).permutation(n)
    else:
        perm = np.asarray(permutation, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(n)):
            raise DataError("permutation is not a bijection on 0..n-1")
    labels = [None] * n
    adj_sets = [set() for _ in range(n)]
    for old in range(n):
        labels[perm[old]] = g.labels[old]
    for i, j in g.edges():
        _add_edge(adj_sets, int(perm[i]), int(perm[j]))
    adjacency = [sorted(s) for s in adj_sets]
    return Graph(n, adjacency, labels), perm


def remove_edges(g, fraction, seed=0):
    """Delete exactly floor(fraction * |E|) distinct edges uniformly at
    random.  The node set (and labels) is unchanged; nodes may become
    isolated."""
    fraction = check_fraction(fraction, "fraction")
    edges = sorted(g.edges())
    k = int(math.floor(fraction * len(edges)))
    rng = np.random.default_rng(seed)
    drop = set()
    if k > 0:
        chosen = rng.choice(len(edges), size=k, replace=False)
        drop = {edges[c] for c in chosen.tolist()}
    adj_sets = [set() for _ in range(g.num_nodes)]
    for e in edges:
        if e not in drop:
            _add_edge(adj_sets, e[0], e[1])
    adjacency = [sorted(s) for s in adj_sets]
    return Graph(g.num_nodes, adjacency, list(g.labels))


def correspondence_from_permutation(g):
    """Ground truth for a permuted copy: every label corresponds to itself."""
    return Correspondence([(lab, lab) for lab in g.labels])


def graph_stats(g1, g2=None, corr=None):
    """Node/edge counts, plus overlap counts when a correspondence is given.

    ``overlap_nodes`` is the number of matched pairs; ``overlap_edges`` counts
    edges of graph 1 whose endpoint images under the correspondence are also
    adjacent in graph 2.  Correspondence labels must exist in their respective
    graphs.
    """
    stats = GraphStats(num_nodes=g1.num_nodes, num_edges=g1.num_edges)
    if g2 is not None:
        stats.num_nodes2 = g2.num_nodes
        stats.num_edges2 = g2.num_edges
    if corr is not None:
        if g2 is None:
            raise DataError("correspondence given without a second graph")
        mapping = {}
        for a, b in corr.pairs:
            if not g1.has_label(a):
                raise DataError("correspondence label %r not in graph 1" % (a,))
            if not g2.has_label(b):
                raise DataError("correspondence label %r not in graph 2" % (b,))
            mapping[g1.index_of(a)] = g2.index_of(b)
        stats.overlap_nodes = len(mapping)
        edge_set2 = g2.edge_set()
        overlap = 0
        for i, j in g1.edges():
            if i in mapping and j in mapping:
                a, b = mapping[i], mapping[j]
                if (min(a, b), max(a, b)) in edge_set2:
                    overlap += 1
        stats.overlap_edges = overlap
    return stats


def read_correspondence(path):
    """Read tab-separated label pairs (one per line, ``#`` comments)."""
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected 2 tab-separated labels", lineno)
            pairs.append((parts[0], parts[1]))
    return Correspondence(pairs)


def write_correspondence(corr, path):
    with open(path, "w", encoding="utf-8") as fh:
        for a, b in corr.pairs:
            fh.write("%s\t%s\n" % (a, b))
