"""Nearest-neighbor matching, direction choice, and the alignment file
format."""

import numpy as np
import pytest

from graphalign.embedding import EmbeddingMatrix
from graphalign.errors import DataError, ParseError
from graphalign.matching import (
    AlignmentResult,
    align_bidirectional,
    align_direction,
    as_embedding,
    read_alignment,
    write_alignment,
)
from graphalign.nets import MapperParams
from graphalign.training import TrainConfig, TrainedAligner, TrainHistory


def identity_mapper(d):
    return MapperParams("linear", np.eye(d), np.zeros(d))


def shift_mapper(d, shift):
    return MapperParams("linear", np.eye(d), np.full(d, float(shift)))


def make_aligner(g12, g21):
    return TrainedAligner(
        g12, g21, None, None, TrainHistory(), [], TrainConfig(epochs=0)
    )


class TestAsEmbedding:
    def test_raw_matrix_gets_index_labels(self):
        e = as_embedding(np.zeros((3, 2)))
        assert e.labels == ["0", "1", "2"]

    def test_embedding_passes_through(self):
        e = EmbeddingMatrix(np.zeros((2, 2)), ["a", "b"])
        assert as_embedding(e) is e


class TestAlignDirection:
    def test_permuted_duplicate_rows_recovered_exactly(self):
        rng = np.random.default_rng(0)
        x1 = EmbeddingMatrix(rng.standard_normal((10, 3)), ["u%d" % i for i in range(10)])
        perm = rng.permutation(10)
        x2 = EmbeddingMatrix(x1.vectors[perm], ["v%d" % perm[i] for i in range(10)])
        # x2 row j holds the vector of source node perm[j] and is labeled
        # v<perm[j]>, so ui must match vi.
        result = align_direction(identity_mapper(3), x1, x2)
        assert result.mean_nn_distance == 0.0
        assert result.direction == "1to2"
        assert result.pairs == [("u%d" % i, "v%d" % i) for i in range(10)]
        assert result.per_pair_distance == [0.0] * 10

    def test_mapper_applied_before_matching(self):
        x1 = np.array([[0.0, 0.0]])
        x2 = np.array([[1.0, 1.0], [5.0, 5.0]])
        result = align_direction(shift_mapper(2, 1.0), x1, x2)
        assert result.pairs == [("0", "0")]
        assert result.mean_nn_distance == 0.0

    def test_many_to_one_allowed(self):
        x1 = np.array([[0.0], [0.1], [9.0]])
        x2 = np.array([[0.0], [9.0]])
        result = align_direction(identity_mapper(1), x1, x2)
        assert [t for _, t in result.pairs] == ["0", "0", "1"]

    def test_dim_mismatch_rejected(self):
        with pytest.raises(DataError):
            align_direction(identity_mapper(2), np.zeros((2, 2)), np.zeros((2, 3)))


class TestAlignBidirectional:
    def test_picks_lower_distance_direction(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((8, 2))
        # g12 is exact, g21 is off by a shift: 1-to-2 must win.
        a = align_bidirectional(make_aligner(identity_mapper(2), shift_mapper(2, 3.0)), x, x)
        assert a.direction == "1to2"
        assert a.mean_nn_distance == 0.0
        # swap the quality: now 2-to-1 wins
        b = align_bidirectional(make_aligner(shift_mapper(2, 3.0), identity_mapper(2)), x, x)
        assert b.direction == "2to1"
        assert b.mean_nn_distance == 0.0

    def test_exact_tie_prefers_1to2(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((6, 2))
        a = align_bidirectional(make_aligner(identity_mapper(2), identity_mapper(2)), x, x)
        assert a.direction == "1to2"

    def test_2to1_pairs_read_from_graph2(self):
        x1 = EmbeddingMatrix(np.array([[0.0], [10.0]]), ["a", "b"])
        x2 = EmbeddingMatrix(np.array([[1.0], [11.0]]), ["p", "q"])
        # g21 undoes the +1 shift exactly; g12 is far off
        result = align_bidirectional(
            make_aligner(shift_mapper(1, 5.0), shift_mapper(1, -1.0)), x1, x2
        )
        assert result.direction == "2to1"
        assert result.mean_nn_distance == 0.0
        assert result.pairs == [("p", "a"), ("q", "b")]


class TestAlignmentFile:
    def round_trip(self, tmp_path, result):
        path = tmp_path / "alignment.tsv"
        write_alignment(result, path)
        return path, read_alignment(path)

    def test_round_trip_exact(self, tmp_path):
        result = AlignmentResult(
            pairs=[("a", "x"), ("b", "y")],
            direction="2to1",
            mean_nn_distance=0.123456789012345678,
            per_pair_distance=[0.1, 0.146913578024691356],
        )
        _, back = self.round_trip(tmp_path, result)
        assert back.pairs == result.pairs
        assert back.direction == "2to1"
        assert back.mean_nn_distance == result.mean_nn_distance
        assert back.per_pair_distance == result.per_pair_distance

    def test_header_line(self, tmp_path):
        result = AlignmentResult([("a", "b")], "1to2", 0.5, [0.5])
        path, _ = self.round_trip(tmp_path, result)
        first = path.read_text().splitlines()[0]
        assert first == "# direction=1to2 mean_nn_distance=0.5"

    def test_labels_with_spaces_survive(self, tmp_path):
        result = AlignmentResult([("node one", "node two")], "1to2", 0.0, [0.0])
        _, back = self.round_trip(tmp_path, result)
        assert back.pairs == [("node one", "node two")]

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("a\tb\t0.0\n")
        with pytest.raises(ParseError):
            read_alignment(path)

    def test_unknown_direction_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("# direction=sideways mean_nn_distance=0.0\na\tb\t0.0\n")
        with pytest.raises(ParseError):
            read_alignment(path)

    def test_wrong_field_count_reports_line(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("# direction=1to2 mean_nn_distance=0.0\na\tb\t0.0\na\tb\n")
        with pytest.raises(ParseError) as exc:
            read_alignment(path)
        assert exc.value.line == 3

    def test_non_numeric_distance_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("# direction=1to2 mean_nn_distance=0.0\na\tb\tfast\n")
        with pytest.raises(ParseError):
            read_alignment(path)

    def test_empty_body_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("# direction=1to2 mean_nn_distance=0.0\n")
        with pytest.raises(DataError):
            read_alignment(path)

    def test_comments_and_blanks_skipped(self, tmp_path):
        path = tmp_path / "ok.tsv"
        path.write_text(
            "# direction=1to2 mean_nn_distance=1.0\n\n# comment\na\tb\t1.0\n"
        )
        back = read_alignment(path)
        assert back.pairs == [("a", "b")]
