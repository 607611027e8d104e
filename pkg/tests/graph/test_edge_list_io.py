import pytest

from conftest import random_graph
from geodetect.core.exceptions import DataFormatError
from geodetect.graph.file_operations import EdgeListFileOperations
from geodetect.graph.structure import Graph


def test_round_trip_keeps_trailing_isolated_vertices(tmp_path):
    graph = Graph.from_edge_list(6, [(0, 1), (1, 2), (0, 2)])
    file_ops = EdgeListFileOperations()
    path = file_ops.save(graph, tmp_path / "edges.txt", "n=6;seed=1")

    assert file_ops.load(path) == graph
    assert file_ops.read_header(path) == "n=6;seed=1"


def test_round_trip_on_random_graphs(tmp_path, rng):
    file_ops = EdgeListFileOperations()
    for index in range(100):
        n = int(rng.integers(1, 80))
        graph = random_graph(rng, n, int(rng.integers(0, 3 * n)))
        path = file_ops.save(graph, tmp_path / f"graph_{index}.txt")
        assert file_ops.load(path) == graph


def test_unsorted_file_loads_canonically(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("# a comment\n2 1\n0 2\n1 0\n2 0\n")
    graph = EdgeListFileOperations().load(path)
    assert graph.n == 3
    assert graph.edges().tolist() == [[0, 1], [0, 2], [1, 2]]


def test_malformed_line_reports_line_number(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("# header\n0 1\n2 x\n")
    with pytest.raises(DataFormatError, match=r"edges.txt:3:"):
        EdgeListFileOperations().load(path)


def test_self_loop_line_is_rejected(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("0 1\n1 1\n")
    with pytest.raises(DataFormatError, match=r":2:"):
        EdgeListFileOperations().load(path)


def test_ids_beyond_declared_count_are_rejected(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("# vertices: 3\n0 1\n\n0 5\n")
    with pytest.raises(DataFormatError, match=r"edges.txt:4: vertex id 5") as error:
        EdgeListFileOperations().load(path)
    assert error.value.line_number == 4


def test_ids_beyond_given_count_report_their_line(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("0 1\n1 2\n")
    with pytest.raises(DataFormatError, match=r":2:"):
        EdgeListFileOperations().load(path, n=2)
