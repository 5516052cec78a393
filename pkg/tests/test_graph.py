import pytest

from resgraph.graph import GraphError, ResolutionGraph, intersection_matrix, validate

from conftest import chain


def test_single_minus_one_is_negative_definite_but_not_minimal():
    report = validate(ResolutionGraph.build([("C1", -1)]))
    assert report.is_negative_definite
    assert not report.is_minimal
    assert report.is_tree


def test_single_zero_is_not_negative_definite():
    report = validate(ResolutionGraph.build([("C1", 0)]))
    assert not report.is_negative_definite
    assert any("exceptional" in m for m in report.messages)


def test_index4_graph_validates(example51):
    report = validate(example51)
    assert (report.is_negative_definite, report.is_tree, report.is_minimal) == (True, True, True)
    assert report.messages == ()


def test_intersection_matrix_of_a2():
    assert intersection_matrix(chain([-2, -2])) == [[-2, 1], [1, -2]]


def test_intersection_matrix_of_index4_graph(example51):
    assert intersection_matrix(example51) == [[-2, 1, 1, 1], [1, -2, 0, 0], [1, 0, -2, 0], [1, 0, 0, -3]]


def test_empty_graph():
    g = ResolutionGraph.build([])
    assert intersection_matrix(g) == []
    assert not g.is_tree()


def test_corpus_graph_is_negative_definite_minimal_tree(corpus_graph):
    report = validate(corpus_graph)
    assert report.is_negative_definite and report.is_tree and report.is_minimal
    m = intersection_matrix(corpus_graph)
    assert all(m[i][j] == m[j][i] for i in range(len(m)) for j in range(len(m)))


@pytest.mark.parametrize(
    "vertices, edges, boundary, needle",
    [
        ([("C1", -2), ("C1", -3)], [], {}, "duplicate vertex id 'C1'"),
        ([("C1", -2)], [("C1", "C9")], {}, "'C9'"),
        ([("C1", -2)], [("C1", "C1")], {}, "self-loop"),
        ([("C1", -2), ("C2", -2)], [("C1", "C2"), ("C2", "C1")], {}, "duplicate edge"),
        ([("C1", -2)], [], {"C7": 1}, "'C7'"),
        ([("C1", -2)], [], {"C1": -1}, "negative"),
    ],
)
def test_structural_errors(vertices, edges, boundary, needle):
    with pytest.raises(GraphError, match=needle.replace("(", r"\(")):
        ResolutionGraph.build(vertices, edges, boundary)


def test_normalization_makes_edge_order_irrelevant():
    a = ResolutionGraph.build([("A", -2), ("B", -3), ("C", -2)], [("C", "B"), ("B", "A")])
    b = ResolutionGraph.build([("A", -2), ("B", -3), ("C", -2)], [("A", "B"), ("B", "C")])
    assert a == b
    assert a.edges == (("A", "B"), ("B", "C"))


def test_zero_boundary_entries_are_dropped():
    g = ResolutionGraph.build([("C1", -2), ("C2", -2)], [("C1", "C2")], {"C2": 1, "C1": 0})
    assert g.boundary == (("C2", 1),)
    assert g.boundary_vector == (0, 1)
    assert g.without_boundary().boundary == ()


def test_cycle_and_disconnected_are_reported():
    triangle = ResolutionGraph.build([("A", -3), ("B", -3), ("C", -3)], [("A", "B"), ("B", "C"), ("A", "C")])
    assert not triangle.is_forest()
    assert any("cycle" in m for m in validate(triangle).messages)
    two = ResolutionGraph.build([("A", -2), ("B", -2)])
    assert two.is_forest() and not two.is_tree()
    assert any("disconnected" in m for m in validate(two).messages)


def test_neighbors_and_degree(example51):
    assert example51.neighbors("C1") == ("C2", "C3", "C4")
    assert example51.degree("C4") == 1
