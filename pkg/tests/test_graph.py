import math

import pytest
from hypothesis import given, settings, strategies as st

from boolwidth.graph import (DuplicateEdgeError, EdgeCountError, Graph, GenerationError,
                             MalformedHeaderError, OddDegreeSumError, SelfLoopError,
                             VertexRangeError, complete_graph, cycle_graph, gen_gnp,
                             gen_random_regular, members, neighbors_of_set, parse_graph,
                             path_graph, to_mask, write_graph)


def check_invariants(g: Graph):
    for v in range(g.n):
        assert not g.adj[v] >> v & 1
        for u in members(g.adj[v]):
            assert g.adj[u] >> v & 1


def test_neighbors_of_set(p4):
    assert neighbors_of_set(p4, to_mask([0])) == to_mask([1])
    assert neighbors_of_set(p4, 0) == 0
    assert neighbors_of_set(cycle_graph(5), to_mask([0, 2])) == to_mask([1, 3, 4])


def test_constructor_rejects_bad_adjacency():
    with pytest.raises(ValueError):
        Graph(2, (0b10, 0))
    with pytest.raises(ValueError):
        Graph(1, (0b1,))


def test_gnp_extremes():
    assert gen_gnp(5, 0.0, 3).m == 0
    assert gen_gnp(5, 1.0, 3) == complete_graph(5)
    for bad in (-0.1, 1.5):
        with pytest.raises(ValueError):
            gen_gnp(5, bad, 1)


def test_gnp_edge_count_binomial():
    g = gen_gnp(30, 0.5, 7)
    mean = math.comb(30, 2) * 0.5
    sigma = math.sqrt(math.comb(30, 2) * 0.25)
    assert abs(g.m - mean) <= 5 * sigma
    check_invariants(g)


def test_gnp_deterministic():
    assert gen_gnp(25, 0.3, 99) == gen_gnp(25, 0.3, 99)
    assert gen_gnp(25, 0.3, 99) != gen_gnp(25, 0.3, 100)


def test_regular_small_cases():
    assert gen_random_regular(4, 3, 5) == complete_graph(4)
    g = gen_random_regular(6, 2, 1)
    assert all(g.degree(v) == 2 for v in range(6))
    g = gen_random_regular(20, 3, 11)
    assert [g.degree(v) for v in range(20)] == [3] * 20


def test_regular_degrees_many_seeds():
    for seed in range(100):
        g = gen_random_regular(16, 3, seed)
        check_invariants(g)
        assert all(g.degree(v) == 3 for v in range(16))


def test_regular_dense_uses_complement():
    g = gen_random_regular(10, 7, 2)
    assert all(g.degree(v) == 7 for v in range(10))


def test_regular_errors():
    with pytest.raises(OddDegreeSumError):
        gen_random_regular(5, 3, 0)
    with pytest.raises(ValueError):
        gen_random_regular(4, 4, 0)
    with pytest.raises(GenerationError):
        gen_random_regular(12, 4, 0, max_tries=0)


def test_parse_path():
    assert parse_graph("4 3\n0 1\n1 2\n2 3") == path_graph(4)


def test_parse_comments_and_dimacs():
    assert parse_graph("# hi\n4 3\n0 1\n# mid\n1 2\n2 3\n") == path_graph(4)
    assert parse_graph("c test\np edge 4 3\ne 1 2\ne 2 3\ne 3 4\n") == path_graph(4)


@pytest.mark.parametrize("text, err", [
    ("2 1\n0 0", SelfLoopError),
    ("x y\n", MalformedHeaderError),
    ("3\n", MalformedHeaderError),
    ("", MalformedHeaderError),
    ("2 1\n0 2", VertexRangeError),
    ("3 2\n0 1\n1 0", DuplicateEdgeError),
    ("3 2\n0 1", EdgeCountError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_graph(text)


def test_write_is_canonical():
    g = parse_graph("3 2\n2 1\n1 0\n")
    assert write_graph(g) == "3 2\n0 1\n1 2\n"


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 20), st.floats(0, 1), st.integers(0, 2**32))
def test_round_trip(n, p, seed):
    g = gen_gnp(n, p, seed)
    assert parse_graph(write_graph(g)) == g
    assert write_graph(parse_graph(write_graph(g))) == write_graph(g)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 16), st.integers(0, 2**16))
def test_complement_involution(n, raw):
    g = gen_gnp(n, 0.5, 0)
    a = raw & g.full
    assert g.complement(g.complement(a)) == a
    assert a.bit_count() + g.complement(a).bit_count() == n
