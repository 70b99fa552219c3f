import pytest
from hypothesis import given, settings, strategies as st

from coarsekit.errors import ConfigError, InvalidMetric, SizeExceeded, UnknownPoint
from coarsekit.metric_space import (SpaceSpec, cyclic, free_group_ball, from_distance_matrix, grid, lattice,
                                    load_space, neighborhood, net, random_graph, read_distance_csv,
                                    read_edge_list, regular_tree)


def test_grid_line():
    sp = load_space("grid:1:3")
    assert sp.n == 7
    assert sp.dist(sp.index(-3), sp.index(3)) == 6


def test_free_group_ball_size():
    sp = load_space("free:2:2")
    assert sp.n == 17
    assert sorted(len(w) for w in sp.labels).count(2) == 12


def test_two_point_matrix():
    sp = from_distance_matrix([[0, 1], [1, 0]])
    assert sp.n == 2 and sp.dist(0, 1) == 1


def test_matrix_rejects_triangle_violation():
    with pytest.raises(InvalidMetric):
        from_distance_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])


def test_matrix_rejects_floats():
    with pytest.raises(InvalidMetric):
        from_distance_matrix([[0, 0.5], [0.5, 0]])


def test_csv_rationals():
    sp = read_distance_csv("a,b,c\n0,1/2,1\n1/2,0,1/2\n1,1/2,0\n")
    assert sp.dist(0, 1) * 2 == 1
    assert neighborhood(sp, "a", 0) == [0]


def test_edge_list_weights_and_default():
    sp = read_edge_list("a b\nb c 2\n# comment\n")
    assert sp.dist(sp.index("a"), sp.index("c")) == 3
    assert not sp.is_graph_metric
    assert read_edge_list("a b\nb c\n").is_graph_metric


def test_neighborhood_examples():
    sp = grid(1, 3)
    assert [sp.label(i) for i in neighborhood(sp, 0, 1)] == [-1, 0, 1]
    f = free_group_ball(2, 2)
    assert neighborhood(f, "", 2) == list(range(17))
    assert neighborhood(f, "", 0) == [f.index("")]
    with pytest.raises(UnknownPoint):
        neighborhood(sp, 99, 1)


def test_net_examples():
    sp = grid(1, 3)
    assert len(net(sp, 1)) == 7
    assert [sp.label(i) for i in net(sp, 2)] == [-3, -1, 1, 3]
    one = from_distance_matrix([[0]])
    assert net(one, 5) == [0]


def test_size_cap():
    with pytest.raises(SizeExceeded):
        load_space("grid:2:60", cap=1000)


def test_spec_parsing_and_documents(tmp_path):
    assert SpaceSpec.parse("tree:3:4").params == {"degree": 3, "depth": 4}
    with pytest.raises(ConfigError):
        SpaceSpec.parse("nosuch:1")
    doc = tmp_path / "s.toml"
    doc.write_text('kind = "cyclic"\nm = 6\n')
    assert load_space(str(doc)).n == 6
    doc = tmp_path / "s.json"
    doc.write_text('{"kind": "grid", "dim": 2, "radius": 1}')
    assert load_space(str(doc)).n == 9


def test_family_metrics_validate():
    for sp in [grid(2, 2), lattice(4, 5), free_group_ball(2, 2), regular_tree(3, 3), cyclic(7), random_graph(20, 5, 1)]:
        sp.validate()


def test_chebyshev_grid():
    sp = grid(2, 3)
    a, b = sp.index((0, 0)), sp.index((2, -1))
    assert sp.dist(a, b) == 2
    assert len(sp.ball(a, 1)) == 9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 19), st.integers(0, 4), st.integers(0, 4), st.integers(0, 50))
def test_neighborhood_monotone(c, r1, r2, seed):
    sp = random_graph(20, 6, seed)
    lo, hi = sorted((r1, r2))
    assert set(sp.ball(c, lo)) <= set(sp.ball(c, hi))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 30))
def test_net_separated_and_dominating(sep, seed):
    sp = random_graph(25, 8, seed)
    pts = net(sp, sep)
    assert all(sp.dist(a, b) >= sep for a in pts for b in pts if a != b)
    assert all(any(sp.dist(y, p) <= sep for p in pts) for y in range(sp.n))


def test_cayley_ball_geodesic():
    sp = free_group_ball(2, 3)
    for p in range(0, sp.n, 5):
        for q in range(sp.n):
            d = sp.dist(p, q)
            if d > 1:
                # some neighbour of p is one step closer to q
                assert any(sp.dist(m, q) == d - 1 for m in sp.adjacency[p])
