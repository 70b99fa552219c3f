import random

import pytest
from hypothesis import given, settings, strategies as st

from coarsekit.algebra import QQ, ZZ, homology
from coarsekit.chain_complex import Chain, boundary, build_window_complex, support, window_complex
from coarsekit.errors import (EdgeOutOfScale, NotAGraphMetric, NotFillable, PreconditionError,
                              ScheduleExceedsSample)
from coarsekit.invariants import (acyclicity_probe, acyclicity_profile, bottleneck_check, ccd_estimate,
                                  chain_to_path, classify_counts, ends, fill_cycle, oriented_top_chain,
                                  path_to_chain, pd_probe)
from coarsekit.metric_space import (cyclic, free_group_ball, grid, lattice, path_graph, random_graph,
                                    read_edge_list, regular_tree, simplex)


def test_ends_line():
    rep = ends(grid(1, 12), scale=1, radii=[2, 4, 6])
    assert rep.counts == [2, 2, 2] and rep.classification == "2"


def test_ends_plane():
    rep = ends(grid(2, 10), scale=1, radii=[2, 4])
    assert rep.counts == [1, 1] and rep.classification == "1"


def test_ends_free_group():
    rep = ends(free_group_ball(2, 6), scale=1, radii=[1, 2, 3])
    # closed balls: one component per word of length r + 1
    assert rep.counts == [12, 36, 108]
    assert rep.classification == "infinity"


def test_ends_finite():
    assert ends(cyclic(7), scale=1, radii=[3, 4]).classification == "0"


def test_ends_schedule_limits():
    with pytest.raises(ScheduleExceedsSample):
        ends(grid(1, 6), scale=1, radii=[2, 6])
    with pytest.raises(NotAGraphMetric):
        ends(read_edge_list("a b 2\nb c\n"), scale=1, radii=[1, 2])


def test_classify_rule():
    assert classify_counts([2, 2]) == ("2", 2)
    assert classify_counts([1, 2]) == ("inconclusive", None)
    assert classify_counts([3, 5]) == ("infinity", 5)
    assert classify_counts([4]) == ("inconclusive", None)
    # a third agreeing stage never changes the verdict
    for counts in ([0, 0], [1, 1], [2, 2], [4, 9]):
        assert classify_counts(counts)[0] == classify_counts(counts + [counts[-1]])[0]


def test_acyclicity_examples():
    assert acyclicity_probe(regular_tree(3, 5), 0, 1, 1, 1, 3)
    # the 3-cycle filled at scale 2
    c3 = cyclic(3)
    hollow = build_window_complex(c3, 1, None, 1)
    assert homology(hollow, ZZ, 1).free_rank == 1
    assert acyclicity_probe(cyclic(6), 1, 1, 3, 3, 3)
    assert not acyclicity_probe(cyclic(6), 1, 1, 3, 1, 3)
    with pytest.raises(PreconditionError):
        acyclicity_probe(cyclic(6), 1, 2, 3, 1, 3)


def test_acyclicity_profile():
    prof = acyclicity_profile(cyclic(8), 1, [(1, 4)], [(1, 4), (2, 4), (3, 4)])
    assert prof.cells[0]["found"] and prof.cells[0]["j"] == 3
    assert all(j >= i for i, j in prof.lam.items())
    assert all(s >= r for (i, r), s in prof.mu.items())


def test_fill_examples():
    sp = path_graph(5)
    cx = build_window_complex(sp, 1, None, 1)
    sigma = Chain(0, {(3,): 1, (0,): -1})
    f = fill_cycle(cx, sigma, cx)
    assert boundary(f.omega) == sigma
    c3 = cyclic(3)
    small = build_window_complex(c3, 1, None, 1)
    big = build_window_complex(c3, 2, None, 2)
    loop = Chain(1, {(0, 1): 1, (1, 2): 1, (0, 2): -1})
    f = fill_cycle(small, loop, big)
    assert f.omega in (Chain(2, {(0, 1, 2): 1}), Chain(2, {(0, 1, 2): -1}))
    # the 3-cycle in its 1-skeleton window has nothing to fill with
    with pytest.raises(NotFillable):
        fill_cycle(small, loop, small)
    c6 = cyclic(6)
    hollow = build_window_complex(c6, 1, None, 2)
    ring6 = Chain(1, {(0, 1): 1, (1, 2): 1, (2, 3): 1, (3, 4): 1, (4, 5): 1, (0, 5): -1})
    with pytest.raises(NotFillable) as err:
        fill_cycle(hollow, ring6, hollow)
    assert not err.value.rational


def test_fill_preconditions():
    cx = build_window_complex(path_graph(4), 1, None, 1)
    with pytest.raises(PreconditionError):
        fill_cycle(cx, Chain(0, {(0,): 1}), cx)
    with pytest.raises(PreconditionError):
        fill_cycle(cx, Chain(1, {(0, 1): 1}), cx)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_fill_random_grid_cycles(seed):
    rng = random.Random(seed)
    sp = grid(2, 3)
    small = window_complex(sp, 1, None, 2, 2)
    big = window_complex(sp, 1, None, 3, 2)
    keys = rng.sample(small.simplices[2], 4)
    sigma = boundary(Chain(2, {s: rng.randint(-2, 2) for s in keys}))
    f = fill_cycle(small, sigma, big)
    assert boundary(f.omega) == sigma


def test_chain_to_path_examples():
    s = Chain(1, {(0, 1): 1, (1, 2): 1})
    assert chain_to_path(s, 0, 2) == [0, 1, 2]
    loop = Chain(1, {(5, 6): 1, (6, 7): 1, (5, 7): -1})
    assert chain_to_path(s + loop, 0, 2) == [0, 1, 2]
    assert chain_to_path(Chain(1, {(0, 1): 1}), 0, 1) == [0, 1]
    with pytest.raises(PreconditionError):
        chain_to_path(s, 0, 1)


def test_chain_to_path_first_vertex_counterexample():
    # boundary [b] - [a]; the path a, c, b leaves supp = {a, b}
    a, b, c = 0, 1, 2
    sigma = Chain(1, {(a, c): 1, (b, c): -1})
    assert support(sigma) == {a, b}
    path = chain_to_path(sigma, a, b)
    assert path == [a, c, b]
    assert not set(path) <= support(sigma) | {a, b}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_chain_to_path_property(seed):
    rng = random.Random(seed)
    sp = random_graph(20, 10, seed % 50)
    cx = build_window_complex(sp, 2, None, 2)
    x, y = rng.sample(range(sp.n), 2)
    # some path at scale 2, then add boundaries to scramble
    walk = [x]
    while walk[-1] != y:
        walk.append(min(sp.ball(walk[-1], 1), key=lambda v: sp.dist(v, y)))
    sigma = path_to_chain(walk, cx)
    tris = cx.simplices[2]
    if tris:
        sigma = sigma + boundary(Chain(2, {t: rng.randint(-1, 1) for t in rng.sample(tris, min(3, len(tris)))}))
    path = chain_to_path(sigma, x, y, sp, 2)
    assert path[0] == x and path[-1] == y
    assert all(sp.dist(p, q) <= 2 for p, q in zip(path, path[1:]))
    near = support(sigma) | {x, y}
    assert all(min(sp.dist(p, z) for z in near) <= 2 for p in path)


def test_path_to_chain_examples():
    cx = build_window_complex(path_graph(3), 1, None, 1)
    assert path_to_chain([0, 1, 2], cx) == Chain(1, {(0, 1): 1, (1, 2): 1})
    assert path_to_chain([2, 1, 0], cx) == Chain(1, {(1, 2): -1, (0, 1): -1})
    assert not path_to_chain([0], cx)
    with pytest.raises(EdgeOutOfScale):
        path_to_chain([0, 2], cx)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=1, max_size=10))
def test_path_to_chain_boundary(steps):
    sp = path_graph(9)
    cx = build_window_complex(sp, 1, None, 1)
    path = [steps[0]]
    for s in steps[1:]:
        cur = path[-1]
        path.append(cur + (1 if s > cur else -1 if s < cur else 0))
    w = path_to_chain(path, cx)
    want = Chain(0, {(path[-1],): 1, (path[0],): -1}) if path[0] != path[-1] else Chain.zero(0)
    assert boundary(w) == want
    assert support(w) <= set(path)


def test_bottleneck_path_and_tree():
    rep = bottleneck_check(path_graph(20), 3)
    assert rep.passes and rep.passes_at == 0
    rep = bottleneck_check(regular_tree(3, 6), 3)
    assert rep.passes and rep.passes_at <= 1


def test_bottleneck_grid_fails_with_corner_witness():
    sp = lattice(15, 15)
    rep = bottleneck_check(sp, 3)
    assert not rep.passes
    w = rep.witness
    assert {tuple(w["x"]), tuple(w["y"])} == {(0, 0), (14, 14)}
    path = w["avoiding_path"]
    assert path[0] == list(w["x"]) and path[-1] == list(w["y"])


def test_bottleneck_monotone():
    sp = random_graph(20, 4, 3)
    reps = [bottleneck_check(sp, d) for d in range(4)]
    for lo, hi in zip(reps, reps[1:]):
        if lo.passes:
            assert hi.passes and hi.passes_at == lo.passes_at


def test_bottleneck_sampled():
    rep = bottleneck_check(regular_tree(3, 4), 2, pairs=30, seed=4)
    assert rep.sampled and rep.pairs_checked == 30 and rep.passes


def test_ccd_estimates():
    assert ccd_estimate(cyclic(7), ZZ, [(3, 6), (3, 7), (3, 8)], 2, collar=3)["estimate"] == 0
    assert ccd_estimate(grid(1, 12), ZZ, [(1, 6), (1, 8), (1, 10), (1, 12)], 2)["estimate"] == 1
    rep = ccd_estimate(regular_tree(3, 8), ZZ, [(1, 4), (1, 5), (1, 6), (1, 7)], 2)
    assert rep["estimate"] == 1 and rep["conclusive"]
    assert rep["assumptions"]
    assert ccd_estimate(grid(2, 6), ZZ, [(1, 4), (1, 5), (1, 6)], 2)["estimate"] == 2


def test_oriented_top_chain():
    cx = window_complex(grid(1, 5), 1, None, 5, 2)
    tau = oriented_top_chain(cx, 1)
    bd = boundary(tau)
    assert len(bd) == 2
    assert oriented_top_chain(window_complex(grid(2, 2), 1, None, 2, 3), 2) is None


def test_pd_probe_line_and_plane():
    rep = pd_probe(grid(1, 12), ZZ, 1, [(1, 6), (1, 8), (1, 10), (1, 12)])
    assert rep.consistent and rep.pairing in (1, -1)
    rep = pd_probe(grid(2, 6), ZZ, 2, [(1, 4), (1, 5), (1, 6)])
    assert rep.consistent and rep.pairing in (1, -1)
    assert rep.candidate == "relative homology generator"


def test_pd_probe_free_group():
    rep = pd_probe(free_group_ball(2, 5), ZZ, 1, [(1, 3), (1, 4), (1, 5)])
    assert not rep.consistent
    assert not rep.conditions["rank_one_at_n"]


def test_pd_probe_over_field():
    rep = pd_probe(grid(1, 10), QQ, 1, [(1, 4), (1, 6), (1, 8)])
    assert rep.consistent
