import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from coarsekit.algebra import GF, QQ, ZZ
from coarsekit.chain_complex import (Chain, Cochain, augment, boundary, build_window_complex, check_complex,
                                     coboundary, cone_homotopy, direct_complex_from_json, simplex_scale, support,
                                     window_complex)
from coarsekit.errors import ConeOutOfScale, DimensionMismatch, SizeExceeded
from coarsekit.metric_space import cyclic, free_group_ball, grid, path_graph, random_graph, regular_tree, simplex

import oracles


def C(*terms):
    """Chain from (coefficient, simplex) pairs."""
    dim = len(terms[0][1]) - 1
    out = Chain.zero(dim)
    for c, s in terms:
        out = out + Chain.basis(s, coeff=c)
    return out


a, b, c, d = 0, 1, 2, 3


def test_counts_examples():
    assert build_window_complex(simplex(3), 1, None, 2).counts() == [3, 3, 1]
    assert build_window_complex(cyclic(3), 1, None, 2).counts() == [3, 3, 1]
    assert build_window_complex(path_graph(3), 1, None, 2).counts() == [3, 2, 0]


def test_counts_match_brute_force():
    sp = random_graph(30, 25, 4)
    for scale in (1, 2):
        cx = build_window_complex(sp, scale, None, 3)
        brute = oracles.rips_simplices(range(sp.n), sp.dist, scale, 3)
        assert cx.simplices == brute


def test_simplex_scale_cached():
    sp = grid(2, 2)
    cx = build_window_complex(sp, 2, None, 2)
    for k in range(3):
        for s in cx.simplices[k]:
            assert cx.scales[s] == simplex_scale(sp, s)
    assert cx.scales[cx.simplices[0][0]] == 0


def test_size_cap_reports_count():
    with pytest.raises(SizeExceeded) as err:
        build_window_complex(grid(2, 4), 1, None, 3, cap=100)
    assert err.value.count > 100


def test_boundary_examples():
    assert boundary(C((1, (a, b)))) == C((1, (b,)), (-1, (a,)))
    assert boundary(C((1, (a, b)), (1, (b, c)))) == C((1, (c,)), (-1, (a,)))
    assert not boundary(boundary(C((1, (a, b, c)))))
    z = boundary(C((1, (a,))))
    assert z.dim == -1 and not z


def test_augment_examples():
    assert augment(C((1, (a,)))) == 1
    assert augment(C((1, (b,)), (-1, (a,)))) == 0
    assert augment(C((3, (a,)), (2, (b,)))) == 5
    with pytest.raises(DimensionMismatch):
        augment(C((1, (a, b))))


def test_cone_examples():
    cx = build_window_complex(simplex(3), 1, None, 2)
    h = cone_homotopy(a, C((1, (b,)), (-1, (a,))), cx)
    assert h == C((1, (a, b)))
    assert boundary(h) == C((1, (b,)), (-1, (a,)))
    sigma = C((1, (b, c)))
    h = cone_homotopy(a, sigma, cx)
    assert h == C((1, (a, b, c)))
    assert boundary(h) + cone_homotopy(a, boundary(sigma), cx) == sigma
    assert not cone_homotopy(a, Chain.zero(1), cx)


def test_cone_out_of_scale():
    cx = build_window_complex(path_graph(3), 1, None, 2)
    with pytest.raises(ConeOutOfScale) as err:
        cone_homotopy(0, C((1, (1, 2))), cx)
    assert err.value.simplex == (0, 1, 2)


def test_support_examples():
    assert support(C((1, (a, b)), (3, (c, d)))) == {a, c}
    assert support(Chain.zero(1)) == set()
    assert support(C((1, (a,)))) == {a}


def test_chain_rejects_wrong_dimension():
    with pytest.raises(DimensionMismatch):
        Chain(1, {(0, 1, 2): 1})
    with pytest.raises(DimensionMismatch):
        C((1, (a, b))) + C((1, (a,)))


def test_ring_reduction():
    x = Chain(1, {(0, 1): 3}, GF(3))
    assert not x
    y = Chain(1, {(0, 1): 1}, GF(2))
    assert not (y + y)


def test_matrix_boundary_agrees_with_chain_boundary():
    cx = window_complex(grid(2, 3), 1, None, 3, 3)
    rng = random.Random(3)
    for k in (1, 2, 3):
        for _ in range(5):
            keys = rng.sample(cx.simplices[k], 6)
            ch = Chain(k, {s: rng.randint(-2, 2) for s in keys})
            vec = cx.boundary_matrix(k).matvec(cx.chain_vector(ch))
            assert cx.vector_chain(k - 1, vec) == boundary(ch)


def test_boundary_matrix_matches_dense_oracle():
    sp = regular_tree(3, 3)
    cx = build_window_complex(sp, 2, None, 2)
    brute = oracles.rips_simplices(range(sp.n), sp.dist, 2, 2)
    for k in (1, 2):
        assert cx.boundary_matrix(k).to_dense() == oracles.boundary_dense(brute, k)


@pytest.mark.parametrize("sp,scale", [(grid(2, 3), 1), (free_group_ball(2, 2), 2), (cyclic(9), 3),
                                      (regular_tree(3, 3), 2), (random_graph(40, 30, 2), 2)])
def test_dd_zero(sp, scale):
    cx = build_window_complex(sp, scale, None, 3)
    assert check_complex(cx) == {"dd_zero": True, "eps_d_zero": True}


def test_closure_under_faces():
    cx = build_window_complex(random_graph(30, 30, 9), 2, None, 3)
    for k in range(1, 4):
        for s in cx.simplices[k]:
            for t in range(len(s)):
                assert s[:t] + s[t + 1:] in cx


def test_window_monotone():
    sp = grid(2, 4)
    small = window_complex(sp, 1, None, 2, 2)
    big = window_complex(sp, 2, None, 3, 2)
    assert small.is_subcomplex_of(big)
    assert not big.is_subcomplex_of(small)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 40), st.integers(1, 2), st.integers(1, 2))
def test_displacement_bound(seed, scale, k):
    sp = random_graph(25, 15, seed)
    cx = build_window_complex(sp, scale, None, 2)
    rng = random.Random(seed)
    if not cx.simplices[k]:
        return
    keys = rng.sample(cx.simplices[k], min(5, len(cx.simplices[k])))
    ch = Chain(k, {s: rng.choice([-1, 1, 2]) for s in keys})
    src = support(ch)
    for y in support(boundary(ch)):
        assert min(sp.dist(y, x) for x in src) <= scale


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(0, 6), st.integers(0, 10_000), st.integers(0, 3))
def test_cone_identity_on_reduced_cycles(npts, x, seed, k):
    sp = simplex(npts)
    cx = build_window_complex(sp, 1, None, min(k + 2, npts - 1))
    if k > cx.max_dim - 1:
        return
    x = x % npts
    rng = random.Random(seed)
    # reduced cycle: boundary of a random (k+1)-chain
    keys = cx.simplices[k + 1]
    w = Chain(k + 1, {s: rng.randint(-3, 3) for s in rng.sample(keys, min(4, len(keys)))})
    sigma = boundary(w)
    h = cone_homotopy(x, sigma, cx)
    assert boundary(h) + cone_homotopy(x, boundary(sigma), cx) == sigma


def test_coboundary_sign():
    cx = build_window_complex(path_graph(3), 1, None, 2)
    alpha = Cochain(0, {(0,): 1})
    # (delta alpha)[0,1] = -alpha(d[0,1]) = -(alpha[1] - alpha[0]) = 1
    assert coboundary(alpha, cx) == Cochain(1, {(0, 1): 1})


def test_direct_complex_roundtrip():
    cx = direct_complex_from_json({"dims": [1, 1], "boundaries": {"1": [[0, 0, 2]]}})
    assert cx.counts() == [1, 1]
    again = direct_complex_from_json(json.loads(json.dumps(cx.to_json())))
    assert again.boundary_matrix(1) == cx.boundary_matrix(1)
    with pytest.raises(DimensionMismatch):
        direct_complex_from_json({"dims": [1, 1, 1], "boundaries": {"1": [[0, 0, 1]], "2": [[0, 0, 1]]}})


def test_summary_json():
    cx = window_complex(grid(2, 3), 1, None, 2, 2)
    s = cx.summary()
    assert s["counts"] == cx.counts()
    assert s["window"] == {"center": [0, 0], "radius": 2}
    json.dumps(s)
