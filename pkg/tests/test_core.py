from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stackedtau.constructions import general_lower_bound, path_ball, random_ball
from stackedtau.core import (
    AttachmentNotFound,
    FaceNotFree,
    FacetNotPresent,
    NoNewVertex,
    NotConsecutive,
    NotLinear,
    PinnedTooLarge,
    StackedError,
    WrongSimplexSize,
    boundary,
    canonical_block_labeling,
    dual_graph,
    is_linear,
    make_ball,
    path_order,
    remove_facets,
    reroot,
    simplex,
    to_hypergraph,
)


def brute_boundary(simplices, d):
    """Facets by raw multiplicity count over all (d+1)-subsets."""
    mult = Counter(f for s in simplices for f in combinations(sorted(s), d + 1))
    return {f for f, c in mult.items() if c == 1}


def test_simplex_rejects_duplicates():
    with pytest.raises(StackedError):
        simplex([1, 1, 2])
    assert simplex([3, 1, 2]) == (1, 2, 3)


class TestMakeBall:
    def test_single_simplex(self):
        ball = make_ball(2, [{1, 2, 3, 4}])
        assert ball.m == 1
        assert ball.n == 4

    def test_two_simplices(self):
        ball = make_ball(2, [{1, 2, 3, 4}, {2, 3, 4, 5}])
        assert ball.attachments[1] == (2, 3, 4)
        assert ball.parents[1] == 0
        assert ball.new_vertex(1) == 5

    def test_disjoint(self):
        with pytest.raises(AttachmentNotFound):
            make_ball(2, [{1, 2, 3, 4}, {5, 6, 7, 8}])

    def test_wrong_size(self):
        with pytest.raises(WrongSimplexSize):
            make_ball(2, [{1, 2, 3}])

    def test_no_new_vertex(self):
        with pytest.raises(NoNewVertex):
            make_ball(2, [{1, 2, 3, 4}, {2, 3, 4, 5}, {1, 2, 3, 5}])

    def test_face_not_free(self):
        # {2,3,4} is glued once already; gluing onto it again is illegal
        with pytest.raises(FaceNotFree):
            make_ball(2, [{1, 2, 3, 4}, {2, 3, 4, 5}, {2, 3, 4, 6}])


class TestBoundary:
    def test_simplex(self):
        sph = boundary(make_ball(2, [{1, 2, 3, 4}]))
        assert sph.facets == set(combinations((1, 2, 3, 4), 3))

    def test_two_tetra(self):
        sph = boundary(make_ball(2, [{1, 2, 3, 4}, {2, 3, 4, 5}]))
        assert len(sph.facets) == 6
        assert (2, 3, 4) not in sph.facets

    def test_random_m10(self):
        ball = random_ball(2, 10, seed=3)
        expected = brute_boundary(ball.simplices, 2)
        assert len(expected) == 22
        assert boundary(ball).facets == expected


@settings(max_examples=150, deadline=None)
@given(d=st.sampled_from([2, 3, 4]), m=st.integers(1, 30), seed=st.integers(0, 10**6))
def test_counts_and_tree(d, m, seed):
    ball = random_ball(d, m, seed)
    facets = boundary(ball).facets
    assert facets == brute_boundary(ball.simplices, d)
    assert len(facets) == d * m + 2
    assert ball.n == m + d + 1
    tree = dual_graph(ball)
    assert len(tree.edges) == m - 1
    # connected: union-find over the edges
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, j in tree.edges:
        parent[find(i)] = find(j)
    assert len({find(i) for i in range(m)}) == 1


@settings(max_examples=60, deadline=None)
@given(d=st.sampled_from([2, 3]), m=st.integers(1, 15), seed=st.integers(0, 10**6), data=st.data())
def test_reroot_preserves_boundary(d, m, seed, data):
    ball = random_ball(d, m, seed)
    i = data.draw(st.integers(0, m - 1))
    rb = reroot(ball, i)
    assert rb.simplices[0] == ball.simplices[i]
    assert sorted(rb.simplices) == sorted(ball.simplices)
    assert boundary(rb) == boundary(ball)
    old = {frozenset((ball.simplices[a], ball.simplices[b])) for a, b in dual_graph(ball).edges}
    new = {frozenset((rb.simplices[a], rb.simplices[b])) for a, b in dual_graph(rb).edges}
    assert old == new


class TestDualGraph:
    def test_single(self):
        tree = dual_graph(make_ball(2, [{1, 2, 3, 4}]))
        assert tree.m == 1 and tree.edges == ()

    def test_path(self):
        assert dual_graph(path_ball(2, 4)).edges == ((0, 1), (1, 2), (2, 3))

    def test_star(self):
        # 4-simplex with a new 4-simplex on each of its five facets
        root = (1, 2, 3, 4, 5)
        leaves = [tuple(v for v in root if v != j) + (5 + j,) for j in root]
        ball = make_ball(3, [root] + leaves)
        # recompute adjacency from raw intersections
        expected = {(i, j) for i, j in combinations(range(6), 2)
                    if len(set(ball.simplices[i]) & set(ball.simplices[j])) == 4}
        assert set(dual_graph(ball).edges) == expected == {(0, j) for j in range(1, 6)}
        assert not is_linear(ball)


class TestLinear:
    def test_single(self):
        ball = make_ball(2, [{1, 2, 3, 4}])
        assert is_linear(ball)
        assert path_order(ball) == [0]

    def test_path_ball(self):
        assert is_linear(path_ball(2, 9))
        assert path_order(path_ball(2, 9)) == list(range(9))

    def test_general_construction_not_linear(self):
        ball = general_lower_bound(2, 1).ball
        assert not is_linear(ball)
        assert max(dual_graph(ball).degrees()) == 3
        with pytest.raises(NotLinear):
            path_order(ball)

    def test_path_order_smaller_endpoint(self):
        ball = make_ball(2, [{2, 3, 4, 5}, {1, 2, 3, 4}, {3, 4, 5, 6}])
        # path is 1 - 0 - 2; endpoints 1 and 2, start from 1
        assert path_order(ball) == [1, 0, 2]


class TestReroot:
    def test_identity(self):
        ball = path_ball(2, 9)
        assert reroot(ball, 0).simplices == ball.simplices

    def test_two(self):
        ball = make_ball(2, [{1, 2, 3, 4}, {2, 3, 4, 5}])
        rb = reroot(ball, 1)
        assert rb.simplices == ((2, 3, 4, 5), (1, 2, 3, 4))
        assert boundary(rb) == boundary(ball)

    def test_reverse_path(self):
        ball = path_ball(2, 9)
        rb = reroot(ball, 8)
        assert rb.simplices == ball.simplices[::-1]
        assert boundary(rb).facets == boundary(ball).facets


class TestHypergraph:
    def test_tetra(self):
        sph = boundary(make_ball(2, [{1, 2, 3, 4}]))
        h = to_hypergraph(sph)
        assert h.n == 4 and len(h.edges) == 4
        h2 = to_hypergraph(remove_facets(sph, [(1, 2, 3)]))
        assert len(h2.edges) == 3
        assert h2.n == 4

    def test_remove_idempotent(self):
        sph = boundary(make_ball(2, [{1, 2, 3, 4}]))
        once = remove_facets(sph, [(1, 2, 3)])
        assert remove_facets(once, [(1, 2, 3)]) == once

    def test_missing(self):
        sph = boundary(make_ball(2, [{1, 2, 3, 4}]))
        with pytest.raises(FacetNotPresent):
            remove_facets(sph, [(1, 2, 5)])

    def test_linear_lb_base_removal(self):
        sph = boundary(path_ball(2, 11))
        assert sph.n == 14
        out = remove_facets(sph, [(1, 2, 4), (11, 13, 14)])
        assert len(to_hypergraph(out).edges) == len(sph.facets) - 2
        assert len(out.facets) + len(out.removed) == 2 * 11 + 2


class TestCanonicalLabeling:
    def test_single_pinned(self):
        ball = make_ball(2, [{5, 7, 8, 9}])
        block, mapping = canonical_block_labeling(ball, 0, 1, pinned={7, 9})
        assert mapping == {7: 1, 9: 2, 5: 3, 8: 4}
        assert block.simplices == ((1, 2, 3, 4),)

    def test_block_of_path(self):
        ball = path_ball(2, 20)
        block, mapping = canonical_block_labeling(ball, 11, 7)
        assert block.n == 10
        for i, s in enumerate(block.simplices, start=1):
            assert max(s) == i + 3
        assert len(mapping) == 10

    def test_pinned_too_large(self):
        with pytest.raises(PinnedTooLarge):
            canonical_block_labeling(make_ball(2, [{1, 2, 3, 4}]), 0, 1, pinned={1, 2, 3, 4})

    def test_too_long(self):
        with pytest.raises(NotConsecutive):
            canonical_block_labeling(path_ball(2, 3), 1, 7)
