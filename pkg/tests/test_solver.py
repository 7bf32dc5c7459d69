import os
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stackedtau.constructions import (
    general_lower_bound,
    general_lower_bound_2,
    linear_lower_bound,
    random_ball,
)
from stackedtau.core import FacetHypergraph, boundary, remove_facets, to_hypergraph
from stackedtau.solver import (
    NODE_CAP_ENV,
    EmptyEdge,
    NodeLimitExceeded,
    brute_force_tau,
    greedy_transversal,
    is_transversal,
    matching_lower_bound,
    min_transversal,
)

TETRA = FacetHypergraph.from_edges(combinations((1, 2, 3, 4), 3))

hypergraphs = st.lists(
    st.frozensets(st.integers(0, 9), min_size=1, max_size=4), min_size=0, max_size=14
).map(FacetHypergraph.from_edges)


class TestExamples:
    def test_tetra(self):
        cert, stats = min_transversal(TETRA)
        assert cert.size == 2 and cert.optimal
        assert stats.nodes_explored >= 1

    def test_general_13(self):
        h = to_hypergraph(general_lower_bound_2(1).sphere)
        assert min_transversal(h)[0].size >= 6

    def test_linear_lb(self):
        h = to_hypergraph(linear_lower_bound(2, 1).sphere)
        assert min_transversal(h)[0].size == 6 == brute_force_tau(h)

    def test_empty_edge(self):
        with pytest.raises(EmptyEdge):
            min_transversal(FacetHypergraph((1,), (frozenset(),)))
        with pytest.raises(EmptyEdge):
            greedy_transversal(FacetHypergraph((1,), (frozenset(),)))

    def test_no_edges(self):
        cert, _ = min_transversal(FacetHypergraph((1, 2), ()))
        assert cert.size == 0


class TestBruteForce:
    def test_empty(self):
        assert brute_force_tau(FacetHypergraph((), ())) == 0

    def test_tetra(self):
        assert brute_force_tau(TETRA) == 2

    def test_not_found(self):
        assert brute_force_tau(TETRA, max_size=1) is None


class TestGreedy:
    def test_tetra(self):
        assert greedy_transversal(TETRA).size == 2

    def test_tie_smallest(self):
        cert = greedy_transversal(FacetHypergraph.from_edges([{5, 7}]))
        assert cert.vertices == {5} and not cert.optimal

    def test_linear_lb_sandwich(self):
        h = to_hypergraph(linear_lower_bound(2, 1).sphere)
        assert 6 <= greedy_transversal(h).size <= 14


class TestHelpers:
    def test_is_transversal(self):
        assert is_transversal(TETRA, {1, 2, 3, 4})
        assert not is_transversal(TETRA, set())

    def test_matching_general(self):
        h = to_hypergraph(general_lower_bound(2, 1).sphere)
        assert matching_lower_bound(h) >= 4


@settings(max_examples=300, deadline=None)
@given(h=hypergraphs)
def test_oracle_and_sandwich(h):
    cert, _ = min_transversal(h)
    assert is_transversal(h, cert.vertices)
    assert cert.size == brute_force_tau(h)
    assert matching_lower_bound(h) <= cert.size <= greedy_transversal(h).size <= h.n


@settings(max_examples=80, deadline=None)
@given(d=st.sampled_from([2, 3]), m=st.integers(1, 8), seed=st.integers(0, 10**6), data=st.data())
def test_monotone_under_removal(d, m, seed, data):
    sph = boundary(random_ball(d, m, seed))
    facets = sorted(sph.facets)
    drop = data.draw(st.sets(st.sampled_from(facets), max_size=3))
    full = min_transversal(to_hypergraph(sph))[0].size
    less = min_transversal(to_hypergraph(remove_facets(sph, drop)))[0].size
    assert less <= full


def test_deterministic():
    h = to_hypergraph(general_lower_bound(3, 1).sphere)
    a, _ = min_transversal(h)
    b, _ = min_transversal(h)
    assert a == b


def test_parallel_same_size():
    h = to_hypergraph(linear_lower_bound(2, 2).sphere)
    serial, _ = min_transversal(h)
    par, _ = min_transversal(h, workers=2)
    assert par.size == serial.size == 12
    assert is_transversal(h, par.vertices)


def test_node_cap(monkeypatch):
    h = to_hypergraph(general_lower_bound(3, 1).sphere)
    with pytest.raises(NodeLimitExceeded) as info:
        min_transversal(h, max_nodes=2)
    assert is_transversal(h, info.value.best.vertices)
    monkeypatch.setenv(NODE_CAP_ENV, "2")
    with pytest.raises(NodeLimitExceeded):
        min_transversal(h)
    monkeypatch.delenv(NODE_CAP_ENV)
    assert os.environ.get(NODE_CAP_ENV) is None
    assert min_transversal(h)[0].size == 9
