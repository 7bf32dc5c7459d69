"""Exact minimum transversal (hitting set) by branch and bound.

Edges are held as int bitmasks over a compacted vertex index. Each search node
applies unit-edge forcing, superset-edge deletion and dominated-vertex deletion,
then prunes with max(disjoint-edge packing, ceil(|E| / max degree)) and branches
on a max-degree vertex (ties to the smallest original id), include-branch first.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .core import FacetHypergraph

NODE_CAP_ENV = "STACKEDTAU_NODE_CAP"


class EmptyEdge(ValueError):
    pass


class NodeLimitExceeded(RuntimeError):
    def __init__(self, nodes: int, best: "TransversalCertificate"):
        super().__init__(f"node cap reached after {nodes} nodes (best so far {best.size})")
        self.nodes = nodes
        self.best = best


@dataclass(frozen=True)
class TransversalCertificate:
    vertices: frozenset[int]
    optimal: bool

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass
class SolveStats:
    nodes_explored: int = 0
    reductions_applied: int = 0
    wall_time: float = 0.0


def _check_edges(h: FacetHypergraph) -> None:
    for e in h.edges:
        if not e:
            raise EmptyEdge("hypergraph has an empty edge")


def is_transversal(h: FacetHypergraph, t: Iterable[int]) -> bool:
    t = set(t)
    return all(e & t for e in h.edges)


def matching_lower_bound(h: FacetHypergraph) -> int:
    """Size of a greedily built set of pairwise disjoint edges (smallest edges first)."""
    used: set[int] = set()
    count = 0
    for e in sorted(h.edges, key=lambda e: (len(e), sorted(e))):
        if not e & used:
            used |= e
            count += 1
    return count


def greedy_transversal(h: FacetHypergraph) -> TransversalCertificate:
    """Repeatedly take the vertex hitting the most remaining edges (ties: smallest id)."""
    _check_edges(h)
    remaining = [set(e) for e in h.edges]
    chosen: set[int] = set()
    while remaining:
        deg: dict[int, int] = {}
        for e in remaining:
            for v in e:
                deg[v] = deg.get(v, 0) + 1
        v = min(deg, key=lambda u: (-deg[u], u))
        chosen.add(v)
        remaining = [e for e in remaining if v not in e]
    return TransversalCertificate(frozenset(chosen), optimal=False)


def brute_force_tau(h: FacetHypergraph, max_size: int | None = None) -> int | None:
    """Smallest transversal size found by trying subsets in increasing size.

    Returns None when nothing of size <= max_size works. Independent of the
    branch-and-bound path: plain itertools enumeration over set intersections.
    """
    if max_size is None:
        max_size = h.n
    if not h.edges:
        return 0
    edges = [frozenset(e) for e in h.edges]
    if any(not e for e in edges):
        return None
    verts = sorted({v for e in edges for v in e})
    for size in range(0, min(max_size, len(verts)) + 1):
        for t in combinations(verts, size):
            ts = set(t)
            if all(not e.isdisjoint(ts) for e in edges):
                return size
    return None


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class _Search:
    def __init__(self, nverts: int, max_nodes: int | None):
        self.nverts = nverts
        self.max_nodes = max_nodes
        self.best_mask = 0
        self.best_size = nverts + 1
        self.nodes = 0
        self.reductions = 0

    def reduce(self, edges: list[int], chosen: int) -> tuple[list[int] | None, int]:
        """Apply reductions to a fixpoint. Returns (None, _) if some edge became empty."""
        while True:
            changed = False
            forced = 0
            for e in edges:
                if e == 0:
                    return None, chosen
                if e & (e - 1) == 0:
                    forced |= e
            if forced:
                chosen |= forced
                edges = [e for e in edges if not e & forced]
                self.reductions += 1
                changed = True
            # superset-edge deletion
            edges = sorted(set(edges), key=lambda e: (_popcount(e), e))
            kept: list[int] = []
            for e in edges:
                if any(k & e == k for k in kept):
                    self.reductions += 1
                    continue
                kept.append(e)
            edges = kept
            # dominated-vertex deletion: drop u when every edge with u also has v
            inc: dict[int, int] = {}
            for idx, e in enumerate(edges):
                bit = 1 << idx
                for v in _bits(e):
                    inc[v] = inc.get(v, 0) | bit
            drop = 0
            items = sorted(inc.items())
            for u, iu in items:
                for v, iv in items:
                    if u == v or drop >> v & 1:
                        continue
                    if iu & iv == iu and (iu != iv or v < u):
                        drop |= 1 << u
                        break
            if drop:
                self.reductions += 1
                edges = [e & ~drop for e in edges]
                changed = True
            if not changed:
                return edges, chosen

    @staticmethod
    def lower_bound(edges: list[int]) -> int:
        used = 0
        packing = 0
        for e in edges:  # already sorted by size
            if not e & used:
                used |= e
                packing += 1
        deg: dict[int, int] = {}
        for e in edges:
            for v in _bits(e):
                deg[v] = deg.get(v, 0) + 1
        maxdeg = max(deg.values())
        return max(packing, -(-len(edges) // maxdeg))

    def run(self, edges: list[int], chosen: int) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _CapHit()
        reduced, chosen = self.reduce(edges, chosen)
        if reduced is None:
            return
        count = _popcount(chosen)
        if count >= self.best_size:
            return
        if not reduced:
            self.best_size = count
            self.best_mask = chosen
            return
        if count + self.lower_bound(reduced) >= self.best_size:
            return
        deg: dict[int, int] = {}
        for e in reduced:
            for v in _bits(e):
                deg[v] = deg.get(v, 0) + 1
        v = min(deg, key=lambda u: (-deg[u], u))
        bit = 1 << v
        self.run([e for e in reduced if not e & bit], chosen | bit)
        self.run([e & ~bit for e in reduced], chosen)


class _CapHit(Exception):
    pass


def _compact(h: FacetHypergraph) -> tuple[list[int], list[int]]:
    """Bit index i stands for the i-th smallest vertex that lies in some edge."""
    verts = sorted({v for e in h.edges for v in e})
    index = {v: i for i, v in enumerate(verts)}
    masks = []
    for e in h.edges:
        m = 0
        for v in e:
            m |= 1 << index[v]
        masks.append(m)
    return verts, masks


def _solve_subproblem(args):
    nverts, edges, chosen, best_size, best_mask, max_nodes = args
    s = _Search(nverts, max_nodes)
    s.best_size, s.best_mask = best_size, best_mask
    try:
        s.run(edges, chosen)
        capped = False
    except _CapHit:
        capped = True
    return s.best_size, s.best_mask, s.nodes, s.reductions, capped


def _split(search: _Search, edges: list[int], chosen: int, depth: int) -> list[tuple[list[int], int]]:
    """Expand the top ``depth`` branching levels into independent subproblems."""
    reduced, chosen = search.reduce(edges, chosen)
    if reduced is None:
        return []
    if depth == 0 or not reduced:
        return [(reduced, chosen)]
    deg: dict[int, int] = {}
    for e in reduced:
        for v in _bits(e):
            deg[v] = deg.get(v, 0) + 1
    v = min(deg, key=lambda u: (-deg[u], u))
    bit = 1 << v
    return (_split(search, [e for e in reduced if not e & bit], chosen | bit, depth - 1)
            + _split(search, [e & ~bit for e in reduced], chosen, depth - 1))


def default_node_cap() -> int | None:
    raw = os.environ.get(NODE_CAP_ENV)
    return int(raw) if raw else None


def min_transversal(h: FacetHypergraph, max_nodes: int | None = None,
                    workers: int = 1) -> tuple[TransversalCertificate, SolveStats]:
    """Minimum transversal of ``h`` and search statistics.

    ``max_nodes`` defaults to the STACKEDTAU_NODE_CAP environment variable; when
    exceeded, NodeLimitExceeded carries the best transversal found. With
    ``workers > 1`` the top of the tree is split across processes: the size is
    still exact but the returned vertex set may differ from the serial run.
    """
    _check_edges(h)
    if max_nodes is None:
        max_nodes = default_node_cap()
    t0 = time.perf_counter()
    verts, masks = _compact(h)
    stats = SolveStats()
    if not masks:
        stats.nodes_explored = 1
        stats.wall_time = time.perf_counter() - t0
        return TransversalCertificate(frozenset(), True), stats

    greedy = greedy_transversal(h)
    index = {v: i for i, v in enumerate(verts)}
    search = _Search(len(verts), max_nodes)
    search.best_size = greedy.size
    search.best_mask = sum(1 << index[v] for v in greedy.vertices)

    capped = False
    if workers <= 1:
        try:
            search.run(masks, 0)
        except _CapHit:
            capped = True
        stats.nodes_explored = search.nodes
        stats.reductions_applied = search.reductions
    else:
        subs = _split(search, masks, 0, depth=max(1, (workers - 1).bit_length() + 1))
        jobs = [(len(verts), e, c, search.best_size, search.best_mask, max_nodes) for e, c in subs]
        stats.nodes_explored = search.nodes
        stats.reductions_applied = search.reductions
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for size, mask, nodes, reds, hit in pool.map(_solve_subproblem, jobs):
                stats.nodes_explored += nodes
                stats.reductions_applied += reds
                capped = capped or hit
                if size < search.best_size or (size == search.best_size and mask < search.best_mask):
                    search.best_size, search.best_mask = size, mask

    cert_verts = frozenset(verts[i] for i in _bits(search.best_mask))
    stats.wall_time = time.perf_counter() - t0
    cert = TransversalCertificate(cert_verts, optimal=not capped)
    if not is_transversal(h, cert_verts):
        raise AssertionError("solver produced a non-transversal")
    if capped:
        raise NodeLimitExceeded(stats.nodes_explored, cert)
    return cert, stats


def tau(h: FacetHypergraph, **kwargs) -> int:
    return min_transversal(h, **kwargs)[0].size


def all_min_transversals(h: FacetHypergraph, size: int) -> list[frozenset[int]]:
    """Every transversal of exactly ``size`` vertices, by plain enumeration."""
    verts = sorted({v for e in h.edges for v in e})
    edges = [frozenset(e) for e in h.edges]
    out = []
    for t in combinations(verts, size):
        ts = frozenset(t)
        if all(not e.isdisjoint(ts) for e in edges):
            out.append(ts)
    return out
