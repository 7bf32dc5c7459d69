"""Simplicial ground types for stacked balls and their boundary spheres.

A stacked (d+1)-ball is stored as the ordered list of its top simplices
(each a sorted tuple of d+2 vertex ids) together with, for every simplex
after the first, the index of the earlier simplex it was glued onto.
Simplex indices are 0-based; vertex ids are whatever the caller used.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

Simplex = tuple[int, ...]


class StackedError(ValueError):
    """Base class for invalid stacked-complex input."""


class WrongSimplexSize(StackedError):
    pass


class AttachmentNotFound(StackedError):
    pass


class FaceNotFree(StackedError):
    pass


class NoNewVertex(StackedError):
    pass


class NotLinear(StackedError):
    pass


class FacetNotPresent(StackedError):
    pass


class NotConsecutive(StackedError):
    pass


class PinnedTooLarge(StackedError):
    pass


def simplex(vertices: Iterable[int]) -> Simplex:
    """Return the sorted tuple for a vertex set, rejecting duplicates and negatives."""
    vs = sorted(vertices)
    if not vs:
        raise StackedError("a simplex needs at least one vertex")
    for a, b in zip(vs, vs[1:]):
        if a == b:
            raise StackedError(f"duplicate vertex {a} in simplex")
    if vs[0] < 0:
        raise StackedError("vertex ids must be non-negative")
    return tuple(vs)


def faces(s: Simplex, size: int) -> list[Simplex]:
    return list(combinations(s, size))


@dataclass(frozen=True)
class StackedBall:
    """A validated stacked (d+1)-ball; build it with :func:`make_ball`."""

    d: int
    simplices: tuple[Simplex, ...]
    parents: tuple[int | None, ...]
    attachments: tuple[Simplex | None, ...]

    @property
    def m(self) -> int:
        return len(self.simplices)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for s in self.simplices for v in s}))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def new_vertex(self, i: int) -> int | None:
        """The vertex simplex ``i`` introduced (None for the first simplex)."""
        if i == 0:
            return None
        (x,) = set(self.simplices[i]) - set(self.attachments[i])
        return x


@dataclass(frozen=True)
class StackedSphere:
    """Boundary complex of a stacked ball, possibly with some facets removed."""

    dim: int
    facets: frozenset[Simplex]
    removed: frozenset[Simplex] = field(default_factory=frozenset)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for f in self.facets | self.removed for v in f}))

    @property
    def n(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class FacetHypergraph:
    vertices: tuple[int, ...]
    edges: tuple[frozenset[int], ...]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], vertices: Iterable[int] = ()):
        es = tuple(frozenset(e) for e in edges)
        vs = set(vertices)
        for e in es:
            vs |= e
        return cls(tuple(sorted(vs)), es)


@dataclass(frozen=True)
class DualTree:
    m: int
    edges: tuple[tuple[int, int], ...]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.m)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        for nbrs in adj:
            nbrs.sort()
        return adj

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency()]


def make_ball(d: int, simplices: Sequence[Iterable[int]]) -> StackedBall:
    """Validate a construction sequence and resolve each attachment face."""
    if d < 0:
        raise StackedError("dimension must be non-negative")
    if not simplices:
        raise StackedError("a stacked ball needs at least one simplex")
    ss = [simplex(s) for s in simplices]
    for i, s in enumerate(ss):
        if len(s) != d + 2:
            raise WrongSimplexSize(f"simplex {i} has {len(s)} vertices, expected {d + 2}")

    seen: set[int] = set(ss[0])
    # face -> number of earlier simplices containing it
    face_count: Counter[Simplex] = Counter(faces(ss[0], d + 1))
    face_owner: dict[Simplex, int] = {f: 0 for f in faces(ss[0], d + 1)}
    parents: list[int | None] = [None]
    attachments: list[Simplex | None] = [None]
    for i in range(1, len(ss)):
        s = ss[i]
        shared = [f for f in faces(s, d + 1) if f in face_count]
        if not shared:
            raise AttachmentNotFound(f"simplex {i} {s} shares no {d}-face with the earlier ball")
        new = [v for v in s if v not in seen]
        if len(new) != 1:
            raise NoNewVertex(f"simplex {i} {s} adds {len(new)} new vertices, expected 1")
        eta = tuple(v for v in s if v != new[0])
        if face_count[eta] != 1:
            raise FaceNotFree(f"face {eta} of simplex {i} is not free")
        parents.append(face_owner[eta])
        attachments.append(eta)
        seen.add(new[0])
        for f in faces(s, d + 1):
            face_count[f] += 1
            face_owner.setdefault(f, i)
    return StackedBall(d, tuple(ss), tuple(parents), tuple(attachments))


def boundary(ball: StackedBall) -> StackedSphere:
    """Facets of the boundary sphere: d-faces lying in exactly one top simplex."""
    count: Counter[Simplex] = Counter()
    for s in ball.simplices:
        count.update(faces(s, ball.d + 1))
    return StackedSphere(ball.d, frozenset(f for f, c in count.items() if c == 1))


def dual_graph(ball: StackedBall) -> DualTree:
    """Nodes are top simplices; i ~ j iff they share a d-face."""
    owners: dict[Simplex, list[int]] = {}
    for i, s in enumerate(ball.simplices):
        for f in faces(s, ball.d + 1):
            owners.setdefault(f, []).append(i)
    edges = sorted(tuple(sorted(o)) for o in owners.values() if len(o) == 2)
    return DualTree(ball.m, tuple(edges))


def is_linear(ball: StackedBall) -> bool:
    return all(deg <= 2 for deg in dual_graph(ball).degrees())


def path_order(ball: StackedBall) -> list[int]:
    """Simplex indices end to end along the dual path, smaller endpoint first."""
    tree = dual_graph(ball)
    if ball.m == 1:
        return [0]
    degs = tree.degrees()
    if any(deg > 2 for deg in degs):
        raise NotLinear("dual tree is not a path")
    adj = tree.adjacency()
    start = min(i for i, deg in enumerate(degs) if deg == 1)
    order = [start]
    prev = None
    while len(order) < ball.m:
        cur = order[-1]
        (nxt,) = [j for j in adj[cur] if j != prev]
        prev = cur
        order.append(nxt)
    return order


def reorder(ball: StackedBall, order: Sequence[int]) -> StackedBall:
    return make_ball(ball.d, [ball.simplices[i] for i in order])


def reroot(ball: StackedBall, i: int) -> StackedBall:
    """Reorder the construction so simplex ``i`` comes first (DFS, ascending children)."""
    if not 0 <= i < ball.m:
        raise IndexError(f"simplex index {i} out of range")
    adj = dual_graph(ball).adjacency()
    order: list[int] = []
    visited = set()
    stack = [i]
    while stack:
        u = stack.pop()
        if u in visited:
            continue
        visited.add(u)
        order.append(u)
        stack.extend(v for v in reversed(adj[u]) if v not in visited)
    return reorder(ball, order)


def to_path_order(ball: StackedBall) -> StackedBall:
    order = path_order(ball)
    if order == list(range(ball.m)):
        return ball
    return reorder(ball, order)


def to_hypergraph(sphere: StackedSphere) -> FacetHypergraph:
    """Facet hypergraph of the sphere; removed facets are left out but their vertices kept."""
    return FacetHypergraph(sphere.vertices, tuple(frozenset(f) for f in sorted(sphere.facets)))


def remove_facets(sphere: StackedSphere, facets_: Iterable[Iterable[int]]) -> StackedSphere:
    fs = {simplex(f) for f in facets_}
    for f in fs:
        if f not in sphere.facets and f not in sphere.removed:
            raise FacetNotPresent(f"{f} is not a facet of the sphere")
    return StackedSphere(sphere.dim, sphere.facets - fs, sphere.removed | fs)


def relabel(ball: StackedBall, mapping: dict[int, int]) -> StackedBall:
    return make_ball(ball.d, [[mapping[v] for v in s] for s in ball.simplices])


def canonical_block_labeling(
    ball: StackedBall, start: int, length: int, pinned: Iterable[int] = ()
) -> tuple[StackedBall, dict[int, int]]:
    """Cut ``length`` consecutive simplices (in path order) from ``start`` and relabel them.

    The first block simplex becomes {1, ..., d+2} with the pinned vertices taking the
    smallest labels; the vertex introduced by the i-th block simplex (1-based) gets
    label i+d+1. Returns the relabeled block and the old -> new vertex map.
    """
    pinned = sorted(set(pinned))
    order = path_order(ball)
    if start not in order:
        raise NotConsecutive(f"no simplex {start}")
    pos = order.index(start)
    # walk towards the longer side when start is an endpoint of the path
    if pos + length <= len(order):
        idx = order[pos:pos + length]
    elif pos - length + 1 >= 0:
        idx = order[pos - length + 1:pos + 1][::-1]
    else:
        raise NotConsecutive(f"fewer than {length} simplices from {start}")
    if length < 1:
        raise NotConsecutive("block length must be positive")
    first = ball.simplices[idx[0]]
    if len(pinned) > ball.d + 1:
        raise PinnedTooLarge(f"at most {ball.d + 1} pinned vertices allowed")
    if not set(pinned) <= set(first):
        raise StackedError("pinned vertices must lie in the first block simplex")
    rest = [v for v in first if v not in pinned]
    mapping = {v: k + 1 for k, v in enumerate(pinned + rest)}
    label = ball.d + 2
    for j in idx[1:]:
        new = [v for v in ball.simplices[j] if v not in mapping]
        if len(new) != 1:
            raise NotConsecutive("block simplices do not form a stacked chain")
        label += 1
        mapping[new[0]] = label
    block = make_ball(ball.d, [[mapping[v] for v in ball.simplices[j]] for j in idx])
    return block, mapping


def canonical_ids(vertices: Iterable[int]) -> dict[int, int]:
    """Map vertex labels to 0..n-1 in ascending order (used for file I/O)."""
    return {v: i for i, v in enumerate(sorted(set(vertices)))}
