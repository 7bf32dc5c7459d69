"""Transversals of size at most ceil(3n/7) for linear stacked 2-spheres.

The recursion keeps two transversals T1, T2 whose union holds at least three
vertices of the last tetrahedron. Up to ten vertices the pair comes from an
exhaustive search with |T_i| <= floor(n/2). Beyond that the last seven
tetrahedra are cut off as a ten-vertex block, relabeled canonically with the
shared triangle on {1, 2, 3}, and covered by a pair of size-4 transversals that
each meet a chosen 2-subset L of that triangle. Since each block transversal
shares a vertex with one of the prefix transversals, adding seven vertices costs
three.

Both searches run over bitmasks and are cached on the canonical labeling, so a
long sphere only ever touches 4 * 3**5 distinct blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import ceil

from .core import (
    NotLinear,
    Simplex,
    StackedBall,
    StackedError,
    boundary,
    canonical_block_labeling,
    make_ball,
    to_hypergraph,
    to_path_order,
)
from .solver import is_transversal


class WrongDimension(StackedError):
    pass


class TooSmall(StackedError):
    pass


class InternalContradiction(AssertionError):
    """A constructed set failed verification; this is a bug, never a valid output."""


@dataclass(frozen=True)
class TransversalPair:
    t1: frozenset[int]
    t2: frozenset[int]
    last_facet_hits: int

    @property
    def size(self) -> int:
        return max(len(self.t1), len(self.t2))

    @property
    def best(self) -> frozenset[int]:
        return self.t1 if len(self.t1) <= len(self.t2) else self.t2


@dataclass(frozen=True)
class BlockInput:
    ball10: StackedBall
    L: tuple[int, int]

    def __post_init__(self):
        if self.ball10.d != 2 or self.ball10.m != 7:
            raise StackedError("a block is seven tetrahedra")
        for i, s in enumerate(self.ball10.simplices, start=1):
            if max(s) != i + 3:
                raise StackedError("block is not canonically labeled")
        if len(set(self.L)) != 2 or not set(self.L) <= {1, 2, 3}:
            raise StackedError("L must be a 2-subset of {1, 2, 3}")


def bound_37(n: int) -> int:
    return ceil(3 * n / 7)


def _facet_masks(simplices: tuple[Simplex, ...]) -> list[int]:
    ball = make_ball(2, simplices)
    return [sum(1 << v for v in f) for f in sorted(boundary(ball).facets)]


def _small_transversals(simplices, max_size):
    """All transversal bitmasks of size <= max_size, ordered by (size, sorted vertices)."""
    masks = _facet_masks(simplices)
    verts = sorted({v for s in simplices for v in s})
    out = []
    for size in range(1, max_size + 1):
        for t in combinations(verts, size):
            tm = sum(1 << v for v in t)
            if all(tm & f for f in masks):
                out.append(tm)
    return out


def _pair_search(cands, accept):
    """First pair (T1, T2) in order of (|T1|, |T2|) then lexicographic that ``accept``s."""
    for a in cands:
        for b in cands:
            if accept(a, b):
                return a, b
    return None


def _to_set(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


@lru_cache(maxsize=None)
def _lemma_block_cached(simplices: tuple[Simplex, ...], L: tuple[int, int]):
    cands = _small_transversals(simplices, 4)
    last = sum(1 << v for v in simplices[-1])
    lmask = sum(1 << v for v in L)
    found = _pair_search(
        cands,
        lambda a, b: a & lmask and b & lmask and bin((a | b) & last).count("1") >= 3,
    )
    if found is None:
        raise InternalContradiction(f"no block pair for {simplices} with L={L}")
    return found


def lemma_block(inp: BlockInput) -> TransversalPair:
    """Two transversals of the ten-vertex block sphere, each of size <= 4 and meeting L,
    whose union holds at least three vertices of the last tetrahedron."""
    a, b = _lemma_block_cached(inp.ball10.simplices, tuple(sorted(inp.L)))
    t1, t2 = _to_set(a), _to_set(b)
    return TransversalPair(t1, t2, len((t1 | t2) & set(inp.ball10.simplices[-1])))


@lru_cache(maxsize=None)
def _base_case_cached(simplices: tuple[Simplex, ...]):
    n = len(simplices) + 3
    cands = _small_transversals(simplices, n // 2)
    last = sum(1 << v for v in simplices[-1])
    found = _pair_search(cands, lambda a, b: bin((a | b) & last).count("1") >= 3)
    if found is None:
        raise InternalContradiction(f"no base-case pair for {simplices}")
    return found


def _check_input(ball: StackedBall) -> StackedBall:
    if ball.d != 2:
        raise WrongDimension(f"expected a stacked 3-ball (d=2), got d={ball.d}")
    return to_path_order(ball)  # raises NotLinear


def base_case(ball: StackedBall) -> TransversalPair:
    """Exhaustive pair for 4 <= n <= 10 with |T_i| <= floor(n/2)."""
    ball = _check_input(ball)
    if not 4 <= ball.n <= 10:
        raise ValueError("base case covers 4 <= n <= 10")
    block, mapping = canonical_block_labeling(ball, 0, ball.m)
    inverse = {v: k for k, v in mapping.items()}
    a, b = _base_case_cached(block.simplices)
    t1 = frozenset(inverse[v] for v in _to_set(a))
    t2 = frozenset(inverse[v] for v in _to_set(b))
    return TransversalPair(t1, t2, len((t1 | t2) & set(ball.simplices[-1])))


def recurse_split(ball: StackedBall):
    """Split a path-ordered ball on n > 10 vertices into the prefix ball on n-7
    vertices and the canonically labeled last-seven block.

    Returns (prefix, block, mapping) where mapping sends original vertices of the
    block to their canonical labels; the shared triangle lands on {1, 2, 3}.
    """
    ball = _check_input(ball)
    if ball.n <= 10:
        raise TooSmall("recurse_split needs more than 10 vertices")
    m = ball.m
    prefix = make_ball(2, ball.simplices[:m - 7])
    shared = set(ball.simplices[m - 7]) & set(ball.simplices[m - 8])
    block, mapping = canonical_block_labeling(ball, m - 7, 7, shared)
    return prefix, block, mapping


def _verify(ball: StackedBall, pair: TransversalPair, bound: int) -> TransversalPair:
    h = to_hypergraph(boundary(ball))
    for t in (pair.t1, pair.t2):
        if not is_transversal(h, t):
            raise InternalContradiction(f"{sorted(t)} misses a facet")
        if len(t) > bound:
            raise InternalContradiction(f"{sorted(t)} exceeds the bound {bound}")
    if pair.last_facet_hits < 3:
        raise InternalContradiction("union holds fewer than 3 vertices of the last simplex")
    return pair


def _transversal_3n7(ball: StackedBall) -> TransversalPair:
    if ball.n <= 10:
        return base_case(ball)
    prefix, block, mapping = recurse_split(ball)
    inverse = {v: k for k, v in mapping.items()}
    head = _transversal_3n7(prefix)
    shared = set(ball.simplices[ball.m - 7]) & set(ball.simplices[ball.m - 8])
    available = sorted(mapping[v] for v in (head.t1 | head.t2) & shared)
    if len(available) < 2:
        raise InternalContradiction("prefix pair meets the shared triangle in fewer than 2 vertices")
    L = tuple(available[:2])
    w = lemma_block(BlockInput(block, L))
    picked = []
    for wi in (w.t1, w.t2):
        orig = frozenset(inverse[v] for v in wi)
        ti = head.t1 if orig & head.t1 & {inverse[v] for v in L} else head.t2
        picked.append(orig | ti)
    t1, t2 = picked
    return TransversalPair(t1, t2, len((t1 | t2) & set(ball.simplices[-1])))


def transversal_3n7(ball: StackedBall) -> TransversalPair:
    """Two verified transversals of the boundary of a linear stacked 3-ball on n
    vertices, each of size at most ceil(3n/7), together covering at least three
    vertices of the last tetrahedron in path order."""
    ball = _check_input(ball)
    if ball.n < 4:
        raise TooSmall("need at least 4 vertices")
    pair = _transversal_3n7(ball)
    return _verify(ball, pair, bound_37(ball.n))


# -- constructive fast path -------------------------------------------------------


def _chain_labels(a, b, c):
    """Vertex roles for three consecutive tetrahedra a - b - c read as (s5, s6, s7).

    Returns (v1, v2, v3, v4, v5, v6) with a = {v2,v3,v5,v6}, b = {v2,v3,v4,v5},
    c = {v1,v2,v3,v4}.
    """
    a, b, c = set(a), set(b), set(c)
    (v6,) = a - b
    (v4,) = b - a
    (v5,) = b - c
    (v1,) = c - b
    v2, v3 = sorted(b - {v4, v5})
    return v1, v2, v3, v4, v5, v6


def _end_pairs(a, b, c, uncovered):
    """Two 2-sets inside b | c covering every facet of the boundary of (a, b, c)
    except ``uncovered`` (a face of a other than a & b); the union holds 3 of c."""
    v1, v2, v3, v4, v5, v6 = _chain_labels(a, b, c)
    hit = set(uncovered) & {v2, v3}
    if hit == {v2, v3}:
        return {v1, v5}, {v2, v3}
    (x,) = hit
    y = v3 if x == v2 else v2
    return {v2, v3}, {y, v4}


def lemma_block_constructive(inp: BlockInput) -> TransversalPair | None:
    """Case analysis for the block lemma; None when the block is outside its setup.

    The setup needs the second tetrahedron glued away from {1, 2, 3}, which is
    always the case inside the recursion.
    """
    s = [set(x) for x in inp.ball10.simplices]
    L = set(inp.L)
    w4 = next(iter(s[3] - s[2]))
    (w1,) = s[3] - s[4]
    e0 = s[3] - {w1, w4}
    (u1,) = s[0] - s[1]
    (u5,) = s[1] - s[0]
    if u1 not in {1, 2, 3}:
        return None
    u2, u3 = sorted({1, 2, 3} - {u1})
    u4 = next(iter(s[0] - {1, 2, 3}))
    (v1,) = s[6] - s[5]
    (v5,) = s[5] - s[6]
    v2, v3, v4 = sorted(s[5] & s[6])

    if e0 & s[1] == {u5} and L == {u2, u3}:
        head = (s[1] & s[2]) - {u5}
        p, q = _end_pairs(s[4], s[5], s[6], s[3] & s[4])
        t1, t2 = head | p, head | q
    else:
        if u2 in e0:
            u = u3
        elif u3 in e0:
            u = u2
        elif u4 in e0:
            u = min(L & {u2, u3})
        else:
            u = u1
        front = e0 | {u}
        if e0 & s[5] != {v5}:
            if v2 in e0:
                extra = (v3, v4)
            elif v3 in e0:
                extra = (v2, v4)
            else:
                extra = (v2, v3)
            t1, t2 = front | {extra[0]}, front | {extra[1]}
        else:
            t1 = front | {v1}
            tail = (s[4] & s[5]) - {v5}
            p, q = _end_pairs(s[2], s[1], s[0], s[2] & s[3])
            t2 = tail | (p if p & L else q)
    t1, t2 = frozenset(t1), frozenset(t2)
    return TransversalPair(t1, t2, len((t1 | t2) & s[6]))


def check_block_pair(inp: BlockInput, pair: TransversalPair) -> bool:
    h = to_hypergraph(boundary(inp.ball10))
    L = set(inp.L)
    return (
        is_transversal(h, pair.t1) and is_transversal(h, pair.t2)
        and len(pair.t1) <= 4 and len(pair.t2) <= 4
        and bool(pair.t1 & L) and bool(pair.t2 & L)
        and len((pair.t1 | pair.t2) & set(inp.ball10.simplices[-1])) >= 3
    )


__all__ = [
    "WrongDimension", "TooSmall", "InternalContradiction", "NotLinear", "TransversalPair",
    "BlockInput", "bound_37", "lemma_block", "base_case", "recurse_split",
    "transversal_3n7", "lemma_block_constructive", "check_block_pair",
]
