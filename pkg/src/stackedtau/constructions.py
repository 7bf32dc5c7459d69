"""Generators for stacked balls: the lower-bound families and the gluing operations."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

from .core import (
    NotLinear,
    Simplex,
    StackedBall,
    StackedError,
    StackedSphere,
    boundary,
    dual_graph,
    faces,
    is_linear,
    make_ball,
    relabel,
    remove_facets,
    reroot,
    simplex,
    to_path_order,
)


class DimensionMismatch(StackedError):
    pass


class NotABoundaryFacet(StackedError):
    pass


class NotEndFacet(StackedError):
    pass


@dataclass(frozen=True)
class GlueResult:
    ball: StackedBall
    bridge: tuple[Simplex, ...]
    distinguished_facet: Simplex


@dataclass(frozen=True)
class FamilyInstance:
    """A generated sphere with the theorem's facets already removed."""

    name: str
    ball: StackedBall
    sphere: StackedSphere
    removed_facets: tuple[Simplex, ...]
    claimed_n: int
    claimed_tau_lower: int | None
    params: dict = field(default_factory=dict)
    labels: dict = field(default_factory=dict)


def _instance(name, ball, removed, claimed_n, claimed_tau_lower, params, labels=None):
    sphere = remove_facets(boundary(ball), removed)
    return FamilyInstance(
        name, ball, sphere, tuple(simplex(f) for f in removed),
        claimed_n, claimed_tau_lower, dict(params), dict(labels or {}),
    )


def path_ball(d: int, m: int) -> StackedBall:
    """Simplices {i, ..., i+d+1} for i = 1..m: a linear ball on [d+m+1]."""
    if m < 1:
        raise ValueError("m must be at least 1")
    return make_ball(d, [range(i, i + d + 2) for i in range(1, m + 1)])


def _boundary_check(ball: StackedBall, f) -> Simplex:
    f = simplex(f)
    if len(f) != ball.d + 1 or f not in boundary(ball).facets:
        raise NotABoundaryFacet(f"{f} is not a boundary facet")
    return f


def _containing(ball: StackedBall, f: Simplex) -> int:
    return next(i for i, s in enumerate(ball.simplices) if set(f) <= set(s))


def _offset(ball: StackedBall, shift: int) -> StackedBall:
    return relabel(ball, {v: v + shift for v in ball.vertices})


def bridge_simplices(f: Simplex, g: Simplex) -> list[Simplex]:
    """Interpolating simplices {v_i..v_{d+1}} + {w_1..w_i}, both facets read ascending."""
    v, w = sorted(f), sorted(g)
    return [simplex(v[i:] + w[:i + 1]) for i in range(len(v))]


def glue(s_ball: StackedBall, f, t_ball: StackedBall, g) -> GlueResult:
    """Join two balls through d+1 bridge simplices running from facet f to facet g.

    ``t_ball`` is shifted past the vertices of ``s_ball`` when the vertex sets
    overlap. The distinguished facet h = bridge[0] minus the second vertex of f.
    """
    if s_ball.d != t_ball.d:
        raise DimensionMismatch(f"dimensions {s_ball.d} and {t_ball.d} differ")
    f = _boundary_check(s_ball, f)
    g = _boundary_check(t_ball, g)
    if set(s_ball.vertices) & set(t_ball.vertices):
        shift = max(s_ball.vertices) + 1 - min(t_ball.vertices)
        t_ball = _offset(t_ball, shift)
        g = tuple(v + shift for v in g)
    t_ball = reroot(t_ball, _containing(t_ball, g))
    bridge = bridge_simplices(f, g)
    ball = make_ball(s_ball.d, list(s_ball.simplices) + bridge + list(t_ball.simplices))
    h = tuple(v for v in bridge[0] if v != sorted(f)[1])
    return GlueResult(ball, tuple(bridge), h)


def chain_glue_general(s_ball: StackedBall, f, k: int, tau_removed: int | None = None,
                       name: str = "chain-general", params: dict | None = None) -> FamilyInstance:
    """Glue k disjoint copies in a chain; the final distinguished facet is removed.

    Copy j (0-based) has its vertices shifted by j*|V(S)|.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    f = _boundary_check(s_ball, f)
    n = s_ball.n
    ball, h = s_ball, f
    for j in range(1, k):
        copy = _offset(s_ball, j * n)
        res = glue(ball, h, copy, tuple(v + j * n for v in f))
        ball, h = res.ball, res.distinguished_facet
    claimed = None if tau_removed is None else k * tau_removed
    return _instance(name, ball, [h], k * n, claimed, params or {"k": k})


def chain_glue_linear(s_ball: StackedBall, f, g, k: int, tau_removed: int | None = None,
                      name: str = "chain-linear", params: dict | None = None) -> FamilyInstance:
    """Glue k copies of a linear ball end to end so the result stays linear.

    ``f`` must lie in the first simplex and ``g`` in the last (in path order);
    copy j's g is bridged to copy j+1's f. The first copy's f and the last
    copy's g are removed from the result.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not is_linear(s_ball):
        raise NotLinear("chain_glue_linear needs a linear ball")
    s_ball = to_path_order(s_ball)
    f = _boundary_check(s_ball, f)
    g = _boundary_check(s_ball, g)
    if not set(f) <= set(s_ball.simplices[0]) or not set(g) <= set(s_ball.simplices[-1]):
        raise NotEndFacet("f must lie in the first simplex and g in the last")
    n = s_ball.n
    simplices = list(s_ball.simplices)
    for j in range(1, k):
        prev_g = tuple(v + (j - 1) * n for v in g)
        next_f = tuple(v + j * n for v in f)
        simplices += bridge_simplices(prev_g, next_f)
        simplices += [tuple(v + j * n for v in s) for s in s_ball.simplices]
    ball = make_ball(s_ball.d, simplices)
    if not is_linear(ball):
        raise NotLinear("end-to-end gluing produced a non-linear ball")
    last_g = tuple(v + (k - 1) * n for v in g)
    claimed = None if tau_removed is None else k * tau_removed
    return _instance(name, ball, [f, last_g], k * n, claimed, params or {"k": k})


def linear_lower_bound(d: int, k: int) -> FamilyInstance:
    """Linear sphere on (3d+8)k vertices whose transversal number is at least 6k."""
    if d < 2 or k < 1:
        raise ValueError("need d >= 2 and k >= 1")
    m = 2 * d + 7
    base = path_ball(d, m)
    f = tuple(v for v in range(1, d + 3) if v != d + 1)
    g = tuple(v for v in range(m, m + d + 2) if v != 2 * d + 8)
    return chain_glue_linear(base, f, g, k, tau_removed=6, name="linear-lb",
                             params={"d": d, "k": k})


def _phi_cyclic(d: int, i: int, j: int) -> int:
    return (i + j - 1) % (d + 2) + 1


def _leaf_label(d: int, i: int, j: int) -> int:
    """Integer id of a^(i)_j; the root simplex occupies 1..d+2."""
    return (d + 2) + (i - 1) * (d + 2) + j


def branch_ball(d: int, phis: Sequence[Sequence[int]], depth: int) -> tuple[StackedBall, dict]:
    """Root simplex [d+2] with one branch per permutation.

    Branch i is the chain tau^(i)_1, ..., tau^(i)_depth where
    tau^(i)_j = {phi_i(j+1), ..., phi_i(d+2)} + {a^(i)_1, ..., a^(i)_j}.
    ``phis[i-1][j-1]`` is phi_i(j). Returns the ball and the a^(i)_j -> id map.
    """
    simplices = [tuple(range(1, d + 3))]
    labels = {}
    for i, phi in enumerate(phis, start=1):
        for j in range(1, depth + 1):
            a = [_leaf_label(d, i, t) for t in range(1, j + 1)]
            simplices.append(simplex([phi[t - 1] for t in range(j + 1, d + 3)] + a))
        for t in range(1, depth + 1):
            labels[f"a{i}_{t}"] = _leaf_label(d, i, t)
    return make_ball(d, simplices), labels


def general_phis(d: int) -> list[list[int]]:
    return [[_phi_cyclic(d, i, j) for j in range(1, d + 3)] for i in range(1, d + 2)]


def general_base(d: int) -> tuple[StackedBall, Simplex, dict]:
    """The (d+2)^2-vertex sphere and its removed facet before any chaining."""
    phis = general_phis(d)
    roots = {tuple(sorted(phi[1:])) for phi in phis}
    if len(roots) != d + 1:
        raise StackedError("branches must attach along distinct faces of the root")
    ball, labels = branch_ball(d, phis, d + 2)
    phi1 = phis[0]
    f = simplex([phi1[d], phi1[d + 1]] + [_leaf_label(d, 1, t) for t in range(2, d + 1)])
    return ball, f, labels


def general_lower_bound(d: int, k: int) -> FamilyInstance:
    """Stacked sphere on (d+2)^2 k vertices with transversal number at least (2d+3)k."""
    if d < 2 or k < 1:
        raise ValueError("need d >= 2 and k >= 1")
    ball, f, labels = general_base(d)
    inst = chain_glue_general(ball, f, k, tau_removed=2 * d + 3, name="general-lb",
                              params={"d": d, "k": k})
    return _with_labels(inst, labels, phis=general_phis(d))


GENERAL2_PHIS = ([1, 2, 3, 4], [4, 1, 2, 3], [3, 4, 2, 1])


def general2_base() -> tuple[StackedBall, Simplex, dict]:
    ball, labels = branch_ball(2, GENERAL2_PHIS, 3)
    return ball, (1, 3, 4), labels


def general_lower_bound_2(k: int) -> FamilyInstance:
    """Stacked 2-sphere on 13k vertices with transversal number at least 6k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ball, f, labels = general2_base()
    inst = chain_glue_general(ball, f, k, tau_removed=6, name="general-lb-2", params={"k": k})
    return _with_labels(inst, labels, phis=[list(p) for p in GENERAL2_PHIS])


def _with_labels(inst: FamilyInstance, labels: dict, phis) -> FamilyInstance:
    return FamilyInstance(inst.name, inst.ball, inst.sphere, inst.removed_facets,
                          inst.claimed_n, inst.claimed_tau_lower,
                          dict(inst.params, phis=phis), labels)


def path_instance(d: int, m: int) -> FamilyInstance:
    ball = path_ball(d, m)
    return _instance("path", ball, [], ball.n, None, {"d": d, "m": m})


def free_faces_of_last(ball: StackedBall) -> list[Simplex]:
    """d-faces of the last simplex that are still free (all but its attachment face)."""
    last = ball.simplices[-1]
    eta = ball.attachments[-1]
    return [f for f in faces(last, ball.d + 1) if f != eta]


def random_linear_ball(d: int, m: int, seed: int) -> StackedBall:
    """Each new simplex goes on a uniformly chosen free face of the previous one."""
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = random.Random(seed)
    simplices = [tuple(range(1, d + 3))]
    eta = None
    for step in range(2, m + 1):
        last = simplices[-1]
        choices = [f for f in faces(last, d + 1) if f != eta]
        eta = rng.choice(choices)
        simplices.append(eta + (d + 1 + step,))
    return make_ball(d, simplices)


def random_ball(d: int, m: int, seed: int) -> StackedBall:
    """Each new simplex goes on a uniformly chosen free face of the whole ball."""
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = random.Random(seed)
    simplices = [tuple(range(1, d + 3))]
    free = set(faces(simplices[0], d + 1))
    for step in range(2, m + 1):
        eta = rng.choice(sorted(free))
        free.discard(eta)
        s = eta + (d + 1 + step,)
        simplices.append(s)
        free.update(fc for fc in faces(s, d + 1) if fc != eta)
    return make_ball(d, simplices)


def enumerate_linear_balls(d: int, m: int) -> Iterator[StackedBall]:
    """All labeled attachment-choice sequences; first simplex [d+2], step i adds d+1+i."""
    if m < 1:
        raise ValueError("m must be at least 1")

    def extend(simplices, eta):
        if len(simplices) == m:
            yield make_ball(d, simplices)
            return
        last = simplices[-1]
        step = len(simplices) + 1
        for f in combinations(last, d + 1):
            if f == eta:
                continue
            yield from extend(simplices + [f + (d + 1 + step,)], f)

    yield from extend([tuple(range(1, d + 3))], None)


def bridge_path_ok(res: GlueResult, s_ball: StackedBall) -> bool:
    """Bridge nodes form a path from the simplex holding f to the copy of T."""
    tree = dual_graph(res.ball)
    adj = tree.adjacency()
    first = s_ball.m
    idx = list(range(first, first + len(res.bridge)))
    if len(res.ball.simplices) <= idx[-1] + 1:
        return False
    for a, b in zip(idx, idx[1:]):
        if b not in adj[a]:
            return False
    return (res.ball.parents[idx[0]] is not None and res.ball.parents[idx[0]] < first
            and idx[-1] + 1 in adj[idx[-1]])


__all__ = [
    "DimensionMismatch", "NotABoundaryFacet", "NotEndFacet", "GlueResult", "FamilyInstance",
    "path_ball", "glue", "bridge_simplices", "chain_glue_general", "chain_glue_linear",
    "linear_lower_bound", "general_lower_bound", "general_lower_bound_2", "general_base",
    "general2_base", "general_phis", "branch_ball", "path_instance", "random_linear_ball",
    "random_ball", "enumerate_linear_balls", "free_faces_of_last", "bridge_path_ok",
]
