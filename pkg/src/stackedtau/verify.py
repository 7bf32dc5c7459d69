"""Machine certification of every bound: one check per claim, each yielding reports."""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .constructions import (
    bridge_path_ok,
    enumerate_linear_balls,
    general_lower_bound,
    general_lower_bound_2,
    glue,
    linear_lower_bound,
    random_ball,
    random_linear_ball,
)
from .core import boundary, dual_graph, faces, is_linear, remove_facets, to_hypergraph
from .linear37 import BlockInput, bound_37, check_block_pair, lemma_block, transversal_3n7
from .solver import (
    NodeLimitExceeded,
    brute_force_tau,
    greedy_transversal,
    matching_lower_bound,
    min_transversal,
)

CERTIFIED = "CERTIFIED"
VIOLATED = "VIOLATED"
SKIPPED = "SKIPPED-too-large"


@dataclass
class VerificationReport:
    claim: str
    instance: str
    claimed: str
    computed: str
    status: str
    wall_time: float

    def line(self) -> str:
        return (f"claim={self.claim} instance={self.instance} claimed={self.claimed} "
                f"computed={self.computed} status={self.status} time={self.wall_time:.3f}")


def _report(claim, instance, claimed, computed, ok, t0) -> VerificationReport:
    return VerificationReport(claim, instance, str(claimed), str(computed),
                              CERTIFIED if ok else VIOLATED, time.perf_counter() - t0)


def tau_lower_claim(claim: str, label: str, sphere, lower: int,
                    max_nodes: int | None = None) -> VerificationReport:
    t0 = time.perf_counter()
    try:
        cert, _ = min_transversal(to_hypergraph(sphere), max_nodes=max_nodes)
    except NodeLimitExceeded as exc:
        return VerificationReport(claim, label, f"tau>={lower}", f"tau<={exc.best.size}",
                                  SKIPPED, time.perf_counter() - t0)
    return _report(claim, label, f"tau>={lower}", f"tau={cert.size}", cert.size >= lower, t0)


def check_thm15_1() -> Iterator[VerificationReport]:
    inst = general_lower_bound_2(1)
    yield tau_lower_claim("general-lb-2", f"n={inst.sphere.n}", inst.sphere, 6)
    t0 = time.perf_counter()
    yield _report("general-lb-2-size", "k=1", 13, inst.sphere.n, inst.sphere.n == 13, t0)


def check_thm15_2(d4_node_cap: int = 2_000_000) -> Iterator[VerificationReport]:
    for d in (2, 3, 4):
        inst = general_lower_bound(d, 1)
        t0 = time.perf_counter()
        n = (d + 2) ** 2
        yield _report("general-lb-size", f"d={d}", n, inst.sphere.n, inst.sphere.n == n, t0)
        cap = d4_node_cap if d == 4 else None
        yield tau_lower_claim("general-lb", f"d={d},n={n}", inst.sphere, 2 * d + 3, cap)


def check_thm13() -> Iterator[VerificationReport]:
    for d in (2, 3, 4):
        inst = linear_lower_bound(d, 1)
        t0 = time.perf_counter()
        ok = inst.sphere.n == 3 * d + 8 and is_linear(inst.ball)
        yield _report("linear-lb-shape", f"d={d}", f"n={3 * d + 8},linear",
                      f"n={inst.sphere.n},linear={is_linear(inst.ball)}", ok, t0)
        yield tau_lower_claim("linear-lb", f"d={d},n={3 * d + 8}", inst.sphere, 6)


def small_corpus(max_vertices: int = 8):
    """Enumerated linear stacked 2-balls on at most ``max_vertices`` vertices."""
    out = []
    for m in range(1, max_vertices - 2):
        out.extend(enumerate_linear_balls(2, m))
    return out


def check_gluing(max_vertices: int = 8) -> Iterator[VerificationReport]:
    """tau(K - h) >= tau(S - f) + tau(T - g) over all ordered pairs of the corpus.

    The facet used on each side rotates with the partner's index so that every
    pair exercises a different choice.
    """
    t0 = time.perf_counter()
    corpus = small_corpus(max_vertices)
    facet_lists = [sorted(boundary(b).facets) for b in corpus]
    tau_cache: dict[tuple[int, tuple], int] = {}

    def tau_minus(i, f):
        key = (i, f)
        if key not in tau_cache:
            sph = remove_facets(boundary(corpus[i]), [f])
            tau_cache[key] = min_transversal(to_hypergraph(sph))[0].size
        return tau_cache[key]

    checked = failures = 0
    worst = None
    for i, s_ball in enumerate(corpus):
        for j, t_ball in enumerate(corpus):
            f = facet_lists[i][j % len(facet_lists[i])]
            g = facet_lists[j][i % len(facet_lists[j])]
            res = glue(s_ball, f, t_ball, g)
            k_sph = remove_facets(boundary(res.ball), [res.distinguished_facet])
            lhs = min_transversal(to_hypergraph(k_sph))[0].size
            rhs = tau_minus(i, f) + tau_minus(j, g)
            ok = (lhs >= rhs and res.ball.n == s_ball.n + t_ball.n
                  and bridge_path_ok(res, s_ball))
            checked += 1
            if not ok:
                failures += 1
                worst = worst or (i, j, lhs, rhs)
    yield _report("gluing", f"pairs={checked}", "tau(K-h)>=tau(S-f)+tau(T-g)",
                  f"failures={failures}" + (f",first={worst}" if worst else ""),
                  failures == 0, t0)


def check_linear_chain() -> Iterator[VerificationReport]:
    inst = linear_lower_bound(2, 2)
    t0 = time.perf_counter()
    ok = inst.sphere.n == 28 and is_linear(inst.ball)
    yield _report("linear-chain-shape", "d=2,k=2", "n=28,linear",
                  f"n={inst.sphere.n},linear={is_linear(inst.ball)}", ok, t0)
    rep = tau_lower_claim("linear-chain", "d=2,k=2,n=28", inst.sphere, 12)
    yield rep
    t0 = time.perf_counter()
    ratio = Fraction(12, inst.sphere.n)
    yield _report("linear-chain-ratio", "d=2,k=2", "3/7", str(ratio), ratio == Fraction(3, 7), t0)


def thm14_corpus(max_m: int = 8, n_random: int = 300, max_n: int = 300, seed: int = 0):
    for m in range(1, max_m + 1):
        yield from enumerate_linear_balls(2, m)
    rng = random.Random(seed)
    for s in range(n_random):
        m = rng.randint(1, max_n - 3)
        yield random_linear_ball(2, m, seed * 100_003 + s)


def check_thm14(max_m: int = 8, n_random: int = 300) -> Iterator[VerificationReport]:
    t0 = time.perf_counter()
    total = failures = 0
    first = None
    for ball in thm14_corpus(max_m, n_random):
        total += 1
        try:
            pair = transversal_3n7(ball)
            h = to_hypergraph(boundary(ball))
            ok = (
                all(all(e & t for e in h.edges) for t in (pair.t1, pair.t2))
                and pair.size <= bound_37(ball.n)
                and pair.last_facet_hits >= 3
            )
        except AssertionError:
            ok = False
        if not ok:
            failures += 1
            first = first or ball.simplices
    yield _report("cover37", f"balls={total}", "size<=ceil(3n/7),last>=3",
                  f"failures={failures}", failures == 0, t0)


def check_lemma_block() -> Iterator[VerificationReport]:
    t0 = time.perf_counter()
    total = failures = 0
    for ball in enumerate_linear_balls(2, 7):
        for L in ((1, 2), (1, 3), (2, 3)):
            inp = BlockInput(ball, L)
            total += 1
            try:
                ok = check_block_pair(inp, lemma_block(inp))
            except AssertionError:
                ok = False
            failures += not ok
    yield _report("block-lemma", f"cases={total}", "all cases solvable",
                  f"failures={failures}", failures == 0 and total == 972 * 3, t0)


def oracle_corpus(n_random: int = 500, seed: int = 1):
    """Hypergraphs on at most 12 vertices: enumerated linear balls (m <= 8), seeded
    random balls, and each of those with one random facet removed."""
    rng = random.Random(seed)
    spheres = [boundary(b) for m in range(1, 9) for b in enumerate_linear_balls(2, m)]
    for s in range(n_random):
        d = rng.choice((2, 3))
        m = rng.randint(1, 12 - d - 1)
        ball = random_ball(d, m, seed * 1_000_003 + s) if s % 2 else random_linear_ball(d, m, s)
        spheres.append(boundary(ball))
    out = []
    for sph in spheres:
        out.append(sph)
        f = rng.choice(sorted(sph.facets))
        out.append(remove_facets(sph, [f]))
    return out


def check_oracle(n_random: int = 500) -> Iterator[VerificationReport]:
    t0 = time.perf_counter()
    total = mismatches = 0
    for sph in oracle_corpus(n_random):
        h = to_hypergraph(sph)
        total += 1
        if min_transversal(h)[0].size != brute_force_tau(h):
            mismatches += 1
    yield _report("oracle", f"hypergraphs={total}", "exact==brute",
                  f"mismatches={mismatches}", mismatches == 0, t0)


def check_sandwich(n_random: int = 200) -> Iterator[VerificationReport]:
    t0 = time.perf_counter()
    total = bad = 0
    for sph in oracle_corpus(n_random, seed=7)[-2 * n_random:]:
        h = to_hypergraph(sph)
        exact = min_transversal(h)[0].size
        total += 1
        if not matching_lower_bound(h) <= exact <= greedy_transversal(h).size <= h.n:
            bad += 1
    yield _report("sandwich", f"hypergraphs={total}", "match<=exact<=greedy<=n",
                  f"failures={bad}", bad == 0, t0)


def check_structure(count: int = 1000, seed: int = 2) -> Iterator[VerificationReport]:
    """Facet count d*m+2, vertex count m+d+1 and tree-shaped dual graph."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    bad = 0
    for s in range(count):
        d = (2, 3, 4)[s % 3]
        m = rng.randint(1, 40)
        ball = random_ball(d, m, seed * 1_000_003 + s)
        mult = Counter(f for simp in ball.simplices for f in faces(simp, d + 1))
        nfacets = sum(1 for c in mult.values() if c == 1)
        tree = dual_graph(ball)
        ok = (nfacets == d * m + 2 == len(boundary(ball).facets)
              and ball.n == m + d + 1
              and len(tree.edges) == m - 1 and _connected(tree))
        bad += not ok
    yield _report("structure", f"balls={count}", "facets=dm+2,|V|=m+d+1,tree",
                  f"failures={bad}", bad == 0, t0)


def _connected(tree) -> bool:
    adj = tree.adjacency()
    seen = {0}
    stack = [0]
    while stack:
        for v in adj[stack.pop()]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == tree.m


def check_tightness() -> Iterator[VerificationReport]:
    for k in (1, 2):
        inst = linear_lower_bound(2, k)
        t0 = time.perf_counter()
        pair = transversal_3n7(inst.ball)
        exact = min_transversal(to_hypergraph(boundary(inst.ball)))[0].size
        bound = bound_37(inst.ball.n)
        ok = pair.size == 6 * k == bound == exact
        yield _report("cover37-tight", f"k={k},n={inst.ball.n}", f"size={6 * k}",
                      f"size={pair.size},bound={bound},tau={exact}", ok, t0)


CRITERIA: dict[int, tuple[str, Callable[[], Iterator[VerificationReport]]]] = {
    1: ("13-vertex general 2-sphere minus f has tau >= 6", check_thm15_1),
    2: ("(d+2)^2-vertex spheres minus f have tau >= 2d+3", check_thm15_2),
    3: ("(3d+8)-vertex linear spheres minus f, g have tau >= 6", check_thm13),
    4: ("gluing inequality on all corpus pairs", check_gluing),
    5: ("28-vertex linear chain has tau >= 12, ratio 3/7", check_linear_chain),
    6: ("3n/7 construction on enumerated and random balls", check_thm14),
    7: ("block lemma on every canonical block and L", check_lemma_block),
    8: ("exact solver agrees with brute force", check_oracle),
    9: ("facet/vertex counts and tree dual graph", check_structure),
    10: ("3n/7 construction is tight on the extremal family", check_tightness),
}

SUITES = {
    "paper": list(CRITERIA),
    "oracle": [8],
}


def run_suite(name: str) -> Iterator[tuple[int, VerificationReport]]:
    ids = sorted(set(SUITES["paper"]) | set(SUITES["oracle"])) if name == "all" else SUITES[name]
    for cid in ids:
        for rep in CRITERIA[cid][1]():
            yield cid, rep
    if name in ("oracle", "all"):
        for rep in check_sandwich():
            yield 0, rep
