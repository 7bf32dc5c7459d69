"""Command-line front end.

Every command prints one machine-readable ``key=value`` line per result,
followed by a short human-readable table. Exit codes: 0 success, 2 parse or
usage error, 3 a claim was VIOLATED, 4 the solver node cap was hit.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

from . import constructions as C
from .core import StackedError, boundary, remove_facets, to_hypergraph
from .io import InstanceFormatError, from_ball, from_family, read_instance, write_instance
from .linear37 import bound_37, transversal_3n7
from .solver import (
    NodeLimitExceeded,
    brute_force_tau,
    greedy_transversal,
    min_transversal,
)
from .verify import SKIPPED, VIOLATED, VerificationReport, run_suite, tau_lower_claim

EXIT_OK, EXIT_USAGE, EXIT_VIOLATED, EXIT_NODE_CAP = 0, 2, 3, 4

FAMILIES = ("path", "linear-lb", "general-lb", "general-lb-2", "random-linear")


class UsageError(Exception):
    pass


def _fmt_set(vs) -> str:
    return ",".join(map(str, sorted(vs)))


def _table(rows: list[tuple]) -> str:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(r, widths)) for r in rows)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"family {args.family} needs --{name}")


def build_family(args):
    fam = args.family
    if fam == "path":
        _need(args, "d", "m")
        return C.path_instance(args.d, args.m)
    if fam == "linear-lb":
        _need(args, "d", "k")
        return C.linear_lower_bound(args.d, args.k)
    if fam == "general-lb":
        _need(args, "d", "k")
        return C.general_lower_bound(args.d, args.k)
    if fam == "general-lb-2":
        _need(args, "k")
        return C.general_lower_bound_2(args.k)
    _need(args, "d", "m", "seed")
    ball = C.random_linear_ball(args.d, args.m, args.seed)
    return C.FamilyInstance("random-linear", ball, boundary(ball), (), ball.n, None,
                            {"d": args.d, "m": args.m, "seed": args.seed})


def cmd_gen(args) -> int:
    inst = build_family(args)
    f = from_family(inst, kind=args.kind)
    write_instance(f, args.out)
    print(f"family={inst.name} kind={args.kind} d={inst.ball.d} n={inst.sphere.n} "
          f"facets={len(inst.sphere.facets)} removed={len(inst.removed_facets)} "
          f"claimed_tau_lower={inst.claimed_tau_lower} out={args.out}")
    return EXIT_OK


def _parse_facet(text: str):
    try:
        return tuple(sorted(int(x) for x in text.replace(",", " ").split()))
    except ValueError:
        raise UsageError(f"bad facet {text!r}") from None


def cmd_tau(args) -> int:
    inst = read_instance(args.input)
    sphere = inst.sphere()
    if args.remove:
        sphere = remove_facets(sphere, [_parse_facet(r) for r in args.remove])
    h = to_hypergraph(sphere)
    t0 = time.perf_counter()
    rows = [("method", "value", "vertices", "edges", "seconds")]
    code = EXIT_OK
    if args.greedy:
        cert = greedy_transversal(h)
        line = f"tau<={cert.size} method=greedy certificate={_fmt_set(cert.vertices)}"
        value = f"<={cert.size}"
    elif args.brute is not None:
        size = brute_force_tau(h, args.brute)
        if size is None:
            line, value = f"tau>{args.brute} method=brute", f">{args.brute}"
        else:
            line, value = f"tau={size} method=brute", f"={size}"
    else:
        try:
            cert, stats = min_transversal(h, max_nodes=args.max_nodes, workers=args.workers)
        except NodeLimitExceeded as exc:
            print(f"tau<={exc.best.size} method=exact optimal=false nodes={exc.nodes} "
                  f"status=NODE-CAP certificate={_fmt_set(exc.best.vertices)}")
            return EXIT_NODE_CAP
        line = (f"tau={cert.size} method=exact optimal=true nodes={stats.nodes_explored} "
                f"reductions={stats.reductions_applied} certificate={_fmt_set(cert.vertices)}")
        value = f"={cert.size}"
        claimed = inst.metadata.get("claimed_tau_lower")
        if claimed is not None and not args.remove:
            status = "CERTIFIED" if cert.size >= claimed else VIOLATED
            line += f" claimed_tau_lower={claimed} status={status}"
            if status == VIOLATED:
                code = EXIT_VIOLATED
    elapsed = time.perf_counter() - t0
    print(f"{line} n={h.n} edges={len(h.edges)} time={elapsed:.4f}")
    method = "greedy" if args.greedy else "brute" if args.brute is not None else "exact"
    rows.append((method, "tau" + value, h.n, len(h.edges), f"{elapsed:.4f}"))
    print(_table(rows))
    return code


def cmd_cover37(args) -> int:
    inst = read_instance(args.input)
    ball = inst.ball()
    t0 = time.perf_counter()
    pair = transversal_3n7(ball)
    elapsed = time.perf_counter() - t0
    bound = bound_37(ball.n)
    print(f"n={ball.n} bound={bound} size={len(pair.best)} size1={len(pair.t1)} "
          f"size2={len(pair.t2)} last_hits={pair.last_facet_hits} status=VERIFIED "
          f"t1={_fmt_set(pair.t1)} t2={_fmt_set(pair.t2)} time={elapsed:.4f}")
    print(_table([("set", "size", "bound"), ("T1", len(pair.t1), bound), ("T2", len(pair.t2), bound)]))
    return EXIT_OK


def _print_reports(reports: list[VerificationReport]) -> int:
    rows = [("claim", "instance", "claimed", "computed", "status", "seconds")]
    for r in reports:
        rows.append((r.claim, r.instance, r.claimed, r.computed, r.status, f"{r.wall_time:.2f}"))
    print(_table(rows))
    return EXIT_VIOLATED if any(r.status == VIOLATED for r in reports) else EXIT_OK


def cmd_verify(args) -> int:
    reports = []
    if args.instance:
        inst = read_instance(args.instance)
        claimed = args.claim if args.claim is not None else inst.metadata.get("claimed_tau_lower")
        if claimed is None:
            raise UsageError("instance has no claimed_tau_lower; pass --claim")
        rep = tau_lower_claim("instance", str(args.instance), inst.sphere(), int(claimed),
                              max_nodes=args.max_nodes)
        print(rep.line())
        reports.append(rep)
    else:
        for cid, rep in run_suite(args.suite):
            print(f"criterion={cid} " + rep.line(), flush=True)
            reports.append(rep)
    code = _print_reports(reports)
    if code == EXIT_OK and any(r.status == SKIPPED for r in reports) and args.instance:
        return EXIT_NODE_CAP
    return code


def cmd_enumerate(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    count = 0
    for count, ball in enumerate(C.enumerate_linear_balls(args.d, args.m), start=1):
        meta = {"family": "enumerated-linear", "d": args.d, "m": args.m, "index": count}
        write_instance(from_ball(ball, metadata=meta), out / f"linear_d{args.d}_m{args.m}_{count:05d}.txt")
    print(f"d={args.d} m={args.m} count={count} out_dir={out}")
    return EXIT_OK


def bench_rows(sizes: list[int]):
    """Exact tau and the 3n/7 construction on linear 2-spheres of the given sizes.

    Multiples of 14 use the extremal chain (with its two facets removed);
    other sizes use the path ball on that many vertices.
    """
    for n in sizes:
        if n < 4:
            raise UsageError("sizes must be at least 4")
        if n % 14 == 0:
            inst = C.linear_lower_bound(2, n // 14)
            family, claimed = "linear-lb", inst.claimed_tau_lower
        else:
            inst = C.path_instance(2, n - 3)
            family, claimed = "path", ""
        h = to_hypergraph(inst.sphere)
        t0 = time.perf_counter()
        cert, stats = min_transversal(h)
        t_exact = time.perf_counter() - t0
        t0 = time.perf_counter()
        pair = transversal_3n7(inst.ball)
        t_cover = time.perf_counter() - t0
        yield {
            "n": n, "family": family, "tau": cert.size, "claimed_tau_lower": claimed,
            "nodes": stats.nodes_explored, "tau_seconds": f"{t_exact:.4f}",
            "cover37_size": len(pair.best), "bound": bound_37(n),
            "cover37_seconds": f"{t_cover:.4f}",
        }


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    rows = list(bench_rows(sizes))
    stream = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(stream, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            stream.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stackedtau", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("--d", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--kind", choices=("ball", "sphere"), default="ball")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("tau", help="transversal number of an instance")
    t.add_argument("input")
    mode = t.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="branch and bound (default)")
    mode.add_argument("--greedy", action="store_true")
    mode.add_argument("--brute", type=int, metavar="MAX")
    t.add_argument("--remove", action="append", metavar="FACET",
                   help="facet to drop first, e.g. '1 3 4'; repeatable")
    t.add_argument("--max-nodes", type=int)
    t.add_argument("--workers", type=int, default=1)
    t.set_defaults(func=cmd_tau)

    c = sub.add_parser("cover37", help="ceil(3n/7) transversal of a linear stacked 2-sphere")
    c.add_argument("input")
    c.set_defaults(func=cmd_cover37)

    v = sub.add_parser("verify", help="certify the claimed bounds")
    v.add_argument("--suite", choices=("paper", "oracle", "all"), default="paper")
    v.add_argument("--instance", help="check one instance file against its claimed bound")
    v.add_argument("--claim", type=int, help="claimed tau lower bound for --instance")
    v.add_argument("--max-nodes", type=int)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enumerate", help="write every labeled linear stacked ball")
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--out-dir", required=True)
    e.set_defaults(func=cmd_enumerate)

    b = sub.add_parser("bench", help="time the solver and the 3n/7 construction")
    b.add_argument("--sizes", default="14,21,28")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, InstanceFormatError, StackedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NodeLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NODE_CAP


if __name__ == "__main__":
    sys.exit(main())
