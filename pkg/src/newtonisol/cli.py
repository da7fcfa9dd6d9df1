"""Command-line front end: ``newtonisol isolate | bench | diagram | cluster-tree``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from .arith import Dyadic, Interval, parse_rational
from .diagram import DegenerateDiagram, admissible_from_diagram, build_diagram
from .isolator import auto_interval, isolate_newton, isolate_plain, partition_to_isolating, prepare
from .poly import DegreeError, NonSquareFree, Polynomial
from .predicates import PREDICATES

EXIT_PARSE = 2
EXIT_NOT_SQUAREFREE = 3
EXIT_DEGREE = 4

FAMILIES = ("mignotte", "nested", "random", "chebyshev")


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _fmt(x: Dyadic) -> str:
    return f"{x.to_fraction()} (~{float(x):.6g})"


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_interval(text: str) -> Interval:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"interval needs two endpoints, got {text!r}")
    lo, hi = (_rational(p) for p in parts)
    try:
        return Interval(Dyadic.from_fraction(lo), Dyadic.from_fraction(hi))
    except ValueError as exc:
        raise UsageError(f"interval endpoints must be dyadic: {exc}") from None


def _generator(spec: str, seed: int) -> Polynomial:
    """``mignotte:n,L`` | ``nested:depth[,ratio]`` | ``random:n,L`` | ``chebyshev:n``."""
    from .oracle import chebyshev_like, mignotte, nested_clusters, random_int

    name, _, args = spec.partition(":")
    nums = _int_list(args) if args else []
    try:
        if name == "mignotte":
            return mignotte(*nums)
        if name == "nested":
            return nested_clusters(*nums)[0]
        if name == "random":
            return random_int(*nums, seed=seed)
        if name == "chebyshev":
            return chebyshev_like(*nums)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad generator arguments {spec!r}: {exc}") from None
    raise UsageError(f"unknown generator family {name!r}; choose from {', '.join(FAMILIES)}")


def _load_polynomial(args) -> Polynomial:
    sources = [s for s in (args.coeffs, args.file, args.generator) if s is not None]
    if len(sources) != 1:
        raise UsageError("give exactly one of --coeffs, --file, --generator")
    try:
        if args.coeffs is not None:
            return Polynomial.parse(args.coeffs)
        if args.file is not None:
            with open(args.file) as fh:
                text = fh.read()
            if text.lstrip().startswith("{"):
                return Polynomial.from_json(text)
            return Polynomial.parse(text.strip())
    except (ValueError, KeyError, OSError) as exc:
        raise UsageError(f"cannot read polynomial: {exc}") from None
    return _generator(args.generator, args.seed)


# ---------------------------------------------------------------------------


def _diagram_json(f: Polynomial, z: Dyadic) -> dict:
    d = build_diagram(f, z)
    rho = []
    for k in range(1, d.n + 1):
        lo, hi = d.rho(k)
        rho.append([str(lo), str(hi)])
    return {
        "point": str(z),
        "hull": list(d.hull_indices),
        "rho": rho,
        "admissible": [
            {"k": a.k, "inclusion_radius": str(a.inclusion_radius_hi), "exclusion_radius": str(a.exclusion_radius_lo)}
            for a in admissible_from_diagram(d)
        ],
    }


def cmd_isolate(args, out) -> int:
    f = _load_polynomial(args)
    try:
        f = prepare(f, args.auto_squarefree)
    except NonSquareFree:
        print("error: polynomial is not square-free (rerun with --auto-squarefree)", file=sys.stderr)
        return EXIT_NOT_SQUAREFREE
    except DegreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGREE
    I0 = auto_interval(f) if args.interval in (None, "auto") else _parse_interval(args.interval)
    run = isolate_newton if args.method == "newton" else isolate_plain
    partition, stats = run(f, I0, predicate=args.predicate, dfs=args.dfs)
    roots = partition_to_isolating(f, partition)
    doc = {
        "polynomial": f.to_json(),
        "config": {"method": args.method, "predicate": args.predicate, "interval": I0.to_json()},
        "isolating": [I.to_json() for I in roots],
        "partition": partition.to_json(),
        "stats": stats.to_json(),
    }
    if args.dump_diagram:
        try:
            doc["diagram"] = _diagram_json(f, I0.midpoint)
        except DegenerateDiagram:
            doc["diagram"] = None
    if args.format == "json":
        json.dump(doc, out, indent=2)
        out.write("\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["lo", "hi", "kind"])
        for I in roots:
            w.writerow([str(I.lo), str(I.hi), "exact" if I.is_point() else "isolating"])
    else:
        out.write(f"polynomial: {f}\n")
        out.write(f"interval: [{_fmt(I0.lo)}, {_fmt(I0.hi)}]\n")
        out.write(f"{len(roots)} real root(s)\n")
        for I in roots:
            if I.is_point():
                out.write(f"  exact  {_fmt(I.lo)}\n")
            else:
                out.write(f"  [{_fmt(I.lo)}, {_fmt(I.hi)}]\n")
        for key, val in stats.to_json().items():
            out.write(f"{key}: {val}\n")
    return 0


BENCH_FIELDS = ["family", "n", "L", "method", "roots", "leaves", "nodes", "newton_calls",
                "newton_successes", "newton_iters", "integral_bound"]


def _bench_instances(args):
    fam = args.family
    if fam == "mignotte":
        for n in args.n or [16]:
            for L in args.L or [16]:
                yield {"family": fam, "n": n, "L": L}, _generator(f"mignotte:{n},{L}", args.seed), None
    elif fam == "nested":
        from .oracle import nested_clusters

        for depth in args.depth or [3]:
            f, rs = nested_clusters(depth, args.ratio)
            yield {"family": fam, "n": f.degree, "L": args.ratio.bit_length() - 1}, f, rs
    elif fam == "random":
        for n in args.n or [16]:
            for L in args.L or [16]:
                yield {"family": fam, "n": n, "L": L}, _generator(f"random:{n},{L}", args.seed), None
    elif fam == "chebyshev":
        for n in args.n or [16]:
            yield {"family": fam, "n": n, "L": ""}, _generator(f"chebyshev:{n}", args.seed), None


def _integral_bound(f, I0, roots) -> str:
    from .oracle import charge_integral, cluster_tree
    from .oracle.stopping import subtract_intervals

    tree = cluster_tree(roots)
    holes = [a for c in tree.ssc() for a in c.annulus()]
    holes = [(Fraction(a), Fraction(b)) for a, b in holes]
    region = subtract_intervals([I0.as_fractions()], holes)
    val, err = charge_integral(roots, region)
    return f"{4 * f.degree + 2 * (val + err):.6g}"


def cmd_bench(args, out) -> int:
    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(FAMILIES)}")
    methods = args.methods.split(",")
    for m in methods:
        if m not in ("plain", "newton"):
            raise UsageError(f"unknown method {m!r}")
    rows = []
    for key, f, rs in _bench_instances(args):
        I0 = auto_interval(f)
        bound = _integral_bound(f, I0, rs) if rs is not None else ""
        for m in methods:
            run = isolate_newton if m == "newton" else isolate_plain
            t = time.perf_counter()
            part, st = run(f, I0, predicate=args.predicate)
            dt = time.perf_counter() - t
            row = dict(key, method=m, roots=len(partition_to_isolating(f, part)), leaves=st.tree_leaves,
                       nodes=st.tree_nodes, newton_calls=st.newton_calls, newton_successes=st.newton_successes,
                       newton_iters=st.newton_iterations_total, integral_bound=bound)
            if args.timings:
                row["seconds"] = f"{dt:.4f}"
            rows.append(row)
    fields = BENCH_FIELDS + (["seconds"] if args.timings else [])
    if args.format == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
    else:
        w = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return 0


def cmd_diagram(args, out) -> int:
    f = _load_polynomial(args)
    z = Dyadic(0)
    if args.point:
        try:
            z = Dyadic.from_fraction(_rational(args.point))
        except ValueError as exc:
            raise UsageError(f"point must be dyadic: {exc}") from None
    try:
        doc = _diagram_json(f, z)
    except DegenerateDiagram as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    json.dump(doc, out, indent=2)
    out.write("\n")
    return 0


def cmd_cluster_tree(args, out) -> int:
    from .oracle import OracleScale, RootSet, cluster_tree

    reals = [_rational(t) for t in (args.roots or "").split(",") if t.strip()]
    pairs = []
    for t in (args.pairs or "").split(","):
        if t.strip():
            re, sep, im = t.partition(":")
            if not sep:
                raise UsageError(f"conjugate pair must be re:im, got {t!r}")
            pairs.append((_rational(re), _rational(im)))
    try:
        rs = RootSet.of(reals, pairs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        tree = cluster_tree(rs)
    except OracleScale as exc:
        raise UsageError(str(exc)) from None
    pts = rs.points

    def node(c):
        return {
            "members": [str(pts[i]) for i in sorted(c.members)],
            "center": str(c.center),
            "radius": c.radius,
            "outer": None if c.outer2 is None else c.outer,
            "ssc": c.is_ssc,
            "children": [node(ch) for ch in c.children],
        }

    json.dump(node(tree.root), out, indent=2)
    out.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="newtonisol", description="Real root isolation with cluster Newton steps.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_input(sp):
        sp.add_argument("--coeffs", help='coefficients, constant term first, e.g. "-6,11,-6,1"')
        sp.add_argument("--file", help="file with a coefficient list or {\"coeffs\": [...]}")
        sp.add_argument("--generator", help="mignotte:n,L | nested:depth[,ratio] | random:n,L | chebyshev:n")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("isolate", help="isolate the real roots of one polynomial")
    add_input(sp)
    sp.add_argument("--interval", help='"lo,hi" with dyadic endpoints, or "auto" (Cauchy bound)')
    sp.add_argument("--method", choices=("plain", "newton"), default="newton")
    sp.add_argument("--predicate", choices=sorted(PREDICATES), default="descartes")
    sp.add_argument("--format", choices=("json", "text", "csv"), default="json")
    sp.add_argument("--auto-squarefree", action="store_true", help="replace f by its square-free part")
    sp.add_argument("--dump-diagram", action="store_true", help="include the Newton diagram at m(I0)")
    sp.add_argument("--dfs", action="store_true", help="process the queue depth first")
    sp.set_defaults(func=cmd_isolate)

    sp = sub.add_parser("bench", help="benchmark sweep over a polynomial family")
    sp.add_argument("family")
    sp.add_argument("--n", type=_int_list)
    sp.add_argument("--L", type=_int_list)
    sp.add_argument("--depth", type=_int_list)
    sp.add_argument("--ratio", type=int, default=2 ** 40)
    sp.add_argument("--methods", default="plain,newton")
    sp.add_argument("--predicate", choices=sorted(PREDICATES), default="descartes")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--timings", action="store_true", help="add a wall-clock column")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("diagram", help="Newton diagram of f(x + z)")
    add_input(sp)
    sp.add_argument("--point", help="dyadic shift point z (default 0)")
    sp.set_defaults(func=cmd_diagram)

    sp = sub.add_parser("cluster-tree", help="cluster tree of an explicit root set")
    sp.add_argument("--roots", help="real roots, comma separated")
    sp.add_argument("--pairs", help="conjugate pairs re:im, comma separated")
    sp.set_defaults(func=cmd_cluster_tree)
    return p


_VALUE_OPTIONS = ("--coeffs", "--interval", "--roots", "--pairs", "--point")


def _join_negative_values(argv: list[str]) -> list[str]:
    # let "--coeffs -6,11,-6,1" through argparse, which would read -6,... as an option
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout (used by tests)."""
    buf = io.StringIO()
    try:
        code = main(argv, buf)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_PARSE
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
