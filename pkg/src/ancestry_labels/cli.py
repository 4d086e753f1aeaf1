"""Command line entry point: ``ancestry-labels <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or format error.
"""

from __future__ import annotations

import argparse
import sys

from . import bench, verify
from .errors import AncestryError
from .generators import KINDS, GenSpec, generate
from .labels import format_label_file, read_label_file, write_label_file
from .tree import format_tree, from_edge_list, read_tree, write_tree


class UsageError(Exception):
    pass


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w")


def _csv_list(text: str, conv=str) -> list:
    try:
        return [conv(x) for x in text.split(",") if x]
    except ValueError:
        raise UsageError(f"bad list {text!r}") from None


def cmd_gen(args) -> int:
    tree = generate(GenSpec(args.kind, args.n, args.seed, args.arity))
    comment = f"kind={args.kind} n={args.n} seed={args.seed}"
    if args.kind == "kary":
        comment += f" arity={args.arity}"
    if args.output in (None, "-"):
        sys.stdout.write(format_tree(tree, comment))
    else:
        write_tree(tree, args.output, comment)
    return 0


def cmd_encode(args) -> int:
    tree = read_tree(args.treefile)
    labels, _, _ = verify.labels_and_assignment(tree, args.scheme)
    if args.output in (None, "-"):
        sys.stdout.write(format_label_file(labels, args.scheme))
    else:
        write_label_file(labels, args.scheme, args.output)
    return 0


def cmd_query(args) -> int:
    scheme, labels = read_label_file(args.labelfile)
    for x in (args.u, args.v):
        if not 0 <= x < len(labels):
            raise UsageError(f"node id {x} out of range [0, {len(labels)})")
    if scheme == "classic":
        from .classic import decode_classic as decode
    else:
        from .approx import decode_new as decode
    print("true" if decode(labels[args.u], labels[args.v]) else "false")
    return 0


def cmd_verify(args) -> int:
    tree = read_tree(args.treefile)
    try:
        pairs = verify.parse_pairs(args.pairs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if pairs is None and tree.n > 20000:
        raise UsageError(f"--pairs all is quadratic; use random:K for n={tree.n}")
    res = verify.verify_tree(tree, args.scheme, pairs, args.seed)
    for line in res.lines():
        print(line)
    return 0 if res.ok else 1


def cmd_bench(args) -> int:
    rows = bench.run_bench(_csv_list(args.schemes), _csv_list(args.sizes, int),
                           _csv_list(args.kinds), args.seed, timing=not args.no_timing,
                           arity=args.arity)
    fh = _open_out(args.output)
    try:
        bench.write_csv(rows, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_bench_backends(args) -> int:
    rows = bench.compare_backends(_csv_list(args.sizes, int), args.kind, args.seed, args.repeats)
    print(f"{'kernel':<16}{'n':>10}{'backend':>9}{'ms':>12}")
    for r in rows:
        print(f"{r['kernel']:<16}{r['n']:>10}{r['backend']:>9}{r['ms']:>12.2f}")
    return 0


def cmd_import_edges(args) -> int:
    with open(args.edgefile) as fh:
        lines = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 1:
        raise UsageError("edge file must start with a line holding n")
    try:
        n = int(lines[0][0])
        edges = [(int(x), int(y)) for x, y in lines[1:]]
    except ValueError:
        raise UsageError("edge lines must be '<u> <v>' integer pairs") from None
    tree, old_to_new = from_edge_list(n, args.root, edges)
    if args.output in (None, "-"):
        sys.stdout.write(format_tree(tree))
    else:
        write_tree(tree, args.output)
    if args.emit_map:
        fh = _open_out(args.emit_map)
        try:
            fh.write("# old new\n")
            fh.writelines(f"{old} {new}\n" for old, new in enumerate(old_to_new))
        finally:
            if fh is not sys.stdout:
                fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ancestry-labels", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a tree file")
    g.add_argument("--kind", required=True, choices=KINDS)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--arity", type=int, default=2, help="branching factor for --kind kary")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("encode", help="label every node of a tree")
    e.add_argument("--scheme", required=True, choices=("classic", "new"))
    e.add_argument("treefile")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_encode)

    q = sub.add_parser("query", help="is U an ancestor of V, from their labels alone")
    q.add_argument("labelfile")
    q.add_argument("u", type=int)
    q.add_argument("v", type=int)
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="check decoder against the oracle and run all validators")
    v.add_argument("--scheme", required=True, choices=("classic", "new"))
    v.add_argument("treefile")
    v.add_argument("--pairs", default="all", help="'all' or 'random:K'")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="label sizes and encode times as CSV")
    b.add_argument("--schemes", default="classic,new")
    b.add_argument("--sizes", required=True, help="comma separated node counts")
    b.add_argument("--kinds", default="attach")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--arity", type=int, default=2)
    b.add_argument("--no-timing", action="store_true", help="leave encode_ms empty (byte-stable output)")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)

    bb = sub.add_parser("bench-backends", help="time numba kernels against the fallback")
    bb.add_argument("--sizes", default="10000,100000")
    bb.add_argument("--kind", default="attach", choices=KINDS)
    bb.add_argument("--seed", type=int, default=0)
    bb.add_argument("--repeats", type=int, default=3)
    bb.set_defaults(func=cmd_bench_backends)

    im = sub.add_parser("import-edges", help="canonicalize an edge-list tree")
    im.add_argument("edgefile")
    im.add_argument("--root", type=int, default=0)
    im.add_argument("-o", "--output")
    im.add_argument("--emit-map", metavar="FILE", help="write 'old new' id pairs ('-' for stdout)")
    im.set_defaults(func=cmd_import_edges)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, AncestryError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
