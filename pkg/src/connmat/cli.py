"""Command-line interface.

Exit codes: 0 success, 2 bad arguments or input files, 3 size cap refused,
4 a verification check failed.

Environment overrides (command-line flags win): ``CONNMAT_FORMAT``,
``CONNMAT_MAX_N``, ``CONNMAT_THREADS``, ``CONNMAT_METHOD``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any

from . import __version__
from .algebra import connectivity_number, pi
from .conmatrix import (
    ALPHA_MAX_N,
    DIRECT_MAX_N,
    build_connectivity_matrix,
    determinant_alpha,
    determinant_direct,
    verify_theorem,
)
from .errors import ConnMatError, SizeLimitError
from .partitions import (
    DEFAULT_MAX_N,
    CoherentOrder,
    Partition,
    bell_number,
    check_size,
    coherent_order,
)
from .reliability import (
    complete_graph,
    mgr,
    parse_graph,
    quotient_graph,
    reliability_polynomial,
)

ENV_PREFIX = "CONNMAT_"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SIZE = 3
EXIT_FAILED = 4

# per-command cap on n when --max-n is not given
MATRIX_MAX_N = 8
VERIFY_DIRECT_MAX_N = 6


class _UsageError(Exception):
    pass


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name, default)


def _env_int(name: str):
    raw = _env(name)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"{ENV_PREFIX}{name} must be an integer, got {raw!r}")


def _emit(data: Any, text: str, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _read_order(path: str, n: int) -> CoherentOrder:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read order file {path}: {exc}")
    return CoherentOrder.parse(text, n)


def cmd_partitions(args) -> int:
    max_n = args.max_n if args.max_n is not None else DEFAULT_MAX_N
    order = coherent_order(args.n, max_n)
    classes = order.classes()
    lines = []
    data = {"n": args.n, "bell": len(order), "classes": []}
    for k, cls in enumerate(classes, 1):
        label = f"O{k}"
        sig = " ".join(map(str, cls.signature))
        for p in cls.members:
            lines.append(f"{p}\tblocks={p.num_blocks}\tclass={label}\tsignature={sig}")
        data["classes"].append(
            {"label": label, "signature": list(cls.signature), "members": [str(p) for p in cls.members]}
        )
    _emit(data, "\n".join(lines), args.format)
    return EXIT_OK


def cmd_matrix(args) -> int:
    max_n = args.max_n if args.max_n is not None else MATRIX_MAX_N
    check_size(args.n, max_n)
    order = _read_order(args.order, args.n) if args.order else coherent_order(args.n, max_n)
    A = build_connectivity_matrix(order)
    _emit(A.to_dict(), A.to_text(), args.format)
    return EXIT_OK


def cmd_pi(args) -> int:
    a = Partition.parse(args.partition)
    check_size(a.n, args.max_n if args.max_n is not None else DEFAULT_MAX_N)
    v = pi(a)
    alpha = connectivity_number(a).alpha
    data = {
        "n": a.n,
        "partition": str(a),
        "terms": [[str(c), t] for c, t in v.serialize()],
        "alpha": str(alpha),
    }
    _emit(data, f"pi({a}) = {v}\nalpha = {alpha}", args.format)
    return EXIT_OK


def cmd_det(args) -> int:
    n = args.n
    results: dict[str, Any] = {"n": n, "bell": bell_number(n)}
    lines = [f"n = {n}, |Part_n| = {results['bell']}"]
    order = _read_order(args.order, n) if args.order else None
    if args.method in ("alpha", "both"):
        cap = args.max_n if args.max_n is not None else ALPHA_MAX_N
        det = determinant_alpha(n, order, max_n=cap, workers=args.threads)
        results["det_alpha"] = str(det)
        lines.append(f"det(A) via connectivity numbers = {det}")
    if args.method in ("direct", "both"):
        cap = args.max_n if args.max_n is not None else DIRECT_MAX_N
        check_size(n, cap)
        A = build_connectivity_matrix(order if order is not None else coherent_order(n, cap))
        det = determinant_direct(A, max_n=cap)
        results["det_direct"] = str(det)
        lines.append(f"det(A) via Bareiss elimination  = {det}")
    if "det_alpha" in results and "det_direct" in results:
        results["agree"] = results["det_alpha"] == results["det_direct"]
        lines.append("legs agree" if results["agree"] else "LEGS DISAGREE")
    _emit(results, "\n".join(lines), args.format)
    return EXIT_OK if results.get("agree", True) else EXIT_FAILED


def cmd_reliability(args) -> int:
    extra: dict[str, Any] = {}
    if args.complete is not None:
        g = complete_graph(args.complete)
        source = f"K_{args.complete}"
    elif args.quotient is not None:
        if args.partition is None:
            raise _UsageError("--quotient needs --partition")
        a = Partition.parse(args.partition, args.quotient)
        g = quotient_graph(args.quotient, a)
        source = f"K_{args.quotient} / {a}"
        extra["partition"] = str(a)
        extra["blocks"] = a.num_blocks
    else:
        try:
            text = Path(args.graph).read_text()
        except OSError as exc:
            raise _UsageError(f"cannot read graph file {args.graph}: {exc}")
        g = parse_graph(text)
        source = args.graph
    kwargs = {} if args.max_edges is None else {"max_edges": args.max_edges}
    r = reliability_polynomial(g, **kwargs)
    coeff, deg = mgr(r, g.edge_count)
    data = {
        "source": source,
        "node_count": g.node_count,
        "edge_count": g.edge_count,
        "dropped_loops": g.dropped_loops,
        "coefficients": r.to_json(),
        "polynomial": str(r),
        "leading": {"coefficient": str(coeff), "degree": deg},
        **extra,
    }
    lines = [
        f"graph: {source} ({g.node_count} nodes, {g.edge_count} edges, {g.dropped_loops} loops dropped)",
        f"R = {r}",
        f"coefficient of p^{deg}: {coeff}",
    ]
    if "partition" in extra:
        alpha = -coeff if deg % 2 else coeff
        data["alpha"] = str(alpha)
        lines.append(f"connectivity number (-1)^{deg} * {coeff} = {alpha}")
    _emit(data, "\n".join(lines), args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    n = args.n
    cap = args.max_n if args.max_n is not None else ALPHA_MAX_N
    check_size(n, cap)
    order = _read_order(args.order, n) if args.order else None
    report = verify_theorem(
        n,
        method=args.method,
        order=order,
        max_n=cap,
        direct_max_n=VERIFY_DIRECT_MAX_N,
        workers=args.threads,
    )
    _emit(report.to_dict(), report.summary(), args.format)
    return EXIT_OK if report.passed else EXIT_FAILED


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default=None, help="output format (default text)")
    common.add_argument("--max-n", type=_positive_int, default=None, help="override the size cap")
    common.add_argument("--threads", type=_positive_int, default=None, help="worker processes for n >= 7")

    parser = argparse.ArgumentParser(
        prog="connmat",
        description="Connectivity matrix of set partitions and its determinant.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partitions", parents=[common], help="list Part_n by conjugation class")
    p.add_argument("n", type=_positive_int, help="size of the ground set")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("matrix", parents=[common], help="print the connectivity matrix")
    p.add_argument("n", type=_positive_int, help="size of the ground set")
    p.add_argument("--order", metavar="FILE", help="coherent order, one partition per line")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("pi", parents=[common], help="expand the elimination vector of a partition")
    p.add_argument("partition", help='partition text, e.g. "1 2|3"')
    p.set_defaults(func=cmd_pi)

    for name, func, helptext in (
        ("det", cmd_det, "determinant of the connectivity matrix"),
        ("verify", cmd_verify, "check |det A| = prod (m-1)!"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("n", type=_positive_int, help="size of the ground set")
        p.add_argument("--method", choices=["alpha", "direct", "both"], default=None, help="which determinant route to run")
        p.add_argument("--order", metavar="FILE", help="coherent order, one partition per line")
        p.set_defaults(func=func)

    p = sub.add_parser("reliability", parents=[common], help="all-terminal reliability polynomial")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--complete", type=_positive_int, metavar="M", help="complete graph K_M")
    src.add_argument("--quotient", type=_positive_int, metavar="N", help="K_N with the blocks of --partition shrunk to nodes")
    src.add_argument("--graph", metavar="PATH", help="multigraph file")
    p.add_argument("--partition", metavar="TEXT", help="partition for --quotient")
    p.add_argument("--max-edges", type=_positive_int, default=None, help="edge cap for deletion-contraction")
    p.set_defaults(func=cmd_reliability)
    return parser


def _apply_env(args) -> None:
    if args.format is None:
        args.format = _env("FORMAT", "text")
        if args.format not in ("json", "text"):
            raise _UsageError(f"{ENV_PREFIX}FORMAT must be json or text")
    if args.max_n is None:
        args.max_n = _env_int("MAX_N")
    if args.threads is None:
        args.threads = _env_int("THREADS") or os.cpu_count() or 1
    if hasattr(args, "method") and args.method is None:
        args.method = _env("METHOD", "both")
        if args.method not in ("alpha", "direct", "both"):
            raise _UsageError(f"{ENV_PREFIX}METHOD must be alpha, direct or both")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_env(args)
        return args.func(args)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (_UsageError, ConnMatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
