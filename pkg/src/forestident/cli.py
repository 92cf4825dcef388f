"""Command-line front end.

Every subcommand prints one compact JSON object (``selftest`` prints one line per
criterion).  Exit codes: 0 success, 1 mathematical failure, 2 usage, IO or
schema error.  No environment variables are read; randomness comes only from
``--seed``.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from pathlib import Path

from . import acceptance
from .forests import forest_count, forest_poly
from .graphs import GraphError, MarkedGraph, complete_graph, parse_partition, triangle
from .identities import (
    FormalSum,
    all_nonforbidden_sum,
    block_sum,
    gen_identity,
    verify_identity,
)
from .idspace import InsufficientSamples, dimension_report
from .laplacian import (
    MinorSpec,
    column_expansion_residual,
    dodgson_muir_residual,
    laplacian,
    minor_det,
    signed_forest_sum,
)

OK, MATH_FAILURE, USAGE_ERROR = 0, 1, 2
MAX_SEED = (1 << 64) - 1


class UsageError(Exception):
    pass


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _index_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def load_graph(source: str) -> MarkedGraph:
    """A graph JSON file, or a built-in: ``triangle``, ``K<n>``, or ``K<n>:<m>``
    (vertices 1..m marked)."""
    path = Path(source)
    if path.is_file():
        try:
            return MarkedGraph.from_json(path.read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc}") from None
    if source == "triangle":
        return triangle()
    match = re.fullmatch(r"K(\d+)(?::(\d+))?", source)
    if match:
        n = int(match.group(1))
        m = int(match.group(2)) if match.group(2) else n
        return complete_graph(n, range(1, m + 1))
    raise UsageError(f"no such graph file: {source}")


def load_identity(path: str) -> FormalSum:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict) or "m" not in data or "terms" not in data:
        raise UsageError(f"{path}: identity JSON needs 'm' and 'terms'")
    m = data["m"]
    if not isinstance(m, int) or m < 2:
        raise UsageError(f"{path}: 'm' must be an integer >= 2")
    return FormalSum.from_json_terms(m, data["terms"])


def dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


# -------------------------------------------------------------- subcommands


def cmd_forest_poly(args) -> tuple[int, dict]:
    G = load_graph(args.graph)
    P = parse_partition(args.partition)
    if len(P) != G.m:
        raise UsageError(f"partition has {len(P)} entries, graph has {G.m} marked vertices")
    p = forest_poly(G, P)
    return OK, {"poly": p.to_text(G.name_map()), "forests": forest_count(G, P)}


def cmd_gen_identity(args) -> tuple[int, dict]:
    m, c, j = args.m, args.c, args.j
    if m < 3:
        raise UsageError("m must be at least 3")
    if not 1 <= c <= m or not 1 <= j <= m - 1:
        raise UsageError(f"need 1 <= c <= {m} and 1 <= j <= {m - 1}")
    return OK, gen_identity(m, c, j).to_dict()


def cmd_verify_identity(args) -> tuple[int, dict]:
    S = load_identity(args.file)
    results = []
    for source in args.graph:
        G = load_graph(source)
        if G.m != S.m:
            raise UsageError(f"{source} has {G.m} marked vertices, identity is over m={S.m}")
        results.append(verify_identity(S, G))
    ok = all(results)
    return (OK if ok else MATH_FAILURE), {"m": S.m, "terms": len(S), "graphs": len(results), "verified": ok}


def cmd_blocks(args) -> tuple[int, dict]:
    m = args.m
    if m < 3:
        raise UsageError("m must be at least 3")
    J = all_nonforbidden_sum(m)
    agree = [block_sum(m, c) == J for c in range(1, m + 1)]
    ok = all(agree)
    return (OK if ok else MATH_FAILURE), {
        "m": m,
        "terms": len(J),
        "c_independent": ok,
        "equals_nonforbidden": ok,
    }


def cmd_dim(args) -> tuple[int, dict]:
    if args.m < 3:
        raise UsageError("m must be at least 3")
    corpus = None
    if args.graphs != ["auto"]:
        corpus = [load_graph(g) for g in args.graphs]
        if any(G.m != args.m for G in corpus):
            raise UsageError(f"every corpus graph needs {args.m} marked vertices")
    rep = dimension_report(args.m, seed=args.seed, corpus=corpus)
    return (OK if rep.passed else MATH_FAILURE), rep.to_dict()


def cmd_vy_check(args) -> tuple[int, dict]:
    ok, detail = acceptance.check_vy(trials=args.trials, seed=args.seed)
    return (OK if ok else MATH_FAILURE), {"trials": args.trials, "seed": args.seed, "pass": ok, "detail": detail}


def cmd_mtt_check(args) -> tuple[int, dict]:
    G = load_graph(args.graph)
    spec = MinorSpec.of(args.rows, args.cols)
    if len(spec.rows) != len(args.rows) or len(spec.cols) != len(args.cols):
        raise UsageError("rows and columns must not repeat")
    det = minor_det(laplacian(G), spec)
    forests = signed_forest_sum(G, spec)
    names = G.name_map()
    ok = det == forests
    return (OK if ok else MATH_FAILURE), {
        "minor_det": det.to_text(names),
        "signed_forest_sum": forests.to_text(names),
        "agree": ok,
    }


def cmd_colexp_check(args) -> tuple[int, dict]:
    k = args.k
    d = args.d if args.d is not None else k + 2
    if not 1 <= k <= d:
        raise UsageError("need 1 <= k <= d")
    rng = random.Random(args.seed)
    nonzero = 0
    muir_nonzero = 0
    for _ in range(args.trials):
        M = [[rng.randint(-9, 9) for _ in range(d)] for _ in range(d)]
        nonzero += sum(1 for j in range(1, k + 1) if column_expansion_residual(M, k, j))
        if k <= 4:
            muir_nonzero += bool(dodgson_muir_residual(M, k))
    out = {"d": d, "k": k, "trials": args.trials, "seed": args.seed, "nonzero": nonzero}
    if k <= 4:
        out["muir_nonzero"] = muir_nonzero
    ok = nonzero == 0 and muir_nonzero == 0
    return (OK if ok else MATH_FAILURE), out


def cmd_selftest(args) -> int:
    try:
        chosen = acceptance.select(args.only)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    ok = True
    for c in chosen:
        result = acceptance.run_criterion(c)
        print(result.line(), flush=True)
        ok &= result.passed
    print("all criteria passed" if ok else "some criteria FAILED")
    return OK if ok else MATH_FAILURE


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forestident", description="Spanning forest polynomial identities, checked exactly."
    )
    parser.add_argument("--output", help="write the JSON result to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forest-poly", help="spanning forest polynomial of a partition")
    p.add_argument("--graph", required=True, help="graph JSON file, 'triangle', 'K<n>' or 'K<n>:<m>'")
    p.add_argument("--partition", required=True, help='e.g. "(1,2,2)" or "(-,1,2)"')
    p.set_defaults(func=cmd_forest_poly)

    p = sub.add_parser("gen-identity", help="generate the identity L_{m,c}(j)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c", type=int, required=True, help="removed column, a marked vertex")
    p.add_argument("--j", type=int, required=True, help="expansion index, 1..m-1")
    p.set_defaults(func=cmd_gen_identity)

    p = sub.add_parser("verify-identity", help="check an identity JSON on graphs")
    p.add_argument("--file", required=True)
    p.add_argument("--graph", required=True, action="append", help="repeatable")
    p.set_defaults(func=cmd_verify_identity)

    p = sub.add_parser("blocks", help="check that every block sums to the non-forbidden pairs")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("dim", help="lower and upper bounds on the dimension of the identity space")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=_seed, default=7)
    p.add_argument("--graphs", nargs="+", default=["auto"], help="'auto' or graph files")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("vy-check", help="check the eight-parameter four-vertex family")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=_seed, default=5)
    p.set_defaults(func=cmd_vy_check)

    p = sub.add_parser("mtt-check", help="compare a Laplacian minor with its signed forest sum")
    p.add_argument("--graph", required=True)
    p.add_argument("--rows", type=_index_list, required=True, help="e.g. 1,3")
    p.add_argument("--cols", type=_index_list, required=True, help="e.g. 1,2")
    p.set_defaults(func=cmd_mtt_check)

    p = sub.add_parser("colexp-check", help="column expansion residuals on random integer matrices")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, help="matrix size (default k+2)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_colexp_check)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--only", nargs="+", help="criterion keys or numbers, e.g. blocks 7")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code else OK
    try:
        if args.command == "selftest":
            return args.func(args)
        code, payload = args.func(args)
    except (UsageError, GraphError, InsufficientSamples, ValueError, KeyError) as exc:
        message = exc.args[0] if exc.args else type(exc).__name__
        print(dump({"error": str(message)}), file=sys.stderr)
        return USAGE_ERROR
    text = dump(payload)
    if args.output:
        try:
            Path(args.output).write_text(text + "\n")
        except OSError as exc:
            print(dump({"error": f"cannot write {args.output}: {exc}"}), file=sys.stderr)
            return USAGE_ERROR
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
