"""Command-line interface.

Exit codes: 0 success, 1 a checked identity failed, 2 parse/usage error,
3 forest and Laplacian routes disagree, 4 precondition violated.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
from pathlib import Path
from typing import Callable, TextIO

from . import forest, laplacian
from .corpus import random_corpus
from .dodgson import DegenerateDelta1, dodgson_mixed_identity, dodgson_u_identity, valid_setups
from .graph import (
    Cleave,
    FeynGraph,
    GraphError,
    GraphFormatError,
    Identify,
    InvalidMove,
    Twist,
    apply_whitney_move,
    dump_graph,
    is_regular_edge,
    load_graph,
)
from .matroid import cycle_matroid, matroid_isomorphic, u_from_bases
from .poly import NotDivisible, Poly, find_variable_isomorphism, reciprocal_transform

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_MISMATCH, EXIT_PRECONDITION = 0, 1, 2, 3, 4

SUITES = (
    "matrix-tree",
    "deletion-contraction",
    "dodgson-u",
    "dodgson-mixed",
    "w-expansion",
    "reciprocal",
)


class CliExit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _load(path: str) -> FeynGraph:
    try:
        return load_graph(path)
    except GraphFormatError as exc:
        raise CliExit(EXIT_PARSE, f"parse error: {exc}") from None
    except OSError as exc:
        raise CliExit(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def _edge_list(text: str) -> list[str]:
    return [e for e in (s.strip() for s in text.split(",")) if e]


# -- symanzik -------------------------------------------------------------------


def _forest_route(g: FeynGraph) -> dict[str, Poly]:
    return {"U": forest.first_symanzik_u(g), "F0": forest.second_symanzik_f0(g)}


def _laplacian_route(g: FeynGraph) -> dict[str, Poly]:
    u = laplacian.u_from_laplacian(g)
    f0 = laplacian.f0_from_w(g) if g.legs else Poly()
    return {"U": u, "F0": f0}


def cmd_symanzik(args: argparse.Namespace, out: TextIO) -> int:
    g = _load(args.graph)
    if not g.is_connected():
        raise CliExit(EXIT_PRECONDITION, f"precondition: graph {g.name!r} is not connected")
    routes: dict[str, dict[str, Poly]] = {}
    if args.method in ("forest", "both"):
        routes["forest"] = _forest_route(g)
    if args.method in ("laplacian", "both"):
        routes["laplacian"] = _laplacian_route(g)
    if len(routes) == 2 and routes["forest"] != routes["laplacian"]:
        diff = [k for k in routes["forest"] if routes["forest"][k] != routes["laplacian"][k]]
        raise CliExit(EXIT_MISMATCH, f"forest and laplacian routes disagree on {', '.join(diff)}")
    polys = next(iter(routes.values()))
    vars_ = g.feyn_vars()
    calu = reciprocal_transform(polys["U"], vars_)
    calf0 = reciprocal_transform(polys["F0"], vars_)
    print(f"graph: {g.name}", file=out)
    print(f"method: {args.method}", file=out)
    print(f"loops: {g.n_edges - g.n_vertices + 1}", file=out)
    print(f"U = {polys['U']}", file=out)
    print(f"calU = {calu}", file=out)
    print(f"F0 = {polys['F0']}", file=out)
    print(f"calF0 = {calf0}", file=out)
    if g.masses:
        print(f"calF = {forest.full_f(g)}", file=out)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------


Report = list[tuple[bool, str]]


def _suite_matrix_tree(g: FeynGraph) -> Report:
    u = forest.first_symanzik_u(g)
    dets = laplacian.principal_minor_dets(g)
    return [(d == u, f"det L[{i + 1}] = U") for i, d in enumerate(dets)]


def _suite_deletion_contraction(g: FeynGraph) -> Report:
    rows = []
    for e in g.edges:
        if is_regular_edge(g, e.id):
            r = forest.deletion_contraction_report(g, e.id)
            rows.append((r.u_holds, f"calU recursion on {e.id}"))
            rows.append((r.f0_holds, f"calF0 recursion on {e.id}"))
    return rows


def _suite_dodgson_u(g: FeynGraph) -> Report:
    rows = []
    for s in valid_setups(g):
        try:
            ok = dodgson_u_identity(s).holds
        except NotDivisible:
            ok = False
        rows.append((ok, f"U identity ea={s.ea} eb={s.eb} vk={s.vk}"))
    return rows


def _suite_dodgson_mixed(g: FeynGraph) -> Report:
    rows = []
    for s in valid_setups(g):
        label = f"mixed identity ea={s.ea} eb={s.eb} vk={s.vk}"
        try:
            r = dodgson_mixed_identity(s)
        except DegenerateDelta1:
            rows.append((True, label + " (Delta1 = 0, skipped)"))
            continue
        except NotDivisible:
            rows.append((False, label))
            continue
        rows.append((r.holds, label))
    return rows


def _suite_w_expansion(g: FeynGraph) -> Report:
    if not g.legs:
        raise CliExit(EXIT_PRECONDITION, "precondition: w-expansion needs at least one leg")
    r = laplacian.w_expansion_check(g)
    return [
        (r.w0_zero, "W(0) = 0"),
        (r.w1_matches, "W(1) = U * sum(z)"),
        (r.w2_matches_f0, "W(2)|zz->pp = F0"),
    ]


def _suite_reciprocal(g: FeynGraph) -> Report:
    vars_ = g.feyn_vars()
    u, f0 = forest.first_symanzik_u(g), forest.second_symanzik_f0(g)
    calu, calf0 = forest.first_symanzik_calu(g), forest.second_symanzik_calf0(g)
    return [
        (reciprocal_transform(u, vars_) == calu, "calU = x1..xn U(1/x)"),
        (reciprocal_transform(calu, vars_) == u, "U = x1..xn calU(1/x)"),
        (reciprocal_transform(f0, vars_) == calf0, "calF0 = x1..xn F0(1/x)"),
        (reciprocal_transform(calf0, vars_) == f0, "F0 = x1..xn calF0(1/x)"),
    ]


_SUITE_FUNCS: dict[str, Callable[[FeynGraph], Report]] = {
    "matrix-tree": _suite_matrix_tree,
    "deletion-contraction": _suite_deletion_contraction,
    "dodgson-u": _suite_dodgson_u,
    "dodgson-mixed": _suite_dodgson_mixed,
    "w-expansion": _suite_w_expansion,
    "reciprocal": _suite_reciprocal,
}


def _random_suite(seed: int, count: int) -> Report:
    rows: Report = []
    for g in random_corpus(seed, count):
        tag = g.name
        rows.append((forest.first_symanzik_u(g) == laplacian.u_from_laplacian(g), f"{tag}: U forest = det L"))
        if g.legs:
            rows.append((laplacian.w_expansion_check(g).ok, f"{tag}: W expansion"))
        for suite in ("deletion-contraction", "dodgson-u", "dodgson-mixed", "reciprocal"):
            rows.extend((ok, f"{tag}: {label}") for ok, label in _SUITE_FUNCS[suite](g))
    return rows


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    if args.suite == "random":
        seed = int(os.environ.get("SYMFORGE_SEED", "0"))
        rows = _random_suite(seed, args.count)
        print(f"suite: random (seed {seed}, {args.count} graphs)", file=out)
    else:
        if args.graph is None:
            raise CliExit(EXIT_PARSE, "verify: a graph file is required for this suite")
        g = _load(args.graph)
        if not g.is_connected():
            raise CliExit(EXIT_PRECONDITION, f"precondition: graph {g.name!r} is not connected")
        suites = SUITES if args.suite == "all" else (args.suite,)
        rows = []
        for name in suites:
            if args.suite == "all" and name in ("w-expansion",) and not g.legs:
                continue
            rows.extend((ok, f"{name}: {label}") for ok, label in _SUITE_FUNCS[name](g))
        print(f"graph: {g.name}", file=out)
    for ok, label in rows:
        print(f"{'PASS' if ok else 'FAIL'} {label}", file=out)
    failed = sum(not ok for ok, _ in rows)
    print(f"{len(rows) - failed} passed, {failed} failed", file=out)
    return EXIT_FAIL if failed else EXIT_OK


# -- matroid --------------------------------------------------------------------


def _fmt_set(s: frozenset[str], order: tuple[str, ...]) -> str:
    return "{" + ", ".join(sorted(s, key=order.index)) + "}"


def _fmt_map(m: dict, prefix: str = "") -> str:
    return ", ".join(f"{prefix}{k}->{prefix}{v}" for k, v in m.items())


def cmd_matroid(args: argparse.Namespace, out: TextIO) -> int:
    g1, g2 = _load(args.graph), _load(args.other)
    m1, m2 = cycle_matroid(g1), cycle_matroid(g2)
    print("note: legs ignored; cycle matroids of the leg-free skeletons are compared", file=out)
    for label, g, m in (("A", g1, m1), ("B", g2, m2)):
        flag = "" if m.connected else " (disconnected: bases are maximal forests)"
        print(f"{label}: {g.name}, {len(m.ground)} elements, {len(m.bases)} bases, rank {m.rank}{flag}", file=out)
        if args.show_bases:
            key = lambda b: sorted(m.ground.index(e) for e in b)  # noqa: E731
            for b in sorted(m.bases, key=key):
                print(f"  base {_fmt_set(b, m.ground)}", file=out)
    mb = matroid_isomorphic(m1, m2)
    ub = find_variable_isomorphism(u_from_bases(m1), u_from_bases(m2))
    print(f"matroid bijection: {_fmt_map(mb) if mb is not None else 'none'}", file=out)
    print(f"U bijection: {_fmt_map(ub, 'x') if ub is not None else 'none'}", file=out)
    return EXIT_OK if (mb is None) == (ub is None) else EXIT_FAIL


# -- transform ------------------------------------------------------------------


def cmd_transform(args: argparse.Namespace, out: TextIO) -> int:
    g = _load(args.graph)
    if args.twist:
        if args.side is None:
            raise CliExit(EXIT_PARSE, "--twist requires --side")
        move = Twist(args.twist[0], args.twist[1], _edge_list(args.side))
    elif args.identify:
        move = Identify(*args.identify)
    else:
        if args.part is None:
            raise CliExit(EXIT_PARSE, "--cleave requires --part")
        move = Cleave(args.cleave, _edge_list(args.part))
    try:
        h = apply_whitney_move(g, move)
    except InvalidMove as exc:
        raise CliExit(EXIT_PRECONDITION, f"invalid move: {exc}") from None
    out.write(dump_graph(h))
    return EXIT_OK


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symforge",
        description="Symanzik polynomials of Feynman graphs and their identities.",
    )
    parser.add_argument("--version", action="version", version="%(prog)s 0.1.0")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symanzik", help="print U, calU, F0, calF0 (and calF)")
    p.add_argument("graph")
    p.add_argument("--method", choices=("forest", "laplacian", "both"), default="both")
    p.add_argument("--output")
    p.set_defaults(func=cmd_symanzik)

    p = sub.add_parser("verify", help="run an identity suite")
    p.add_argument("graph", nargs="?")
    p.add_argument("--suite", choices=SUITES + ("all", "random"), default="all")
    p.add_argument("--count", type=int, default=200, help="graphs for --suite random")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("matroid", help="compare the cycle matroids of two graphs")
    p.add_argument("graph")
    p.add_argument("other")
    p.add_argument("--show-bases", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_matroid)

    p = sub.add_parser("transform", help="apply a Whitney move and write the graph")
    p.add_argument("graph")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--twist", nargs=2, metavar=("U", "V"))
    group.add_argument("--identify", nargs=2, metavar=("U", "V"))
    group.add_argument("--cleave", metavar="W")
    p.add_argument("--side", metavar="E,...")
    p.add_argument("--part", metavar="E,...")
    p.add_argument("--output")
    p.set_defaults(func=cmd_transform)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except CliExit as exc:
        code = exc.code
        if exc.args and exc.args[0]:
            print(f"symforge: {exc.args[0]}", file=sys.stderr)
    except GraphError as exc:
        code = EXIT_PRECONDITION
        print(f"symforge: precondition: {exc}", file=sys.stderr)
    text = buf.getvalue()
    if args.output is not None and text:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
