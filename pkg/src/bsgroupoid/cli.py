"""Command-line interface."""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional

from .actions import acts_without_inversion, check_cayley_generation, cayley_graph, is_g_forest, validate_action
from .desing import build_desingularization, validate_desingularization
from .dot import cayley_to_dot, desing_to_dot, forest_ball_to_dot
from .forest import BassSerreForest, ForestBallAction
from .gog import validate_gog
from .groupoid import validate_groupoid
from .io import ProjectFile, SchemaError, dumps, first_gog, gog_to_dict, graph_to_dict, load
from .graph import validate_graph
from .structure import check_structure_theorem
from .words import Pi1, WordError


class CliError(Exception):
    pass


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("radius must be >= 0")
    return v


def _gog(pf: ProjectFile, name):
    try:
        return first_gog(pf, name)
    except KeyError as exc:
        raise CliError(str(exc).strip("'\""))


def _action(pf: ProjectFile, name: str, L: int, r: int):
    if name not in pf.actions:
        raise CliError(f"unknown action {name!r}")
    a = pf.actions[name]
    if isinstance(a, dict):
        forest = BassSerreForest(Pi1(pf.graphs_of_groupoids[a["gog"]]))
        return ForestBallAction(forest, L, r)
    return a


def cmd_validate(pf: ProjectFile, args) -> int:
    bad = 0

    def report(kind, name, errs):
        nonlocal bad
        bad += bool(errs)
        print(f"{kind} {name}: {'ok' if not errs else 'FAIL'}")
        for m in errs[:10]:
            print(f"  - {m}")

    for n, g in sorted(pf.graphs.items()):
        report("graph", n, validate_graph(g))
    for n, G in sorted(pf.groupoids.items()):
        report("groupoid", n, validate_groupoid(G))
    for n, G in sorted(pf.graphs_of_groupoids.items()):
        report("graph_of_groupoids", n, validate_gog(G, relaxed=args.relaxed))
    for n, a in sorted(pf.actions.items()):
        if isinstance(a, dict):
            try:
                A = _action(pf, n, args.word_radius, args.ball_radius)
            except WordError as exc:
                report("action", n, [str(exc)])
                continue
            rep = validate_action(A)
            errs = list(rep.errors)
            if not is_g_forest(A):
                errs.append("fibers of the forest window are not trees")
            report("action", n, errs)
            continue
        rep = validate_action(a)
        errs = list(rep.errors)
        w = acts_without_inversion(a) if not errs else None
        if w is not None:
            errs.append(f"acts with inversion: {w}")
        if not errs and not is_g_forest(a):
            errs.append("momentum fibers are not trees")
        report("action", n, errs)
    return 1 if bad else 0


def cmd_reduce(pf: ProjectFile, args) -> int:
    P = Pi1(_gog(pf, args.gog))
    letters = P.parse(args.word)
    try:
        fw = P.normalize_free(P.to_free_word(letters))
        print(f"F: {P.format_word(fw)}")
    except WordError as exc:
        print(f"F: not a graph-of-groupoids word ({exc})")
    print(f"pi1: {P.normalize(letters)}")
    return 0


def cmd_ball(pf: ProjectFile, args) -> int:
    P = Pi1(_gog(pf, args.gog))
    for p in P.enumerate_ball(args.source, args.radius):
        print(p)
    return 0


def cmd_forest(pf: ProjectFile, args) -> int:
    F = BassSerreForest(Pi1(_gog(pf, args.gog)))
    center = F.parse_vertex(args.center)
    ball = F.expand_ball(center, args.radius)
    ok, wit = F.verify_tree_component(center, args.radius)
    print(f"vertices: {len(ball.graph.vertices)}")
    for k in sorted(ball.graph.vertices, key=lambda k: (ball.distance[k], k)):
        print(f"  {ball.distance[k]} {k}")
    print(f"edges: {len(ball.graph.edges)} directed, {len(ball.graph.edges) // 2} geometric")
    for e in sorted(ball.graph.edges):
        print(f"  {e}: {ball.graph.origin[e]} -> {ball.graph.terminus[e]}")
    print(f"tree: {'yes' if ok else 'no, witness ' + str(wit)}")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(forest_ball_to_dot(ball, F))
    return 0 if ok else 1


def cmd_cayley(pf: ProjectFile, args) -> int:
    if args.groupoid not in pf.groupoids:
        raise CliError(f"unknown groupoid {args.groupoid!r}")
    G = pf.groupoids[args.groupoid]
    gens = [s for s in args.gens.split(",") if s]
    g, fib = cayley_graph(G, gens)
    rep = check_cayley_generation(G, gens)
    print(f"vertices: {len(g.vertices)}, geometric edges: {len(g.edges) // 2}")
    print(f"fibers connected: {rep.fibers_connected}")
    print(f"generates: {rep.generates}")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(cayley_to_dot(g, fib))
    return 0


def desing_fragment(d, a) -> dict:
    G = a.acting
    names, groupoids = {}, {}
    for v, H in sorted(d.gog.vertex_groupoid.items()):
        names[id(H)] = f"G_{v}"
        groupoids[f"G_{v}"] = H.to_dict()
    for e, H in sorted(d.gog.edge_groupoid.items()):
        if id(H) not in names:
            n = f"G_{min(e, d.gamma.bar[e])}"
            names[id(H)] = n
            groupoids[n] = H.to_dict()
    names[id(d.gamma)] = "desing"
    sec = lambda s: {str(k): v for k, v in sorted(s.values.items(), key=lambda kv: str(kv[0]))}
    return {
        "graphs": {"desing": graph_to_dict(d.gamma)},
        "groupoids": groupoids,
        "graphs_of_groupoids": {"desing": gog_to_dict(d.gog, names)},
        "desingularizations": {"desing": {
            "gog": "desing",
            "tree": sorted(e for e in d.tree.edges if not e.endswith("bar")),
            "vertex_sections": {v: sec(s) for v, s in d.vertex_sections.items()},
            "tree_edge_sections": {e: sec(s) for e, s in d.tree_of_reps.edge_sections.items()},
            "edge_sections": {e: sec(s) for e, s in d.edge_sections.items()},
            "conjugators": {e: {str(x): G.label(h) for x, h in sorted(f.items(), key=lambda kv: str(kv[0]))}
                            for e, f in d.conjugators.items()},
            "notes": list(d.notes),
        }},
    }


def cmd_desingularize(pf: ProjectFile, args) -> int:
    a = _action(pf, args.action, args.word_radius, args.ball_radius)
    d = build_desingularization(a)
    rep = validate_desingularization(d, a)
    print(f"vertices: {', '.join(d.gamma.vertices)}")
    print(f"tree edges: {', '.join(e for e in d.tree.edges if not e.endswith('bar')) or '-'}")
    print(f"extra edges: {', '.join(d.upsilon_plus()) or '-'}")
    for v in d.gamma.vertices:
        print(f"G_{v}: {', '.join(d.gog.vertex_groupoid[v].morphisms)}")
    for n in d.notes:
        print(f"note: {n}")
    print(rep.summary())
    if args.out:
        frag = desing_fragment(d, a)
        frag["format_version"] = "1"
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(frag, fh, indent=1, sort_keys=True)
            fh.write("\n")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(desing_to_dot(d))
    return 0 if rep.ok else 1


def cmd_verify(pf: ProjectFile, args) -> int:
    a = _action(pf, args.action, args.word_radius, args.ball_radius)
    d = build_desingularization(a)
    cert = check_structure_theorem(d, a, args.word_radius, args.ball_radius)
    for k, v in cert["clauses"].items():
        v.pop("seconds", None) if args.stable else None
    cert["verdict"] = "PASS" if cert["pass"] else "FAIL"
    print(json.dumps(cert, indent=1, sort_keys=True))
    return 0 if cert["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bsgroupoid", description="Bass-Serre theory for discrete groupoids")
    p.add_argument("--seed", type=int, default=0, help="seed for any randomized step (default 0)")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("file")
        s.set_defaults(fn=fn)
        return s

    s = add("validate", cmd_validate, "run all validators")
    s.add_argument("--relaxed", action="store_true", help="do not require wide edge images")
    s.add_argument("--word-radius", type=_nonneg, default=4)
    s.add_argument("--ball-radius", type=_nonneg, default=3)
    s = add("reduce", cmd_reduce, "free-groupoid normal form and canonical form of a word")
    s.add_argument("--gog")
    s.add_argument("--word", required=True)
    s = add("ball", cmd_ball, "canonical elements of bounded length with a given source")
    s.add_argument("--gog")
    s.add_argument("--source", required=True)
    s.add_argument("--radius", type=_nonneg, required=True)
    s = add("forest", cmd_forest, "ball in the Bass-Serre forest")
    s.add_argument("--gog")
    s.add_argument("--center", required=True, help="WORD@VERTEX, e.g. u1@v")
    s.add_argument("--radius", type=_nonneg, required=True)
    s.add_argument("--dot")
    s = add("cayley", cmd_cayley, "Cayley graph of a groupoid")
    s.add_argument("--groupoid", required=True)
    s.add_argument("--gens", required=True)
    s.add_argument("--dot")
    s = add("desingularize", cmd_desingularize, "desingularize an action on a forest")
    s.add_argument("--action", required=True)
    s.add_argument("--out")
    s.add_argument("--dot")
    s.add_argument("--word-radius", type=_nonneg, default=4)
    s.add_argument("--ball-radius", type=_nonneg, default=3)
    s = add("verify", cmd_verify, "certify the structure theorem at bounded radius")
    s.add_argument("--action", required=True)
    s.add_argument("--word-radius", type=_nonneg, default=4)
    s.add_argument("--ball-radius", type=_nonneg, default=3)
    s.add_argument("--stable", action="store_true", help="omit timings for byte-stable output")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    random.seed(args.seed)
    try:
        pf = load(args.file)
        return args.fn(pf, args)
    except (SchemaError, CliError, WordError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
