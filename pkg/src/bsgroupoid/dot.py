"""Graphviz DOT rendering; one undirected line per geometric edge."""
from __future__ import annotations

from typing import Dict, Iterable, Optional

from .graph import SerreGraph

PALETTE = ("red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan")


def _q(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: SerreGraph, name: str = "G", vertex_color: Optional[Dict[str, str]] = None,
                 edge_style: Optional[Dict[str, str]] = None, positive: Optional[Iterable[str]] = None,
                 edge_labels: bool = True) -> str:
    pos = set(positive) if positive is not None else {min(e, g.bar[e]) for e in g.edges}
    lines = [f"digraph {_q(name)} {{", "  node [shape=circle, style=filled, fontsize=10];"]
    for v in g.vertices:
        col = (vertex_color or {}).get(v, "lightgray")
        lines.append(f"  {_q(v)} [label={_q(v)}, fillcolor={_q(col)}];")
    for e in g.edges:
        if e not in pos:
            continue
        attrs = [f"label={_q(e)}"] if edge_labels else []
        style = (edge_style or {}).get(e)
        if style:
            attrs.append(f"style={style}")
        lines.append(f"  {_q(g.origin[e])} -> {_q(g.terminus[e])} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def forest_ball_to_dot(ball, forest) -> str:
    """Vertices colored by their base-vertex tag, edges labelled by coset."""
    tags = sorted({V.tag for V in ball.vertices.values()})
    color = {k: PALETTE[tags.index(V.tag) % len(PALETTE)] for k, V in ball.vertices.items()}
    positive = [k for k, E in ball.edges.items() if forest.orient.is_positive(E.tag)]
    return graph_to_dot(ball.graph, "forest", color, positive=positive)


def desing_to_dot(d) -> str:
    """Base graph of a desingularization: tree edges bold, extra edges dashed."""
    g = d.gamma
    style = {e: ("bold" if e in d.tree.edges else "dashed") for e in g.edges}
    return graph_to_dot(g, "desingularization", positive=d.gog.orientation.positive_edges, edge_style=style)


def cayley_to_dot(g: SerreGraph, fib: Dict[str, str]) -> str:
    units = sorted(set(fib.values()))
    color = {v: PALETTE[units.index(fib[v]) % len(PALETTE)] for v in g.vertices}
    return graph_to_dot(g, "cayley", color, edge_labels=False)
