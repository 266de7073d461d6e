"""Graphs of groupoids, trees of partial isomorphisms and trees of representatives."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .actions import UnionFind, orbit_classes, saturation
from .graph import (GraphError, Orientation, Path, SerreGraph, default_orientation, is_connected,
                    is_forest, is_tree, maximal_subtree, tree_path, validate_graph, validate_orientation)
from .groupoid import Groupoid, GroupoidHom, check_hom, validate_groupoid


class GogError(ValueError):
    pass


@dataclass(eq=False)
class GraphOfGroupoids:
    base: SerreGraph
    vertex_groupoid: Dict[str, Groupoid]
    edge_groupoid: Dict[str, Groupoid]
    alpha: Dict[str, Dict[str, str]]
    root: Optional[str] = None
    orientation: Optional[Orientation] = None
    tree: Optional[SerreGraph] = None

    def __post_init__(self):
        if self.root is None and self.base.vertices:
            self.root = self.base.vertices[0]
        if self.orientation is None:
            self.orientation = default_orientation(self.base)

    def hom(self, e: str) -> GroupoidHom:
        return GroupoidHom(self.edge_groupoid[e], self.vertex_groupoid[self.base.terminus[e]], self.alpha[e])

    def image(self, e: str) -> FrozenSet[str]:
        """``H_e``, the image of ``alpha_e`` inside ``G_{t(e)}``."""
        return frozenset(self.alpha[e].values())

    def spanning_tree(self) -> SerreGraph:
        if self.tree is None:
            self.tree = maximal_subtree(self.base)
        return self.tree


def validate_gog(G: GraphOfGroupoids, relaxed: bool = False) -> List[str]:
    errs = list(validate_graph(G.base))
    if errs:
        return errs
    if not is_connected(G.base):
        errs.append("base graph is not connected")
    if G.root not in G.base.vertices:
        errs.append(f"root {G.root} is not a vertex")
    errs += validate_orientation(G.base, G.orientation)
    for v in G.base.vertices:
        if v not in G.vertex_groupoid:
            errs.append(f"vertex {v} has no groupoid")
        else:
            errs += [f"G_{v}: {m}" for m in validate_groupoid(G.vertex_groupoid[v])]
    for e in G.base.edges:
        eb = G.base.bar[e]
        if e not in G.edge_groupoid:
            errs.append(f"edge {e} has no groupoid")
            continue
        if G.edge_groupoid.get(eb) is not G.edge_groupoid[e] and (
                G.edge_groupoid.get(eb) is None or G.edge_groupoid[eb].to_dict() != G.edge_groupoid[e].to_dict()):
            errs.append(f"G_{e} != G_{eb}")
        if e not in G.alpha:
            errs.append(f"alpha_{e} missing")
            continue
        if errs:
            continue
        try:
            rep = check_hom(G.hom(e))
        except Exception as exc:  # image outside the target or undefined
            errs.append(f"alpha_{e}: {exc}")
            continue
        if not rep.is_hom:
            errs.append(f"alpha_{e} is not a homomorphism: {rep.errors[0]}")
        if not rep.is_injective:
            errs.append(f"alpha_{e} is not injective")
        if not relaxed:
            tgt = G.vertex_groupoid[G.base.terminus[e]]
            missing = set(tgt.units) - G.image(e)
            if missing:
                errs.append(f"image of alpha_{e} is not wide (missing {sorted(missing)})")
    if G.tree is not None:
        T = G.tree
        if not is_tree(T) or set(T.vertices) != set(G.base.vertices):
            errs.append("declared tree is not a maximal subtree")
    return errs


def edge_iso(G: GraphOfGroupoids, e: str) -> Dict[str, str]:
    """``phi_e = alpha_e o alpha_{bar e}^{-1}`` as a map ``H_{bar e} -> H_e``."""
    eb = G.base.bar[e]
    inv_b = {v: k for k, v in G.alpha[eb].items()}
    return {h: G.alpha[e][z] for h, z in inv_b.items()}


# ---------------------------------------------------------------- trees of partial isomorphisms

@dataclass(eq=False)
class TreeOfPartialIsos:
    tree: SerreGraph
    vertex_set: Dict[str, Tuple[str, ...]]
    phi0: Dict[str, Dict[str, str]]

    def errors(self) -> List[str]:
        errs = []
        if not is_tree(self.tree):
            errs.append("underlying graph is not a tree")
        for e in self.tree.edges:
            eb = self.tree.bar[e]
            f, g = self.phi0[e], self.phi0[eb]
            for x, y in f.items():
                if g.get(y) != x:
                    errs.append(f"phi0({eb}) is not inverse to phi0({e}) at {x}")
        return errs


def underlying_tpi(G: GraphOfGroupoids, T: Optional[SerreGraph] = None) -> TreeOfPartialIsos:
    T = T if T is not None else G.spanning_tree()
    if not is_tree(T) or set(T.vertices) != set(G.base.vertices):
        raise GogError("T is not a spanning subtree")
    vs = {v: G.vertex_groupoid[v].units for v in T.vertices}
    phi0 = {}
    for e in T.edges:
        full = edge_iso(G, e)
        phi0[e] = {x: full[x] for x in vs[T.origin[e]] if x in full}
    return TreeOfPartialIsos(T, vs, phi0)


def path_iso(tpi: TreeOfPartialIsos, p: Path) -> Dict[str, str]:
    """``Phi_p`` for ``p = e_1 ... e_n`` (``o(e_i) = t(e_{i+1})``): apply ``phi0(e_n)`` first."""
    if not p.edges:
        v = p.base_vertex
        return {x: x for x in tpi.vertex_set[v]}
    cur = {x: x for x in tpi.vertex_set[tpi.tree.origin[p.edges[-1]]]}
    for e in reversed(p.edges):
        f = tpi.phi0[e]
        cur = {x: f[y] for x, y in cur.items() if y in f}
        if not cur:
            raise GogError("empty intermediate domain along the path")
    return cur


def _tree_path_as_path(T: SerreGraph, frm: str, to: str) -> Path:
    es = tree_path(T, frm, to)
    return Path(tuple(reversed(es)), frm)


def tilde_classes(tpi: TreeOfPartialIsos) -> List[List[Tuple[str, str]]]:
    """Classes of the relation generated by ``y ~ phi0_e(y)``; elements are ``(vertex, unit)``."""
    uf = UnionFind((v, x) for v, xs in tpi.vertex_set.items() for x in xs)
    for e in tpi.tree.edges:
        o, t = tpi.tree.origin[e], tpi.tree.terminus[e]
        for x, y in tpi.phi0[e].items():
            uf.union((o, x), (t, y))
    return sorted(sorted(c) for c in uf.classes().values())


def is_rooted(tpi: TreeOfPartialIsos, r: str) -> bool:
    for c in tilde_classes(tpi):
        if sum(1 for v, _ in c if v == r) != 1:
            return False
    return True


def tau_map(tpi: TreeOfPartialIsos, r: str) -> Dict[Tuple[str, str], str]:
    """``(vertex, unit) -> unit of the root`` along the unique tree path."""
    if not is_rooted(tpi, r):
        raise GogError(f"tree is not rooted at {r}")
    out = {}
    for v, xs in tpi.vertex_set.items():
        back = path_iso(tpi, _tree_path_as_path(tpi.tree, v, r))
        for x in xs:
            out[(v, x)] = back[x]
    return out


def tau(tpi: TreeOfPartialIsos, r: str, v: str, y: str) -> str:
    return tau_map(tpi, r)[(v, y)]


def pi_forest(tpi: TreeOfPartialIsos) -> SerreGraph:
    vs = [f"{x}@{v}" for v, xs in tpi.vertex_set.items() for x in xs]
    recs = []
    for e in tpi.tree.edges:
        o, t = tpi.tree.origin[e], tpi.tree.terminus[e]
        eb = tpi.tree.bar[e]
        for x, y in tpi.phi0[e].items():
            recs.append((f"{e}:{x}", f"{eb}:{y}", f"{x}@{o}", f"{y}@{t}"))
    return SerreGraph.build(vs, recs)


def unit_display_names(G: GraphOfGroupoids) -> Dict[str, str]:
    """Root units get names ``u1, u2, ...`` in id order."""
    return {x: f"u{i + 1}" for i, x in enumerate(G.vertex_groupoid[G.root].units)}


# ---------------------------------------------------------------- representations

@dataclass(eq=False)
class Representation:
    """``chi`` given by partial sections: ``vertex_images[v][x]`` is the carrier vertex
    representing unit ``x`` of ``G_v``; likewise ``edge_images`` for tree edges."""
    tree: SerreGraph
    vertex_images: Dict[str, Dict]
    edge_images: Dict[str, Dict] = field(default_factory=dict)

    def hom_errors(self, forest: SerreGraph) -> List[str]:
        errs = []
        for e, sec in self.edge_images.items():
            o, t = self.tree.origin[e], self.tree.terminus[e]
            for x, f in sec.items():
                if forest.origin[f] != self.vertex_images[o].get(x) or forest.terminus[f] != self.vertex_images[t].get(x):
                    errs.append(f"chi does not commute with o/t at ({e}, {x})")
                eb = self.tree.bar[e]
                if eb in self.edge_images and self.edge_images[eb].get(x) not in (None, forest.bar[f]):
                    errs.append(f"chi does not commute with bar at ({e}, {x})")
        return errs


def induced_rep_groupoids(rep: Representation, action) -> Tuple[Dict[str, List], Dict[str, List]]:
    """``G_{chi,v}``: elements mapping a point of ``chi(Gamma_v)`` into ``chi(Gamma_v)``."""
    G = action.acting
    out_v, out_e = {}, {}
    for kind, images, act, phi, out in (("vertex", rep.vertex_images, action.act0, action.phi, out_v),
                                        ("edge", rep.edge_images, action.act1, action.phi_edge, out_e)):
        for v, sec in images.items():
            pts = set(sec.values())
            by_unit: Dict = {}
            for p in pts:
                by_unit.setdefault(phi(p), []).append(p)
            els = []
            for g in action.elements:
                for p in by_unit.get(G.src(g), []):
                    q = act(g, p)
                    if q in pts:
                        els.append(g)
                        break
            out[v] = els
    return out_v, out_e


def check_tree_of_representatives(rep: Representation, action) -> bool:
    uf = orbit_classes(action, "vertex")
    seen = set()
    total = set()
    for v in rep.tree.vertices:
        sat = saturation(action, rep.vertex_images[v].values(), "vertex", uf)
        if sat & seen:
            return False
        seen |= sat
        total |= sat
    if total != set(action.graph.vertices):
        return False
    return not rep.hom_errors(action.graph)
