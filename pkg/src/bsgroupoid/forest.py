"""The Bass-Serre forest of a graph of groupoids, explored through finite balls."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .actions import GraphAction
from .graph import SerreGraph, bfs_distances, components, find_cycle, is_tree
from .words import Pi1, Pi1Element, WordError


@dataclass(frozen=True)
class BSVertex:
    tag: str
    rep: Pi1Element


@dataclass(frozen=True)
class BSEdge:
    tag: str
    rep: Pi1Element


class BassSerreForest:
    def __init__(self, pi1: Pi1):
        self.P = pi1
        self.base = pi1.graph
        self.orient = pi1.orientation
        self._vcache: Dict[Tuple[str, Pi1Element], BSVertex] = {}
        self._ecache: Dict[Tuple[str, Pi1Element], BSEdge] = {}
        self._vgen = {v: [(m, self.P.normalize([("g", v, m)])) for m in pi1.vg[v].morphisms]
                      for v in self.base.vertices}
        self._hgen = {}
        for e in self.base.edges:
            a = self.orient.absolute(self.base, e)
            t = self.base.terminus[a]
            self._hgen[e] = [(m, self.P.normalize([("g", t, m)])) for m in sorted(pi1.H[a])]
        self.by_label: Dict[str, object] = {}

    # ------------------------------------------------------------ canonical representatives
    def _coset(self, p: Pi1Element, gens) -> List[Pi1Element]:
        return [self.P.mul(p, g) for _, g in gens if g.rng == p.src]

    def vertex_members(self, V: BSVertex) -> List[Pi1Element]:
        return self._coset(V.rep, self._vgen[V.tag])

    def edge_members(self, E: BSEdge) -> List[Pi1Element]:
        return self._coset(E.rep, self._hgen[E.tag])

    def vertex(self, v: str, p: Pi1Element) -> BSVertex:
        got = self._vcache.get((v, p))
        if got is None:
            members = self._coset(p, self._vgen[v])
            got = BSVertex(v, min(members))
            for q in members:
                self._vcache[(v, q)] = got
            self.by_label[self.label(got)] = got
        return got

    def edge(self, e: str, p: Pi1Element) -> BSEdge:
        got = self._ecache.get((e, p))
        if got is None:
            members = self._coset(p, self._hgen[e])
            got = BSEdge(e, min(members))
            for q in members:
                self._ecache[(e, q)] = got
            self.by_label[self.label(got)] = got
        return got

    def root_vertex(self, unit: str, v: Optional[str] = None) -> BSVertex:
        if unit in self.P.name_unit:
            unit = self.P.name_unit[unit]
        return self.vertex(v or self.P.root, self.P.unit(unit))

    # ------------------------------------------------------------ incidence
    def _step(self, p: Pi1Element, e: str) -> Pi1Element:
        """``p`` followed on the right by the letter ``e`` composable with it."""
        return self.P.mul(p, self.P.normalize([self.P.edge_letter_after(e, p.src)]))

    def origin_of(self, e: str, p: Pi1Element) -> BSVertex:
        if self.orient.is_positive(e):
            return self.vertex(self.base.origin[e], self._step(p, e))
        return self.vertex(self.base.origin[e], p)

    def terminus_of(self, e: str, p: Pi1Element) -> BSVertex:
        if self.orient.is_positive(e):
            return self.vertex(self.base.terminus[e], p)
        return self.vertex(self.base.terminus[e], self._step(p, self.base.bar[e]))

    def bs_origin(self, E: BSEdge) -> BSVertex:
        return self.origin_of(E.tag, E.rep)

    def bs_terminus(self, E: BSEdge) -> BSVertex:
        return self.terminus_of(E.tag, E.rep)

    def bs_bar(self, E: BSEdge) -> BSEdge:
        return self.edge(self.base.bar[E.tag], E.rep)

    def star(self, V: BSVertex) -> List[BSEdge]:
        """Edges with terminus ``V``."""
        out = []
        for e in self.base.edges:
            if self.base.terminus[e] != V.tag:
                continue
            for q in self.vertex_members(V):
                p = q if self.orient.is_positive(e) else self._step(q, e)
                E = self.edge(e, p)
                if E not in out:
                    out.append(E)
        return out

    # ------------------------------------------------------------ action
    def momentum(self, X) -> str:
        return X.rep.rng

    def bs_act(self, p: Pi1Element, X):
        if p.src != X.rep.rng:
            raise WordError(f"momentum mismatch: s({p}) != r({X.rep})")
        q = self.P.mul(p, X.rep)
        return self.vertex(X.tag, q) if isinstance(X, BSVertex) else self.edge(X.tag, q)

    # ------------------------------------------------------------ labels
    def _rep_text(self, p: Pi1Element) -> str:
        return self.P.unit_name[p.src] if not p.tokens else p.text

    def label(self, X) -> str:
        if isinstance(X, BSVertex):
            return f"{self._rep_text(X.rep)} G_{X.tag}[{X.tag}]"
        return f"{self._rep_text(X.rep)} H_{self.orient.absolute(self.base, X.tag)}[{X.tag}]"

    def parse_vertex(self, text: str) -> BSVertex:
        """``WORD@VERTEX``, e.g. ``u1@v`` or ``a_v^-1@w``."""
        if "@" not in text:
            raise WordError("vertex coset syntax is WORD@VERTEX")
        word, v = text.rsplit("@", 1)
        if v not in self.base.vertices:
            raise WordError(f"unknown vertex {v!r}")
        return self.vertex(v, self.P.element(word))

    # ------------------------------------------------------------ balls
    def ball_vertices(self, center: BSVertex, r: int) -> Dict[BSVertex, int]:
        if r < 0:
            raise ValueError("radius must be nonnegative")
        dist = {center: 0}
        queue = deque([center])
        while queue:
            V = queue.popleft()
            if dist[V] == r:
                continue
            for E in self.star(V):
                W = self.bs_origin(E)
                if W not in dist:
                    dist[W] = dist[V] + 1
                    queue.append(W)
        return dist

    def expand_ball(self, center: BSVertex, r: int) -> "ForestBall":
        dist = self.ball_vertices(center, r)
        return self._ball_from(dist, r)

    def _ball_from(self, dist: Dict[BSVertex, int], r: int) -> "ForestBall":
        edges = set()
        for V in dist:
            for E in self.star(V):
                if self.bs_origin(E) in dist:
                    edges.add(E)
                    edges.add(self.bs_bar(E))
        recs = [(self.label(E), self.label(self.bs_bar(E)), self.label(self.bs_origin(E)), self.label(self.bs_terminus(E)))
                for E in edges]
        graph = SerreGraph.build([self.label(V) for V in dist], recs)
        return ForestBall(graph, {self.label(V): V for V in dist}, {self.label(E): E for E in edges},
                          {self.label(V): d for V, d in dist.items()}, r)

    def union_ball(self, centers: Iterable[BSVertex], r: int) -> "ForestBall":
        dist: Dict[BSVertex, int] = {}
        for c in centers:
            for V, d in self.ball_vertices(c, r).items():
                dist[V] = min(d, dist.get(V, d))
        return self._ball_from(dist, r)

    def verify_tree_component(self, center: BSVertex, r: int) -> Tuple[bool, Optional[List[str]]]:
        ball = self.expand_ball(center, r)
        return check_tree_ball(ball.graph, {k: self.momentum(V) for k, V in ball.vertices.items()})


@dataclass
class ForestBall:
    graph: SerreGraph
    vertices: Dict[str, BSVertex]
    edges: Dict[str, BSEdge]
    distance: Dict[str, int]
    radius: int

    @property
    def boundary(self) -> frozenset:
        return frozenset(k for k, d in self.distance.items() if d == self.radius)


def check_tree_ball(graph: SerreGraph, momentum: Dict[str, str]) -> Tuple[bool, Optional[List[str]]]:
    """Connected per momentum fiber, acyclic, and no edge between fibers. Returns a witness on failure."""
    for e in graph.edges:
        o, t = graph.origin[e], graph.terminus[e]
        if momentum[o] != momentum[t]:
            return False, [e]
        if graph.bar.get(e) not in graph.origin or graph.bar[graph.bar[e]] != e or graph.bar[e] == e:
            return False, [e]
        eb = graph.bar[e]
        if graph.origin[eb] != t or graph.terminus[eb] != o:
            return False, [e, eb]
    cyc = find_cycle(graph)
    if cyc is not None:
        return False, cyc
    fibers: Dict[str, List[str]] = {}
    for v in graph.vertices:
        fibers.setdefault(momentum[v], []).append(v)
    for vs in fibers.values():
        if not is_tree(graph.subgraph(vs)):
            return False, sorted(vs)
    return True, None


class ForestBallAction(GraphAction):
    """Finite window on the action of the fundamental groupoid on its Bass-Serre forest.

    ``elements`` are the canonical elements of word length at most ``L`` (all
    sources); the carrier is the union of the ``r``-balls around the root-vertex
    cosets of all units.  Translations leaving the window are undefined.
    """

    def __init__(self, forest: BassSerreForest, L: int, r: int, centers: Optional[List[BSVertex]] = None):
        P = forest.P
        self.forest = forest
        self.L, self.r = L, r
        if centers is None:
            centers = [forest.root_vertex(x) for x in P.units]
        self.centers = centers
        ball = forest.union_ball(centers, r)
        self.window = ball
        momentum = {k: forest.momentum(V) for k, V in ball.vertices.items()}
        elements = P.all_balls(L)

        def carrier_key(k):
            X = ball.vertices.get(k) or ball.edges.get(k) or forest.by_label[k]
            return (len(X.rep.tokens), X.rep.tokens, X.tag)

        super().__init__(P, ball.graph, momentum, {}, {}, elements, ball.boundary, carrier_key)

    def act0(self, g, x):
        y = self.exact0(g, x)
        return y if y in self.window.vertices else None

    def act1(self, g, e):
        f = self.exact1(g, e)
        return f if f in self.window.edges else None

    def exact0(self, g, x):
        X = self.forest.by_label[x]
        return self.forest.label(self.forest.bs_act(g, X))

    def exact1(self, g, e):
        return self.exact0(g, e)

    def exact_bar(self, e):
        f = self.forest
        return f.label(f.bs_bar(f.by_label[e]))

    def phi(self, x):
        m = self.momentum.get(x)
        return m if m is not None else self.forest.momentum(self.forest.by_label[x])

    def phi_edge(self, e):
        return self.forest.momentum(self.forest.by_label[e])
