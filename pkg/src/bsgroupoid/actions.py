"""Groupoid actions on sets and on Serre graphs.

The acting groupoid only has to provide ``src``, ``rng``, ``inv``, ``mul``,
``is_unit``, ``units`` and ``key``; the table-based :class:`Groupoid` and the
fundamental groupoid both do.  ``elements`` is the finite list of acting
morphisms that validators and orbit computations iterate over.  For actions
truncated to a ball, ``act0``/``act1`` return ``None`` when the result leaves
the ball and such pairs are skipped (and counted) by the checks.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from .graph import SerreGraph, is_tree, validate_graph
from .groupoid import Groupoid, GroupoidError, Subgroupoid, generated_subgroupoid


class ActionError(ValueError):
    pass


class InversionError(ActionError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"action inverts an edge: mu1{witness} = bar({witness[1]})")


class UnionFind:
    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent = {x: x for x in items}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def classes(self) -> Dict[Hashable, List]:
        out: Dict[Hashable, List] = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


# ---------------------------------------------------------------- set actions

@dataclass(eq=False)
class SetAction:
    acting: Groupoid
    carrier: List[str]
    momentum: Dict[str, str]
    table: Dict[Tuple[str, str], str]
    elements: Optional[List] = None

    def __post_init__(self):
        if self.elements is None:
            self.elements = list(self.acting.morphisms)

    def phi(self, x):
        return self.momentum[x]

    def act(self, g, x):
        if self.acting.src(g) != self.momentum[x]:
            raise ActionError(f"{g} cannot act on {x}: src != momentum")
        return self.table.get((g, x))


@dataclass(eq=False)
class GraphAction:
    acting: object
    graph: SerreGraph
    momentum: Dict
    mu0: Dict = field(default_factory=dict)
    mu1: Dict = field(default_factory=dict)
    elements: Optional[List] = None
    boundary: FrozenSet = frozenset()
    carrier_key: Optional[Callable] = None

    def __post_init__(self):
        if self.elements is None:
            self.elements = list(self.acting.morphisms)
        if self.carrier_key is None:
            self.carrier_key = lambda x: x

    def phi(self, x):
        return self.momentum[x]

    def phi_edge(self, e):
        return self.momentum[self.graph.terminus[e]]

    def act0(self, g, x):
        return self.mu0.get((g, x))

    def act1(self, g, e):
        return self.mu1.get((g, e))

    # exact action (no truncation); table actions are already exact
    def exact0(self, g, x):
        return self.act0(g, x)

    def exact1(self, g, e):
        return self.act1(g, e)

    def exact_bar(self, e):
        return self.graph.bar[e]

    def ball(self, center, r: int) -> SerreGraph:
        from .graph import bfs_distances
        d = bfs_distances(self.graph, center)
        return self.graph.subgraph([v for v, k in d.items() if k <= r])

    def star(self, v) -> List:
        g = self.graph
        return [e for e in g.edges if g.terminus[e] == v]


def graph_action_from_table(ta) -> GraphAction:
    return GraphAction(ta.groupoid, ta.graph, dict(ta.momentum), dict(ta.mu0), dict(ta.mu1))


def _fibers(items, phi) -> Dict:
    out: Dict = {}
    for x in items:
        out.setdefault(phi(x), []).append(x)
    return out


def _check_set_axioms(G, elements, carrier, phi, act, label, errs, limit=20):
    """A1-A3 on a (possibly truncated) action; returns the number of skipped pairs."""
    fib = _fibers(carrier, phi)
    skipped = 0
    for x in carrier:
        u = phi(x)
        y = act(G.unit(u) if hasattr(G, "unit") else u, x)
        if y is None:
            skipped += 1
        elif y != x:
            errs.append(f"A3 fails for {label} {x}")
    for g in elements:
        for x in fib.get(G.src(g), []):
            y = act(g, x)
            if y is None:
                skipped += 1
                continue
            if phi(y) != G.rng(g):
                errs.append(f"A1 fails: momentum({g}.{x}) != rng({g})")
            for h in elements:
                if G.src(h) != G.rng(g):
                    continue
                z = act(h, y)
                hg = G.mul(h, g)
                w = act(hg, x) if hg is not None else None
                if z is None or w is None:
                    skipped += 1
                    continue
                if z != w:
                    errs.append(f"A2 fails on ({h}, {g}, {x})")
            if len(errs) > limit:
                return skipped
    return skipped


@dataclass
class ActionReport:
    errors: List[str]
    skipped_pairs: int = 0

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_action(a) -> ActionReport:
    errs: List[str] = []
    G = a.acting
    units = set(G.units)
    if isinstance(a, SetAction):
        for x in a.carrier:
            if a.momentum.get(x) not in units:
                errs.append(f"momentum({x}) is not a unit")
        if errs:
            return ActionReport(errs)
        sk = _check_set_axioms(G, a.elements, a.carrier, a.phi,
                               lambda g, x: a.table.get((g, x)), "point", errs)
        return ActionReport(errs, sk)
    g_ = a.graph
    errs += validate_graph(g_)
    for x in g_.vertices:
        if a.momentum.get(x) not in units:
            errs.append(f"momentum({x}) is not a unit")
    if errs:
        return ActionReport(errs)
    for e in g_.edges:
        if a.phi(g_.origin[e]) != a.phi(g_.terminus[e]):
            errs.append(f"momentum(o({e})) != momentum(t({e}))")
    sk = _check_set_axioms(G, a.elements, list(g_.vertices), a.phi, a.act0, "vertex", errs)
    sk += _check_set_axioms(G, a.elements, list(g_.edges), a.phi_edge, a.act1, "edge", errs)
    efib = _fibers(g_.edges, a.phi_edge)
    for g in a.elements:
        for e in efib.get(G.src(g), []):
            f = a.act1(g, e)
            if f is None:
                continue
            for name, mp in (("o", g_.origin), ("t", g_.terminus)):
                img = a.act0(g, mp[e])
                if img is not None and mp[f] != img:
                    errs.append(f"{name}(mu1({g},{e})) != mu0({g},{name}({e}))")
            fb = a.act1(g, g_.bar[e])
            if fb is not None and fb != g_.bar[f]:
                errs.append(f"mu1 does not commute with bar at ({g},{e})")
    return ActionReport(errs, sk)


def action_groupoid(a: SetAction) -> Groupoid:
    rep = validate_action(a)
    if rep.errors:
        raise ActionError("invalid action: " + "; ".join(rep.errors[:3]))
    G = a.acting
    pair = {}
    for g in a.elements:
        for x in a.carrier:
            if a.momentum[x] == G.src(g):
                pair[f"({g},{x})"] = (g, x)
    ids = {v: k for k, v in pair.items()}
    unit_of = {x: ids[(a.momentum[x], x)] for x in a.carrier}
    src = {k: unit_of[x] for k, (g, x) in pair.items()}
    rng = {k: unit_of[a.table[(g, x)]] for k, (g, x) in pair.items()}
    inv = {k: ids[(G.inv(g), a.table[(g, x)])] for k, (g, x) in pair.items()}

    def mul(k1, k2):
        (g1, _), (g2, x2) = pair[k1], pair[k2]
        return ids[(G.mul(g1, g2), x2)]

    return Groupoid.from_mul(unit_of.values(), pair, src, rng, inv, mul)


# ---------------------------------------------------------------- orbits

def _carrier(a, kind: str):
    if isinstance(a, SetAction):
        return a.carrier, a.phi, (lambda g, x: a.table.get((g, x)))
    if kind == "vertex":
        return list(a.graph.vertices), a.phi, a.act0
    return list(a.graph.edges), a.phi_edge, a.act1


def orbit_classes(a, kind: str = "vertex") -> UnionFind:
    items, phi, act = _carrier(a, kind)
    uf = UnionFind(items)
    fib = _fibers(items, phi)
    for g in a.elements:
        for x in fib.get(a.acting.src(g), []):
            y = act(g, x)
            if y is not None:
                uf.union(x, y)
    return uf


def orbits(a, kind: str = "vertex") -> List[List]:
    uf = orbit_classes(a, kind)
    key = getattr(a, "carrier_key", None) or (lambda x: x)
    cls = [sorted(c, key=key) for c in uf.classes().values()]
    return sorted(cls, key=lambda c: key(c[0]))


def saturation(a, subset: Iterable, kind: str = "vertex", uf: Optional[UnionFind] = None) -> set:
    if uf is None:
        uf = orbit_classes(a, kind)
    roots = {uf.find(x) for x in subset}
    return {x for x in uf.parent if uf.find(x) in roots}


def quotient_graph(a: GraphAction) -> SerreGraph:
    g = a.graph
    efib = _fibers(g.edges, a.phi_edge)
    for el in a.elements:
        for e in efib.get(a.acting.src(el), []):
            if a.act1(el, e) == g.bar[e]:
                raise InversionError((el, e))
    vu = orbit_classes(a, "vertex")
    eu = orbit_classes(a, "edge")
    key = a.carrier_key

    def name(uf, x):
        members = [y for y in uf.parent if uf.find(y) == uf.find(x)]
        return str(min(members, key=key))

    vnames = {v: name(vu, v) for v in g.vertices}
    enames = {e: name(eu, e) for e in g.edges}
    recs = {}
    for e in g.edges:
        recs[enames[e]] = (enames[e], enames[g.bar[e]], vnames[g.origin[e]], vnames[g.terminus[e]])
    for n, (e, eb, _, _) in recs.items():
        if e == eb:
            raise InversionError((None, e))
    return SerreGraph.build(set(vnames.values()), recs.values())


def acts_without_inversion(a: GraphAction) -> Optional[Tuple]:
    """``None`` if no inversion, else a witness ``(g, e)`` with ``g.e = bar e``."""
    try:
        quotient_graph(a)
    except InversionError as exc:
        return exc.witness
    return None


def fiber_graphs(a: GraphAction) -> Dict:
    g = a.graph
    out = {}
    for u, vs in _fibers(g.vertices, a.phi).items():
        out[u] = g.subgraph(vs)
    return out


def is_g_forest(a: GraphAction) -> bool:
    return all(is_tree(fg) for fg in fiber_graphs(a).values())


# ---------------------------------------------------------------- sections and stabilizers

@dataclass(frozen=True, eq=False)
class PartialSection:
    values: Dict
    kind: str = "vertex"

    @property
    def domain(self) -> List:
        return list(self.values)

    def image(self) -> List:
        return list(self.values.values())

    def __call__(self, x):
        return self.values[x]


def section_errors(a, sigma: PartialSection) -> List[str]:
    phi = a.phi if sigma.kind == "vertex" else a.phi_edge
    return [f"momentum(sigma({x})) != {x}" for x, y in sigma.values.items() if phi(y) != x]


def stabilizer_elements(a, sigma: PartialSection) -> List:
    errs = section_errors(a, sigma)
    if errs:
        raise ActionError("; ".join(errs))
    G = a.acting
    act = a.act0 if sigma.kind == "vertex" else a.act1
    dom = sigma.values
    out = []
    for g in a.elements:
        s, r = G.src(g), G.rng(g)
        if s in dom and r in dom and act(g, dom[s]) == dom[r]:
            out.append(g)
    return out


def stabilizer_of_section(a, sigma: PartialSection) -> Subgroupoid:
    """Stabilizer as a validated subgroupoid of a table-based acting groupoid."""
    sub = Subgroupoid(a.acting, frozenset(stabilizer_elements(a, sigma)))
    errs = sub.closure_errors()
    if errs:
        raise ActionError("stabilizer is not closed: " + errs[0])
    return sub


# ---------------------------------------------------------------- Cayley graphs

def admissibility_errors(G: Groupoid, S: Iterable[str]) -> List[str]:
    S = set(S)
    errs = [f"{s} is a unit" for s in sorted(S) if G.is_unit(s)]
    errs += [f"inverse of {s} missing" for s in sorted(S) if G.inv(s) not in S]
    return errs


def cayley_graph(G: Groupoid, S: Iterable[str]) -> Tuple[SerreGraph, Dict[str, str]]:
    """Vertices are morphisms, one edge ``(gs, g)`` from ``g`` to ``gs`` per composable
    pair ``(g, s)``; returns the graph and its fibration ``r`` over the units."""
    S = sorted(set(S))
    errs = admissibility_errors(G, S)
    if errs:
        raise ActionError("admissibility violated: " + "; ".join(errs))
    recs = []
    for g in G.morphisms:
        for s in S:
            if G.src(g) == G.rng(s):
                gs = G.mul(g, s)
                recs.append((f"({gs},{g})", f"({g},{gs})", g, gs))
    graph = SerreGraph.build(G.morphisms, recs)
    return graph, {g: G.rng(g) for g in G.morphisms}


@dataclass
class CayleyReport:
    fibers_connected: bool
    generates: bool

    @property
    def agree(self) -> bool:
        return self.fibers_connected == self.generates


def check_cayley_generation(G: Groupoid, S: Iterable[str]) -> CayleyReport:
    S = list(S)
    graph, fib = cayley_graph(G, S)
    connected = True
    for u in G.units:
        vs = [g for g in G.morphisms if fib[g] == u]
        sub = graph.subgraph(vs)
        from .graph import is_connected
        if not is_connected(sub):
            connected = False
            break
    closure = generated_subgroupoid(G, S, G.units)
    return CayleyReport(connected, closure == frozenset(G.morphisms))
