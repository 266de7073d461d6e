"""Partial-section families, trees of representatives and desingularizations of
groupoid actions on forests."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set, Tuple

from .actions import (ActionError, InversionError, PartialSection, UnionFind, acts_without_inversion,
                      is_g_forest, orbit_classes, saturation, section_errors, stabilizer_elements)
from .gog import GraphOfGroupoids, Representation, check_tree_of_representatives, validate_gog
from .graph import Orientation, SerreGraph, is_connected, is_tree, validate_orientation
from .groupoid import Groupoid, check_hom


def _fibers(items, phi) -> Dict:
    out: Dict = {}
    for x in items:
        out.setdefault(phi(x), []).append(x)
    return out


def _adjacency(g: SerreGraph) -> Dict[str, Set[str]]:
    adj: Dict[str, Set[str]] = {v: set() for v in g.vertices}
    for e in g.edges:
        adj[g.origin[e]].add(g.terminus[e])
    return adj


# ---------------------------------------------------------------- section families

@dataclass
class SectionFamily:
    sections: List[PartialSection]
    carrier_key: Callable
    truncated: bool = False
    notes: List[str] = field(default_factory=list)
    uf: Optional[UnionFind] = None

    def index_of(self, a) -> int:
        """1-based index of the section whose image contains ``a``."""
        for i, s in enumerate(self.sections, 1):
            if a in s.values.values():
                return i
        raise KeyError(a)


def _check_forest_action(a) -> None:
    w = acts_without_inversion(a)
    if w is not None:
        raise InversionError(w)
    if not is_g_forest(a):
        raise ActionError("the momentum fibers are not trees")


def build_section_family(a) -> SectionFamily:
    """sigma_1 takes the least vertex of each fiber; sigma_(n+1) the least vertex of each
    fiber among the unsaturated vertices at distance one from the earlier images."""
    _check_forest_action(a)
    g = a.graph
    key = a.carrier_key
    uf = orbit_classes(a, "vertex")
    adj = _adjacency(g)
    fib = _fibers(g.vertices, a.phi)
    vals = {x: min(vs, key=key) for x, vs in sorted(fib.items())}
    fam = SectionFamily([], key, uf=uf)
    V: Set = set()
    sat: Set = set()
    while True:
        fam.sections.append(PartialSection(vals, "vertex"))
        V |= set(vals.values())
        sat |= saturation(a, vals.values(), "vertex", uf)
        C = [x for x in g.vertices if x not in sat]
        if not C:
            break
        Cp = [x for x in C if adj[x] & V and x not in a.boundary]
        if not Cp:
            fam.truncated = True
            fam.notes.append(f"stopped with {len(C)} unsaturated vertices, all on the window boundary")
            break
        vals = {x: min(vs, key=key) for x, vs in sorted(_fibers(Cp, a.phi).items())}
    return fam


def section_family_errors(a, fam: SectionFamily) -> List[str]:
    """Disjoint saturations, every fiber met, saturations cover the vertices."""
    errs = []
    uf = fam.uf or orbit_classes(a, "vertex")
    sats = [saturation(a, s.values.values(), "vertex", uf) for s in fam.sections]
    for i in range(len(sats)):
        errs += [f"sigma_{i + 1}: {m}" for m in section_errors(a, fam.sections[i])]
        for k in range(i + 1, len(sats)):
            if sats[i] & sats[k]:
                errs.append(f"saturations of sigma_{i + 1} and sigma_{k + 1} meet")
    hit = {x for s in fam.sections for x in s.values}
    units = {a.phi(v) for v in a.graph.vertices}
    for x in sorted(units - hit, key=str):
        errs.append(f"fiber over {x} is missed")
    if not fam.truncated:
        cover = set().union(*sats) if sats else set()
        if cover != set(a.graph.vertices):
            errs.append("saturations do not cover the vertex set")
    return errs


def adjacency_index(a, fam: SectionFamily, v) -> int:
    """``m_i(v)``: the smallest earlier section index whose image is adjacent to ``v`` in its fiber."""
    i = fam.index_of(v)
    if i == 1:
        raise ValueError("vertices of the first section have no predecessor")
    adj = _adjacency(a.graph)
    for k, s in enumerate(fam.sections[:i - 1], 1):
        if adj[v] & set(s.values.values()):
            return k
    raise ValueError(f"{v} is not adjacent to an earlier section")


# ---------------------------------------------------------------- stabilizers as groupoids

def stabilizer_groupoid(a, sigma: PartialSection) -> Tuple[Groupoid, Dict[str, object]]:
    """``Stab(sigma)`` with morphism ids ``acting.label(g)``; also returns ``id -> element``."""
    G = a.acting
    els = stabilizer_elements(a, sigma)
    ids = {G.label(g): g for g in els}
    units = [G.label(G.unit(x)) for x in sigma.values]
    for u, x in zip(units, sigma.values):
        ids.setdefault(u, G.unit(x))
    src = {k: G.label(G.unit(G.src(g))) for k, g in ids.items()}
    rng = {k: G.label(G.unit(G.rng(g))) for k, g in ids.items()}
    inv, comp = {}, []
    for k, g in ids.items():
        ki = G.label(G.inv(g))
        if ki not in ids:
            raise ActionError(f"stabilizer not closed under inverses within the window ({k}); enlarge the word radius")
        inv[k] = ki
    for k1, g1 in ids.items():
        for k2, g2 in ids.items():
            if src[k1] == rng[k2]:
                k3 = G.label(G.mul(g1, g2))
                if k3 not in ids:
                    raise ActionError(f"stabilizer not closed within the window ({k1}*{k2}); enlarge the word radius")
                comp.append((k1, k2, k3))
    return Groupoid.build(units, list(ids), src, rng, inv, comp), ids


# ---------------------------------------------------------------- trees of representatives

@dataclass
class TreeOfRepresentatives:
    family: SectionFamily
    tree: SerreGraph
    parent: Dict[str, Tuple[str, str]]        # child vertex -> (parent vertex, tree edge)
    vertex_sections: Dict[str, PartialSection]
    edge_sections: Dict[str, PartialSection]  # positive tree edges
    stages: List[SerreGraph]
    notes: List[str] = field(default_factory=list)

    @property
    def representation(self) -> Representation:
        return Representation(self.tree, {v: dict(s.values) for v, s in self.vertex_sections.items()},
                              {e: dict(s.values) for e, s in self.edge_sections.items()})


def _unique_edge(g: SerreGraph, out_edges: Dict[str, List[str]], o, t) -> List[str]:
    return [e for e in out_edges.get(o, []) if g.terminus[e] == t]


def build_tree_of_representatives(a, fam: Optional[SectionFamily] = None) -> TreeOfRepresentatives:
    fam = fam or build_section_family(a)
    g = a.graph
    out_edges: Dict[str, List[str]] = {}
    for e in g.edges:
        out_edges.setdefault(g.origin[e], []).append(e)
    names = [f"v{i}" for i in range(1, len(fam.sections) + 1)]
    vsec = dict(zip(names, fam.sections))
    parent, recs, stages, esec, notes = {}, [], [], {}, []
    stages.append(SerreGraph.build(names[:1], []))
    for k in range(2, len(names) + 1):
        img = fam.sections[k - 1].values.values()
        m = min(adjacency_index(a, fam, v) for v in img)
        p, c = names[m - 1], names[k - 1]
        e = f"e{k}"
        parent[c] = (p, e)
        recs += [(e, e + "bar", p, c), (e + "bar", e, c, p)]
        stages.append(SerreGraph.build(names[:k], recs))
        sp, sc = vsec[p].values, vsec[c].values
        vals = {}
        for x in sp:
            if x not in sc:
                continue
            cand = _unique_edge(g, out_edges, sp[x], sc[x])
            if len(cand) == 1:
                vals[x] = cand[0]
            elif not cand:
                notes.append(f"{e}: no edge joins the representatives over {x}; dropped from the domain")
            else:
                notes.append(f"{e}: several edges join the representatives over {x}; took the least")
                vals[x] = min(cand, key=a.carrier_key)
        esec[e] = PartialSection(vals, "edge")
    tree = stages[-1]
    return TreeOfRepresentatives(fam, tree, parent, vsec, esec, stages, notes)


# ---------------------------------------------------------------- desingularization

@dataclass
class Desingularization:
    gog: GraphOfGroupoids
    tree_of_reps: TreeOfRepresentatives
    edge_sections: Dict[str, PartialSection]      # Upsilon_+ edges
    conjugators: Dict[str, Dict[str, object]]     # Upsilon_+ edge -> {unit: g}
    elements: Dict[str, object]                   # groupoid morphism id -> acting element
    notes: List[str] = field(default_factory=list)

    @property
    def gamma(self) -> SerreGraph:
        return self.gog.base

    @property
    def tree(self) -> SerreGraph:
        return self.tree_of_reps.tree

    @property
    def vertex_sections(self) -> Dict[str, PartialSection]:
        return self.tree_of_reps.vertex_sections

    def upsilon_plus(self) -> List[str]:
        return sorted(self.edge_sections)

    def section_of(self, e: str) -> Tuple[PartialSection, bool]:
        """Section attached to the absolute edge of ``e`` and whether ``e`` is the bar side."""
        if e in self.edge_sections:
            return self.edge_sections[e], False
        if e in self.tree_of_reps.edge_sections:
            return self.tree_of_reps.edge_sections[e], False
        b = self.gamma.bar[e]
        s, _ = self.section_of(b)
        return s, True


def _edge_cells(a, tor: TreeOfRepresentatives, S: Set[str]) -> Dict[Tuple[str, str], List[str]]:
    g = a.graph
    uf = tor.family.uf or orbit_classes(a, "vertex")
    owner = {}
    for v, s in tor.vertex_sections.items():
        for y in saturation(a, s.values.values(), "vertex", uf):
            owner[y] = v
    img = {x: v for v, s in tor.vertex_sections.items() for x in s.values.values()}
    cells: Dict[Tuple[str, str], List[str]] = {}
    for e in g.edges:
        if e in S:
            continue
        o, t = g.origin[e], g.terminus[e]
        if o in img and t in owner:
            cells.setdefault((img[o], owner[t]), []).append(e)
    return cells


def _choose_conjugator(a, x, target, image: Set, used: Set):
    G = a.acting
    cands = [h for h in a.elements if G.src(h) == x and a.act0(h, target) in image]
    if not cands:
        return None
    cands.sort(key=lambda h: (G.rng(h) in used, G.key(h)))
    return cands[0]


def build_desingularization(a) -> Desingularization:
    tor = build_tree_of_representatives(a)
    G = a.acting
    g = a.graph
    notes = list(tor.family.notes) + list(tor.notes)
    euf = orbit_classes(a, "edge")
    S: Set[str] = set()
    for e, s in tor.edge_sections.items():
        S |= saturation(a, s.values.values(), "edge", euf)
        S |= saturation(a, [g.bar[f] for f in s.values.values()], "edge", euf)
    cells = _edge_cells(a, tor, S)
    removed: Set[str] = set(S)
    ups: Dict[str, Tuple[str, str, PartialSection]] = {}
    counter: Dict[Tuple[str, str], int] = {}
    for (v, w) in sorted(cells):
        while True:
            remaining = [e for e in cells[(v, w)] if e not in removed]
            if not remaining:
                break
            picks: Dict = {}
            blocked: Set[str] = set()
            for x, es in sorted(_fibers(remaining, a.phi_edge).items(), key=lambda kv: str(kv[0])):
                for e in sorted(es, key=a.carrier_key):
                    if e not in blocked:
                        picks[x] = e
                        blocked |= saturation(a, [g.bar[e]], "edge", euf)
                        break
            if not picks:
                notes.append(f"cell ({v}, {w}): remaining edges are bars of chosen ones")
                break
            counter[(v, w)] = counter.get((v, w), 0) + 1
            name = f"f{counter[(v, w)]}_{v}_{w}"
            sec = PartialSection(picks, "edge")
            ups[name] = (v, w, sec)
            removed |= saturation(a, picks.values(), "edge", euf)
            removed |= saturation(a, [g.bar[e] for e in picks.values()], "edge", euf)
    leftover = [e for e in g.edges if e not in removed]
    if leftover:
        notes.append(f"{len(leftover)} edges lie in no cell (window truncation)")

    # base graph, groupoids and embeddings
    vgroups, elements = {}, {}
    for v, s in tor.vertex_sections.items():
        H, ids = stabilizer_groupoid(a, s)
        vgroups[v] = H
        elements.update(ids)
    recs, egroups, alpha = [], {}, {}
    for c, (p, e) in sorted(tor.parent.items()):
        H, ids = stabilizer_groupoid(a, tor.edge_sections[e])
        elements.update(ids)
        recs += [(e, e + "bar", p, c), (e + "bar", e, c, p)]
        egroups[e] = egroups[e + "bar"] = H
        alpha[e] = {m: m for m in H.morphisms}
        alpha[e + "bar"] = {m: m for m in H.morphisms}
        for side in (p, c):
            miss = set(H.morphisms) - set(vgroups[side].morphisms)
            if miss:
                notes.append(f"{e}: edge stabilizer not inside G_{side}: {sorted(miss)[:3]}")
    conj: Dict[str, Dict] = {}
    for name, (v, w, sec) in sorted(ups.items()):
        H, ids = stabilizer_groupoid(a, sec)
        elements.update(ids)
        recs += [(name, name + "bar", v, w), (name + "bar", name, w, v)]
        egroups[name] = egroups[name + "bar"] = H
        alpha[name + "bar"] = {m: m for m in H.morphisms}
        image = set(tor.vertex_sections[w].values.values())
        fam, used = {}, set()
        for x, eps in sec.values.items():
            h = _choose_conjugator(a, x, g.terminus[eps], image, used)
            if h is None:
                raise ActionError(f"no conjugator for {name} over {x} within the window")
            fam[x] = h
            used.add(G.rng(h))
        conj[name] = fam
        amap = {}
        Gw_ids = set(vgroups[w].morphisms)
        for m, gamma in ids.items():
            img = G.mul(G.mul(fam[G.rng(gamma)], gamma), G.inv(fam[G.src(gamma)]))
            lab = G.label(img)
            if lab not in Gw_ids:
                notes.append(f"{name}: conjugate of {m} falls outside G_{w} in the window")
            amap[m] = lab
            elements.setdefault(lab, img)
        alpha[name] = amap
    names = list(tor.vertex_sections)
    base = SerreGraph.build(names, recs)
    positive = frozenset(e for e in base.edges if not e.endswith("bar"))
    gog = GraphOfGroupoids(base, vgroups, egroups, alpha, "v1", Orientation(positive), tor.tree)
    werrs = [m for m in validate_gog(gog) if "not wide" in m]
    if werrs:
        notes.append("edge images are not wide: " + "; ".join(werrs[:3]))
    return Desingularization(gog, tor, {n: s for n, (_, _, s) in ups.items()}, conj, elements, notes)


@dataclass
class DesingReport:
    errors: Dict[str, List[str]]
    notes: List[str]

    @property
    def ok(self) -> bool:
        return not any(self.errors.values())

    def summary(self) -> str:
        lines = [f"{k}: {'ok' if not v else '; '.join(v[:3])}" for k, v in self.errors.items()]
        return "\n".join(lines)


def validate_desingularization(d: Desingularization, a) -> DesingReport:
    G = a.acting
    g = a.graph
    gamma = d.gamma
    errs: Dict[str, List[str]] = {k: [] for k in ("D1", "D2", "D3", "D4", "D5", "i", "ii", "iii", "iv")}
    if not is_connected(gamma):
        errs["D1"].append("base graph is not connected")
    errs["D1"] += validate_orientation(gamma, d.gog.orientation)
    errs["D2"] += [m for m in validate_gog(d.gog, relaxed=True)]
    T = d.tree
    if not is_tree(T) or set(T.vertices) != set(gamma.vertices):
        errs["D3"].append("T is not a maximal subtree")
    if d.gog.root not in T.vertices:
        errs["D3"].append("root is not a vertex of T")
    rep = d.tree_of_reps.representation
    if not check_tree_of_representatives(rep, a):
        errs["D4"].append("vertex images do not form a tree of representatives")
    errs["D4"] += rep.hom_errors(g)
    for e in d.upsilon_plus():
        if e not in d.conjugators:
            errs["D5"].append(f"{e} has no conjugator family")
    errs["D5"] += [f"{e}: {m}" for e, s in d.edge_sections.items() for m in section_errors(a, s)]
    # (i) root coverage
    root_units = set(d.vertex_sections[d.gog.root].values)
    all_units = {a.phi(v) for v in g.vertices}
    if root_units != all_units:
        errs["i"].append(f"root section misses units {sorted(map(str, all_units - root_units))}")
    # (ii) endpoints and conjugator translation
    for e, sec in d.edge_sections.items():
        o, t = gamma.origin[e], gamma.terminus[e]
        oimg = set(d.vertex_sections[o].values.values())
        timg = set(d.vertex_sections[t].values.values())
        for x, eps in sec.values.items():
            if g.origin[eps] not in oimg:
                errs["ii"].append(f"{e}: origin of {eps} not a representative of {o}")
            h = d.conjugators.get(e, {}).get(a.phi(g.terminus[eps]))
            if h is None:
                errs["ii"].append(f"{e}: missing conjugator over {x}")
            elif G.src(h) != a.phi(g.terminus[eps]):
                errs["ii"].append(f"{e}: conjugator over {x} has the wrong source")
            elif a.exact0(h, g.terminus[eps]) not in timg:
                errs["ii"].append(f"{e}: conjugator over {x} does not carry t({eps}) to a representative of {t}")
    # (iii) inclusion and conjugation shapes
    for e, fam in d.conjugators.items():
        eb = gamma.bar[e]
        if any(k != v for k, v in d.gog.alpha[eb].items()):
            errs["iii"].append(f"alpha_{eb} is not the inclusion")
        for m, lab in d.gog.alpha[e].items():
            gam = d.elements[m]
            hs, hr = fam.get(G.src(gam)), fam.get(G.rng(gam))
            if hs is None or hr is None:
                errs["iii"].append(f"alpha_{e}({m}) has no conjugator")
                continue
            if G.src(hr) != G.rng(gam) or G.src(hs) != G.src(gam):
                errs["iii"].append(f"alpha_{e}({m}): conjugators are not composable with it")
                continue
            want = G.label(G.mul(G.mul(hr, gam), G.inv(hs)))
            if want != lab:
                errs["iii"].append(f"alpha_{e}({m}) = {lab}, expected {want}")
        rep_h = check_hom(d.gog.hom(e)) if not errs["D2"] else None
        if rep_h is not None and not rep_h.is_injective:
            errs["iii"].append(f"alpha_{e} is not injective")
    for e in d.tree_of_reps.edge_sections:
        for side in (e, gamma.bar[e]):
            if any(k != v for k, v in d.gog.alpha[side].items()):
                errs["iii"].append(f"alpha_{side} is not the inclusion")
    # (iv) edge partition
    euf = orbit_classes(a, "edge")
    sats = []
    for e in gamma.edges:
        sec, is_bar = d.section_of(e)
        pts = [g.bar[f] for f in sec.values.values()] if is_bar else list(sec.values.values())
        sats.append((e, saturation(a, pts, "edge", euf)))
    seen: Dict[str, str] = {}
    for e, s in sats:
        for f in s:
            if f in seen:
                errs["iv"].append(f"edge {f} lies in the saturations of {seen[f]} and {e}")
                break
            seen[f] = e
    missing = [f for f in g.edges if f not in seen]
    if missing:
        errs["iv"].append(f"{len(missing)} edges are in no saturation, e.g. {missing[0]}")
    return DesingReport(errs, list(d.notes))
