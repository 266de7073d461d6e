"""Certify, on finite balls, that a desingularization recovers the action:
the comparison map psi from the fundamental groupoid of the desingularization to
the acting groupoid, and the psi-equivariant graph map Psi between the forests."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .desing import Desingularization, build_desingularization
from .forest import BassSerreForest, BSEdge, BSVertex
from .graph import bfs_distances
from .groupoid import find_isomorphism
from .words import Pi1, Pi1Element


class StructureError(ValueError):
    pass


@dataclass
class Psi:
    """psi on generators: vertex morphisms go to their acting elements, tree letters to
    units, a positive extra letter over ``y`` to its conjugator, the negative one to the inverse."""
    d: Desingularization
    pi1: Pi1
    acting: object

    def __post_init__(self):
        G, d = self.acting, self.d
        self._unit = {x: G.src(d.elements[x]) for v in d.gamma.vertices for x in d.gog.vertex_groupoid[v].units}
        self._cache: Dict[Pi1Element, object] = {}

    def unit_of(self, x: str):
        """Acting-groupoid unit for a unit id of a vertex groupoid."""
        return self._unit[x]

    def letter(self, l):
        G, d = self.acting, self.d
        if l[0] == "g":
            return d.elements[l[2]]
        e, y = l[1], l[2]
        if e in d.conjugators:
            return d.conjugators[e][self._unit[y]]
        b = d.gamma.bar[e]
        if b in d.conjugators:
            fam = d.conjugators[b]
            want = self._unit[y]
            for h in fam.values():
                if G.rng(h) == want:
                    return G.inv(h)
            raise StructureError(f"no conjugator of {b} lands on {y}")
        return G.unit(self._unit[y])

    def __call__(self, p: Pi1Element):
        got = self._cache.get(p)
        if got is None:
            G = self.acting
            got = None
            for l in p.key:
                h = self.letter(l)
                got = h if got is None else G.mul(got, h)
            self._cache[p] = got
        return got


def build_psi(d: Desingularization, acting) -> Psi:
    wide = [m for m in d.notes if "not wide" in m]
    if wide:
        raise StructureError("the desingularization violates the wide-image assumption: " + wide[0])
    return Psi(d, Pi1(d.gog), acting)


def relation_errors(psi: Psi) -> List[str]:
    """R1 (tree letters are units) and R2 (edge conjugation matches the embeddings)."""
    d, G, gog = psi.d, psi.acting, psi.d.gog
    errs = []
    tree = set(d.tree.edges)
    for e in d.gamma.edges:
        Ge = gog.edge_groupoid[e]
        eb = d.gamma.bar[e]
        if e in tree:
            for z in Ge.units:
                h = psi.letter(("e", e, gog.alpha[eb][z]))
                if not G.is_unit(h):
                    errs.append(f"R1: tree letter {e} over {z} is not a unit")
        for g in Ge.morphisms:
            try:
                left = G.mul(G.mul(psi.letter(("e", e, gog.alpha[eb][Ge.rng(g)])), d.elements[gog.alpha[eb][g]]),
                             G.inv(psi.letter(("e", e, gog.alpha[eb][Ge.src(g)]))))
            except Exception as exc:
                errs.append(f"R2 at ({e}, {g}): {exc}")
                continue
            if G.key(left) != G.key(d.elements[gog.alpha[e][g]]):
                errs.append(f"R2 fails at ({e}, {g})")
    return errs


def strong_witness(psi_map: Callable, P, G, elements) -> Optional[tuple]:
    """First pair with composable images but non-composable arguments."""
    imgs = [(p, psi_map(p)) for p in elements]
    for p, a in imgs:
        for q, b in imgs:
            if G.composable(a, b) and not P.composable(p, q):
                return (p, q)
    return None


def check_psi_strong(psi: Psi, L: int) -> Optional[tuple]:
    return strong_witness(psi, psi.pi1, psi.acting, psi.pi1.all_balls(L))


# ---------------------------------------------------------------- Psi

class PsiGraph:
    def __init__(self, psi: Psi, action):
        self.psi = psi
        self.a = action
        self.X = BassSerreForest(psi.pi1)
        d = psi.d
        G = psi.acting
        self._hat: Dict[str, Dict] = {}
        for e, sec in d.tree_of_reps.edge_sections.items():
            self._hat[e] = dict(sec.values)
        for f, sec in d.edge_sections.items():
            g = action.graph
            tab = {}
            for y, eps in sec.values.items():
                h = d.conjugators[f][y]
                tab[G.rng(h)] = action.exact1(h, eps)
            self._hat[f] = tab

    def _unit_at(self, v: str, p: Pi1Element):
        P = self.psi.pi1
        return self.psi.unit_of(P.tau_inv[(v, p.src)])

    def vertex(self, V: BSVertex):
        x = self._unit_at(V.tag, V.rep)
        base = self.psi.d.vertex_sections[V.tag].values[x]
        return self.a.exact0(self.psi(V.rep), base)

    def edge(self, E: BSEdge):
        gamma = self.psi.d.gamma
        orient = self.psi.d.gog.orientation
        ab = orient.absolute(gamma, E.tag)
        x = self._unit_at(gamma.terminus[ab], E.rep)
        f = self.a.exact1(self.psi(E.rep), self._hat[ab][x])
        return f if ab == E.tag else self.a.exact_bar(f)


# ---------------------------------------------------------------- certificate

@dataclass
class Clause:
    name: str
    passed: bool
    witness: Optional[str] = None
    seconds: float = 0.0

    def as_dict(self):
        return {"pass": self.passed, "witness": self.witness, "seconds": round(self.seconds, 4)}


def _clause(name, fn) -> Clause:
    t = time.perf_counter()
    try:
        w = fn()
    except Exception as exc:  # a crash is a failed clause with its message as witness
        w = f"error: {exc}"
    return Clause(name, w is None, None if w is None else str(w), time.perf_counter() - t)


def check_structure_theorem(d: Desingularization, action, L: int, r: int, max_word_radius: Optional[int] = None) -> dict:
    G = action.acting
    clauses: List[Clause] = []
    try:
        psi = build_psi(d, G)
    except Exception as exc:
        return {"pass": False, "radii": {"word": L, "ball": r}, "clauses": {"psi": {"pass": False, "witness": str(exc)}}}
    P = psi.pi1
    ball = P.all_balls(L)
    clauses.append(_clause("relations", lambda: (relation_errors(psi) or [None])[0]))
    clauses.append(_clause("strong", lambda: check_psi_strong(psi, L)))

    def kernel():
        for p in ball:
            if G.is_unit(psi(p)) and not P.is_unit(p):
                return f"{p} maps to a unit"
        return None

    def injective():
        seen = {}
        for p in ball:
            k = G.key(psi(p))
            if k in seen:
                return f"{seen[k]} and {p} have the same image"
            seen[k] = p
        return None

    surj_radius = {"value": L}

    def surjective():
        want = {G.key(g) for g in action.elements}
        top = max_word_radius if max_word_radius is not None else 3 * L + 2
        R = L
        while True:
            got = {G.key(psi(p)) for p in P.all_balls(R)}
            missing = want - got
            if not missing or R >= top:
                surj_radius["value"] = R
                return None if not missing else f"{len(missing)} elements not reached, e.g. {sorted(map(str, missing))[0]}"
            R += 1

    clauses.append(_clause("kernel_is_units", kernel))
    clauses.append(_clause("injective", injective))
    clauses.append(_clause("surjective", surjective))

    PsiG = PsiGraph(psi, action)
    X = PsiG.X
    centers = [X.root_vertex(x) for x in P.units]
    Xball = X.union_ball(centers, r)
    F = action.graph
    vimg = {k: PsiG.vertex(V) for k, V in Xball.vertices.items()}
    eimg = {k: PsiG.edge(E) for k, E in Xball.edges.items()}

    def graph_hom():
        for k, E in Xball.edges.items():
            f = eimg[k]
            if f not in F.origin:
                return f"Psi({k}) = {f} leaves the target window"
            if F.origin[f] != vimg[X.label(X.bs_origin(E))] or F.terminus[f] != vimg[X.label(X.bs_terminus(E))]:
                return f"Psi does not commute with o/t at {k}"
            if eimg[X.label(X.bs_bar(E))] != F.bar[f]:
                return f"Psi does not commute with bar at {k}"
        return None

    def bijective():
        if len(set(vimg.values())) != len(vimg):
            return "Psi0 is not injective on the ball"
        if len(set(eimg.values())) != len(eimg):
            return "Psi1 is not injective on the ball"
        target = set()
        for c in centers:
            cimg = PsiG.vertex(c)
            d0 = bfs_distances(F, cimg)
            target |= {v for v, k in d0.items() if k <= r}
        got = set(vimg.values())
        if got != target:
            extra = sorted(map(str, got - target))[:1]
            miss = sorted(map(str, target - got))[:1]
            return f"image differs from the target ball (extra {extra}, missing {miss})"
        return None

    def stars():
        for k, V in Xball.vertices.items():
            if Xball.distance[k] >= r:
                continue
            st = X.star(V)
            imgs = [PsiG.edge(E) for E in st]
            tgt = [e for e in F.edges if F.terminus[e] == vimg[k]]
            if sorted(imgs) != sorted(tgt):
                return f"star of {k} does not map onto the star of {vimg[k]} ({len(set(imgs) & set(tgt))} of {len(tgt)} edges hit)"
            expected = 0
            for e in d.gamma.edges:
                if d.gamma.terminus[e] != V.tag:
                    continue
                ab = d.gog.orientation.absolute(d.gamma, e)
                Gv = d.gog.vertex_groupoid[V.tag]
                H = set(d.gog.image(e))
                y = P.tau_inv[(V.tag, V.rep.src)]
                members = [m for m in Gv.morphisms if Gv.rng(m) == y]
                cos = {frozenset(Gv.mul(m, h) for h in H if Gv.composable(m, h)) for m in members}
                expected += len(cos)
            if expected != len(st):
                return f"star of {k} has {len(st)} edges, coset count {expected}"
        return None

    def equivariance():
        for p in ball:
            hp = psi(p)
            for k, V in Xball.vertices.items():
                if V.rep.rng != p.src:
                    continue
                W = X.bs_act(p, V)
                if action.exact0(hp, vimg[k]) != PsiG.vertex(W):
                    return f"vertex {k} under {p}"
            for k, E in Xball.edges.items():
                if E.rep.rng != p.src:
                    continue
                if action.exact1(hp, eimg[k]) != PsiG.edge(X.bs_act(p, E)):
                    return f"edge {k} under {p}"
        return None

    clauses.append(_clause("Psi_graph_hom", graph_hom))
    clauses.append(_clause("Psi_ball_bijective", bijective))
    clauses.append(_clause("star_bijections", stars))
    clauses.append(_clause("equivariance", equivariance))
    return {
        "pass": all(c.passed for c in clauses),
        "radii": {"word": L, "ball": r, "surjectivity": surj_radius["value"]},
        "clauses": {c.name: c.as_dict() for c in clauses},
        "notes": list(d.notes),
    }


def recovered_isomorphisms(d: Desingularization, originals: Dict[str, object]) -> Dict[str, bool]:
    """For each named original groupoid, whether some vertex or edge groupoid of ``d`` is isomorphic to it."""
    pool = list(d.gog.vertex_groupoid.values()) + list(d.gog.edge_groupoid.values())
    return {n: any(find_isomorphism(H, K) is not None for K in pool) for n, H in originals.items()}
