"""Constructors for small groups, groupoids and finite groupoid actions on forests,
plus seeded random generators used by the property tests."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .graph import SerreGraph
from .groupoid import Groupoid


@dataclass(frozen=True)
class FiniteGroup:
    elements: Tuple[str, ...]
    identity: str
    mul_table: Dict[Tuple[str, str], str]

    def mul(self, a: str, b: str) -> str:
        return self.mul_table[(a, b)]

    def inv(self, a: str) -> str:
        for b in self.elements:
            if self.mul_table[(a, b)] == self.identity:
                return b
        raise ValueError(a)


def cyclic_group(m: int) -> FiniteGroup:
    els = tuple(str(i) for i in range(m))
    return FiniteGroup(els, "0", {(a, b): str((int(a) + int(b)) % m) for a in els for b in els})


def klein_group() -> FiniteGroup:
    els = ("00", "01", "10", "11")
    tab = {(a, b): f"{int(a[0]) ^ int(b[0])}{int(a[1]) ^ int(b[1])}" for a in els for b in els}
    return FiniteGroup(els, "00", tab)


def symmetric_group3() -> FiniteGroup:
    perms = list(itertools.permutations(range(3)))
    name = {p: "".join(map(str, p)) for p in perms}
    tab = {}
    for p in perms:
        for q in perms:
            tab[(name[p], name[q])] = name[tuple(p[q[i]] for i in range(3))]
    return FiniteGroup(tuple(sorted(name.values())), "012", tab)


def subgroups(A: FiniteGroup) -> List[FrozenSet[str]]:
    out = set()
    for a, b in itertools.combinations_with_replacement(A.elements, 2):
        S = {A.identity, a, b}
        changed = True
        while changed:
            changed = False
            for x, y in itertools.product(list(S), repeat=2):
                z = A.mul(x, y)
                if z not in S:
                    S.add(z)
                    changed = True
        out.add(frozenset(S))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def transitive_groupoid(units: Sequence[str], A: FiniteGroup, prefix: str = "g") -> Tuple[Groupoid, Dict]:
    """Pair groupoid on ``units`` times the group ``A``; returns the groupoid and the
    coordinate map ``id -> (j, i, a)`` of the morphism ``i -> j`` labelled ``a``."""
    coords, ids = {}, {}
    for j in units:
        for i in units:
            for a in A.elements:
                gid = j if (i == j and a == A.identity) else f"{prefix}{j}_{i}_{a}"
                coords[gid] = (j, i, a)
                ids[(j, i, a)] = gid
    src = {g: c[1] for g, c in coords.items()}
    rng = {g: c[0] for g, c in coords.items()}
    inv = {g: ids[(c[1], c[0], A.inv(c[2]))] for g, c in coords.items()}

    def mul(g, h):
        (k, j, a), (_, i, b) = coords[g], coords[h]
        return ids[(k, i, A.mul(a, b))]

    return Groupoid.from_mul(units, coords, src, rng, inv, mul), coords


def disjoint_union(parts: Sequence[Groupoid]) -> Groupoid:
    units, ms, s, r, i, comp = [], [], {}, {}, {}, []
    for G in parts:
        units += G.units
        ms += G.morphisms
        s.update(G.source)
        r.update(G.range)
        i.update(G.inverse)
        comp += [(a, b, c) for (a, b), c in G.table.items()]
    return Groupoid.build(units, ms, s, r, i, comp)


def unit_groupoid(units: Sequence[str]) -> Groupoid:
    return Groupoid.build(units, units, {}, {}, {}, [(x, x, x) for x in units])


GROUP_CHOICES = ("C1", "C2", "C3", "C4", "V4", "S3")


def named_group(name: str) -> FiniteGroup:
    if name == "V4":
        return klein_group()
    if name == "S3":
        return symmetric_group3()
    return cyclic_group(int(name[1:]))


def random_groupoid(rnd: random.Random, max_morphisms: int = 8) -> Groupoid:
    """Disjoint union of transitive pieces (pair groupoid x small group)."""
    parts, budget, k = [], max_morphisms, 0
    while budget >= 1:
        opts = [(n, gname) for n in (1, 2) for gname in GROUP_CHOICES
                if n * n * named_group(gname).elements.__len__() <= budget]
        if not opts or (parts and rnd.random() < 0.35):
            break
        n, gname = rnd.choice(opts)
        A = named_group(gname)
        units = [f"p{k}u{i}" for i in range(n)]
        G, _ = transitive_groupoid(units, A, prefix=f"p{k}m")
        parts.append(G)
        budget -= len(G.morphisms)
        k += 1
    return disjoint_union(parts)


# ---------------------------------------------------------------- random forests with actions

@dataclass
class TableAction:
    """Plain data for a finite groupoid action on a graph (before wrapping)."""
    groupoid: Groupoid
    graph: SerreGraph
    momentum: Dict[str, str]
    mu0: Dict[Tuple[str, str], str]
    mu1: Dict[Tuple[str, str], str]


def _random_group_tree(rnd: random.Random, A: FiniteGroup, n_orbits: int):
    """An A-tree: vertices ``(orbit, coset)``, each new orbit hung below an old one."""
    subs = subgroups(A)
    full = frozenset(A.elements)
    orbit_stab = [full]
    parent_orbit = [None]

    def cosets(K):
        seen, out = set(), []
        for b in A.elements:
            c = frozenset(A.mul(b, k) for k in K)
            if c not in seen:
                seen.add(c)
                out.append(c)
        return out

    for _ in range(n_orbits - 1):
        p = rnd.randrange(len(orbit_stab))
        Kp = orbit_stab[p]
        choices = [K for K in subs if K <= Kp]
        orbit_stab.append(rnd.choice(choices))
        parent_orbit.append(p)
    verts = []
    for o, K in enumerate(orbit_stab):
        for c in cosets(K):
            verts.append((o, c))
    edges = []
    for o, K in enumerate(orbit_stab):
        if parent_orbit[o] is None:
            continue
        Kp = orbit_stab[parent_orbit[o]]
        for c in cosets(K):
            b = min(c)
            pc = frozenset(A.mul(b, k) for k in Kp)
            edges.append(((o, c), (parent_orbit[o], pc)))

    def act_vertex(a, v):
        o, c = v
        return (o, frozenset(A.mul(a, x) for x in c))

    return verts, edges, act_vertex


def random_forest_action(rnd: random.Random, max_morphisms: int = 12, max_orbits: int = 4) -> TableAction:
    """Random finite groupoid action without inversion on a forest.

    Each transitive piece ``U x U x A`` acts on ``U x Y`` for a random A-tree ``Y``.
    Carrier ids are random labels so that the enumeration order is not aligned
    with the construction.
    """
    G = random_groupoid(rnd, max_morphisms)
    pieces: Dict[str, List[str]] = {}
    # recover transitive pieces from the unit prefixes
    for x in G.units:
        pieces.setdefault(x.split("u")[0], []).append(x)
    vertices, momentum, mu0, mu1 = [], {}, {}, {}
    edge_recs = []
    labels = iter(rnd.sample(range(10000), 10000))
    for pref, units in sorted(pieces.items()):
        # group of the piece read off the isotropy at the first unit
        x0 = units[0]
        iso = [g for g in G.morphisms if G.src(g) == x0 and G.rng(g) == x0]
        els = tuple(sorted(iso))
        A = FiniteGroup(els, x0, {(a, b): G.mul(a, b) for a in els for b in els})
        verts, edges, act = _random_group_tree(rnd, A, rnd.randint(1, max_orbits))
        # transport along fixed morphisms x0 -> x so that the fibers are identified
        base = {x: next(g for g in sorted(G.morphisms) if G.src(g) == x0 and G.rng(g) == x) for x in units}
        vid = {}
        for x in units:
            for v in verts:
                vid[(x, v)] = f"n{next(labels):04d}"
                momentum[vid[(x, v)]] = x
        eid = {}
        for x in units:
            for k, (a, b) in enumerate(edges):
                e1, e2 = f"f{next(labels):04d}", f"f{next(labels):04d}"
                eid[(x, a, b)] = e1
                eid[(x, b, a)] = e2
                edge_recs.append((e1, e2, vid[(x, a)], vid[(x, b)]))
                edge_recs.append((e2, e1, vid[(x, b)], vid[(x, a)]))
        vertices += list(vid.values())
        # g: x -> y acts as base_y^{-1} g base_x in A on the fiber coordinates
        for g in G.morphisms:
            x, y = G.src(g), G.rng(g)
            if x not in base:
                continue
            a = G.mul(G.mul(G.inv(base[y]), g), base[x])
            for v in verts:
                mu0[(g, vid[(x, v)])] = vid[(y, act(a, v))]
            for (p, q) in edges:
                for (s1, s2) in ((p, q), (q, p)):
                    mu1[(g, eid[(x, s1, s2)])] = eid[(y, act(a, s1), act(a, s2))]
    graph = SerreGraph.build(vertices, edge_recs)
    return TableAction(G, graph, momentum, mu0, mu1)
