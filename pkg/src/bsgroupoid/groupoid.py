"""Finite groupoids stored by full composition table.

Units are morphisms.  ``mul(g, h)`` means "g after h" and is defined exactly
when ``src(g) == rng(h)``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple


class GroupoidError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Groupoid:
    units: Tuple[str, ...]
    morphisms: Tuple[str, ...]
    source: Dict[str, str]
    range: Dict[str, str]
    inverse: Dict[str, str]
    table: Dict[Tuple[str, str], str]

    @classmethod
    def build(cls, units, morphisms, src, rng, inv, comp) -> "Groupoid":
        """``morphisms`` may omit the units; ``comp`` is an iterable of ``(g1, g2, g1*g2)``."""
        units = tuple(sorted(set(units)))
        ms = set(morphisms) | set(units)
        s = dict(src)
        r = dict(rng)
        i = dict(inv)
        for x in units:
            s.setdefault(x, x)
            r.setdefault(x, x)
            i.setdefault(x, x)
        table = {(a, b): c for a, b, c in comp}
        return cls(units, tuple(sorted(ms)), s, r, i, table)

    @classmethod
    def from_mul(cls, units, morphisms, src, rng, inv, mul: Callable[[str, str], str]) -> "Groupoid":
        units = tuple(sorted(set(units)))
        ms = sorted(set(morphisms) | set(units))
        s, r, i = dict(src), dict(rng), dict(inv)
        for x in units:
            s.setdefault(x, x)
            r.setdefault(x, x)
            i.setdefault(x, x)
        table = {}
        for a in ms:
            for b in ms:
                if s[a] == r[b]:
                    table[(a, b)] = mul(a, b)
        return cls(units, tuple(ms), s, r, i, table)

    # the acting-groupoid protocol shared with the fundamental groupoid
    def src(self, g: str) -> str:
        return self.source[g]

    def rng(self, g: str) -> str:
        return self.range[g]

    def inv(self, g: str) -> str:
        return self.inverse[g]

    def is_unit(self, g: str) -> bool:
        return g in self._unit_set

    @property
    def _unit_set(self) -> FrozenSet[str]:
        s = self.__dict__.get("_us")
        if s is None:
            s = frozenset(self.units)
            object.__setattr__(self, "_us", s)
        return s

    def unit(self, x: str) -> str:
        return x

    def mul(self, g: str, h: str) -> str:
        try:
            return self.table[(g, h)]
        except KeyError:
            raise GroupoidError(f"({g}, {h}) is not composable") from None

    def composable(self, g: str, h: str) -> bool:
        return self.source[g] == self.range[h]

    def key(self, g: str):
        return g

    def label(self, g: str) -> str:
        return g

    def elements(self) -> List[str]:
        return list(self.morphisms)

    def __len__(self):
        return len(self.morphisms)

    def __repr__(self):
        return f"Groupoid(units={list(self.units)}, morphisms={list(self.morphisms)})"

    def to_dict(self) -> dict:
        return {
            "units": list(self.units),
            "morphisms": [{"id": g, "src": self.source[g], "rng": self.range[g], "inv": self.inverse[g]}
                          for g in self.morphisms if g not in self._unit_set],
            "comp": [[a, b, c] for (a, b), c in sorted(self.table.items())],
        }


def validate_groupoid(G: Groupoid) -> List[str]:
    errs: List[str] = []
    ms = set(G.morphisms)
    us = set(G.units)
    if not us:
        errs.append("units must be nonempty")
    if not us <= ms:
        errs.append("units must be morphisms")
    for g in G.morphisms:
        for name, mp in (("src", G.source), ("rng", G.range), ("inv", G.inverse)):
            if g not in mp:
                errs.append(f"{name}({g}) undefined")
            elif name != "inv" and mp[g] not in us:
                errs.append(f"{name}({g}) = {mp[g]} is not a unit")
            elif name == "inv" and mp[g] not in ms:
                errs.append(f"inv({g}) = {mp[g]} is not a morphism")
    if errs:
        return errs
    for x in G.units:
        if G.source[x] != x or G.range[x] != x:
            errs.append(f"unit {x}: src/rng must be itself")
    for (a, b), c in G.table.items():
        if a not in ms or b not in ms or c not in ms:
            errs.append(f"comp({a}, {b}) = {c} mentions an unknown morphism")
            continue
        if G.source[a] != G.range[b]:
            errs.append(f"comp({a}, {b}) defined though src({a}) != rng({b})")
    if errs:
        return errs
    for a in G.morphisms:
        for b in G.morphisms:
            if G.source[a] == G.range[b] and (a, b) not in G.table:
                errs.append(f"comp({a}, {b}) missing although composable")
    if errs:
        return errs
    for (a, b), c in G.table.items():
        if G.source[c] != G.source[b] or G.range[c] != G.range[a]:
            errs.append(f"comp({a}, {b}) = {c} has wrong src/rng")
    for g in G.morphisms:
        if G.table[(G.range[g], g)] != g or G.table[(g, G.source[g])] != g:
            errs.append(f"units do not act neutrally on {g}")
        gi = G.inverse[g]
        if G.source[gi] != G.range[g] or G.range[gi] != G.source[g]:
            errs.append(f"inv({g}) has wrong src/rng")
        elif G.table[(g, gi)] != G.range[g] or G.table[(gi, g)] != G.source[g]:
            errs.append(f"inv({g}) is not an inverse")
    if errs:
        return errs
    for a in G.morphisms:
        for b in G.morphisms:
            if G.source[a] != G.range[b]:
                continue
            ab = G.table[(a, b)]
            for c in G.morphisms:
                if G.source[b] != G.range[c]:
                    continue
                if G.table[(ab, c)] != G.table[(a, G.table[(b, c)])]:
                    errs.append(f"associativity fails on ({a}, {b}, {c})")
    return errs


# ---------------------------------------------------------------- homomorphisms

@dataclass(frozen=True, eq=False)
class GroupoidHom:
    source: Groupoid
    target: Groupoid
    map: Dict[str, str]

    def __call__(self, g: str) -> str:
        return self.map[g]


@dataclass
class HomReport:
    is_hom: bool
    is_strong: bool
    kernel: List[str]
    is_injective: bool
    injective_by_kernel: bool
    errors: List[str] = field(default_factory=list)


def check_hom(h: GroupoidHom) -> HomReport:
    S, T, m = h.source, h.target, h.map
    errs = []
    for g in S.morphisms:
        if g not in m:
            raise GroupoidError(f"hom undefined on {g}")
        if m[g] not in set(T.morphisms):
            raise GroupoidError(f"image {m[g]} of {g} is not in the target")
    for (a, b), c in S.table.items():
        fa, fb = m[a], m[b]
        if not T.composable(fa, fb):
            errs.append(f"({a}, {b}) composable but images are not")
        elif T.mul(fa, fb) != m[c]:
            errs.append(f"phi({a}{b}) != phi({a})phi({b})")
    strong = True
    for a in S.morphisms:
        for b in S.morphisms:
            if T.composable(m[a], m[b]) and not S.composable(a, b):
                strong = False
                break
        if not strong:
            break
    kernel = sorted(g for g in S.morphisms if T.is_unit(m[g]))
    injective = len(set(m[g] for g in S.morphisms)) == len(S.morphisms)
    return HomReport(not errs, strong, kernel, injective, set(kernel) == set(S.units), errs)


def strong_witness(h: GroupoidHom) -> Optional[Tuple[str, str]]:
    S, T, m = h.source, h.target, h.map
    for a in S.morphisms:
        for b in S.morphisms:
            if T.composable(m[a], m[b]) and not S.composable(a, b):
                return (a, b)
    return None


# ---------------------------------------------------------------- subgroupoids

@dataclass(frozen=True, eq=False)
class Subgroupoid:
    parent: Groupoid
    morphism_subset: FrozenSet[str]

    def units(self) -> List[str]:
        return sorted(g for g in self.morphism_subset if self.parent.is_unit(g))

    def is_wide(self) -> bool:
        return set(self.parent.units) <= self.morphism_subset

    def closure_errors(self) -> List[str]:
        P, M = self.parent, self.morphism_subset
        errs = []
        for g in sorted(M):
            if P.inv(g) not in M:
                errs.append(f"not closed under inverse at {g}")
            for u in (P.src(g), P.rng(g)):
                if u not in M:
                    errs.append(f"unit {u} of {g} missing")
        for a in M:
            for b in M:
                if P.composable(a, b) and P.mul(a, b) not in M:
                    errs.append(f"not closed under composition at ({a}, {b})")
        return errs

    def as_groupoid(self) -> Groupoid:
        P, M = self.parent, sorted(self.morphism_subset)
        units = [g for g in M if P.is_unit(g)]
        comp = [(a, b, P.mul(a, b)) for a in M for b in M if P.composable(a, b)]
        return Groupoid.build(units, M, {g: P.src(g) for g in M}, {g: P.rng(g) for g in M},
                              {g: P.inv(g) for g in M}, comp)


def generated_subgroupoid(G: Groupoid, gens: Iterable[str], with_units: Iterable[str] = ()) -> FrozenSet[str]:
    """Closure of ``gens`` under inverse and composition (plus the given units)."""
    out = set(with_units)
    for g in gens:
        out.update((g, G.inv(g), G.src(g), G.rng(g)))
    frontier = list(out)
    while frontier:
        new = []
        cur = list(out)
        for a in frontier:
            for b in cur:
                for x, y in ((a, b), (b, a)):
                    if G.composable(x, y):
                        c = G.mul(x, y)
                        if c not in out:
                            out.add(c)
                            new.append(c)
        frontier = new
    return frozenset(out)


# ---------------------------------------------------------------- cosets and transversals

@dataclass(frozen=True)
class Coset:
    representative: str
    members: FrozenSet[str]


def _coset_members(G: Groupoid, H: FrozenSet[str], g: str) -> FrozenSet[str]:
    return frozenset(G.mul(g, h) for h in H if G.src(g) == G.rng(h))


def coset_of(G: Groupoid, H: Subgroupoid, g: str) -> Coset:
    if not H.is_wide():
        raise GroupoidError("coset_of requires a wide subgroupoid")
    mem = _coset_members(G, H.morphism_subset, g)
    return Coset(min(mem), mem)


def all_cosets(G: Groupoid, H: Subgroupoid) -> List[Coset]:
    seen, out = set(), []
    for g in G.morphisms:
        if g in seen:
            continue
        c = coset_of(G, H, g)
        seen |= c.members
        out.append(c)
    return out


class Transversal:
    """Left transversal of a wide subgroupoid ``H = im(alpha)``: units forced in,
    otherwise the smallest id of each coset.  ``decompose(g)`` returns ``(tau, h)``
    with ``g = tau * alpha(h)``."""

    def __init__(self, G: Groupoid, H: Iterable[str], alpha: Optional[Mapping[str, str]] = None):
        self.G = G
        self.H = frozenset(H)
        if alpha is None:
            alpha = {h: h for h in self.H}
        self.alpha = dict(alpha)
        self.alpha_inv = {v: k for k, v in self.alpha.items()}
        self._rep: Dict[str, str] = {}
        for g in G.morphisms:
            if g in self._rep:
                continue
            mem = _coset_members(G, self.H, g)
            units = [m for m in mem if G.is_unit(m)]
            rep = units[0] if units else min(mem)
            for m in mem:
                self._rep[m] = rep
        self.representatives = frozenset(self._rep.values())

    def __contains__(self, g: str) -> bool:
        return g in self.representatives

    def rep(self, g: str) -> str:
        return self._rep[g]

    def decompose(self, g: str) -> Tuple[str, str]:
        tau = self._rep[g]
        hh = self.G.mul(self.G.inv(tau), g)
        return tau, self.alpha_inv[hh]


def left_transversal(G: Groupoid, H: Subgroupoid, alpha: Optional[Mapping[str, str]] = None) -> Transversal:
    if not H.is_wide():
        raise GroupoidError("left_transversal requires a wide subgroupoid")
    return Transversal(G, H.morphism_subset, alpha)


# ---------------------------------------------------------------- conjugation

@dataclass(frozen=True, eq=False)
class ConjugationFamily:
    ambient: Groupoid
    domain: Subgroupoid
    elements: Dict[str, str]

    def errors(self) -> List[str]:
        errs = []
        for x in self.domain.units():
            g = self.elements.get(x)
            if g is None:
                errs.append(f"no family element for unit {x}")
            elif self.ambient.src(g) != x:
                errs.append(f"family element {g} at {x} has src {self.ambient.src(g)}")
        return errs

    def object_map_injective(self) -> bool:
        rs = [self.ambient.rng(self.elements[x]) for x in self.domain.units()]
        return len(set(rs)) == len(rs)


def conjugate(G, fam: Mapping, k):
    """``g_{r(k)} k g_{s(k)}^{-1}`` for any groupoid-like ``G``."""
    a = fam[G.rng(k)]
    b = fam[G.src(k)]
    return G.mul(G.mul(a, k), G.inv(b))


def conjugation_map(fam: ConjugationFamily) -> GroupoidHom:
    errs = fam.errors()
    if errs:
        raise GroupoidError("; ".join(errs))
    G = fam.ambient
    K = fam.domain.as_groupoid()
    image = {k: conjugate(G, fam.elements, k) for k in K.morphisms}
    return GroupoidHom(K, G, image)


# ---------------------------------------------------------------- isomorphism

def find_isomorphism(A: Groupoid, B: Groupoid) -> Optional[Dict[str, str]]:
    """Backtracking search for a groupoid isomorphism ``A -> B`` (desk-scale sizes)."""
    if len(A.units) != len(B.units) or len(A.morphisms) != len(B.morphisms):
        return None

    def profile(G, x):
        return sorted((sum(1 for g in G.morphisms if G.src(g) == x and G.rng(g) == y)) for y in G.units)

    for ua in itertools.permutations(B.units):
        umap = dict(zip(A.units, ua))
        if any(profile(A, x) != profile(B, umap[x]) for x in A.units):
            continue
        hom = dict(umap)
        nonunits = [g for g in A.morphisms if not A.is_unit(g)]

        def ok_partial(h):
            for (a, b), c in A.table.items():
                if a in h and b in h and c in h and B.mul(h[a], h[b]) != h[c]:
                    return False
            return True

        def extend(i):
            if i == len(nonunits):
                return dict(hom)
            g = nonunits[i]
            used = set(hom.values())
            for cand in B.morphisms:
                if cand in used or B.is_unit(cand):
                    continue
                if B.src(cand) != umap[A.src(g)] or B.rng(cand) != umap[A.rng(g)]:
                    continue
                hom[g] = cand
                if ok_partial(hom):
                    res = extend(i + 1)
                    if res is not None:
                        return res
                del hom[g]
            return None

        res = extend(0)
        if res is not None:
            return res
    return None


def orbit_components(units: Sequence[str], G: Groupoid) -> List[List[str]]:
    """Units grouped by the transitivity relation of ``G``."""
    adj: Dict[str, set] = {x: set() for x in units}
    for g in G.morphisms:
        adj[G.src(g)].add(G.rng(g))
        adj[G.rng(g)].add(G.src(g))
    seen, out = set(), []
    for x in units:
        if x in seen:
            continue
        comp, q = [], deque([x])
        seen.add(x)
        while q:
            u = q.popleft()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    q.append(w)
        out.append(sorted(comp))
    return out
