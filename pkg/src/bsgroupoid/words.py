"""Graph-of-groupoids words, the free-groupoid normal form and the fundamental groupoid.

Letters are tuples: ``("g", v, m)`` is the morphism ``m`` of the vertex
groupoid ``G_v`` and ``("e", e, x)`` is the edge letter ``(phi_e(x), x)`` with
source unit ``x`` of ``G_{o(e)}``.  A graph-of-groupoids word is a strictly
alternating tuple ``g1 e1 g2 ... en g(n+1)`` read right to left, like composition.

Equality in the fundamental groupoid is decided by conjugating a word into the
root (every vertex or edge letter is flanked by the tree paths from the root
to its endpoints) and taking the unique reduced word of the free groupoid; the
displayed canonical spelling deletes tree-edge letters and units from it.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .gog import GraphOfGroupoids, edge_iso, tau_map, underlying_tpi, validate_gog, unit_display_names
from .graph import tree_path
from .groupoid import Transversal

Letter = Tuple[str, str, str]
Word = Tuple[Letter, ...]


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class Pi1Element:
    """An element of the fundamental groupoid, keyed by its reduced root word."""
    key: Word
    tokens: Tuple[str, ...] = field(compare=False)
    src: str = field(compare=False)
    rng: str = field(compare=False)
    text: str = field(compare=False)

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"Pi1Element({self.text!r})"

    def __lt__(self, other):
        return (len(self.tokens), self.tokens, self.src) < (len(other.tokens), other.tokens, other.src)


class Pi1:
    """Fundamental groupoid of a graph of groupoids (wide edge images required)."""

    def __init__(self, gog: GraphOfGroupoids):
        errs = validate_gog(gog)
        if errs:
            raise WordError("invalid graph of groupoids: " + "; ".join(errs[:3]))
        self.gog = gog
        self.graph = gog.base
        self.tree = gog.spanning_tree()
        self.root = gog.root
        self.orientation = gog.orientation
        self.tree_edges = frozenset(self.tree.edges)
        self.vg = gog.vertex_groupoid
        self.alpha = gog.alpha
        self.H = {e: gog.image(e) for e in self.graph.edges}
        self.phi = {e: edge_iso(gog, e) for e in self.graph.edges}
        self.trans = {e: Transversal(self.vg[self.graph.terminus[e]], self.H[e], self.alpha[e])
                      for e in self.graph.edges}
        self.edge_unit = {e: self.gog.edge_groupoid[e] for e in self.graph.edges}
        tpi = underlying_tpi(gog, self.tree)
        self.tau = tau_map(tpi, self.root)
        self.tau_inv = {(v, x): y for (v, y), x in self.tau.items()}
        self.units = tuple(self.vg[self.root].units)
        self.unit_name = unit_display_names(gog)
        self.name_unit = {n: x for x, n in self.unit_name.items()}
        owners: Dict[str, List[str]] = {}
        for v in self.graph.vertices:
            for m in self.vg[v].morphisms:
                owners.setdefault(m, []).append(v)
        self.owners = owners
        self._paths = self._root_paths()
        self._theta_cache: Dict[Letter, Word] = {}

    # ------------------------------------------------------------ letters
    def letter_src(self, l: Letter) -> Tuple[str, str]:
        if l[0] == "g":
            return l[1], self.vg[l[1]].src(l[2])
        return self.graph.origin[l[1]], l[2]

    def letter_rng(self, l: Letter) -> Tuple[str, str]:
        if l[0] == "g":
            return l[1], self.vg[l[1]].rng(l[2])
        return self.graph.terminus[l[1]], self.phi[l[1]][l[2]]

    def letter_inv(self, l: Letter) -> Letter:
        if l[0] == "g":
            return ("g", l[1], self.vg[l[1]].inv(l[2]))
        return ("e", self.graph.bar[l[1]], self.phi[l[1]][l[2]])

    def tau_of(self, vu: Tuple[str, str]) -> str:
        return self.tau[vu]

    def edge_letter_after(self, e: str, x_root: str) -> Letter:
        """The letter ``e`` whose range is the unit of ``G_{t(e)}`` in the class of ``x_root``."""
        y = self.tau_inv[(self.graph.terminus[e], x_root)]
        return ("e", e, self.phi[self.graph.bar[e]][y])

    # ------------------------------------------------------------ free groupoid words
    def word_errors(self, w: Sequence[Letter]) -> List[str]:
        errs = []
        if len(w) % 2 == 0:
            return ["a word must alternate vertex and edge letters and have odd length"]
        for i, l in enumerate(w):
            want = "g" if i % 2 == 0 else "e"
            if l[0] != want:
                errs.append(f"letter {i} should be a {'vertex' if want == 'g' else 'edge'} letter")
        if errs:
            return errs
        for i in range(1, len(w), 2):
            e = w[i][1]
            x = w[i][2]
            if x not in self.phi[e]:
                errs.append(f"edge letter {e} has invalid decoration {x}")
                continue
            left, right = w[i - 1], w[i + 1]
            if left[1] != self.graph.terminus[e] or right[1] != self.graph.origin[e]:
                errs.append(f"vertex letters around {e} sit at the wrong vertices")
                continue
            if self.vg[left[1]].src(left[2]) != self.phi[e][x] or self.vg[right[1]].rng(right[2]) != x:
                errs.append(f"letters around {e} are not composable")
        return errs

    def fconcat(self, a: Word, b: Word) -> Word:
        la, lb = a[-1], b[0]
        if la[1] != lb[1]:
            raise WordError(f"cannot join letters at vertices {la[1]} and {lb[1]}")
        G = self.vg[la[1]]
        if G.src(la[2]) != G.rng(lb[2]):
            raise WordError(f"{la[2]} and {lb[2]} are not composable")
        return a[:-1] + (("g", la[1], G.mul(la[2], lb[2])),) + b[1:]

    def finv(self, w: Word) -> Word:
        return tuple(self.letter_inv(l) for l in reversed(w))

    def coset_applicable(self, w: Word, i: int) -> bool:
        g, e = w[2 * i], w[2 * i + 1][1]
        _, h = self.trans[e].decompose(g[2])
        return not self.edge_unit[e].is_unit(h)

    def length_applicable(self, w: Word, i: int) -> bool:
        if 2 * i + 3 >= len(w):
            return False
        e, f = w[2 * i + 1][1], w[2 * i + 3][1]
        return f == self.graph.bar[e] and w[2 * i + 2][2] in self.H[f]

    def reduction_sites(self, w: Word) -> List[Tuple[str, int]]:
        out = []
        for i in range(len(w) // 2):
            if self.coset_applicable(w, i):
                out.append(("coset", i))
            if self.length_applicable(w, i):
                out.append(("length", i))
        return out

    def coset_reduce(self, w: Word, i: int) -> Word:
        """``g e g' -> tau e (alpha_{bar e}(h) g')`` where ``g = tau alpha_e(h)``."""
        g, el, g2 = w[2 * i], w[2 * i + 1], w[2 * i + 2]
        e = el[1]
        tau_, h = self.trans[e].decompose(g[2])
        eb = self.graph.bar[e]
        ah = self.alpha[eb][h]
        vo = self.graph.origin[e]
        new = self.vg[vo].mul(ah, g2[2])
        x = self.vg[vo].rng(new)
        return w[:2 * i] + (("g", g[1], tau_), ("e", e, x), ("g", vo, new)) + w[2 * i + 3:]

    def length_reduce(self, w: Word, i: int) -> Word:
        """``e g bar(e) -> phi_e(g)`` for ``g`` in ``H_{bar e}``, fused with its neighbours."""
        if not self.length_applicable(w, i):
            raise WordError("length reduction not applicable here")
        e = w[2 * i + 1][1]
        v = self.graph.terminus[e]
        G = self.vg[v]
        mid = self.phi[e][w[2 * i + 2][2]]
        new = G.mul(G.mul(w[2 * i][2], mid), w[2 * i + 4][2])
        return w[:2 * i] + (("g", v, new),) + w[2 * i + 5:]

    def apply_site(self, w: Word, site: Tuple[str, int]) -> Word:
        kind, i = site
        return self.coset_reduce(w, i) if kind == "coset" else self.length_reduce(w, i)

    def normalize_free(self, w: Sequence[Letter]) -> Word:
        """Leftmost rule first (coset before length at the same edge) until no rule applies."""
        w = tuple(w)
        while True:
            for i in range(len(w) // 2):
                if self.coset_applicable(w, i):
                    w = self.coset_reduce(w, i)
                    break
                if self.length_applicable(w, i):
                    w = self.length_reduce(w, i)
                    break
            else:
                return w

    def normalize_random(self, w: Sequence[Letter], rnd: random.Random) -> Word:
        w = tuple(w)
        while True:
            sites = self.reduction_sites(w)
            if not sites:
                return w
            w = self.apply_site(w, rnd.choice(sites))

    def is_reduced(self, w: Word) -> bool:
        return not self.reduction_sites(w)

    def is_serre_reduced(self, w: Word) -> bool:
        if len(w) == 1:
            return not self.vg[w[0][1]].is_unit(w[0][2])
        for i in range(1, len(w) - 2, 2):
            e, f = w[i][1], w[i + 2][1]
            if f == self.graph.bar[e] and w[i + 1][2] in self.H[f]:
                return False
        return True

    def is_unit_word(self, w: Word) -> bool:
        return len(w) == 1 and self.vg[w[0][1]].is_unit(w[0][2])

    def britton_check(self, w: Word) -> bool:
        """True unless ``w`` is reduced in the sense of Serre and yet normalizes to a unit."""
        if not self.is_serre_reduced(w):
            return True
        return not self.is_unit_word(self.normalize_free(w))

    # ------------------------------------------------------------ conjugation into the root
    def _root_paths(self) -> Dict[Tuple[str, str], Word]:
        out = {}
        for v in self.graph.vertices:
            steps = tree_path(self.tree, self.root, v)
            for x in self.units:
                word: Word = (("g", self.root, x),)
                cur = x
                for d in steps:
                    nxt = self.phi[d][cur]
                    word = (("g", self.graph.terminus[d], nxt), ("e", d, cur)) + word
                    cur = nxt
                out[(v, cur)] = word
        return out

    def theta(self, l: Letter) -> Word:
        got = self._theta_cache.get(l)
        if got is not None:
            return got
        if l[0] == "g":
            core: Word = (l,)
        else:
            e, x = l[1], l[2]
            core = (("g", self.graph.terminus[e], self.phi[e][x]), l, ("g", self.graph.origin[e], x))
        left = self.finv(self._paths[self.letter_rng(l)])
        right = self._paths[self.letter_src(l)]
        out = self.fconcat(self.fconcat(left, core), right)
        self._theta_cache[l] = out
        return out

    # ------------------------------------------------------------ elements
    def unit(self, x: str) -> Pi1Element:
        return self._element((("g", self.root, x),))

    def _tok(self, l: Letter) -> str:
        if l[0] == "e":
            return l[1]
        m = l[2]
        return m if len(self.owners[m]) == 1 else f"{l[1]}:{m}"

    def spell(self, key: Word) -> Tuple[str, ...]:
        kept: List[Letter] = []
        for l in key:
            if l[0] == "e" and l[1] in self.tree_edges:
                continue
            if kept and l[0] == "g" and kept[-1][0] == "g" and kept[-1][1] == l[1]:
                G = self.vg[l[1]]
                if G.src(kept[-1][2]) == G.rng(l[2]):
                    kept[-1] = ("g", l[1], G.mul(kept[-1][2], l[2]))
                    continue
            kept.append(l)
        return tuple(self._tok(l) for l in kept if not (l[0] == "g" and self.vg[l[1]].is_unit(l[2])))

    def _element(self, key: Word) -> Pi1Element:
        toks = self.spell(key)
        s = self.vg[self.root].src(key[-1][2]) if key[-1][0] == "g" else None
        r = self.vg[self.root].rng(key[0][2])
        if not toks:
            text = f"id_{self.unit_name[s]}"
        elif any(t for t in toks if t not in self.graph.bar):
            text = ".".join(toks)
        else:
            text = ".".join(toks + (f"id_{self.unit_name[s]}",))
        return Pi1Element(key, toks, s, r, text)

    def normalize(self, letters: Sequence[Letter]) -> Pi1Element:
        if not letters:
            raise WordError("the empty word is not allowed; write a unit letter")
        word = self.theta(letters[0])
        for l in letters[1:]:
            word = self.fconcat(word, self.theta(l))
        return self._element(self.normalize_free(word))

    def element(self, text: str) -> Pi1Element:
        return self.normalize(self.parse(text))

    def src(self, p: Pi1Element) -> str:
        return p.src

    def rng(self, p: Pi1Element) -> str:
        return p.rng

    def is_unit(self, p: Pi1Element) -> bool:
        return len(p.key) == 1 and self.vg[self.root].is_unit(p.key[0][2])

    def composable(self, p: Pi1Element, q: Pi1Element) -> bool:
        return p.src == q.rng

    def mul(self, p: Pi1Element, q: Pi1Element) -> Pi1Element:
        if p.src != q.rng:
            raise WordError(f"{p} and {q} are not composable")
        return self._element(self.normalize_free(self.fconcat(p.key, q.key)))

    def inv(self, p: Pi1Element) -> Pi1Element:
        return self._element(self.normalize_free(self.finv(p.key)))

    def key(self, p: Pi1Element):
        return (len(p.tokens), p.tokens, p.src)

    def label(self, p: Pi1Element) -> str:
        return p.text.replace(".", "*")

    def length(self, p: Pi1Element) -> int:
        return len(p.tokens)

    # ------------------------------------------------------------ generators and balls
    def generators(self) -> List[Pi1Element]:
        out = []
        for v in self.graph.vertices:
            G = self.vg[v]
            for m in G.morphisms:
                if not G.is_unit(m):
                    out.append(self.normalize([("g", v, m)]))
        for e in self.graph.edges:
            if e in self.tree_edges:
                continue
            for x in self.vg[self.graph.origin[e]].units:
                out.append(self.normalize([("e", e, x)]))
        return sorted(set(out))

    def enumerate_ball(self, source: str, L: int) -> List[Pi1Element]:
        """Canonical elements with the given source whose spelling has at most ``L`` letters."""
        if source in self.name_unit:
            source = self.name_unit[source]
        if source not in self.units:
            raise WordError(f"unknown unit {source!r}")
        gens = self.generators()
        by_src: Dict[str, List[Pi1Element]] = {}
        for g in gens:
            by_src.setdefault(g.src, []).append(g)
        start = self.unit(source)
        seen = {start}
        level = [start]
        for _ in range(L):
            nxt = []
            for p in level:
                for g in by_src.get(p.rng, []):
                    q = self.mul(g, p)
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            level = nxt
        return sorted(p for p in seen if len(p.tokens) <= L)

    def all_balls(self, L: int) -> List[Pi1Element]:
        out = []
        for x in self.units:
            out += self.enumerate_ball(x, L)
        return out

    # ------------------------------------------------------------ text syntax
    def parse(self, text: str) -> List[Letter]:
        toks = [t.strip() for t in text.split(".") if t.strip()]
        if not toks:
            raise WordError("empty word")
        items: List[Tuple] = []
        for t in toks:
            if ":" in t and t.split(":", 1)[0] in self.vg:
                v, m = t.split(":", 1)
                if m not in self.vg[v].morphisms:
                    raise WordError(f"{m} is not a morphism of G_{v}")
                items.append(("g", v, m))
            elif t in self.graph.bar:
                items.append(("e", t, None))
            elif t in self.owners:
                vs = self.owners[t]
                if len(vs) == 1:
                    items.append(("g", vs[0], t))
                elif all(self.vg[v].is_unit(t) for v in vs) and len({self.tau[(v, t)] for v in vs}) == 1:
                    v = self.root if self.root in vs else vs[0]
                    items.append(("g", v, t))
                else:
                    raise WordError(f"{t} is ambiguous; qualify it as vertex:{t}")
            else:
                name = t[3:] if t.startswith("id_") else t
                if name in self.name_unit:
                    items.append(("g", self.root, self.name_unit[name]))
                else:
                    raise WordError(f"unknown letter {t!r}")
        n = len(items)
        bound: List[Optional[str]] = [None] * (n + 1)

        def setb(i, x, where):
            if bound[i] is None:
                bound[i] = x
                return True
            if bound[i] != x:
                raise WordError(f"letters are not composable at position {where}")
            return False

        for j, it in enumerate(items):
            if it[0] == "g":
                G = self.vg[it[1]]
                setb(j, self.tau[(it[1], G.rng(it[2]))], j)
                setb(j + 1, self.tau[(it[1], G.src(it[2]))], j)
        changed = True
        while changed:
            changed = False
            for j, it in enumerate(items):
                if it[0] != "e":
                    continue
                e = it[1]
                o, t = self.graph.origin[e], self.graph.terminus[e]
                if bound[j + 1] is not None:
                    x = self.tau_inv[(o, bound[j + 1])]
                    changed |= setb(j, self.tau[(t, self.phi[e][x])], j)
                if bound[j] is not None:
                    y = self.tau_inv[(t, bound[j])]
                    x = self.phi[self.graph.bar[e]][y]
                    changed |= setb(j + 1, self.tau[(o, x)], j)
        if any(b is None for b in bound):
            raise WordError("word is ambiguous: add a unit letter to fix the source")
        out: List[Letter] = []
        for j, it in enumerate(items):
            if it[0] == "e":
                out.append(("e", it[1], self.tau_inv[(self.graph.origin[it[1]], bound[j + 1])]))
            else:
                out.append(it)
        return out

    def to_free_word(self, letters: Sequence[Letter]) -> Word:
        """Strictly alternating word from parsed letters; raises if a tree path would be needed."""
        out: List[Letter] = []
        for l in letters:
            if l[0] == "g":
                if out and out[-1][0] == "g":
                    out[-1:] = list(self.fconcat((out[-1],), (l,)))
                else:
                    if out:
                        e = out[-1]
                        if l[1] != self.graph.origin[e[1]] or self.vg[l[1]].rng(l[2]) != e[2]:
                            raise WordError(f"{l[2]} cannot follow edge letter {e[1]}")
                    out.append(l)
            else:
                if not out or out[-1][0] == "e":
                    v, x = self.letter_rng(l)
                    out.append(("g", v, x))
                else:
                    v, x = self.letter_rng(l)
                    if out[-1][1] != v or self.vg[v].src(out[-1][2]) != x:
                        raise WordError(f"edge letter {l[1]} cannot follow {out[-1][2]}")
                out.append(l)
        if out[-1][0] == "e":
            v, x = self.letter_src(out[-1])
            out.append(("g", v, x))
        w = tuple(out)
        errs = self.word_errors(w)
        if errs:
            raise WordError(errs[0])
        return w

    def format_word(self, w: Sequence[Letter]) -> str:
        """Text for a word: units dropped when some non-unit vertex letter pins the decorations."""
        toks = [self._tok(l) for l in w]
        nonunit = [l for l in w if l[0] == "g" and not self.vg[l[1]].is_unit(l[2])]
        if nonunit:
            return ".".join(self._tok(l) for l in w if not (l[0] == "g" and self.vg[l[1]].is_unit(l[2])))
        if len(w) == 1:
            return toks[0]
        return ".".join(self._tok(l) for l in w if l[0] == "e") + "." + toks[-1]

    # ------------------------------------------------------------ random words
    def random_word(self, rnd: random.Random, n: int) -> Word:
        v = rnd.choice(self.graph.vertices)
        g = rnd.choice(self.vg[v].morphisms)
        out: List[Letter] = [("g", v, g)]
        for _ in range(n):
            cur = out[-1]
            choices = [e for e in self.graph.edges if self.graph.terminus[e] == cur[1]]
            e = rnd.choice(choices)
            x = self.phi[self.graph.bar[e]][self.vg[cur[1]].src(cur[2])]
            vo = self.graph.origin[e]
            G = self.vg[vo]
            nxt = rnd.choice([m for m in G.morphisms if G.rng(m) == x])
            out += [("e", e, x), ("g", vo, nxt)]
        return tuple(out)
