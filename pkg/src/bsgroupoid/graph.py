"""Serre graphs: directed edges paired by an involution ``bar``.

Every geometric edge is stored as two directed edge records ``e`` and
``bar(e)`` with ``o(bar e) = t(e)``.  Ids are opaque strings and every
traversal runs in sorted id order so that results are reproducible.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class SerreGraph:
    vertices: Tuple[str, ...]
    edges: Tuple[str, ...]
    origin: Dict[str, str] = field(hash=False, compare=False)
    terminus: Dict[str, str] = field(hash=False, compare=False)
    bar: Dict[str, str] = field(hash=False, compare=False)

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Tuple[str, str, str, str]]) -> "SerreGraph":
        """Build from ``(edge, bar, origin, terminus)`` records; every directed edge listed once."""
        o, t, b = {}, {}, {}
        for e, eb, oe, te in edges:
            o[e], t[e], b[e] = oe, te, eb
        return cls(tuple(sorted(set(vertices))), tuple(sorted(o)), o, t, b)

    @classmethod
    def from_pairs(cls, vertices: Iterable[str], pairs: Iterable[Tuple[str, str, str, str]]) -> "SerreGraph":
        """Build from geometric edges ``(e, ebar, o(e), t(e))``; the bar records are derived."""
        recs = []
        for e, eb, oe, te in pairs:
            recs.append((e, eb, oe, te))
            recs.append((eb, e, te, oe))
        return cls.build(vertices, recs)

    def o(self, e: str) -> str:
        return self.origin[e]

    def t(self, e: str) -> str:
        return self.terminus[e]

    def inv(self, e: str) -> str:
        return self.bar[e]

    def __eq__(self, other):
        if not isinstance(other, SerreGraph):
            return NotImplemented
        return (self.vertices == other.vertices and self.edges == other.edges
                and self.origin == other.origin and self.terminus == other.terminus
                and self.bar == other.bar)

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def geometric_edges(self) -> List[Tuple[str, str]]:
        seen, out = set(), []
        for e in self.edges:
            if e in seen:
                continue
            eb = self.bar[e]
            seen.update((e, eb))
            out.append((min(e, eb), max(e, eb)))
        return out

    def out_edges(self, v: str) -> List[str]:
        return [e for e in self.edges if self.origin[e] == v]

    def subgraph(self, vertices: Iterable[str], edges: Optional[Iterable[str]] = None) -> "SerreGraph":
        vs = set(vertices)
        if edges is None:
            es = [e for e in self.edges if self.origin[e] in vs and self.terminus[e] in vs]
        else:
            es = list(edges)
        return SerreGraph(tuple(sorted(vs)), tuple(sorted(es)),
                          {e: self.origin[e] for e in es},
                          {e: self.terminus[e] for e in es},
                          {e: self.bar[e] for e in es})


@dataclass(frozen=True)
class Path:
    edges: Tuple[str, ...]
    base_vertex: Optional[str] = None

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class Orientation:
    positive_edges: FrozenSet[str]

    def is_positive(self, e: str) -> bool:
        return e in self.positive_edges

    def epsilon(self, e: str) -> int:
        return 0 if e in self.positive_edges else 1

    def absolute(self, g: SerreGraph, e: str) -> str:
        return e if e in self.positive_edges else g.bar[e]


def default_orientation(g: SerreGraph) -> Orientation:
    """Positive member of each pair is the lexicographically smaller id."""
    return Orientation(frozenset(min(e, g.bar[e]) for e in g.edges))


def validate_orientation(g: SerreGraph, orient: Orientation) -> List[str]:
    errs = []
    for e in g.edges:
        n = (e in orient.positive_edges) + (g.bar.get(e) in orient.positive_edges)
        if n != 1:
            errs.append(f"orientation must contain exactly one of {e}, {g.bar.get(e)}")
    for e in orient.positive_edges:
        if e not in g.origin:
            errs.append(f"orientation names unknown edge {e}")
    return errs


def validate_graph(g: SerreGraph) -> List[str]:
    errs = []
    vs = set(g.vertices)
    for e in g.edges:
        if e not in g.origin or e not in g.terminus:
            errs.append(f"edge {e}: origin/terminus not defined")
            continue
        if g.origin[e] not in vs or g.terminus[e] not in vs:
            errs.append(f"edge {e}: endpoint is not a vertex")
        b = g.bar.get(e)
        if b is None or b not in g.origin:
            errs.append(f"edge {e}: bar is not an edge")
            continue
        if b == e:
            errs.append(f"edge {e}: bar has a fixed point")
            continue
        if g.bar.get(b) != e:
            errs.append(f"edge {e}: bar is not an involution")
        if g.terminus[b] != g.origin[e]:
            errs.append(f"edge {e}: t(bar e) != o(e)")
    return errs


def is_path(g: SerreGraph, p: Path) -> bool:
    es = p.edges
    return all(g.origin[es[i]] == g.terminus[es[i + 1]] for i in range(len(es) - 1))


def is_reduced_path(g: SerreGraph, p: Path) -> bool:
    es = p.edges
    return all(es[i + 1] != g.bar[es[i]] for i in range(len(es) - 1))


def path_reverse(g: SerreGraph, p: Path) -> Path:
    return Path(tuple(g.bar[e] for e in reversed(p.edges)), p.base_vertex)


def _adjacency(g: SerreGraph) -> Dict[str, List[Tuple[str, str]]]:
    adj: Dict[str, List[Tuple[str, str]]] = {v: [] for v in g.vertices}
    for e in g.edges:
        adj[g.origin[e]].append((e, g.terminus[e]))
    return adj


def bfs_distances(g: SerreGraph, source: str) -> Dict[str, int]:
    if source not in set(g.vertices):
        raise GraphError(f"unknown vertex {source!r}")
    adj = _adjacency(g)
    dist = {source: 0}
    q = deque([source])
    while q:
        u = q.popleft()
        for _, w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def distance(g: SerreGraph, v: str, w: str) -> Optional[int]:
    """Length of a shortest path between ``v`` and ``w``; ``None`` if unreachable."""
    if w not in set(g.vertices):
        raise GraphError(f"unknown vertex {w!r}")
    return bfs_distances(g, v).get(w)


def components(g: SerreGraph) -> List[List[str]]:
    seen, out = set(), []
    for v in g.vertices:
        if v in seen:
            continue
        comp = sorted(bfs_distances(g, v))
        seen.update(comp)
        out.append(comp)
    return out


def is_connected(g: SerreGraph) -> bool:
    return len(g.vertices) > 0 and len(components(g)) == 1


def is_forest(g: SerreGraph) -> bool:
    # a component is a tree iff it has |V|-1 geometric edges (loops count as cycles)
    for comp in components(g):
        cs = set(comp)
        n_geo = sum(1 for e in g.edges if g.origin[e] in cs) // 2
        if n_geo != len(comp) - 1:
            return False
    return True


def is_tree(g: SerreGraph) -> bool:
    return is_connected(g) and is_forest(g)


def find_cycle(g: SerreGraph) -> Optional[List[str]]:
    """A reduced closed path of positive length, if any (used as a witness)."""
    parent: Dict[str, Optional[Tuple[str, str]]] = {}
    adj = _adjacency(g)
    for root in g.vertices:
        if root in parent:
            continue
        parent[root] = None
        q = deque([root])
        while q:
            u = q.popleft()
            for e, w in adj[u]:
                if parent[u] is not None and parent[u][0] == g.bar[e]:
                    continue
                if w not in parent:
                    parent[w] = (e, u)
                    q.append(w)
                    continue
                # closing edge e: u -> w; climb both branches to their meeting point
                def chain(x):
                    out = []
                    while parent[x] is not None:
                        out.append(parent[x][0])
                        x = parent[x][1]
                    return out
                cu, cw = chain(u), chain(w)
                while cu and cw and cu[-1] == cw[-1]:
                    cu.pop()
                    cw.pop()
                return list(reversed(cu)) + [e] + [g.bar[x] for x in cw]
    return None


def maximal_subtree(g: SerreGraph) -> SerreGraph:
    """Spanning tree by BFS from the smallest vertex, edges tried in id order."""
    if not is_connected(g):
        raise GraphError("maximal_subtree requires a connected graph")
    root = g.vertices[0]
    seen = {root}
    keep: List[str] = []
    q = deque([root])
    out_edges: Dict[str, List[str]] = {v: [] for v in g.vertices}
    for e in g.edges:
        out_edges[g.origin[e]].append(e)
    while q:
        u = q.popleft()
        for e in out_edges[u]:
            w = g.terminus[e]
            if w not in seen:
                seen.add(w)
                keep.extend((e, g.bar[e]))
                q.append(w)
    return g.subgraph(g.vertices, keep)


def star(g: SerreGraph, v: str) -> List[str]:
    if v not in set(g.vertices):
        raise GraphError(f"unknown vertex {v!r}")
    return [e for e in g.edges if g.terminus[e] == v]


def tree_path(tree: SerreGraph, source: str, target: str) -> List[str]:
    """Edges of the unique reduced path from ``source`` to ``target``, in traversal order."""
    adj = _adjacency(tree)
    prev: Dict[str, Optional[str]] = {source: None}
    q = deque([source])
    while q:
        u = q.popleft()
        for e, w in adj[u]:
            if w not in prev:
                prev[w] = e
                q.append(w)
    if target not in prev:
        raise GraphError(f"{target!r} not reachable from {source!r}")
    out = []
    x = target
    while prev[x] is not None:
        out.append(prev[x])
        x = tree.origin[prev[x]]
    return list(reversed(out))
