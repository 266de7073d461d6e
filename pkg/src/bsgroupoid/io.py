"""JSON project files: graphs, groupoids, graphs of groupoids, actions, desingularizations."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Any, Dict, List

from .actions import GraphAction
from .gog import GraphOfGroupoids
from .graph import Orientation, SerreGraph
from .groupoid import Groupoid

FORMAT_VERSION = "1"
SECTIONS = ("graphs", "groupoids", "graphs_of_groupoids", "actions", "sections", "desingularizations")


class SchemaError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


def _esc(k: str) -> str:
    return str(k).replace("~", "~0").replace("/", "~1")


def _need(obj, key, ptr, kind):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(ptr, f"missing required field {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise SchemaError(f"{ptr}/{_esc(key)}", f"expected {kind.__name__}")
    return val


@dataclass
class ProjectFile:
    format_version: str = FORMAT_VERSION
    graphs: Dict[str, SerreGraph] = field(default_factory=dict)
    groupoids: Dict[str, Groupoid] = field(default_factory=dict)
    graphs_of_groupoids: Dict[str, GraphOfGroupoids] = field(default_factory=dict)
    actions: Dict[str, Any] = field(default_factory=dict)
    sections: Dict[str, Any] = field(default_factory=dict)
    desingularizations: Dict[str, Any] = field(default_factory=dict)
    raw: Dict[str, Any] = field(default_factory=dict, repr=False)


# ---------------------------------------------------------------- parsing

def graph_from_dict(d, ptr="") -> SerreGraph:
    verts = _need(d, "vertices", ptr, list)
    edges = _need(d, "edges", ptr, list)
    recs = []
    for i, e in enumerate(edges):
        p = f"{ptr}/edges/{i}"
        recs.append(tuple(_need(e, k, p, str) for k in ("id", "bar", "o", "t")))
    ids = [r[0] for r in recs]
    if len(set(ids)) != len(ids):
        raise SchemaError(f"{ptr}/edges", "duplicate edge id")
    for i, (e, eb, o, t) in enumerate(recs):
        if eb not in ids:
            raise SchemaError(f"{ptr}/edges/{i}/bar", f"dangling reference {eb!r}")
        for k, v in (("o", o), ("t", t)):
            if v not in verts:
                raise SchemaError(f"{ptr}/edges/{i}/{k}", f"dangling reference {v!r}")
    return SerreGraph.build(verts, recs)


def graph_to_dict(g: SerreGraph) -> dict:
    return {"vertices": list(g.vertices),
            "edges": [{"id": e, "bar": g.bar[e], "o": g.origin[e], "t": g.terminus[e]} for e in g.edges]}


def groupoid_from_dict(d, ptr="") -> Groupoid:
    units = _need(d, "units", ptr, list)
    if not units:
        raise SchemaError(f"{ptr}/units", "units must be nonempty")
    ms = _need(d, "morphisms", ptr, list)
    comp = _need(d, "comp", ptr, list)
    ids, s, r, inv = [], {}, {}, {}
    for i, m in enumerate(ms):
        p = f"{ptr}/morphisms/{i}"
        g = _need(m, "id", p, str)
        ids.append(g)
        s[g], r[g], inv[g] = (_need(m, k, p, str) for k in ("src", "rng", "inv"))
        for k, v in (("src", s[g]), ("rng", r[g])):
            if v not in units:
                raise SchemaError(f"{p}/{k}", f"dangling reference {v!r}")
    known = set(ids) | set(units)
    for g in ids:
        if inv[g] not in known:
            raise SchemaError(f"{ptr}/morphisms/{ids.index(g)}/inv", f"dangling reference {inv[g]!r}")
    triples = []
    for i, c in enumerate(comp):
        if not (isinstance(c, list) and len(c) == 3 and all(isinstance(x, str) for x in c)):
            raise SchemaError(f"{ptr}/comp/{i}", "expected [g1, g2, g1*g2]")
        for j, x in enumerate(c):
            if x not in known:
                raise SchemaError(f"{ptr}/comp/{i}/{j}", f"dangling reference {x!r}")
        triples.append(tuple(c))
    return Groupoid.build(units, ids, s, r, inv, triples)


def gog_from_dict(d, graphs, groupoids, ptr="") -> GraphOfGroupoids:
    gname = _need(d, "graph", ptr, str)
    if gname not in graphs:
        raise SchemaError(f"{ptr}/graph", f"dangling reference {gname!r}")
    base = graphs[gname]
    vg, eg = {}, {}
    vmap = _need(d, "vertex_groupoids", ptr, dict)
    emap = _need(d, "edge_groupoids", ptr, dict)
    for src_map, dst, items, label in ((vmap, vg, base.vertices, "vertex_groupoids"),
                                       (emap, eg, base.edges, "edge_groupoids")):
        for k in items:
            if k not in src_map:
                raise SchemaError(f"{ptr}/{label}", f"no groupoid for {k!r}")
            n = src_map[k]
            if n not in groupoids:
                raise SchemaError(f"{ptr}/{label}/{_esc(k)}", f"dangling reference {n!r}")
            dst[k] = groupoids[n]
    alpha_raw = _need(d, "alpha", ptr, dict)
    alpha = {}
    for e in base.edges:
        if e not in alpha_raw:
            raise SchemaError(f"{ptr}/alpha", f"alpha missing for edge {e!r}")
        alpha[e] = dict(alpha_raw[e])
    orient = None
    if d.get("orientation") is not None:
        pos = d["orientation"]
        if not isinstance(pos, list):
            raise SchemaError(f"{ptr}/orientation", "expected list of positive edges")
        orient = Orientation(frozenset(pos))
    tree = None
    if d.get("tree") is not None:
        tedges = set(d["tree"])
        for e in list(tedges):
            if e not in base.bar:
                raise SchemaError(f"{ptr}/tree", f"dangling reference {e!r}")
            tedges.add(base.bar[e])
        tree = base.subgraph(base.vertices, tedges)
    root = d.get("root")
    if root is not None and root not in base.vertices:
        raise SchemaError(f"{ptr}/root", f"dangling reference {root!r}")
    out = GraphOfGroupoids(base, vg, eg, alpha, root, orient, tree)
    out.names = {"graph": gname, "vertex_groupoids": dict(vmap), "edge_groupoids": dict(emap)}
    return out


def gog_to_dict(G: GraphOfGroupoids, names: Dict[str, str]) -> dict:
    """``names`` maps groupoid object ids to their names in the file."""
    d = {"graph": names[id(G.base)],
         "vertex_groupoids": {v: names[id(G.vertex_groupoid[v])] for v in G.base.vertices},
         "edge_groupoids": {e: names[id(G.edge_groupoid[e])] for e in G.base.edges},
         "alpha": {e: dict(sorted(G.alpha[e].items())) for e in G.base.edges},
         "root": G.root,
         "orientation": sorted(G.orientation.positive_edges)}
    if G.tree is not None:
        d["tree"] = sorted(e for e in G.tree.edges if G.orientation.is_positive(e))
    return d


def action_from_dict(d, graphs, groupoids, gogs, ptr=""):
    if d.get("kind") == "pi1-on-forest":
        g = _need(d, "gog", ptr, str)
        if g not in gogs:
            raise SchemaError(f"{ptr}/gog", f"dangling reference {g!r}")
        return {"kind": "pi1-on-forest", "gog": g}
    gname, grname = _need(d, "groupoid", ptr, str), _need(d, "graph", ptr, str)
    if gname not in groupoids:
        raise SchemaError(f"{ptr}/groupoid", f"dangling reference {gname!r}")
    if grname not in graphs:
        raise SchemaError(f"{ptr}/graph", f"dangling reference {grname!r}")
    G, F = groupoids[gname], graphs[grname]
    mom = _need(d, "momentum", ptr, dict)
    for v in F.vertices:
        if v not in mom:
            raise SchemaError(f"{ptr}/momentum", f"no momentum for vertex {v!r}")
        if mom[v] not in G.units:
            raise SchemaError(f"{ptr}/momentum/{_esc(v)}", f"dangling reference {mom[v]!r}")
    mu = {}
    for key, items in (("mu0", F.vertices), ("mu1", F.edges)):
        rows = _need(d, key, ptr, list)
        table = {}
        for i, row in enumerate(rows):
            if not (isinstance(row, list) and len(row) == 3):
                raise SchemaError(f"{ptr}/{key}/{i}", "expected [g, x, g.x]")
            g, x, y = row
            if g not in G.source:
                raise SchemaError(f"{ptr}/{key}/{i}/0", f"dangling reference {g!r}")
            for j, z in ((1, x), (2, y)):
                if z not in items:
                    raise SchemaError(f"{ptr}/{key}/{i}/{j}", f"dangling reference {z!r}")
            table[(g, x)] = y
        mu[key] = table
    a = GraphAction(G, F, dict(mom), mu["mu0"], mu["mu1"])
    a.names = {"groupoid": gname, "graph": grname}
    return a


def load_dict(data: dict) -> ProjectFile:
    if not isinstance(data, dict):
        raise SchemaError("", "top level must be an object")
    for k in data:
        if k not in SECTIONS and k != "format_version":
            raise SchemaError(f"/{_esc(k)}", "unknown section")
    pf = ProjectFile(format_version=str(data.get("format_version", FORMAT_VERSION)), raw=data)
    for n, d in data.get("graphs", {}).items():
        pf.graphs[n] = graph_from_dict(d, f"/graphs/{_esc(n)}")
    for n, d in data.get("groupoids", {}).items():
        pf.groupoids[n] = groupoid_from_dict(d, f"/groupoids/{_esc(n)}")
    for n, d in data.get("graphs_of_groupoids", {}).items():
        pf.graphs_of_groupoids[n] = gog_from_dict(d, pf.graphs, pf.groupoids, f"/graphs_of_groupoids/{_esc(n)}")
    for n, d in data.get("actions", {}).items():
        pf.actions[n] = action_from_dict(d, pf.graphs, pf.groupoids, pf.graphs_of_groupoids, f"/actions/{_esc(n)}")
    pf.sections = dict(data.get("sections", {}))
    pf.desingularizations = dict(data.get("desingularizations", {}))
    return pf


def load(path) -> ProjectFile:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"malformed JSON: {exc}") from None
    return load_dict(data)


def to_dict(pf: ProjectFile) -> dict:
    names: Dict[int, str] = {}
    out: Dict[str, Any] = {"format_version": pf.format_version}
    out["graphs"] = {}
    for n, g in sorted(pf.graphs.items()):
        names[id(g)] = n
        out["graphs"][n] = graph_to_dict(g)
    out["groupoids"] = {}
    for n, G in sorted(pf.groupoids.items()):
        names[id(G)] = n
        out["groupoids"][n] = G.to_dict()
    out["graphs_of_groupoids"] = {n: gog_to_dict(G, names) for n, G in sorted(pf.graphs_of_groupoids.items())}
    acts = {}
    for n, a in sorted(pf.actions.items()):
        if isinstance(a, dict):
            acts[n] = dict(a)
        else:
            acts[n] = {"groupoid": names[id(a.acting)], "graph": names[id(a.graph)],
                       "momentum": dict(sorted(a.momentum.items())),
                       "mu0": sorted([g, x, y] for (g, x), y in a.mu0.items()),
                       "mu1": sorted([g, x, y] for (g, x), y in a.mu1.items())}
    out["actions"] = acts
    out["sections"] = pf.sections
    out["desingularizations"] = pf.desingularizations
    return out


def dumps(pf: ProjectFile) -> str:
    return json.dumps(to_dict(pf), indent=1, sort_keys=True) + "\n"


def save(pf: ProjectFile, path) -> None:
    FsPath(path).write_text(dumps(pf), encoding="utf-8")


def fixture_path(name: str) -> FsPath:
    return FsPath(__file__).parent / "fixtures" / (name if name.endswith(".json") else f"{name}.json")


def load_fixture(name: str) -> ProjectFile:
    return load(fixture_path(name))


def first_gog(pf: ProjectFile, name=None) -> GraphOfGroupoids:
    if name is None:
        if not pf.graphs_of_groupoids:
            raise KeyError("file has no graph of groupoids")
        name = sorted(pf.graphs_of_groupoids)[0]
    if name not in pf.graphs_of_groupoids:
        raise KeyError(f"unknown graph of groupoids {name!r}")
    return pf.graphs_of_groupoids[name]
