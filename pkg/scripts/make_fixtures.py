"""Regenerate the JSON fixtures shipped with the package."""
from bsgroupoid.builders import cyclic_group
from bsgroupoid.gog import GraphOfGroupoids
from bsgroupoid.graph import SerreGraph
from bsgroupoid.groupoid import Groupoid
from bsgroupoid.io import ProjectFile, fixture_path, save


def pair_groupoid(ids):
    """``ids[(j, i)]`` names the unique morphism ``i -> j``; ``ids[(i, i)]`` are the units."""
    units = sorted({ids[(i, i)] for (i, j) in ids if i == j})
    coords = {g: k for k, g in ids.items()}
    src = {g: ids[(i, i)] for g, (j, i) in coords.items()}
    rng = {g: ids[(j, j)] for g, (j, i) in coords.items()}
    inv = {g: ids[(i, j)] for g, (j, i) in coords.items()}
    return Groupoid.from_mul(units, list(coords), src, rng, inv,
                             lambda g, h: ids[(coords[g][0], coords[h][1])])


def group(prefix, m):
    A = cyclic_group(m)
    ids = {a: f"{prefix}{a}" for a in A.elements}
    back = {v: k for k, v in ids.items()}
    unit = ids[A.identity]
    return Groupoid.from_mul([unit], list(back), {g: unit for g in back}, {g: unit for g in back},
                             {g: ids[A.inv(back[g])] for g in back},
                             lambda g, h: ids[A.mul(back[g], back[h])])


def units_only(names):
    return Groupoid.build(names, names, {}, {}, {}, [(x, x, x) for x in names])


def project(name, graph, groupoids, vg, eg, alpha, root, action=True, tree=None):
    pf = ProjectFile()
    pf.graphs[name] = graph
    pf.groupoids.update(groupoids)
    gog = GraphOfGroupoids(graph, {v: groupoids[n] for v, n in vg.items()},
                           {e: groupoids[n] for e, n in eg.items()}, alpha, root, tree=tree)
    pf.graphs_of_groupoids[name] = gog
    if action:
        pf.actions["pi1-on-forest"] = {"kind": "pi1-on-forest", "gog": name}
    return pf


def seg():
    g = SerreGraph.from_pairs(["v", "w"], [("e", "ebar", "v", "w")])
    Gv = pair_groupoid({(1, 1): "x1", (2, 2): "x2", (2, 1): "a_v", (1, 2): "a_v^-1"})
    Gw = pair_groupoid({(1, 1): "y1", (2, 2): "y2", (2, 1): "a_w", (1, 2): "a_w^-1"})
    Ge = units_only(["z1", "z2"])
    return project("seg", g, {"G_v": Gv, "G_w": Gw, "G_e": Ge}, {"v": "G_v", "w": "G_w"},
                   {"e": "G_e", "ebar": "G_e"},
                   {"e": {"z1": "y1", "z2": "y2"}, "ebar": {"z1": "x1", "z2": "x2"}}, "v")


def loop():
    g = SerreGraph.from_pairs(["v"], [("f", "fbar", "v", "v")])
    return project("loop", g, {"G_v": units_only(["x1", "x2"]), "G_f": units_only(["z1", "z2"])},
                   {"v": "G_v"}, {"f": "G_f", "fbar": "G_f"},
                   {"f": {"z1": "x1", "z2": "x2"}, "fbar": {"z1": "x2", "z2": "x1"}}, "v")


def amal():
    g = SerreGraph.from_pairs(["v", "w"], [("e", "ebar", "v", "w")])
    return project("amal", g, {"G_v": group("c", 4), "G_w": group("d", 4), "G_e": group("z", 2)},
                   {"v": "G_v", "w": "G_w"}, {"e": "G_e", "ebar": "G_e"},
                   {"e": {"z0": "d0", "z1": "d2"}, "ebar": {"z0": "c0", "z1": "c2"}}, "v")


def chain():
    g = SerreGraph.from_pairs(["a", "b", "c"], [("d", "dbar", "a", "b"), ("e", "ebar", "b", "c")])
    Ga = pair_groupoid({(1, 1): "p1", (2, 2): "p2", (2, 1): "m", (1, 2): "m^-1"})
    Gb = Groupoid.build(["q1", "q2"], ["s1", "s2"], {"s1": "q1", "s2": "q2"}, {"s1": "q1", "s2": "q2"},
                        {"s1": "s1", "s2": "s2"},
                        [("q1", "q1", "q1"), ("q2", "q2", "q2"), ("s1", "q1", "s1"), ("q1", "s1", "s1"),
                         ("s1", "s1", "q1"), ("s2", "q2", "s2"), ("q2", "s2", "s2"), ("s2", "s2", "q2")])
    Gc = units_only(["r1", "r2"])
    return project("chain", g, {"G_a": Ga, "G_b": Gb, "G_c": Gc, "G_d": units_only(["z1", "z2"]),
                                "G_e": units_only(["w1", "w2"])},
                   {"a": "G_a", "b": "G_b", "c": "G_c"},
                   {"d": "G_d", "dbar": "G_d", "e": "G_e", "ebar": "G_e"},
                   {"d": {"z1": "q1", "z2": "q2"}, "dbar": {"z1": "p1", "z2": "p2"},
                    "e": {"w1": "r2", "w2": "r1"}, "ebar": {"w1": "q1", "w2": "q2"}}, "a")


def zline():
    g = SerreGraph.from_pairs(["v"], [("t", "tbar", "v", "v")])
    return project("zline", g, {"G_v": units_only(["x"]), "G_t": units_only(["z"])},
                   {"v": "G_v"}, {"t": "G_t", "tbar": "G_t"}, {"t": {"z": "x"}, "tbar": {"z": "x"}}, "v")


if __name__ == "__main__":
    for name, fn in (("seg", seg), ("loop", loop), ("amal", amal), ("chain", chain), ("zline", zline)):
        save(fn(), fixture_path(name))
        print("wrote", fixture_path(name))
