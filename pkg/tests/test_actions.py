import random

import pytest
from hypothesis import given, settings, strategies as st

from bsgroupoid.actions import (ActionError, GraphAction, PartialSection, SetAction, acts_without_inversion,
                                action_groupoid, cayley_graph, check_cayley_generation, is_g_forest, orbits,
                                quotient_graph, saturation, stabilizer_of_section, validate_action)
from bsgroupoid.builders import cyclic_group, random_groupoid, transitive_groupoid, unit_groupoid
from bsgroupoid.desing import stabilizer_groupoid
from bsgroupoid.graph import SerreGraph, is_tree
from bsgroupoid.groupoid import find_isomorphism
from bsgroupoid.io import load_fixture

from conftest import forest, window
from generators import random_admissible
from oracles import fibers_connected_bruteforce, generated_closure


def segment():
    return SerreGraph.build(["v", "w"], [("e", "ebar", "v", "w"), ("ebar", "e", "w", "v")])


def c2():
    G, _ = transitive_groupoid(["u"], cyclic_group(2), "a")
    return G


def trivial_action(G, graph, unit):
    mom = {v: unit for v in graph.vertices}
    return GraphAction(G, graph, mom, {(unit, v): v for v in graph.vertices}, {(unit, e): e for e in graph.edges})


def test_seg_window_is_valid_action():
    a = window("seg")
    assert validate_action(a).errors == []
    assert is_g_forest(a)


def test_trivial_unit_action_valid():
    a = trivial_action(unit_groupoid(["u"]), segment(), "u")
    assert validate_action(a).errors == []
    assert quotient_graph(a) == segment()


def test_momentum_violation():
    G = c2()
    H = unit_groupoid(["u", "u'"])
    a = SetAction(H, ["p", "q"], {"p": "u", "q": "u'"}, {("u", "p"): "q", ("u'", "q"): "q"})
    assert validate_action(a).errors


def test_action_groupoid_examples():
    G = c2()
    a = SetAction(G, ["pt"], {"pt": "u"}, {(g, "pt"): "pt" for g in G.morphisms})
    assert find_isomorphism(action_groupoid(a), G) is not None
    U = unit_groupoid(["x", "y"])
    b = SetAction(U, ["x", "y"], {"x": "x", "y": "y"}, {("x", "x"): "x", ("y", "y"): "y"})
    assert set(action_groupoid(b).morphisms) == set(action_groupoid(b).units)
    Gv = load_fixture("seg").groupoids["G_v"]
    t = SetAction(Gv, list(Gv.units), {x: x for x in Gv.units}, {(g, Gv.src(g)): Gv.rng(g) for g in Gv.morphisms})
    AG = action_groupoid(t)
    assert len(AG.morphisms) == 4
    # composition (g, h.x)(h, x) = (gh, x)
    for g in Gv.morphisms:
        for h in Gv.morphisms:
            if Gv.composable(g, h):
                k1, k2 = f"({g},{Gv.rng(h)})", f"({h},{Gv.src(h)})"
                assert AG.mul(k1, k2) == f"({Gv.mul(g, h)},{Gv.src(h)})"


def test_seg_orbits_and_quotient():
    a = window("seg")
    F = forest("seg")
    orb = orbits(a)
    assert len(orb) == 2
    assert {frozenset(F.by_label[k].tag for k in c) for c in orb} == {frozenset({"v"}), frozenset({"w"})}
    assert saturation(a, []) == set()
    red = next(c for c in orb if F.by_label[c[0]].tag == "v")
    assert saturation(a, [red[0]]) == set(red)
    # edge orbits: g.(pH_e[e]) = gpH_e[e] keeps s(p), and H_e has only units, so the
    # two units give two edge orbits (brute force over the window confirms)
    eorb = orbits(a, "edge")
    assert sorted({F.by_label[k].rep.src for k in c} for c in eorb if F.by_label[c[0]].tag == "e") == [
        {u} for u in sorted(F.P.units)]
    q = quotient_graph(a)
    assert len(q.vertices) == 2 and len(q.edges) == 4 and not is_tree(q)


def test_inversion_witness():
    G = c2()
    flip = [g for g in G.morphisms if not G.is_unit(g)][0]
    g = segment()
    mu0 = {("u", "v"): "v", ("u", "w"): "w", (flip, "v"): "w", (flip, "w"): "v"}
    mu1 = {("u", "e"): "e", ("u", "ebar"): "ebar", (flip, "e"): "ebar", (flip, "ebar"): "e"}
    a = GraphAction(G, g, {"v": "u", "w": "u"}, mu0, mu1)
    assert validate_action(a).errors == []
    w = acts_without_inversion(a)
    assert w is not None and w[0] == flip


def test_forest_predicate():
    loopg = SerreGraph.build(["v"], [("f", "fbar", "v", "v"), ("fbar", "f", "v", "v")])
    assert not is_g_forest(trivial_action(unit_groupoid(["u"]), loopg, "u"))
    assert is_g_forest(trivial_action(unit_groupoid(["u"]), segment(), "u"))


def test_stabilizers():
    a = window("seg")
    F = forest("seg")
    P = F.P
    sigma = PartialSection({x: F.label(F.root_vertex(x, "v")) for x in P.units})
    H, _ = stabilizer_groupoid(a, sigma)
    assert find_isomorphism(H, load_fixture("seg").groupoids["G_v"]) is not None
    # free action: C2 swapping two points
    G = c2()
    flip = [g for g in G.morphisms if not G.is_unit(g)][0]
    pts = SerreGraph.build(["p", "q"], [])
    free = GraphAction(G, pts, {"p": "u", "q": "u"},
                       {("u", "p"): "p", ("u", "q"): "q", (flip, "p"): "q", (flip, "q"): "p"}, {})
    assert stabilizer_of_section(free, PartialSection({"u": "p"})).morphism_subset == {"u"}
    fixed = trivial_action(G, SerreGraph.build(["p"], []), "u")
    fixed.mu0[(flip, "p")] = "p"
    assert stabilizer_of_section(fixed, PartialSection({"u": "p"})).morphism_subset == set(G.morphisms)


def test_cayley_examples():
    G = c2()
    a = [g for g in G.morphisms if not G.is_unit(g)][0]
    g, _ = cayley_graph(G, [a])
    assert len(g.vertices) == 2 and len(g.edges) == 2 and is_tree(g)
    Gv = load_fixture("seg").groupoids["G_v"]
    g, fib = cayley_graph(Gv, ["a_v", "a_v^-1"])
    assert set(g.vertices) == {"x1", "x2", "a_v", "a_v^-1"}
    assert {k for k, u in fib.items() if u == "x1"} == {"x1", "a_v^-1"}
    sub = g.subgraph(["x1", "a_v^-1"])
    assert len(sub.edges) == 2
    rep = check_cayley_generation(Gv, ["a_v", "a_v^-1"])
    assert rep.fibers_connected and rep.generates
    rep = check_cayley_generation(Gv, [])
    assert not rep.fibers_connected and not rep.generates
    with pytest.raises(ActionError):
        cayley_graph(Gv, ["x1"])


@settings(max_examples=150)
@given(st.integers(0, 10**6))
def test_cayley_generation_property(seed):
    rnd = random.Random(seed)
    G = random_groupoid(rnd, 8)
    S = random_admissible(rnd, G)
    rep = check_cayley_generation(G, S)
    assert rep.fibers_connected == fibers_connected_bruteforce(G, S)
    assert rep.generates == (generated_closure(G, S) == set(G.morphisms))
    assert rep.agree
