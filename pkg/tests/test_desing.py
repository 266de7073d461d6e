import random

import pytest
from hypothesis import given, settings, strategies as st

from bsgroupoid.actions import GraphAction, InversionError, PartialSection, graph_action_from_table
from bsgroupoid.builders import random_forest_action, transitive_groupoid, cyclic_group, unit_groupoid
from bsgroupoid.desing import (Desingularization, adjacency_index, build_desingularization, build_section_family,
                               build_tree_of_representatives, section_family_errors, stabilizer_groupoid,
                               validate_desingularization)
from bsgroupoid.graph import SerreGraph, is_tree
from bsgroupoid.groupoid import find_isomorphism, validate_groupoid
from bsgroupoid.io import load_fixture

from conftest import desing, forest, window
from generators import random_action
from oracles import saturation_bruteforce


def pair_groupoid_on_units():
    from bsgroupoid.builders import transitive_groupoid
    G, _ = transitive_groupoid(["u1", "u2"], cyclic_group(1), "p")
    return G


def path_action(n=3):
    """Trivial group acting trivially on a path with n vertices: n orbits."""
    G = unit_groupoid(["u"])
    names = [chr(ord("a") + i) for i in range(n)]
    recs = []
    for i in range(n - 1):
        e = f"s{i}"
        recs += [(e, e + "bar", names[i], names[i + 1]), (e + "bar", e, names[i + 1], names[i])]
    g = SerreGraph.build(names, recs)
    return GraphAction(G, g, {v: "u" for v in names}, {("u", v): v for v in names},
                       {("u", e): e for e in g.edges})


def test_seg_sections():
    a, F = window("seg"), forest("seg")
    fam = build_section_family(a)
    assert len(fam.sections) == 2 and fam.truncated is False
    P = F.P
    assert {F.by_label[k].tag for k in fam.sections[0].values.values()} == {"v"}
    assert set(fam.sections[0].values.values()) == {F.label(F.root_vertex(x)) for x in P.units}
    assert {F.by_label[k].tag for k in fam.sections[1].values.values()} == {"w"}
    assert section_family_errors(a, fam) == []
    for v in fam.sections[1].values.values():
        assert adjacency_index(a, fam, v) == 1


def test_single_orbit_free_action():
    G = pair_groupoid_on_units()
    g = SerreGraph.build(["u1", "u2"], [])
    mu0 = {(h, G.src(h)): G.rng(h) for h in G.morphisms}
    a = GraphAction(G, g, {"u1": "u1", "u2": "u2"}, mu0, {})
    fam = build_section_family(a)
    assert len(fam.sections) == 1
    tor = build_tree_of_representatives(a, fam)
    assert len(tor.tree.vertices) == 1 and not tor.tree.edges


def test_three_orbit_chain():
    a = path_action(3)
    fam = build_section_family(a)
    assert len(fam.sections) == 3
    sats = [saturation_bruteforce(a, s.values.values()) for s in fam.sections]
    assert set().union(*sats) == set(a.graph.vertices) and sum(map(len, sats)) == 3
    third = list(fam.sections[2].values.values())[0]
    assert adjacency_index(a, fam, third) == 2


def test_inversion_rejected():
    G, _ = transitive_groupoid(["u"], cyclic_group(2), "a")
    flip = [g for g in G.morphisms if not G.is_unit(g)][0]
    g = SerreGraph.build(["v", "w"], [("e", "ebar", "v", "w"), ("ebar", "e", "w", "v")])
    a = GraphAction(G, g, {"v": "u", "w": "u"},
                    {("u", "v"): "v", ("u", "w"): "w", (flip, "v"): "w", (flip, "w"): "v"},
                    {("u", "e"): "e", ("u", "ebar"): "ebar", (flip, "e"): "ebar", (flip, "ebar"): "e"})
    with pytest.raises(InversionError):
        build_section_family(a)


def test_tree_of_representatives_fixtures():
    d = desing("seg")
    tor = d.tree_of_reps
    assert len(tor.tree.vertices) == 2 and len(tor.tree.edges) == 2
    pf = load_fixture("seg")
    assert find_isomorphism(d.gog.vertex_groupoid["v1"], pf.groupoids["G_v"])
    assert find_isomorphism(d.gog.vertex_groupoid["v2"], pf.groupoids["G_w"])
    assert find_isomorphism(d.gog.edge_groupoid["e2"], pf.groupoids["G_e"])
    dl = desing("loop")
    assert len(dl.tree.vertices) == 1
    H = dl.gog.vertex_groupoid["v1"]
    assert len(H.units) == 2 and set(H.morphisms) == set(H.units)


def test_desingularization_shapes():
    d = desing("seg")
    assert d.upsilon_plus() == [] and d.gamma == d.tree
    dl = desing("loop")
    assert dl.upsilon_plus() == ["f1_v1_v1"]
    P = window("loop").acting
    assert all(P.length(h) == 1 for h in dl.conjugators["f1_v1_v1"].values())
    dz = desing("zline")
    assert len(dz.gamma.vertices) == 1 and len(dz.upsilon_plus()) == 1
    assert all(len(H.morphisms) == 1 for H in dz.gog.edge_groupoid.values())


@pytest.mark.parametrize("name", ["seg", "loop", "amal", "chain", "zline"])
def test_fixture_desingularizations_valid(name):
    rep = validate_desingularization(desing(name), window(name))
    assert rep.ok, rep.summary()


def test_missing_edge_orbit_fails_iv():
    d = desing("loop")
    a = window("loop")
    f = d.upsilon_plus()[0]
    sec = d.edge_sections[f]
    x = sorted(sec.values)[0]
    smaller = PartialSection({k: v for k, v in sec.values.items() if k != x}, "edge")
    bad = Desingularization(d.gog, d.tree_of_reps, {f: smaller}, d.conjugators, d.elements, d.notes)
    rep = validate_desingularization(bad, a)
    assert rep.errors["iv"]


def test_wrong_source_conjugator_fails_ii():
    d = desing("loop")
    a = window("loop")
    P = a.acting
    f = d.upsilon_plus()[0]
    fam = dict(d.conjugators[f])
    x, h = sorted(fam.items(), key=lambda kv: str(kv[0]))[0]
    wrong = next(g for g in a.elements if P.src(g) != x)
    fam[x] = wrong
    bad = Desingularization(d.gog, d.tree_of_reps, d.edge_sections, {f: fam}, d.elements, d.notes)
    rep = validate_desingularization(bad, a)
    assert rep.errors["ii"]


@settings(max_examples=80)
@given(st.integers(0, 10**6))
def test_section_family_property(seed):
    a = random_action(seed)
    fam = build_section_family(a)
    assert section_family_errors(a, fam) == []
    sats = [saturation_bruteforce(a, s.values.values()) for s in fam.sections]
    for i in range(len(sats)):
        for k in range(i + 1, len(sats)):
            assert not sats[i] & sats[k]
    units = {a.phi(v) for v in a.graph.vertices}
    for s in fam.sections:
        assert set(s.values) <= units
    assert set(fam.sections[0].values) == units
    assert set().union(*sats) == set(a.graph.vertices)
    tor = build_tree_of_representatives(a, fam)
    assert all(is_tree(T) for T in tor.stages)


@settings(max_examples=80)
@given(st.integers(0, 10**6))
def test_desingularization_property(seed):
    a = random_action(seed)
    d = build_desingularization(a)
    rep = validate_desingularization(d, a)
    assert rep.ok, rep.summary()
    for H in list(d.gog.vertex_groupoid.values()) + list(d.gog.edge_groupoid.values()):
        assert validate_groupoid(H) == []
    # edge partition recomputed with the brute-force orbit oracle
    covered = []
    for e in d.gamma.edges:
        sec, is_bar = d.section_of(e)
        pts = [a.graph.bar[f] for f in sec.values.values()] if is_bar else list(sec.values.values())
        covered.append(saturation_bruteforce(a, pts, "edge"))
    assert sum(map(len, covered)) == len(a.graph.edges)
    assert set().union(*covered) == set(a.graph.edges)


def test_round_trip_idempotence():
    from bsgroupoid.forest import BassSerreForest, ForestBallAction
    from bsgroupoid.structure import recovered_isomorphisms
    from bsgroupoid.words import Pi1
    for name in ("seg", "loop"):
        d = desing(name)
        a2 = ForestBallAction(BassSerreForest(Pi1(d.gog)), 4, 3)
        d2 = build_desingularization(a2)
        originals = {f"G_{v}": H for v, H in d.gog.vertex_groupoid.items()}
        originals.update({f"G_{e}": H for e, H in d.gog.edge_groupoid.items()})
        assert all(recovered_isomorphisms(d2, originals).values()), name
