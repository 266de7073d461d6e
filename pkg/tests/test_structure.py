import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from bsgroupoid.actions import graph_action_from_table
from bsgroupoid.builders import random_forest_action
from bsgroupoid.desing import Desingularization, build_desingularization
from bsgroupoid.structure import (PsiGraph, StructureError, build_psi, check_psi_strong, check_structure_theorem,
                                  relation_errors, strong_witness)

from conftest import desing, forest, window


@pytest.mark.parametrize("name", ["seg", "loop", "amal", "chain", "zline"])
def test_full_certificate(name):
    cert = check_structure_theorem(desing(name), window(name), 4, 3)
    assert cert["pass"], cert
    assert cert["radii"]["word"] == 4 and cert["radii"]["ball"] == 3


def test_psi_on_generators_seg():
    d = desing("seg")
    psi = build_psi(d, window("seg").acting)
    for m in d.gog.vertex_groupoid["v1"].morphisms:
        assert psi.letter(("g", "v1", m)) == d.elements[m]
    assert {psi.letter(("g", "v1", m)).text for m in d.gog.vertex_groupoid["v1"].morphisms} == {
        "a_v", "a_v^-1", "id_u1", "id_u2"}
    tree_e = [e for e in d.tree.edges][0]
    o = d.gamma.origin[tree_e]
    for x in d.gog.vertex_groupoid[o].units:
        assert psi.acting.is_unit(psi.letter(("e", tree_e, x)))
    assert relation_errors(psi) == []


def test_psi_loop_letter_is_conjugator():
    d = desing("loop")
    psi = build_psi(d, window("loop").acting)
    f = d.upsilon_plus()[0]
    for y in d.gog.vertex_groupoid["v1"].units:
        assert psi.letter(("e", f, y)) == d.conjugators[f][psi.unit_of(y)]
        inv = psi.letter(("e", f + "bar", psi.pi1.phi[f][y]))
        assert psi.acting.is_unit(psi.acting.mul(inv, psi.letter(("e", f, y))))


@pytest.mark.parametrize("name", ["seg", "loop"])
def test_psi_strong(name):
    d = desing(name)
    assert check_psi_strong(build_psi(d, window(name).acting), 4) is None


def test_adversarial_collapse_not_strong():
    d = desing("seg")
    G = window("seg").acting
    psi = build_psi(d, G)
    u = G.unit(G.units[0])
    collapse = lambda p: u  # every element to one unit
    w = strong_witness(collapse, psi.pi1, G, psi.pi1.all_balls(2))
    assert w is not None and not psi.pi1.composable(*w)


def test_psi_graph_on_root_vertices():
    d = desing("seg")
    a = window("seg", 4, 3)
    psi = build_psi(d, a.acting)
    PG = PsiGraph(psi, a)
    X = PG.X
    for y in d.gog.vertex_groupoid["v1"].units:
        x = psi.unit_of(y)
        V = X.root_vertex(psi.pi1.tau[("v1", y)])
        assert PG.vertex(V) == d.vertex_sections["v1"].values[x]


def test_corrupted_conjugator_fails_star_clause():
    d = desing("loop")
    a = window("loop")
    P = a.acting
    f = d.upsilon_plus()[0]
    fam = dict(d.conjugators[f])
    x = sorted(fam, key=str)[0]
    h = fam[x]
    fam[x] = next(g for g in a.elements if P.src(g) == P.src(h) and P.rng(g) == P.rng(h) and g != h)
    bad = Desingularization(d.gog, d.tree_of_reps, d.edge_sections, {f: fam}, d.elements, d.notes)
    cert = check_structure_theorem(bad, a, 4, 3)
    assert not cert["pass"]
    star = cert["clauses"]["star_bijections"]
    assert not star["pass"] and star["witness"].startswith("star of")


def test_non_wide_refused():
    for seed in range(200):
        a = graph_action_from_table(random_forest_action(random.Random(seed)))
        d = build_desingularization(a)
        if any("not wide" in n for n in d.notes):
            with pytest.raises(StructureError):
                build_psi(d, a.acting)
            cert = check_structure_theorem(d, a, 2, 2)
            assert not cert["pass"]
            return
    pytest.skip("no non-wide instance among the seeds")


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_random_wide_actions_certify(seed):
    a = graph_action_from_table(random_forest_action(random.Random(seed)))
    d = build_desingularization(a)
    assume(not any("not wide" in n for n in d.notes))
    cert = check_structure_theorem(d, a, 3, 2)
    assert cert["pass"], {k: v for k, v in cert["clauses"].items() if not v["pass"]}
