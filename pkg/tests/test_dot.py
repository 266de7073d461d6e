import re

from bsgroupoid.actions import cayley_graph
from bsgroupoid.dot import cayley_to_dot, desing_to_dot, forest_ball_to_dot
from bsgroupoid.io import load_fixture

from conftest import desing, forest

NODE = re.compile(r'^\s+"(.+?)" \[label=".*?", fillcolor="(.+?)"\];$')
EDGE = re.compile(r'^\s+"(.+?)" -> "(.+?)" \[(.*)\];$')


def parse(text):
    nodes, edges = {}, []
    for line in text.splitlines():
        m = NODE.match(line)
        if m:
            nodes[m.group(1)] = m.group(2)
            continue
        m = EDGE.match(line)
        if m:
            edges.append((m.group(1), m.group(2), m.group(3)))
    return nodes, edges


def test_seg_forest_dot_is_two_colored_path():
    F = forest("seg")
    ball = F.expand_ball(F.parse_vertex("u1@v"), 3)
    nodes, edges = parse(forest_ball_to_dot(ball, F))
    assert len(nodes) == 7 and len(edges) == 6
    assert len(set(nodes.values())) == 2
    assert all(nodes[a] != nodes[b] for a, b, _ in edges)
    deg = {v: 0 for v in nodes}
    for a, b, _ in edges:
        deg[a] += 1
        deg[b] += 1
    assert sorted(deg.values()) == [1, 1, 2, 2, 2, 2, 2]


def test_desing_dot_styles():
    nodes, edges = parse(desing_to_dot(desing("loop")))
    assert list(nodes) == ["v1"]
    assert [e[2] for e in edges] == ['label="f1_v1_v1", style=dashed']
    nodes, edges = parse(desing_to_dot(desing("seg")))
    assert len(nodes) == 2 and "style=bold" in edges[0][2]


def test_cayley_dot():
    Gv = load_fixture("seg").groupoids["G_v"]
    g, fib = cayley_graph(Gv, ["a_v", "a_v^-1"])
    nodes, edges = parse(cayley_to_dot(g, fib))
    assert set(nodes) == set(Gv.morphisms) and len(edges) == len(g.edges) // 2
