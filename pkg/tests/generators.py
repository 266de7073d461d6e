"""Random instance generators shared by the property tests and the acceptance suite."""
import random

from bsgroupoid.actions import graph_action_from_table
from bsgroupoid.builders import random_forest_action, random_groupoid
from bsgroupoid.groupoid import ConjugationFamily, Subgroupoid, generated_subgroupoid


def random_admissible(rnd: random.Random, G):
    nonunits = [g for g in G.morphisms if not G.is_unit(g)]
    S = set(rnd.sample(nonunits, rnd.randint(0, len(nonunits)))) if nonunits else set()
    return sorted(S | {G.inv(s) for s in S})


def random_conjugation_instance(rnd: random.Random):
    """A random subgroupoid with a family g_x (src x) whose ranges are distinct."""
    while True:
        G = random_groupoid(rnd, 8)
        gens = rnd.sample(list(G.morphisms), rnd.randint(1, min(3, len(G.morphisms))))
        dom = Subgroupoid(G, generated_subgroupoid(G, gens))
        fam, used = {}, set()
        for x in dom.units():
            cands = [g for g in G.morphisms if G.src(g) == x and G.rng(g) not in used]
            if not cands:
                break
            fam[x] = rnd.choice(cands)
            used.add(G.rng(fam[x]))
        else:
            return ConjugationFamily(G, dom, fam)


def random_action(seed: int):
    return graph_action_from_table(random_forest_action(random.Random(seed)))


def serre_reduced_words(P, rnd: random.Random, count: int, max_edges: int = 6):
    """Rejection-sample Serre-reduced words with at least one edge letter."""
    out = []
    while len(out) < count:
        w = P.random_word(rnd, rnd.randint(1, max_edges))
        if P.is_serre_reduced(w):
            out.append(w)
    return out
