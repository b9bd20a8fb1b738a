"""Diagrams shared by the test suites."""

import random
from functools import lru_cache

from chrono_kh.diagram import PdCode, braid_closure, mirror, orient_to_signs, parse_diagram

LEFT_TREFOIL = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"
FIGURE_EIGHT = "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]"
STEVEDORE = "PD[X[1,4,2,5],X[7,10,8,11],X[3,9,4,8],X[9,3,10,2],X[5,12,6,1],X[11,6,12,7]]"
HOPF_NEG = "PD[X[4,1,3,2],X[2,3,1,4]]"

SEED = 20240607


def named():
    lt = parse_diagram(LEFT_TREFOIL)
    return {
        "unknot_0": parse_diagram("PD[]"),
        "unknot_kink_pos": parse_diagram("PD[X[1,1,2,2]]"),
        "unknot_kink_neg": parse_diagram("PD[X[1,2,2,1]]"),
        "unknot_2": braid_closure([1, 2]),
        "unknot_r2": braid_closure([1, 1, -1]),
        "unknot_3": braid_closure([1, -2, 3]),
        "trefoil_left": lt,
        "trefoil_right": mirror(lt),
        "figure_eight": parse_diagram(FIGURE_EIGHT),
        "hopf_neg": parse_diagram(HOPF_NEG),
        "hopf_pos": braid_closure([1, 1]),
        "knot_6_1": parse_diagram(STEVEDORE),
    }


def scramble(d, rng):
    """Same diagram with shuffled crossings and spread-out edge labels."""
    n = d.n_crossings
    order = list(range(n))
    rng.shuffle(order)
    labels = sorted({lab for q in d.pd.crossings for lab in q})
    fresh = sorted(rng.sample(range(1, 10 * len(labels) + 1), len(labels)))
    m = dict(zip(labels, fresh))
    quads = tuple(tuple(m[lab] for lab in d.pd.crossings[k]) for k in order)
    signs = [d.crossing_signs[k] for k in order]
    arrows = [rng.randint(0, 1) for _ in range(n)]
    return orient_to_signs(PdCode(quads, d.pd.free_circles), signs, arrows)


def random_words(count=20, seed=SEED):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        strands = rng.randint(2, 4)
        length = rng.randint(strands - 1, 8)
        w = [rng.choice([1, -1]) * rng.randint(1, strands - 1) for _ in range(length)]
        out.append((w, strands))
    return out


@lru_cache(maxsize=None)
def random_diagrams():
    rng = random.Random(SEED + 1)
    return tuple(scramble(braid_closure(w, s), rng) for w, s in random_words())


@lru_cache(maxsize=None)
def corpus():
    out = dict(named())
    for k, d in enumerate(random_diagrams()):
        out[f"random_{k:02d}"] = d
    return out


def reidemeister_pairs():
    """(move, before, after) with the two diagrams one move apart."""
    return [
        ("R1", parse_diagram("PD[]"), parse_diagram("PD[X[1,1,2,2]]")),
        ("R1", braid_closure([1, 1, 1]), braid_closure([1, 1, 1, 2])),
        ("R1", braid_closure([-1, -1, -1]), braid_closure([-1, -1, -1, -2])),
        ("R2", braid_closure([1, 1, 1, 2]), braid_closure([1, 2, -2, 1, 1, 2])),
        ("R2", braid_closure([1, -2, 1, -2]), braid_closure([1, -2, 2, -2, 1, -2])),
        ("R3", braid_closure([1, 2, 1, 3, -2], 4), braid_closure([2, 1, 2, 3, -2], 4)),
        ("R3", braid_closure([-1, -2, -1, 2, 2]), braid_closure([-2, -1, -2, 2, 2])),
    ]
