"""State-sum evaluation of the graded Euler characteristic.

Kept apart from the cube code on purpose: circles are counted here with a
plain union-find over edge labels, so a tracing bug in the cube cannot hide
in both places.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .coeff import Laurent
from .diagram import LinkDiagram

__all__ = ["state_sum", "count_circles", "UnionFind"]


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def count(self) -> int:
        return sum(1 for x in self.parent if self.find(x) == x)


def count_circles(crossings: Sequence[Sequence[int]], state: int, free: int = 0) -> int:
    """Circles of the smoothing where bit k of ``state`` resolves crossing k.

    0 joins the strands (a,b) and (c,d) of X[a,b,c,d]; 1 joins (b,c) and (d,a).
    """
    labels = {lab for x in crossings for lab in x}
    uf = UnionFind(labels)
    for k, (a, b, c, d) in enumerate(crossings):
        if state >> k & 1:
            uf.union(b, c)
            uf.union(d, a)
        else:
            uf.union(a, b)
            uf.union(c, d)
    return uf.count() + free


def state_sum(d: LinkDiagram) -> Laurent:
    """(-1)^{n-} q^{n+ - 2n-} sum over states of (-1)^r q^r (q + 1/q)^{circles}."""
    crossings: List[Tuple[int, ...]] = [tuple(x) for x in d.pd.crossings]
    n = len(crossings)
    by_weight_circles: Dict[Tuple[int, int], int] = {}
    for s in range(1 << n):
        key = (bin(s).count("1"), count_circles(crossings, s, d.pd.free_circles))
        by_weight_circles[key] = by_weight_circles.get(key, 0) + 1
    loop = Laurent({1: 1, -1: 1})
    total = Laurent()
    for (r, k), mult in sorted(by_weight_circles.items()):
        total = total + Laurent({r: (-1) ** r * mult}) * loop ** k
    nplus, nminus = d.n_plus, d.n_minus
    return Laurent({nplus - 2 * nminus: (-1) ** nminus}) * total
