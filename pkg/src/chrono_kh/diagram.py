"""Oriented link diagrams given as PD codes.

A crossing is a 4-tuple of edge labels read counterclockwise, starting at the
incoming under-strand.  Positions 0..3 are the half-edges of the crossing and
corner q is the sector between positions q and q+1.  The 0-smoothing joins
positions (0,1) and (2,3); the 1-smoothing joins (1,2) and (3,0).  The saddle
chord at a crossing runs between the two 0-smoothing arcs, i.e. from corner 0
to corner 2; arrow bit 0 puts its tail at corner 0.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

__all__ = [
    "PdError",
    "PdCode",
    "LinkDiagram",
    "parse_pd",
    "parse_diagram",
    "make_diagram",
    "mirror",
    "reverse_component",
    "linking_number",
    "flip_crossing",
    "flip_arrow",
    "smooth",
    "relabel",
    "disjoint_union",
    "braid_closure",
    "orient_to_signs",
]


class PdError(ValueError):
    """Malformed or inconsistent diagram input."""


@dataclass(frozen=True)
class PdCode:
    crossings: Tuple[Tuple[int, int, int, int], ...]
    free_circles: int = 0

    def __len__(self):
        return len(self.crossings)

    def to_text(self) -> str:
        body = ",".join("X[" + ",".join(map(str, c)) + "]" for c in self.crossings)
        return f"PD[{body}]"

    def to_json(self) -> dict:
        return {"pd": [list(c) for c in self.crossings], "free_circles": self.free_circles}


_X_RE = re.compile(r"X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def _parse_text(text: str):
    s = text.strip()
    arrows = None
    free = 0
    if s.startswith("{") or s.startswith("["):
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise PdError(f"malformed JSON diagram: {exc.msg}") from None
        if isinstance(obj, list):
            obj = {"pd": obj}
        if not isinstance(obj, dict) or "pd" not in obj:
            raise PdError("JSON diagram needs a 'pd' field")
        quads = obj["pd"]
        if not isinstance(quads, list) or not all(
            isinstance(q, list) and len(q) == 4 and all(isinstance(v, int) and not isinstance(v, bool) for v in q)
            for q in quads
        ):
            raise PdError("'pd' must be a list of integer quadruples")
        free = obj.get("free_circles", 0)
        if not isinstance(free, int) or free < 0:
            raise PdError("'free_circles' must be a non-negative integer")
        arrows = obj.get("arrows")
        if arrows is not None:
            if not isinstance(arrows, list) or len(arrows) != len(quads) or any(a not in (0, 1) for a in arrows):
                raise PdError("'arrows' must list one 0/1 value per crossing")
            arrows = tuple(arrows)
        return tuple(tuple(q) for q in quads), free, arrows
    if not s.startswith("PD[") or not s.endswith("]"):
        raise PdError("expected PD[X[...],...] or a JSON object")
    inner = s[3:-1].strip()
    quads = []
    pos = 0
    while pos < len(inner):
        m = _X_RE.match(inner, pos)
        if not m:
            raise PdError(f"malformed crossing near {inner[pos:pos + 12]!r}")
        quads.append(tuple(int(g) for g in m.groups()))
        pos = m.end()
        while pos < len(inner) and inner[pos] in " \t\n":
            pos += 1
        if pos < len(inner):
            if inner[pos] != ",":
                raise PdError(f"expected ',' near {inner[pos:pos + 12]!r}")
            pos += 1
            while pos < len(inner) and inner[pos] in " \t\n":
                pos += 1
    # PD[] alone stands for a single round circle
    if not quads:
        free = 1
    return tuple(quads), free, arrows


def parse_pd(text: str) -> PdCode:
    quads, free, _ = _parse_text(text)
    pd = PdCode(quads, free)
    _analyse(pd)
    return pd


def parse_diagram(text: str) -> "LinkDiagram":
    quads, free, arrows = _parse_text(text)
    return make_diagram(PdCode(quads, free), arrows)


@dataclass(frozen=True)
class _Analysis:
    over_in: Tuple[int, ...]          # position (1 or 3) where the over strand enters
    components: Tuple[Tuple[int, ...], ...]  # edge labels in traversal order
    edge_comp: Dict[int, int]
    under_only_free: Tuple[int, ...]  # components never passing under (by index)
    occ: Dict[int, Tuple[Tuple[int, int], Tuple[int, int]]]
    edge_tail: Dict[int, Tuple[int, int]]   # half-edge where the edge leaves a crossing
    edge_head: Dict[int, Tuple[int, int]]   # half-edge where it enters one


def _analyse(pd: PdCode, reversed_free: FrozenSet[int] = frozenset()) -> _Analysis:
    occ: Dict[int, List[Tuple[int, int]]] = {}
    for x, quad in enumerate(pd.crossings):
        for p, lab in enumerate(quad):
            if lab <= 0:
                raise PdError(f"edge label {lab} at crossing {x} is not positive")
            occ.setdefault(lab, []).append((x, p))
    for lab in sorted(occ):
        if len(occ[lab]) != 2:
            raise PdError(f"edge label {lab} occurs {len(occ[lab])} times (expected 2)")
    occ2 = {lab: (v[0], v[1]) for lab, v in occ.items()}

    def other_end(lab, here):
        a, b = occ2[lab]
        return b if a == here else a

    seen = set()
    components = []
    edge_comp: Dict[int, int] = {}
    dirs: Dict[int, Tuple[Tuple[int, int], Tuple[int, int]]] = {}
    over_only = []
    for start in sorted(occ2):
        if start in seen:
            continue
        # walk the strand cycle containing this edge, in an arbitrary direction
        cyc = []  # (edge, tail half-edge, head half-edge)
        lab = start
        tail = occ2[start][0]
        while True:
            head = other_end(lab, tail)
            cyc.append((lab, tail, head))
            x, p = head
            nxt_tail = (x, (p + 2) % 4)
            lab = pd.crossings[x][(p + 2) % 4]
            tail = nxt_tail
            if lab == start and tail == cyc[0][1]:
                break
            if len(cyc) > 2 * len(occ2) + 2:
                raise PdError(f"strand tracing does not close through edge {start}")
        # orientation: entering an under-strand must happen at position 0
        forward = None
        for lab, tl, hd in cyc:
            if hd[1] == 0:
                want = True
            elif hd[1] == 2:
                want = False
            else:
                continue
            if forward is None:
                forward = want
            elif forward != want:
                raise PdError(f"inconsistent strand orientation at edge {lab}")
        labels = [c[0] for c in cyc]
        if len(set(labels)) != len(labels):
            raise PdError(f"edge {labels[0]} is traversed twice by one strand")
        if forward is None:
            over_only.append(len(components))
            forward = _default_over_direction(cyc)
            if min(labels) in reversed_free:
                forward = not forward
        if not forward:
            cyc = [(lab, hd, tl) for lab, tl, hd in reversed(cyc)]
        ci = len(components)
        components.append(tuple(c[0] for c in cyc))
        for lab, tl, hd in cyc:
            seen.add(lab)
            edge_comp[lab] = ci
            dirs[lab] = (tl, hd)

    over_in = []
    for x, quad in enumerate(pd.crossings):
        heads = {p for p in range(4) if dirs[quad[p]][1] == (x, p)}
        tails = {p for p in range(4) if dirs[quad[p]][0] == (x, p)}
        if heads == {0, 3} and tails == {1, 2}:
            over_in.append(3)
        elif heads == {0, 1} and tails == {2, 3}:
            over_in.append(1)
        else:
            raise PdError(f"crossing {x} {list(quad)} does not start at an incoming under-strand")
    _check_planar(pd)
    return _Analysis(
        over_in=tuple(over_in),
        components=tuple(components),
        edge_comp=edge_comp,
        under_only_free=tuple(over_only),
        occ=occ2,
        edge_tail={lab: d[0] for lab, d in dirs.items()},
        edge_head={lab: d[1] for lab, d in dirs.items()},
    )


def _default_over_direction(cyc) -> bool:
    # a strand that never goes under carries no orientation in the PD tuples;
    # follow increasing labels from its smallest edge
    labels = [c[0] for c in cyc]
    if len(labels) == 1:
        return cyc[0][2][1] == 3
    i = labels.index(min(labels))
    return labels[(i + 1) % len(labels)] <= labels[(i - 1) % len(labels)]


def corner_faces(pd: PdCode) -> Dict[Tuple[int, int], int]:
    """Map each corner (crossing, q) to a face id of the planar map."""
    occ: Dict[int, List[Tuple[int, int]]] = {}
    for x, quad in enumerate(pd.crossings):
        for p, lab in enumerate(quad):
            occ.setdefault(lab, []).append((x, p))
    face_of: Dict[Tuple[int, int], int] = {}
    fid = 0
    for x in range(len(pd.crossings)):
        for q in range(4):
            if (x, q) in face_of:
                continue
            cur = (x, q)
            while cur not in face_of:
                face_of[cur] = fid
                cx, cq = cur
                out = (cx, (cq + 1) % 4)
                lab = pd.crossings[cx][out[1]]
                a, b = occ[lab]
                arr = b if a == out else a
                cur = arr
            fid += 1
    return face_of


def _pieces(pd: PdCode) -> List[List[int]]:
    n = len(pd.crossings)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    where: Dict[int, int] = {}
    for x, quad in enumerate(pd.crossings):
        for lab in quad:
            if lab in where:
                parent[find(x)] = find(where[lab])
            else:
                where[lab] = x
    groups: Dict[int, List[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return list(groups.values())


def _check_planar(pd: PdCode):
    if not pd.crossings:
        return
    faces = corner_faces(pd)
    for piece in _pieces(pd):
        fs = {faces[(x, q)] for x in piece for q in range(4)}
        # V - E + F = 2 with E = 2V for a 4-valent map on the sphere
        if len(fs) != len(piece) + 2:
            raise PdError("rotation data is not a planar map")


def checkerboard(pd: PdCode) -> Dict[Tuple[int, int], int]:
    """Colour corners 0 (white) / 1 (black); the largest face of each piece is white."""
    faces = corner_faces(pd)
    colour: Dict[Tuple[int, int], int] = {}
    by_face: Dict[int, List[Tuple[int, int]]] = {}
    for c, f in faces.items():
        by_face.setdefault(f, []).append(c)
    for piece in _pieces(pd):
        base = {piece[0]: 0}
        stack = [piece[0]]
        # crossing offsets c_x with colour(x, q) = c_x + q mod 2
        while stack:
            x = stack.pop()
            for q in range(4):
                col = (base[x] + q) & 1
                for (y, r) in by_face[faces[(x, q)]]:
                    want = (col - r) & 1
                    if y not in base:
                        base[y] = want
                        stack.append(y)
                    elif base[y] != want:
                        raise PdError("diagram regions admit no checkerboard colouring")
        pf = {}
        for x in piece:
            for q in range(4):
                pf.setdefault(faces[(x, q)], []).append((x, q))
        outer = max(pf, key=lambda f: (len(pf[f]), -f))
        flip = (base[pf[outer][0][0]] + pf[outer][0][1]) & 1
        for x in piece:
            for q in range(4):
                colour[(x, q)] = (base[x] + q + flip) & 1
    return colour


@dataclass(frozen=True)
class LinkDiagram:
    pd: PdCode
    arrows: Tuple[int, ...]
    crossing_signs: Tuple[int, ...]
    over_in: Tuple[int, ...]
    components: Tuple[Tuple[int, ...], ...]
    edge_comp: Dict[int, int] = field(compare=False, hash=False, repr=False)
    reversed_free: FrozenSet[int] = frozenset()

    @property
    def n_crossings(self) -> int:
        return len(self.pd.crossings)

    @property
    def free_circles(self) -> int:
        return self.pd.free_circles

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.crossing_signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.crossing_signs if s < 0)

    @property
    def writhe(self) -> int:
        return sum(self.crossing_signs)

    @property
    def n_components(self) -> int:
        return len(self.components) + self.pd.free_circles

    def component_of_strand(self, x: int, under: bool) -> int:
        quad = self.pd.crossings[x]
        return self.edge_comp[quad[0] if under else quad[1]]

    def to_json(self) -> dict:
        d = self.pd.to_json()
        d["arrows"] = list(self.arrows)
        return d

    def with_arrows(self, arrows: Sequence[int]) -> "LinkDiagram":
        arrows = tuple(int(a) for a in arrows)
        if len(arrows) != self.n_crossings or any(a not in (0, 1) for a in arrows):
            raise PdError("need one 0/1 arrow value per crossing")
        return replace(self, arrows=arrows)


def make_diagram(pd: PdCode, arrows: Optional[Sequence[int]] = None,
                 reversed_free: FrozenSet[int] = frozenset()) -> LinkDiagram:
    info = _analyse(pd, reversed_free)
    if arrows is None:
        arrows = (0,) * len(pd.crossings)
    arrows = tuple(arrows)
    if len(arrows) != len(pd.crossings):
        raise PdError("need one arrow value per crossing")
    signs = tuple(1 if o == 3 else -1 for o in info.over_in)
    return LinkDiagram(
        pd=pd,
        arrows=arrows,
        crossing_signs=signs,
        over_in=info.over_in,
        components=info.components,
        edge_comp=info.edge_comp,
        reversed_free=reversed_free & {min(c) for c in info.components},
    )


def _rotate(quad, s):
    # new position k holds old position k + s
    return tuple(quad[(k + s) % 4] for k in range(4))


def _reanchor(arrow: int, s: int, white_centre: bool) -> int:
    """Arrow bit after turning a crossing over; s as in _rotate."""
    tail = 0 if arrow == 0 else 2
    tail = (tail + (1 if white_centre else -1)) % 4
    return 0 if (tail - s) % 4 == 0 else 1


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Swap over and under at every crossing; arrows turn in checkerboard fashion."""
    if not d.pd.crossings:
        return d
    colour = checkerboard(d.pd)
    quads, arrows = [], []
    for x, quad in enumerate(d.pd.crossings):
        s = -1 if d.over_in[x] == 3 else 1
        quads.append(_rotate(quad, s))
        arrows.append(_reanchor(d.arrows[x], s, colour[(x, 1)] == 0))
    signs = [-e for e in d.crossing_signs]
    return orient_to_signs(PdCode(tuple(quads), d.pd.free_circles), signs, arrows)


def flip_crossing(d: LinkDiagram, x: int) -> LinkDiagram:
    """Crossing change at one crossing."""
    colour = checkerboard(d.pd)
    quads = list(d.pd.crossings)
    arrows = list(d.arrows)
    s = -1 if d.over_in[x] == 3 else 1
    quads[x] = _rotate(quads[x], s)
    arrows[x] = _reanchor(arrows[x], s, colour[(x, 1)] == 0)
    signs = list(d.crossing_signs)
    signs[x] = -signs[x]
    return orient_to_signs(PdCode(tuple(quads), d.pd.free_circles), signs, arrows)


def flip_arrow(d: LinkDiagram, x: int) -> LinkDiagram:
    arrows = list(d.arrows)
    arrows[x] ^= 1
    return replace(d, arrows=tuple(arrows))


def reverse_component(d: LinkDiagram, comp: int) -> LinkDiagram:
    """Reverse the orientation of PD component ``comp`` (index into d.components)."""
    if not 0 <= comp < len(d.components):
        raise PdError(f"no component {comp}")
    edges = set(d.components[comp])
    quads, arrows = [], []
    for x, quad in enumerate(d.pd.crossings):
        if quad[0] in edges:
            quads.append(_rotate(quad, 2))
            arrows.append(d.arrows[x] ^ 1)
        else:
            quads.append(quad)
            arrows.append(d.arrows[x])
    signs = []
    for x, quad in enumerate(d.pd.crossings):
        mixed = (quad[0] in edges) != (quad[1] in edges)
        signs.append(-d.crossing_signs[x] if mixed else d.crossing_signs[x])
    return orient_to_signs(PdCode(tuple(quads), d.pd.free_circles), signs, arrows)


def linking_number(d: LinkDiagram, comp: int) -> int:
    """lk(component, rest): half the signed count of crossings between them."""
    total = 0
    for x, quad in enumerate(d.pd.crossings):
        a = d.edge_comp[quad[0]] == comp
        b = d.edge_comp[quad[1]] == comp
        if a != b:
            total += d.crossing_signs[x]
    if total % 2:
        raise PdError("odd crossing count between components")
    return total // 2


def smooth(d: LinkDiagram, x: int) -> LinkDiagram:
    """Oriented smoothing of crossing x, kept as a diagram with one fewer crossing."""
    quad = d.pd.crossings[x]
    if d.over_in[x] == 3:
        pairs = ((0, 1), (3, 2))
    else:
        pairs = ((0, 3), (1, 2))
    parent: Dict[int, int] = {}

    def find(a):
        while parent.get(a, a) != a:
            a = parent[a]
        return a

    for p, r in pairs:
        a, b = find(quad[p]), find(quad[r])
        if a != b:
            parent[max(a, b)] = min(a, b)
    rest = [q for i, q in enumerate(d.pd.crossings) if i != x]
    arrows = [a for i, a in enumerate(d.arrows) if i != x]
    used = {find(lab) for q in rest for lab in q}
    classes = {find(lab) for lab in quad}
    free = d.pd.free_circles + sum(1 for c in classes if c not in used)
    new = tuple(tuple(find(lab) for lab in q) for q in rest)
    pd = relabel_compact(PdCode(new, free))
    signs = [e for i, e in enumerate(d.crossing_signs) if i != x]
    return orient_to_signs(pd, signs, arrows)


def relabel_compact(pd: PdCode) -> PdCode:
    labels = sorted({lab for q in pd.crossings for lab in q})
    m = {lab: i + 1 for i, lab in enumerate(labels)}
    return PdCode(tuple(tuple(m[lab] for lab in q) for q in pd.crossings), pd.free_circles)


def relabel(d: LinkDiagram, mapping: Dict[int, int]) -> LinkDiagram:
    pd = PdCode(tuple(tuple(mapping.get(lab, lab) for lab in q) for q in d.pd.crossings), d.pd.free_circles)
    return make_diagram(pd, d.arrows)


def disjoint_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    off = max([lab for q in d1.pd.crossings for lab in q], default=0)
    quads = d1.pd.crossings + tuple(tuple(lab + off for lab in q) for q in d2.pd.crossings)
    pd = PdCode(quads, d1.pd.free_circles + d2.pd.free_circles)
    return make_diagram(pd, d1.arrows + d2.arrows)


def braid_closure(word: Sequence[int], strands: Optional[int] = None) -> LinkDiagram:
    """Closure of a braid word; k means sigma_k, -k its inverse.

    sigma_k is positive: the strand running from bottom-left to top-right
    passes over.  Strands never touched by the word become free circles.
    """
    word = [int(g) for g in word]
    if any(g == 0 for g in word):
        raise PdError("braid generators are nonzero integers")
    n = strands if strands is not None else max([abs(g) for g in word], default=0) + 1
    if word and max(abs(g) for g in word) >= n:
        raise PdError(f"generator out of range for {n} strands")
    cur = list(range(1, n + 1))
    start = list(cur)
    nxt = n + 1
    quads = []
    for g in word:
        p = abs(g) - 1
        sw, se = cur[p], cur[p + 1]
        nw, ne = nxt, nxt + 1
        nxt += 2
        if g > 0:
            quads.append([se, ne, nw, sw])
        else:
            quads.append([sw, se, ne, nw])
        cur[p], cur[p + 1] = nw, ne
    ident = {cur[k]: start[k] for k in range(n) if cur[k] != start[k]}
    free = sum(1 for k in range(n) if cur[k] == start[k])
    quads = [tuple(ident.get(lab, lab) for lab in q) for q in quads]
    pd = relabel_compact(PdCode(tuple(quads), free))
    return orient_to_signs(pd, [1 if g > 0 else -1 for g in word])


def orient_to_signs(pd: PdCode, signs: Sequence[int], arrows: Optional[Sequence[int]] = None) -> LinkDiagram:
    """Diagram on ``pd`` whose over-only components are directed so that the
    crossing signs come out as ``signs``."""
    want = tuple(signs)
    d = make_diagram(pd, arrows)
    if d.crossing_signs == want:
        return d
    flip = set()
    for comp in d.components:
        es = set(comp)
        if any(q[0] in es for q in pd.crossings):
            continue
        x = next(k for k, q in enumerate(pd.crossings) if q[1] in es)
        if d.crossing_signs[x] != want[x]:
            flip.add(min(comp))
    d = make_diagram(pd, arrows, reversed_free=frozenset(flip))
    if d.crossing_signs != want:
        raise PdError("requested crossing signs are not realisable on this PD code")
    return d
