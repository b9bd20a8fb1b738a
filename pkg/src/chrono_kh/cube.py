"""Cube of resolutions with saddle arrows, face types, psi and sign assignments.

Vertices are ints with bit i holding the resolution of crossing i.  Edges are
pairs (v, i) with bit i of v clear; faces are (v, i, j) with i < j and both
bits clear.  For a face, path A performs the saddle at i first and path B the
one at j first; the face value psi satisfies  B = psi * A  for the linearised
maps.  A sign assignment eps solves d(eps) = -psi where

    d(eps)(v, i, j) = eps(v,i) eps(v+e_i, j) / (eps(v,j) eps(v+e_j, i)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from .coeff import MERGE, SPLIT, UNIT_ONE, UNIT_X, UNIT_Y, UNIT_Z, Bidegree, UnitMonomial, lam
from .diagram import LinkDiagram

__all__ = [
    "Vertex",
    "Resolution",
    "EdgeCobordism",
    "FaceClass",
    "Cube",
    "CubeError",
    "resolve",
    "edge_cobordism",
    "classify_face",
    "psi",
    "sign_assignment",
    "verify_cocycle",
    "verify_face_equation",
    "face_coboundary",
    "bits_str",
]

SMOOTHING = {0: ((0, 1), (2, 3)), 1: ((1, 2), (3, 0))}


class CubeError(RuntimeError):
    """An internal invariant of the cube failed (reported with its locus)."""


def bits_str(v: int, n: int) -> str:
    return "".join("1" if v >> i & 1 else "0" for i in range(n))


def weight(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class Vertex:
    bits: int
    n: int

    @property
    def weight(self) -> int:
        return weight(self.bits)

    def __str__(self):
        return bits_str(self.bits, self.n)


def _corner(p_in: int, p_out: int) -> int:
    a, b = sorted((p_in, p_out))
    return 3 if (a, b) == (0, 3) else a


@dataclass(frozen=True)
class Circle:
    """A circle as its cyclic run of (edge label, following junction)."""

    edges: Tuple[int, ...]
    junctions: Tuple[Tuple[int, int, int], ...]   # (crossing, p_in, p_out)

    @property
    def key(self) -> int:
        return min(self.edges) if self.edges else -1


@dataclass(frozen=True)
class Resolution:
    bits: int
    circles: Tuple[Circle, ...]
    # (crossing, corner) -> (circle index, position, chord on the left?)
    anchors: Dict[Tuple[int, int], Tuple[int, int, bool]]
    edge_circle: Dict[int, int]

    def __len__(self):
        return len(self.circles)


def resolve(d: LinkDiagram, v: int) -> Resolution:
    pd = d.pd
    occ: Dict[int, List[Tuple[int, int]]] = {}
    for x, quad in enumerate(pd.crossings):
        for p, lab in enumerate(quad):
            occ.setdefault(lab, []).append((x, p))
    partner = {}
    for x in range(len(pd.crossings)):
        for a, b in SMOOTHING[v >> x & 1]:
            partner[(x, a)] = b
            partner[(x, b)] = a
    seen = set()
    raw = []
    for lab in sorted(occ):
        if lab in seen:
            continue
        start_tail = min(occ[lab])
        edges, juncs = [], []
        cur_lab, tail = lab, start_tail
        while True:
            seen.add(cur_lab)
            a, b = occ[cur_lab]
            head = b if a == tail else a
            x, p_in = head
            p_out = partner[(x, p_in)]
            edges.append(cur_lab)
            juncs.append((x, p_in, p_out))
            tail = (x, p_out)
            cur_lab = pd.crossings[x][p_out]
            if cur_lab == lab and tail == start_tail:
                break
        raw.append(Circle(tuple(edges), tuple(juncs)))
    raw.sort(key=lambda c: c.key)
    raw.extend(Circle((), ()) for _ in range(pd.free_circles))
    anchors = {}
    edge_circle = {}
    for ci, c in enumerate(raw):
        for k, (x, p_in, p_out) in enumerate(c.junctions):
            anchors[(x, _corner(p_in, p_out))] = (ci, k, (p_out - p_in) % 4 == 1)
        for lab in c.edges:
            edge_circle[lab] = ci
    return Resolution(v, tuple(raw), anchors, edge_circle)


@dataclass(frozen=True)
class EdgeCobordism:
    """A saddle from vertex ``source`` to ``target`` at ``crossing``.

    For a merge, ``inputs`` is (head circle, tail circle) and ``outputs`` the
    single merged circle.  For a split, ``inputs`` is the split circle and
    ``outputs`` is (circle left of the arrow, circle right of it).  ``carry``
    maps the untouched source circles to their target indices.
    """

    crossing: int
    source: int
    target: int
    kind: str
    inputs: Tuple[int, ...]
    outputs: Tuple[int, ...]
    carry: Tuple[Tuple[int, int], ...]
    arrow: Tuple[int, int]          # (tail corner, head corner)

    @property
    def degree(self) -> Bidegree:
        return MERGE if self.kind == "merge" else SPLIT


def _chord(d: LinkDiagram, x: int) -> Tuple[int, int]:
    return (0, 2) if d.arrows[x] == 0 else (2, 0)


def edge_cobordism(d: LinkDiagram, v: int, i: int, src: Resolution, tgt: Resolution) -> EdgeCobordism:
    if v >> i & 1:
        raise ValueError("edge must start at a 0-resolved crossing")
    tail_c, head_c = _chord(d, i)
    ct, kt, left_t = src.anchors[(i, tail_c)]
    ch, kh, left_h = src.anchors[(i, head_c)]
    touched = {ct, ch}
    carry = []
    for ci, c in enumerate(src.circles):
        if ci in touched:
            continue
        if c.edges:
            carry.append((ci, tgt.edge_circle[c.edges[0]]))
    free_src = [ci for ci, c in enumerate(src.circles) if not c.edges]
    free_tgt = [ci for ci, c in enumerate(tgt.circles) if not c.edges]
    carry.extend(zip(free_src, free_tgt))
    carry.sort()
    if ct != ch:
        out = tgt.edge_circle[src.circles[ct].edges[0]]
        return EdgeCobordism(i, v, v | 1 << i, "merge", (ch, ct), (out,), tuple(carry), (tail_c, head_c))
    if left_t != left_h:
        raise CubeError(f"chord at crossing {i} changes side along circle {ct} (vertex {bits_str(v, d.n_crossings)})")
    circ = src.circles[ct]
    m = len(circ.edges)
    # edges after the tail junction up to the head junction, in traversal order
    t_to_h = circ.edges[(kt + 1) % m] if kt != kh else None
    h_to_t = circ.edges[(kh + 1) % m]
    if t_to_h is None:
        raise CubeError("self-chord with coincident endpoints")
    a = tgt.edge_circle[t_to_h]
    b = tgt.edge_circle[h_to_t]
    if a == b:
        raise CubeError(f"split at crossing {i} did not separate circle {ct}")
    # chord on the left: the circle left of the arrow is the head-to-tail run
    left, right = (b, a) if left_t else (a, b)
    return EdgeCobordism(i, v, v | 1 << i, "split", (ct,), (left, right), tuple(carry), (tail_c, head_c))


@dataclass(frozen=True)
class FaceClass:
    kind: str          # disjoint | conn_mm | conn_ss | conn_ms | type_x | diamond
    deg1: Optional[Bidegree] = None
    deg2: Optional[Bidegree] = None
    merge_first: Optional[bool] = None
    same_head: Optional[bool] = None
    diamond: Optional[str] = None   # "1" or "XY"

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "disjoint":
            out["deg1"] = list(self.deg1)
            out["deg2"] = list(self.deg2)
        if self.merge_first is not None:
            out["merge_first"] = self.merge_first
        if self.same_head is not None:
            out["same_head_circle"] = self.same_head
        if self.diamond is not None:
            out["class"] = self.diamond
        return out


def classify_face(d: LinkDiagram, res: Resolution, i: int, j: int) -> FaceClass:
    if i >= j:
        raise ValueError("need i < j")
    ends = {}
    for x in (i, j):
        tc, hc = _chord(d, x)
        ends[x] = (res.anchors[(x, tc)], res.anchors[(x, hc)])
    ci = {ends[i][0][0], ends[i][1][0]}
    cj = {ends[j][0][0], ends[j][1][0]}
    deg_i = MERGE if len(ci) == 2 else SPLIT
    deg_j = MERGE if len(cj) == 2 else SPLIT
    if not ci & cj:
        return FaceClass("disjoint", deg1=deg_i, deg2=deg_j)
    if len(ci) == 2 and len(cj) == 2:
        if ci == cj:
            return FaceClass("type_x", same_head=ends[i][1][0] == ends[j][1][0])
        return FaceClass("conn_mm")
    if len(ci) != len(cj):
        return FaceClass("conn_ms", merge_first=len(ci) == 2)
    # two self-chords on one circle
    (c, ti, li), (_, hi, _) = ends[i]
    (_, tj, _), (_, hj, _) = ends[j]
    m = len(res.circles[c].edges)
    if not li:
        # walk the circle the other way so that chord i sits on the left
        ti, hi, tj, hj = (-ti) % m, (-hi) % m, (-tj) % m, (-hj) % m

    def rel(p):
        return (p - ti) % m

    if (rel(hi) > rel(tj)) == (rel(hi) > rel(hj)):
        return FaceClass("conn_ss")
    # interleaved: from tail i we meet exactly one endpoint of j before head i
    first_j_is_tail = rel(tj) < rel(hi)
    return FaceClass("diamond", diamond="1" if first_j_is_tail else "XY")


def psi(face: FaceClass) -> UnitMonomial:
    k = face.kind
    if k == "disjoint":
        return lam(face.deg1, face.deg2)
    if k == "conn_mm":
        return UNIT_X
    if k == "conn_ss":
        return UNIT_Y
    if k == "conn_ms":
        return UNIT_Z if face.merge_first else UNIT_Z.inverse()
    if k == "type_x":
        return UNIT_Y if face.same_head else UNIT_X
    if k == "diamond":
        return UNIT_ONE if face.diamond == "1" else UNIT_X * UNIT_Y
    raise ValueError(f"unknown face kind {k}")


def face_coboundary(eps: Dict[Tuple[int, int], UnitMonomial], v: int, i: int, j: int) -> UnitMonomial:
    return (eps[(v, i)] * eps[(v | 1 << i, j)]) / (eps[(v, j)] * eps[(v | 1 << j, i)])


class Cube:
    """All resolutions, saddles and faces of a diagram, built eagerly."""

    def __init__(self, d: LinkDiagram):
        self.diagram = d
        self.n = n = d.n_crossings
        self.resolutions: List[Resolution] = [resolve(d, v) for v in range(1 << n)]
        self.edges: Dict[Tuple[int, int], EdgeCobordism] = {}
        for v in range(1 << n):
            for i in range(n):
                if not v >> i & 1:
                    self.edges[(v, i)] = edge_cobordism(
                        d, v, i, self.resolutions[v], self.resolutions[v | 1 << i]
                    )
        self.faces: Dict[Tuple[int, int, int], FaceClass] = {}
        self.psi: Dict[Tuple[int, int, int], UnitMonomial] = {}
        for v in range(1 << n):
            free = [i for i in range(n) if not v >> i & 1]
            for a, i in enumerate(free):
                for j in free[a + 1:]:
                    fc = classify_face(d, self.resolutions[v], i, j)
                    self.faces[(v, i, j)] = fc
                    self.psi[(v, i, j)] = psi(fc)

    def circle_count(self, v: int) -> int:
        return len(self.resolutions[v].circles)

    @cached_property
    def eps(self) -> Dict[Tuple[int, int], UnitMonomial]:
        return sign_assignment(self)

    def to_json(self, eps: Optional[Dict[Tuple[int, int], UnitMonomial]] = None) -> dict:
        n = self.n
        if eps is None:
            eps = self.eps
        verts = [
            {"v": bits_str(v, n), "circles": self.circle_count(v)}
            for v in range(1 << n)
        ]
        edges = []
        for (v, i), e in sorted(self.edges.items(), key=lambda kv: (bits_str(kv[0][0], n), kv[0][1])):
            edges.append({
                "edge": _edge_name(v, i, n),
                "kind": e.kind,
                "in": list(e.inputs),
                "out": list(e.outputs),
                "arrow": {"tail_corner": e.arrow[0], "head_corner": e.arrow[1]},
                "eps": str(eps[(v, i)]),
            })
        faces = []
        for (v, i, j), fc in sorted(self.faces.items(), key=lambda kv: (bits_str(kv[0][0], n), kv[0][1], kv[0][2])):
            faces.append({
                "face": _face_name(v, i, j, n),
                "class": fc.to_json(),
                "psi": str(self.psi[(v, i, j)]),
            })
        return {"crossings": n, "vertices": verts, "edges": edges, "faces": faces}

    def dump(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _edge_name(v, i, n):
    s = list(bits_str(v, n))
    s[i] = "*"
    return "".join(s)


def _face_name(v, i, j, n):
    s = list(bits_str(v, n))
    s[i] = "*"
    s[j] = "*"
    return "".join(s)


def sign_assignment(cube: Cube) -> Dict[Tuple[int, int], UnitMonomial]:
    """Deterministic eps with d(eps) = -psi.

    Tree edges (v, i) where every set bit of v is below i get 1.  Every other
    edge (v, i) is solved from the face at v - e_j, i, j with j the top bit of
    v; the other three edges of that face are known by then.
    """
    n = cube.n
    eps: Dict[Tuple[int, int], UnitMonomial] = {}
    order = sorted(cube.edges, key=lambda e: (weight(e[0]), e[0], e[1]))
    for v, i in order:
        top = v.bit_length() - 1
        if top < i:
            eps[(v, i)] = UNIT_ONE
            continue
        j = top
        u = v ^ (1 << j)
        target = cube.psi[(u, i, j)].negate()
        eps[(v, i)] = eps[(u, i)] * eps[(u | 1 << i, j)] / (eps[(u, j)] * target)
    bad = verify_face_equation(cube, eps)
    if bad:
        v, i, j = bad[0]
        raise CubeError(
            f"sign assignment fails on face {_face_name(v, i, j, n)}; psi is not a cocycle"
        )
    return eps


def verify_face_equation(cube: Cube, eps) -> List[Tuple[int, int, int]]:
    bad = []
    for key, p in cube.psi.items():
        if face_coboundary(eps, *key) != p.negate():
            bad.append(key)
    return bad


def verify_cocycle(cube: Cube, psi_map=None) -> List[Tuple[int, int, int, int]]:
    """3-faces (v, i, j, k) on which the alternating product of psi is not 1."""
    ps = cube.psi if psi_map is None else psi_map
    n = cube.n
    bad = []
    for v in range(1 << n):
        free = [i for i in range(n) if not v >> i & 1]
        for a in range(len(free)):
            for b in range(a + 1, len(free)):
                for c in range(b + 1, len(free)):
                    i, j, k = free[a], free[b], free[c]
                    val = (
                        ps[(v | 1 << i, j, k)] / ps[(v, j, k)]
                        * (ps[(v, i, k)] / ps[(v | 1 << j, i, k)])
                        * (ps[(v | 1 << k, i, j)] / ps[(v, i, j)])
                    )
                    if val != UNIT_ONE:
                        bad.append((v, i, j, k))
    return bad
