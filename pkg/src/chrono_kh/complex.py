"""Chain complexes built from a cube, a sign assignment and a Frobenius system.

A generator is a pair (vertex, word) where the word labels the circles of the
resolution (in their canonical order) with 0 = v+ and 1 = v-.  Generators of
each homological degree are listed lexicographically by (vertex bits, word).

Differentials are stored sparsely: ``d[i][col]`` is a dict ``row -> entry``
for the map from degree i to degree i+1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .coeff import MERGE, SPLIT, Laurent, UnitMonomial, lam, UNIT_ONE, UNIT_X, UNIT_Y, UNIT_Z, Specialization
from .cube import Cube, EdgeCobordism, bits_str, weight
from .frobenius import FrobeniusSystem, RingHom, base_change, specialization_hom, words

__all__ = [
    "Generator",
    "ChainComplex",
    "ComplexError",
    "build_complex",
    "bracket_complex",
    "subcube_complex",
    "saddle_map",
    "cone",
    "dual",
    "specialize",
    "verify_d_squared",
    "verify_chain_map",
    "euler_characteristic",
    "cone_comparison",
    "verify_homogeneous",
    "chain_ranks",
    "skein_rank_defects",
    "ChainMap",
]

# lambda(deg a, deg b) for basis vectors a, b
_LAM = {
    (0, 0): UNIT_X,
    (1, 1): UNIT_Y,
    (0, 1): UNIT_Z.inverse(),
    (1, 0): UNIT_Z,
}


class ComplexError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Generator:
    tag: Tuple          # (vertex bits string,) or a cone/dual prefix plus that
    word: Tuple[int, ...]

    def label(self) -> str:
        w = "".join("+" if x == 0 else "-" for x in self.word)
        return f"{'/'.join(str(t) for t in self.tag)}:{w or '1'}"


@dataclass
class ChainComplex:
    ring: object
    groups: Dict[int, List[Generator]]
    qdeg: Dict[Generator, int]
    d: Dict[int, Dict[int, Dict[int, object]]]
    q_graded: bool = True
    name: str = ""
    _index: Dict[Generator, Tuple[int, int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.reindex()

    def reindex(self):
        self._index = {g: (i, k) for i, gs in self.groups.items() for k, g in enumerate(gs)}

    def index(self, g: Generator) -> Tuple[int, int]:
        return self._index[g]

    @property
    def degrees(self) -> List[int]:
        return sorted(i for i, gs in self.groups.items() if gs)

    def rank(self, i: int) -> int:
        return len(self.groups.get(i, ()))

    def total_rank(self) -> int:
        return sum(len(g) for g in self.groups.values())

    def differential(self, i: int) -> Dict[int, Dict[int, object]]:
        return self.d.get(i, {})

    def entry(self, i: int, col: int, row: int):
        return self.d.get(i, {}).get(col, {}).get(row, self.ring.zero)

    def slice_matrix(self, i: int, q: Optional[int]) -> Tuple[List[int], List[int], Dict[int, Dict[int, object]]]:
        """Columns of degree (i, q), rows of degree (i+1, q) and the block between them."""
        cols = [k for k, g in enumerate(self.groups.get(i, ())) if q is None or self.qdeg[g] == q]
        rows = [k for k, g in enumerate(self.groups.get(i + 1, ())) if q is None or self.qdeg[g] == q]
        rset = set(rows)
        block = {}
        dm = self.d.get(i, {})
        for c in cols:
            col = {r: v for r, v in dm.get(c, {}).items() if r in rset}
            if col:
                block[c] = col
        return cols, rows, block

    def qdegrees(self, i: int) -> List[int]:
        return sorted({self.qdeg[g] for g in self.groups.get(i, ())})

    def to_json(self) -> dict:
        ring = self.ring
        groups, diffs = [], []
        for i in self.degrees:
            gens = []
            for g in self.groups[i]:
                item = {"v": "/".join(str(t) for t in g.tag),
                        "word": "".join("+" if x == 0 else "-" for x in g.word),
                        "q": self.qdeg[g]}
                gens.append(item)
            groups.append({"i": i, "gens": gens})
            entries = []
            for c, col in sorted(self.d.get(i, {}).items()):
                for r, v in sorted(col.items()):
                    entries.append([r, c, ring.fmt(v)])
            if entries:
                diffs.append({"from": i, "entries": entries})
        return {"ring": getattr(ring, "name", str(ring)), "q_graded": self.q_graded,
                "groups": groups, "diffs": diffs}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _count_inversions_factor(order: Sequence[int], target_pos: Dict[int, int], letters: Dict[int, int]) -> UnitMonomial:
    """Sign of the symmetry that moves legs from ``order`` into target order."""
    u = UNIT_ONE
    for a in range(len(order)):
        pa = target_pos[order[a]]
        for b in range(a + 1, len(order)):
            if target_pos[order[b]] < pa:
                u = u * _LAM[(letters[order[a]], letters[order[b]])]
    return u


def _edge_images(sys: FrobeniusSystem, e: EdgeCobordism, k_src: int, k_tgt: int, word):
    """Images of one basis word under the unsigned edge map, as {target word: entry}."""
    ring = sys.ring
    letters = dict(enumerate(word))
    touched = list(e.inputs)
    rest = [c for c in range(k_src) if c not in touched]
    front = touched + rest
    pos = {c: p for p, c in enumerate(front)}
    u = _count_inversions_factor(list(range(k_src)), pos, letters)
    carry = dict(e.carry)
    if e.kind == "merge":
        images = sys.mu((letters[touched[0]], letters[touched[1]]))
    else:
        images = sys.delta((letters[touched[0]],))
    out: Dict[tuple, object] = {}
    for outs, c in images.items():
        # legs after the operation: the outputs, then the untouched circles
        legs = list(range(len(outs) + len(rest)))
        leg_letter = {}
        tpos = {}
        for p, tgt_c in enumerate(e.outputs):
            leg_letter[p] = outs[p]
            tpos[p] = tgt_c
        for p, src_c in enumerate(rest):
            leg_letter[len(outs) + p] = letters[src_c]
            tpos[len(outs) + p] = carry[src_c]
        u2 = _count_inversions_factor(legs, tpos, leg_letter)
        tw = [0] * k_tgt
        for leg, tc in tpos.items():
            tw[tc] = leg_letter[leg]
        tw = tuple(tw)
        val = ring.mul_unit(c, u * u2)
        prev = out.get(tw)
        out[tw] = val if prev is None else ring.add(prev, val)
    return {w: c for w, c in out.items() if not ring.is_zero(c)}


def _assemble(cube: Cube, eps, sys: FrobeniusSystem, vertices: Iterable[int],
              hdeg: Callable[[int], int], qshift: Callable[[int], int],
              edge_ok: Callable[[int, int], bool], edge_sign: Callable[[int, int], int] = lambda v, i: 1,
              name: str = "") -> ChainComplex:
    n = cube.n
    ring = sys.ring
    vertices = sorted(vertices, key=lambda v: bits_str(v, n))
    groups: Dict[int, List[Generator]] = {}
    qdeg: Dict[Generator, int] = {}
    for v in vertices:
        k = cube.circle_count(v)
        vs = bits_str(v, n)
        for w in words(k):
            g = Generator((vs,), tuple(w))
            groups.setdefault(hdeg(v), []).append(g)
            qdeg[g] = (k - 2 * sum(w)) + qshift(v)
    for gs in groups.values():
        gs.sort()
    cx = ChainComplex(ring, groups, qdeg, {}, True, name)
    vset = set(vertices)
    for v in vertices:
        k_src = cube.circle_count(v)
        vs = bits_str(v, n)
        for i in range(n):
            if v >> i & 1 or not edge_ok(v, i) or (v | 1 << i) not in vset:
                continue
            e = cube.edges[(v, i)]
            t = v | 1 << i
            ts = bits_str(t, n)
            k_tgt = cube.circle_count(t)
            sgn = eps[(v, i)]
            if edge_sign(v, i) < 0:
                sgn = sgn.negate()
            for w in words(k_src):
                g = Generator((vs,), tuple(w))
                hi, col = cx.index(g)
                dmap = cx.d.setdefault(hi, {})
                for tw, c in _edge_images(sys, e, k_src, k_tgt, w).items():
                    hj, row = cx.index(Generator((ts,), tw))
                    if hj != hi + 1:
                        raise ComplexError("edge does not raise homological degree by one")
                    val = ring.mul_unit(c, sgn)
                    colmap = dmap.setdefault(col, {})
                    prev = colmap.get(row)
                    val = val if prev is None else ring.add(prev, val)
                    if ring.is_zero(val):
                        colmap.pop(row, None)
                    else:
                        colmap[row] = val
    for i in list(cx.d):
        cx.d[i] = {c: col for c, col in cx.d[i].items() if col}
    return cx


def build_complex(cube: Cube, eps, sys: FrobeniusSystem, spec=None) -> ChainComplex:
    """The shifted complex: homological degree |v| - n_-, quantum degree
    (#v+ - #v-) + |v| + n_+ - 2 n_-.

    ``spec`` (a Specialization or RingHom) base-changes ``sys`` first.
    """
    if spec is not None:
        sys = base_change(sys, spec)
    d = cube.diagram
    npl, nmi = d.n_plus, d.n_minus
    return _assemble(
        cube, eps, sys, range(1 << cube.n),
        hdeg=lambda v: weight(v) - nmi,
        qshift=lambda v: weight(v) + npl - 2 * nmi,
        edge_ok=lambda v, i: True,
        name=sys.name,
    )


def bracket_complex(cube: Cube, eps, sys: FrobeniusSystem) -> ChainComplex:
    """The unshifted cube complex: degree |v|, quantum degree (#v+ - #v-) + |v|."""
    return _assemble(cube, eps, sys, range(1 << cube.n), weight, weight, lambda v, i: True, name=sys.name)


def subcube_complex(cube: Cube, eps, sys: FrobeniusSystem, crossing: int, value: int) -> ChainComplex:
    """Bracket of the diagram with ``crossing`` resolved as ``value``.

    Degrees use the weight of the other crossings only.
    """
    bit = 1 << crossing
    verts = [v for v in range(1 << cube.n) if bool(v & bit) == bool(value)]

    def w(v):
        return weight(v & ~bit)

    return _assemble(cube, eps, sys, verts, w, w, lambda v, i: i != crossing, name=f"{sys.name}|{crossing}={value}")


@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    # f[i][col in source degree i] -> {row in target degree i: entry}
    f: Dict[int, Dict[int, Dict[int, object]]]


def saddle_map(cube: Cube, eps, sys: FrobeniusSystem, crossing: int,
               source: ChainComplex, target: ChainComplex) -> ChainMap:
    """Sum of signed saddles along ``crossing``, twisted by (-1)^(weight)."""
    ring = sys.ring
    n = cube.n
    bit = 1 << crossing
    f: Dict[int, Dict[int, Dict[int, object]]] = {}
    for i, gens in source.groups.items():
        for col, g in enumerate(gens):
            v = int(g.tag[0][::-1], 2)
            e = cube.edges[(v, crossing)]
            t = v | bit
            sgn = eps[(v, crossing)]
            if weight(v) % 2:
                sgn = sgn.negate()
            for tw, c in _edge_images(sys, e, cube.circle_count(v), cube.circle_count(t), g.word).items():
                j, row = target.index(Generator((bits_str(t, n),), tw))
                if j != i:
                    raise ComplexError("saddle map must preserve the sub-cube degree")
                f.setdefault(i, {}).setdefault(col, {})[row] = ring.mul_unit(c, sgn)
    return ChainMap(source, target, f)


def _apply(ring, mat: Dict[int, Dict[int, object]], vec: Dict[int, object],
           src_gens: Sequence[Generator] = (), tgt_gens: Sequence[Generator] = ()) -> Dict[int, object]:
    """mat applied to vec.  Over a graded ring each saddle picks up
    lambda(saddle degree, scalar degree) when it moves past a coefficient."""
    graded = getattr(ring, "graded", False) and src_gens
    out: Dict[int, object] = {}
    for c, a in vec.items():
        col = mat.get(c)
        if not col:
            continue
        pieces = list(ring.parts(a)) if graded else [(None, a)]
        for r, b in col.items():
            for deg, piece in pieces:
                val = ring.mul(b, piece)
                if graded and deg != (0, 0):
                    sd = MERGE if len(tgt_gens[r].word) < len(src_gens[c].word) else SPLIT
                    val = ring.mul_unit(val, lam(sd, deg))
                prev = out.get(r)
                out[r] = val if prev is None else ring.add(prev, val)
    return {r: v for r, v in out.items() if not ring.is_zero(v)}


def verify_d_squared(cx: ChainComplex) -> List[Tuple[int, int, int, object]]:
    """All nonzero entries of d o d as (degree, column, row, value)."""
    bad = []
    ring = cx.ring
    for i in cx.degrees:
        d1 = cx.d.get(i, {})
        d2 = cx.d.get(i + 1, {})
        for c, col in d1.items():
            for r, v in _apply(ring, d2, col, cx.groups.get(i + 1, ()), cx.groups.get(i + 2, ())).items():
                bad.append((i, c, r, v))
    return bad


def verify_chain_map(fm: ChainMap) -> List[Tuple[int, int, int]]:
    """Positions where d_T f != f d_S."""
    src, tgt = fm.source, fm.target
    ring = src.ring
    bad = []
    for i in src.degrees:
        for c in range(src.rank(i)):
            lhs = _apply(ring, tgt.d.get(i, {}), fm.f.get(i, {}).get(c, {}),
                         tgt.groups.get(i, ()), tgt.groups.get(i + 1, ()))
            rhs = _apply(ring, fm.f.get(i + 1, {}), src.d.get(i, {}).get(c, {}),
                         src.groups.get(i + 1, ()), tgt.groups.get(i + 1, ()))
            keys = set(lhs) | set(rhs)
            for r in keys:
                diff = ring.add(lhs.get(r, ring.zero), ring.neg(rhs.get(r, ring.zero)))
                if not ring.is_zero(diff):
                    bad.append((i, c, r))
    return bad


def cone(fm: ChainMap, qshift: int = 0) -> ChainComplex:
    """Mapping cone: degree i is S^{i+1} + T^i with d = [[-d_S, 0], [f, d_T]].

    ``qshift`` is added to the quantum degree of the target summand.
    """
    src, tgt = fm.source, fm.target
    ring = src.ring
    groups: Dict[int, List[Generator]] = {}
    qdeg: Dict[Generator, int] = {}
    for i, gs in src.groups.items():
        for g in gs:
            h = Generator(("S",) + g.tag, g.word)
            groups.setdefault(i - 1, []).append(h)
            qdeg[h] = src.qdeg[g]
    for i, gs in tgt.groups.items():
        for g in gs:
            h = Generator(("T",) + g.tag, g.word)
            groups.setdefault(i, []).append(h)
            qdeg[h] = tgt.qdeg[g] + qshift
    cx = ChainComplex(ring, groups, qdeg, {}, src.q_graded and tgt.q_graded, f"cone({src.name}->{tgt.name})")

    def put(i, c, r, v):
        cx.d.setdefault(i, {}).setdefault(c, {})[r] = v

    for i, gs in src.groups.items():
        for c, g in enumerate(gs):
            ci, cc = cx.index(Generator(("S",) + g.tag, g.word))
            for r, v in src.d.get(i, {}).get(c, {}).items():
                h = src.groups[i + 1][r]
                _, rr = cx.index(Generator(("S",) + h.tag, h.word))
                put(ci, cc, rr, ring.neg(v))
            for r, v in fm.f.get(i, {}).get(c, {}).items():
                h = tgt.groups[i][r]
                _, rr = cx.index(Generator(("T",) + h.tag, h.word))
                put(ci, cc, rr, v)
    for i, gs in tgt.groups.items():
        for c, g in enumerate(gs):
            ci, cc = cx.index(Generator(("T",) + g.tag, g.word))
            for r, v in tgt.d.get(i, {}).get(c, {}).items():
                h = tgt.groups[i + 1][r]
                _, rr = cx.index(Generator(("T",) + h.tag, h.word))
                put(ci, cc, rr, v)
    return cx


def cone_comparison(cube: Cube, eps, sys: FrobeniusSystem, crossing: int) -> List[str]:
    """Compare the bracket with the cone of the saddle map at ``crossing``.

    The bracket in degree w matches the cone in degree w - 1 with generator
    (v, word) sent to +-(S, v, word) when the crossing is 0-resolved and to
    (T, v, word) otherwise; the sign on the S part is (-1)^(sub-weight).
    Returns a list of discrepancies (empty when the complexes agree).
    """
    ring = sys.ring
    full = bracket_complex(cube, eps, sys)
    c0 = subcube_complex(cube, eps, sys, crossing, 0)
    c1 = subcube_complex(cube, eps, sys, crossing, 1)
    fm = saddle_map(cube, eps, sys, crossing, c0, c1)
    problems = [f"saddle map is not a chain map at {b}" for b in verify_chain_map(fm)]
    cn = cone(fm, qshift=1)
    bit = 1 << crossing
    n = cube.n

    def image(g: Generator):
        v = int(g.tag[0][::-1], 2)
        if v & bit:
            return Generator(("T",) + g.tag, g.word), 1
        return Generator(("S",) + g.tag, g.word), -1 if weight(v & ~bit) % 2 else 1

    for i in full.degrees:
        for g in full.groups[i]:
            h, _ = image(g)
            j, _ = cn.index(h)
            if j != i - 1:
                problems.append(f"{g.label()} lands in cone degree {j}, expected {i - 1}")
            if cn.qdeg[h] != full.qdeg[g]:
                problems.append(f"{g.label()} has quantum degree {full.qdeg[g]} but its image has {cn.qdeg[h]}")
    if full.total_rank() != cn.total_rank():
        problems.append("ranks differ")
    for i in full.degrees:
        for c, g in enumerate(full.groups[i]):
            h, sg = image(g)
            _, hc = cn.index(h)
            want = {}
            for r, v in full.d.get(i, {}).get(c, {}).items():
                h2, sg2 = image(full.groups[i + 1][r])
                _, hr = cn.index(h2)
                want[hr] = v if sg * sg2 > 0 else ring.neg(v)
            got = cn.d.get(i - 1, {}).get(hc, {})
            for r in set(want) | set(got):
                diff = ring.add(want.get(r, ring.zero), ring.neg(got.get(r, ring.zero)))
                if not ring.is_zero(diff):
                    problems.append(f"differential differs at {g.label()} -> row {r} ({bits_str(0, n)} layout)")
    return problems


def specialize(cx: ChainComplex, hom) -> ChainComplex:
    """Apply a ring map entrywise."""
    if isinstance(hom, Specialization):
        hom = specialization_hom(hom)
    ring = hom.target
    d = {}
    for i, cols in cx.d.items():
        nd = {}
        for c, col in cols.items():
            nc = {}
            for r, v in col.items():
                w = hom(v)
                if not ring.is_zero(w):
                    nc[r] = w
            if nc:
                nd[c] = nc
        d[i] = nd
    spec = getattr(ring, "spec", None)
    graded = cx.q_graded and not (spec is not None and spec.has_dots and spec.modulus != 2)
    return ChainComplex(ring, {i: list(g) for i, g in cx.groups.items()}, dict(cx.qdeg), d, graded,
                        f"{cx.name}@{hom.name}")


def dual(cx: ChainComplex) -> ChainComplex:
    """Hom(C, R): degree i holds the duals of C^{-i}, quantum degrees negate,
    and the differential is the transpose."""
    def star(g: Generator) -> Generator:
        # dual of a dual generator is the generator itself
        tag = g.tag[1:] if g.tag[:1] == ("*",) else ("*",) + g.tag
        return Generator(tag, g.word)

    groups = {-i: [star(g) for g in gs] for i, gs in cx.groups.items()}
    qdeg = {}
    for i, gs in cx.groups.items():
        for g in gs:
            qdeg[star(g)] = -cx.qdeg[g]
    d: Dict[int, Dict[int, Dict[int, object]]] = {}
    for i, cols in cx.d.items():
        # d^i : C^i -> C^{i+1} transposes to (C*)^{-i-1} -> (C*)^{-i}
        tgt = d.setdefault(-i - 1, {})
        for c, col in cols.items():
            for r, v in col.items():
                tgt.setdefault(r, {})[c] = v
    d = {i: {c: col for c, col in cols.items() if col} for i, cols in d.items()}
    return ChainComplex(cx.ring, groups, qdeg, d, cx.q_graded, f"dual({cx.name})")


def euler_characteristic(cx: ChainComplex) -> Laurent:
    """sum over generators of (-1)^i q^j."""
    coeffs: Dict[int, int] = {}
    for i, gs in cx.groups.items():
        s = -1 if i % 2 else 1
        for g in gs:
            coeffs[cx.qdeg[g]] = coeffs.get(cx.qdeg[g], 0) + s
    return Laurent(coeffs)


def verify_homogeneous(cx: ChainComplex) -> List[Tuple[int, int, int]]:
    """Entries joining generators of different quantum degree."""
    bad = []
    for i, cols in cx.d.items():
        src, tgt = cx.groups[i], cx.groups.get(i + 1, [])
        for c, col in cols.items():
            for r in col:
                if cx.qdeg[src[c]] != cx.qdeg[tgt[r]]:
                    bad.append((i, c, r))
    return bad


def chain_ranks(cx: ChainComplex) -> Dict[Tuple[int, int], int]:
    out: Dict[Tuple[int, int], int] = {}
    for i, gs in cx.groups.items():
        for g in gs:
            key = (i, cx.qdeg[g])
            out[key] = out.get(key, 0) + 1
    return out


def skein_rank_defects(d, x: int, sys: FrobeniusSystem, spec=None) -> List[Tuple[int, int, int]]:
    """Rank check for the skein exact sequence at crossing ``x``.

    With L+ and L- the diagram with crossing x made positive / negative and
    L0 its oriented smoothing, the sequence

        0 -> C(L0)[2]{1} -> C(L-)[2]{2} -> C(L+){-2} -> C(L0){-1} -> 0

    (C[s]^i = C^{i-s}, C{k}_j = C_{j-k}) forces the alternating sum of chain
    ranks to vanish in every bidegree.  Returns (i, j, sum) where it does not.
    """
    from .diagram import flip_crossing, smooth

    pos = d if d.crossing_signs[x] > 0 else flip_crossing(d, x)
    neg = flip_crossing(pos, x)
    zero = smooth(pos, x)

    def ranks(diag):
        cube = Cube(diag)
        return chain_ranks(build_complex(cube, cube.eps, sys, spec))

    rp, rn, r0 = ranks(pos), ranks(neg), ranks(zero)
    keys = set()
    for i, j in r0:
        keys |= {(i + 2, j + 1), (i, j - 1)}
    for i, j in rn:
        keys.add((i + 2, j + 2))
    for i, j in rp:
        keys.add((i, j - 2))
    bad = []
    for i, j in sorted(keys):
        s = r0.get((i - 2, j - 1), 0) - rn.get((i - 2, j - 2), 0) + rp.get((i, j + 2), 0) - r0.get((i, j + 1), 0)
        if s:
            bad.append((i, j, s))
    return bad
