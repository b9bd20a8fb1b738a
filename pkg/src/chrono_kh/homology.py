"""Integral and mod-p homology of chain complexes, and homology tables.

Reduction per quantum slice: a sparse pass pivots on unit entries, then the
small leftover block goes through a dense Smith normal form over Python ints.
"""

from __future__ import annotations

import json
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .coeff import F2, Z_EV, Z_ODD, Laurent, Specialization
from .complex import ChainComplex, build_complex
from .cube import Cube
from .diagram import LinkDiagram
from .frobenius import FrobeniusSystem, base_change, covering_system, dotted_system

__all__ = [
    "HomologyError",
    "HomologyTable",
    "smith_normal_form",
    "reduce_block",
    "homology",
    "parse_theory",
    "Theory",
    "khovanov_homology",
    "compare_identity",
    "compare_mirror",
    "compare_shift",
    "universal_coefficient_mismatches",
]

Key = Tuple[int, Optional[int]]


class HomologyError(ValueError):
    pass


# -- linear algebra ----------------------------------------------------------

def smith_normal_form(mat: Sequence[Sequence[int]]) -> Tuple[List[int], int]:
    """Nonzero diagonal d1 | d2 | ... of the Smith form, and the rank."""
    a = [list(map(int, row)) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    diag: List[int] = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    qt = a[i][t] // p
                    if qt:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            ri[j] -= qt * rt[j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    qt = a[t][j] // p
                    if qt:
                        for i in range(t, m):
                            a[i][j] -= qt * a[i][t]
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t onto the pivot
                cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
                _, i, j = min(cands)
                a[t], a[i] = a[i], a[t]
                for row in a:
                    row[t], row[j] = row[j], row[t]
                continue
            # pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            rb, rt = a[bad], a[t]
            for j in range(t, n):
                rt[j] += rb[j]
        diag.append(abs(a[t][t]))
        t += 1
    return diag, len(diag)


def reduce_block(block: Dict[int, Dict[int, int]], modulus: int = 0) -> Tuple[int, List[int]]:
    """Rank and torsion coefficients (>1) of a sparse matrix given by columns.

    ``modulus`` p > 0 means the entries live in Z/p with p prime.
    """
    rows: Dict[int, Dict[int, int]] = {}
    cols: Dict[int, set] = {}
    for c, col in block.items():
        for r, v in col.items():
            v = v % modulus if modulus else v
            if v:
                rows.setdefault(r, {})[c] = v
                cols.setdefault(c, set()).add(r)
    rank = 0

    def is_unit(v):
        return v % modulus != 0 if modulus else v in (1, -1)

    def inv(v):
        return pow(v, -1, modulus) if modulus else v

    progress = True
    while progress:
        progress = False
        for c in sorted(cols, key=lambda c: (len(cols[c]), c)):
            if c not in cols:
                continue
            cand = [r for r in cols[c] if is_unit(rows[r][c])]
            if not cand:
                continue
            r = min(cand, key=lambda r: (len(rows[r]), r))
            prow = rows[r]
            pv = inv(prow[c])
            for r2 in sorted(cols[c] - {r}):
                row2 = rows[r2]
                f = row2[c] * pv
                if modulus:
                    f %= modulus
                for c2, v in prow.items():
                    nv = row2.get(c2, 0) - f * v
                    if modulus:
                        nv %= modulus
                    if nv:
                        if c2 not in row2:
                            cols[c2].add(r2)
                        row2[c2] = nv
                    elif c2 in row2:
                        del row2[c2]
                        cols[c2].discard(r2)
                if not row2:
                    del rows[r2]
            for c2 in prow:
                cols[c2].discard(r)
                if not cols[c2]:
                    del cols[c2]
            cols.pop(c, None)
            del rows[r]
            rank += 1
            progress = True
    if not rows:
        return rank, []
    if modulus:
        raise HomologyError("non-unit entry left over a field")
    rlist = sorted(rows)
    clist = sorted(cols)
    cpos = {c: k for k, c in enumerate(clist)}
    dense = [[0] * len(clist) for _ in rlist]
    for k, r in enumerate(rlist):
        for c, v in rows[r].items():
            dense[k][cpos[c]] = v
    diag, _ = smith_normal_form(dense)
    return rank + len(diag), [d for d in diag if d > 1]


# -- homology tables ----------------------------------------------------------

@dataclass
class HomologyTable:
    theory: str
    entries: Dict[Key, Tuple[int, Tuple[int, ...]]] = field(default_factory=dict)
    q_graded: bool = True

    def free(self, i: int, j: Optional[int] = None) -> int:
        return self.entries.get((i, j), (0, ()))[0]

    def torsion(self, i: int, j: Optional[int] = None) -> Tuple[int, ...]:
        return self.entries.get((i, j), (0, ()))[1]

    def nonzero(self) -> List[Key]:
        return sorted((k for k, (f, t) in self.entries.items() if f or t), key=_sort_key)

    def poincare(self) -> Dict[Key, int]:
        return {k: self.entries[k][0] for k in self.nonzero() if self.entries[k][0]}

    def euler(self) -> Laurent:
        if not self.q_graded:
            raise HomologyError("Euler characteristic needs a quantum grading")
        out: Dict[int, int] = {}
        for (i, j), (f, _) in self.entries.items():
            out[j] = out.get(j, 0) + (-f if i % 2 else f)
        return Laurent(out)

    def to_json(self) -> dict:
        ents = []
        for k in self.nonzero():
            f, t = self.entries[k]
            ents.append({"i": k[0], "j": k[1], "free": f, "torsion": list(t)})
        return {"theory": self.theory, "q_graded": self.q_graded, "entries": ents}

    @classmethod
    def from_json(cls, obj: dict) -> "HomologyTable":
        ents = {(e["i"], e["j"]): (e["free"], tuple(e.get("torsion", ()))) for e in obj["entries"]}
        return cls(obj["theory"], ents, obj.get("q_graded", True))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __eq__(self, other):
        if not isinstance(other, HomologyTable):
            return NotImplemented
        return self.q_graded == other.q_graded and _norm(self) == _norm(other)

    def grid(self) -> str:
        """Text table with i across and j down; entries like '1', '2+Z2', 'Z3'."""
        keys = self.nonzero()
        if not keys:
            return f"{self.theory}: zero\n"
        iis = sorted({i for i, _ in keys})
        jjs = sorted({j for _, j in keys}, key=lambda j: -(j if j is not None else 0))

        def cell(i, j):
            f, t = self.entries.get((i, j), (0, ()))
            parts = [str(f)] if f else []
            parts += [f"Z{x}" for x in t]
            return "+".join(parts) or "."

        head = ["j\\i"] + [str(i) for i in iis]
        rows = [[("*" if j is None else str(j))] + [cell(i, j) for i in iis] for j in jjs]
        w = [max(len(r[k]) for r in [head] + rows) for k in range(len(head))]
        lines = ["  ".join(s.rjust(w[k]) for k, s in enumerate(r)) for r in [head] + rows]
        return f"{self.theory}\n" + "\n".join(lines) + "\n"


def _sort_key(k: Key):
    return (k[0], k[1] if k[1] is not None else 0)


def _norm(t: HomologyTable):
    return {k: (f, tuple(sorted(tt))) for k, (f, tt) in t.entries.items() if f or tt}


def _threads(threads: Optional[int]) -> int:
    if threads is None:
        env = os.environ.get("CHRONO_KH_THREADS", "")
        try:
            threads = int(env) if env else 1
        except ValueError:
            raise HomologyError(f"CHRONO_KH_THREADS must be an integer, got {env!r}")
    return max(1, threads)


def homology(cx: ChainComplex, theory: str = "", threads: Optional[int] = None) -> HomologyTable:
    """Homology of an integer (or Z/p) complex, sliced by quantum degree when graded.

    Results do not depend on ``threads``; slices are merged in a fixed order.
    """
    ring = cx.ring
    modulus = getattr(ring, "modulus", None)
    if modulus is None:
        raise HomologyError("homology needs integer or Z/p scalars; specialize first")
    graded = cx.q_graded
    slices: List[Tuple[int, Optional[int]]] = []
    for i in cx.degrees:
        qs = cx.qdegrees(i) if graded else [None]
        for q in qs:
            slices.append((i, q))
    # every block d^{i,q}: needed for degrees i-1 and i
    blocks = set()
    for i, q in slices:
        blocks.add((i, q))
        blocks.add((i - 1, q))
    blist = sorted(blocks, key=_sort_key)

    def work(key):
        i, q = key
        _, _, block = cx.slice_matrix(i, q)
        return reduce_block(block, modulus)

    nthreads = _threads(threads)
    if nthreads > 1 and len(blist) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as ex:
            results = dict(zip(blist, ex.map(work, blist)))
    else:
        results = {k: work(k) for k in blist}
    entries: Dict[Key, Tuple[int, Tuple[int, ...]]] = {}
    for i, q in slices:
        dim = sum(1 for g in cx.groups[i] if q is None or cx.qdeg[g] == q)
        r_out, _ = results[(i, q)]
        r_in, tors = results[(i - 1, q)]
        free = dim - r_out - r_in
        if free < 0:
            raise HomologyError(f"negative rank at ({i}, {q})")
        if free or tors:
            entries[(i, q)] = (free, tuple(sorted(tors)))
    return HomologyTable(theory or cx.name, entries, graded)


# -- theories -----------------------------------------------------------------

_DOTTED_RE = re.compile(r"^dotted-even:h=(-?\d+),t=(-?\d+)$")


@dataclass(frozen=True)
class Theory:
    name: str
    dotted: bool
    spec: Specialization

    def system(self) -> FrobeniusSystem:
        base = dotted_system() if self.dotted else covering_system()
        return base_change(base, self.spec)

    def lambda_system(self) -> FrobeniusSystem:
        return dotted_system() if self.dotted else covering_system()


def parse_theory(text: str) -> Theory:
    t = text.strip()
    if t == "even":
        return Theory("even", False, Z_EV)
    if t == "odd":
        return Theory("odd", False, Z_ODD)
    if t == "mod2":
        return Theory("mod2", False, F2)
    m = _DOTTED_RE.match(t)
    if m:
        h, tt = int(m.group(1)), int(m.group(2))
        return Theory(t, True, Specialization(f"dotted-even(h={h},t={tt})", 1, 1, 1, h, tt))
    raise HomologyError(
        f"unknown theory {text!r}; use even, odd, mod2 or dotted-even:h=<int>,t=<int>"
    )


def khovanov_homology(d: LinkDiagram, theory="even", threads: Optional[int] = None,
                      cube: Optional[Cube] = None) -> HomologyTable:
    th = parse_theory(theory) if isinstance(theory, str) else theory
    cube = cube or Cube(d)
    cx = build_complex(cube, cube.eps, th.system())
    if th.spec.has_dots:
        cx.q_graded = False
    return homology(cx, th.name, threads)


# -- comparisons --------------------------------------------------------------

def compare_identity(a: HomologyTable, b: HomologyTable) -> List[str]:
    na, nb = _norm(a), _norm(b)
    out = []
    for k in sorted(set(na) | set(nb), key=_sort_key):
        if na.get(k, (0, ())) != nb.get(k, (0, ())):
            out.append(f"{k}: {na.get(k, (0, ()))} vs {nb.get(k, (0, ()))}")
    return out


def compare_shift(a: HomologyTable, b: HomologyTable, di: int, dj: int) -> List[str]:
    """Mismatches of b(i + di, j + dj) against a(i, j), integrally."""
    shifted = HomologyTable(a.theory, {(i + di, j + dj): v for (i, j), v in a.entries.items()}, a.q_graded)
    return compare_identity(shifted, b)


def compare_mirror(a: HomologyTable, b: HomologyTable, torsion: bool = True) -> List[str]:
    """b should be the homology of the mirror of a's diagram.

    Free ranks reflect through the origin; with ``torsion`` the torsion at
    (i, j) must reappear at (1 - i, -j).
    """
    out = []
    fa = {(-i, -j): f for (i, j), (f, _) in a.entries.items() if f}
    fb = {k: f for k, (f, _) in b.entries.items() if f}
    for k in sorted(set(fa) | set(fb), key=_sort_key):
        if fa.get(k, 0) != fb.get(k, 0):
            out.append(f"free {k}: {fa.get(k, 0)} vs {fb.get(k, 0)}")
    if torsion:
        ta = {(1 - i, -j): tuple(sorted(t)) for (i, j), (_, t) in a.entries.items() if t}
        tb = {k: tuple(sorted(t)) for k, (_, t) in b.entries.items() if t}
        for k in sorted(set(ta) | set(tb), key=_sort_key):
            if ta.get(k, ()) != tb.get(k, ()):
                out.append(f"torsion {k}: {ta.get(k, ())} vs {tb.get(k, ())}")
    return out


def universal_coefficient_mismatches(integral: HomologyTable, mod_p: HomologyTable, p: int = 2) -> List[str]:
    """dim H^{i,j}(C; F_p) = free + #(p | torsion at (i,j)) + #(p | torsion at (i+1,j))."""
    keys = set(integral.entries) | set(mod_p.entries)
    keys |= {(i - 1, j) for i, j in integral.entries}
    out = []
    for i, j in sorted(keys, key=_sort_key):
        want = integral.free(i, j)
        want += sum(1 for x in integral.torsion(i, j) if x % p == 0)
        want += sum(1 for x in integral.torsion(i + 1, j) if x % p == 0)
        got = mod_p.free(i, j)
        if want != got:
            out.append(f"({i}, {j}): expected {want}, got {got}")
    return out
