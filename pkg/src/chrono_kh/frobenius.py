"""Rank-two chronological Frobenius systems as structure-constant tables.

Maps between tensor powers of A = S v+ (+) S v- are stored on basis words
(tuples over {0: v+, 1: v-}) with scalars written on the left.  Applying a
map of degree g to s*b costs lambda(g, deg s), tensoring follows
(f (x) g)(m (x) n) = lambda(deg g, deg m) f(m) (x) g(n), and the braiding is
sigma(m (x) n) = lambda(deg m, deg n) n (x) m.  Those three rules are all the
bookkeeping the axioms need.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .coeff import (
    BIRTH,
    DEATH,
    DOTTED,
    LAMBDA,
    MERGE,
    SPLIT,
    Bidegree,
    CoeffElement,
    IntRing,
    LambdaRing,
    Specialization,
    H,
    T,
    X,
    Y,
    Z,
    ZINV,
)

__all__ = [
    "BASIS_DEG",
    "DOT",
    "TensorMap",
    "FrobeniusSystem",
    "RingHom",
    "FrobeniusError",
    "covering_system",
    "dotted_system",
    "check_axioms",
    "twist",
    "base_change",
    "specialization_hom",
    "drop_dots_hom",
    "neck_cutting_identity",
    "torus_value",
    "mixed_relation_holds",
]

V_PLUS, V_MINUS = 0, 1
BASIS_DEG = (Bidegree(1, 0), Bidegree(0, -1))
DOT = Bidegree(-1, -1)
ZERO_DEG = Bidegree(0, 0)


class FrobeniusError(ValueError):
    pass


def word_degree(w) -> Bidegree:
    a = b = 0
    for x in w:
        if x:
            b -= 1
        else:
            a += 1
    return Bidegree(a, b)


def words(k: int):
    return itertools.product((0, 1), repeat=k)


class TensorMap:
    """A homogeneous map A^{(x)src} -> A^{(x)tgt} over ``ring``."""

    def __init__(self, ring, src: int, tgt: int, degree, table: Dict[tuple, Dict[tuple, object]]):
        self.ring = ring
        self.src = src
        self.tgt = tgt
        self.degree = Bidegree(*degree)
        clean = {}
        for w in words(src):
            row = {}
            for w2, c in table.get(tuple(w), {}).items():
                c = ring.coerce(c)
                if not ring.is_zero(c):
                    row[tuple(w2)] = c
            clean[tuple(w)] = row
        self.table = clean

    @classmethod
    def identity(cls, ring, k: int = 1):
        return cls(ring, k, k, ZERO_DEG, {w: {w: ring.one} for w in words(k)})

    @classmethod
    def sigma(cls, ring, k: int = 1, l: int = 1):
        table = {}
        for w in words(k + l):
            m, n = w[:k], w[k:]
            table[w] = {n + m: ring.lam(word_degree(m), word_degree(n))}
        return cls(ring, k + l, k + l, ZERO_DEG, table)

    def apply(self, vec: Dict[tuple, object]) -> Dict[tuple, object]:
        ring = self.ring
        out: Dict[tuple, object] = {}
        for w, c in vec.items():
            row = self.table[w]
            if not row:
                continue
            for deg, piece in ring.parts(c):
                f = ring.mul(ring.lam(self.degree, deg), piece)
                for w2, c2 in row.items():
                    out[w2] = ring.add(out.get(w2, ring.zero), ring.mul(f, c2))
        return {w: c for w, c in out.items() if not ring.is_zero(c)}

    def __call__(self, w) -> Dict[tuple, object]:
        return dict(self.table[tuple(w)])

    def compose(self, inner: "TensorMap") -> "TensorMap":
        """self after inner."""
        if inner.tgt != self.src:
            raise FrobeniusError("arity mismatch in composition")
        table = {w: self.apply(inner.table[w]) for w in words(inner.src)}
        return TensorMap(self.ring, inner.src, self.tgt, self.degree + inner.degree, table)

    __matmul__ = compose

    def tensor(self, other: "TensorMap") -> "TensorMap":
        ring = self.ring
        table = {}
        for w in words(self.src + other.src):
            m, n = w[: self.src], w[self.src:]
            pre = ring.lam(other.degree, word_degree(m))
            out: Dict[tuple, object] = {}
            for b, c in self.table[m].items():
                db = word_degree(b)
                for b2, c2 in other.table[n].items():
                    for deg, piece in ring.parts(c2):
                        # move the right factor's scalar left past b
                        val = ring.mul(ring.mul(pre, c), ring.mul(ring.lam(db, deg), piece))
                        key = b + b2
                        out[key] = ring.add(out.get(key, ring.zero), val)
            table[w] = out
        return TensorMap(ring, self.src + other.src, self.tgt + other.tgt, self.degree + other.degree, table)

    __and__ = tensor

    def scale(self, s) -> "TensorMap":
        ring = self.ring
        s = ring.coerce(s)
        table = {w: {w2: ring.mul(s, c) for w2, c in row.items()} for w, row in self.table.items()}
        deg = self.degree
        if ring.graded:
            parts = list(ring.parts(s))
            if len(parts) == 1:
                deg = deg + parts[0][0]
        return TensorMap(ring, self.src, self.tgt, deg, table)

    def __add__(self, other: "TensorMap") -> "TensorMap":
        ring = self.ring
        table = {}
        for w in words(self.src):
            row = dict(self.table[w])
            for w2, c in other.table[w].items():
                row[w2] = ring.add(row.get(w2, ring.zero), c)
            table[w] = row
        return TensorMap(ring, self.src, self.tgt, self.degree, table)

    def __neg__(self):
        ring = self.ring
        return TensorMap(ring, self.src, self.tgt, self.degree,
                         {w: {w2: ring.neg(c) for w2, c in row.items()} for w, row in self.table.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, TensorMap):
            return NotImplemented
        return (self.src, self.tgt) == (other.src, other.tgt) and self.table == other.table

    def is_zero(self) -> bool:
        return all(not row for row in self.table.values())

    def map_scalars(self, hom: "RingHom") -> "TensorMap":
        table = {w: {w2: hom(c) for w2, c in row.items()} for w, row in self.table.items()}
        return TensorMap(hom.target, self.src, self.tgt, self.degree, table)

    def homogeneous(self) -> bool:
        ring = self.ring
        if not ring.graded:
            return True
        for w, row in self.table.items():
            want = word_degree(w) + self.degree
            for w2, c in row.items():
                for deg, _ in ring.parts(c):
                    if word_degree(w2) + deg != want:
                        return False
        return True

    def to_json(self) -> dict:
        ring = self.ring
        sym = "+-"
        rows = {}
        for w in sorted(self.table):
            rows["".join(sym[x] for x in w) or "1"] = [
                ["".join(sym[x] for x in w2) or "1", ring.to_json(c)]
                for w2, c in sorted(self.table[w].items())
            ]
        return {"src": self.src, "tgt": self.tgt, "degree": list(self.degree), "table": rows}

    def __repr__(self):
        return f"TensorMap({self.src}->{self.tgt}, deg={tuple(self.degree)}, {self.to_json()['table']})"


@dataclass
class FrobeniusSystem:
    name: str
    ring: object
    mu: TensorMap
    delta: TensorMap
    unit: TensorMap
    counit: TensorMap
    theta: Optional[TensorMap] = None
    handle: object = None   # value of a sphere with two dots, when dots exist

    def maps(self):
        out = {"mu": self.mu, "delta": self.delta, "unit": self.unit, "counit": self.counit}
        if self.theta is not None:
            out["theta"] = self.theta
        return out

    def to_json(self) -> dict:
        out = {"name": self.name, "ring": self.ring.name}
        out.update({k: m.to_json() for k, m in self.maps().items()})
        if self.handle is not None:
            out["handle"] = self.ring.to_json(self.handle)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    def same_constants(self, other: "FrobeniusSystem", with_theta: bool = False) -> bool:
        keys = ["mu", "delta", "unit", "counit"] + (["theta"] if with_theta else [])
        a, b = self.maps(), other.maps()
        return all(k in a and k in b and a[k] == b[k] for k in keys)


def _build(name, ring, mu, delta, theta=None, handle=None) -> FrobeniusSystem:
    one = ring.one
    return FrobeniusSystem(
        name=name,
        ring=ring,
        mu=TensorMap(ring, 2, 1, MERGE, mu),
        delta=TensorMap(ring, 1, 2, SPLIT, delta),
        unit=TensorMap(ring, 0, 1, BIRTH, {(): {(V_PLUS,): one}}),
        counit=TensorMap(ring, 1, 0, DEATH, {(V_PLUS,): {}, (V_MINUS,): {(): one}}),
        theta=None if theta is None else TensorMap(ring, 1, 1, DOT, theta),
        handle=handle,
    )


def covering_system() -> FrobeniusSystem:
    mu = {
        (0, 0): {(0,): 1},
        (0, 1): {(1,): 1},
        (1, 0): {(1,): X * Z},
        (1, 1): {},
    }
    delta = {
        (0,): {(1, 0): 1, (0, 1): Y * Z},
        (1,): {(1, 1): 1},
    }
    return _build("covering", LAMBDA, mu, delta)


def dotted_system() -> FrobeniusSystem:
    mu = {
        (0, 0): {(0,): 1},
        (0, 1): {(1,): 1},
        (1, 0): {(1,): X * Z},
        (1, 1): {(0,): T, (1,): H},
    }
    delta = {
        (0,): {(1, 0): 1, (0, 1): Y * Z, (0, 0): -(Y * ZINV * H)},
        (1,): {(1, 1): 1, (0, 0): ZINV * ZINV * T},
    }
    theta = {
        (0,): {(1,): 1},
        (1,): {(0,): X * ZINV * T, (1,): X * ZINV * H},
    }
    return _build("dotted", DOTTED, mu, delta, theta, handle=H)


@dataclass
class AxiomReport:
    results: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    def failures(self) -> List[str]:
        return [k for k, v in self.results.items() if not v]

    def __bool__(self):
        return self.ok


def check_axioms(sys: FrobeniusSystem) -> AxiomReport:
    r = sys.ring
    mu, de, eta, eps = sys.mu, sys.delta, sys.unit, sys.counit
    I = TensorMap.identity(r)
    sig = TensorMap.sigma(r)
    lmm = r.lam(mu.degree, mu.degree)
    ldd = r.lam(de.degree, de.degree)
    lmd = r.lam(mu.degree, de.degree)
    rep = AxiomReport()
    rep.results["homogeneous"] = all(m.homogeneous() for m in sys.maps().values())
    rep.results["associativity"] = mu @ (mu & I) == (mu @ (I & mu)).scale(lmm)
    rep.results["coassociativity"] = (de & I) @ de == ((I & de) @ de).scale(ldd)
    rep.results["unit"] = mu @ (eta & I) == I
    rep.results["counit"] = (eps & I) @ de == I
    rep.results["twisted_commutativity"] = mu @ sig == mu.scale(lmm)
    rep.results["twisted_cocommutativity"] = sig @ de == de.scale(ldd)
    dm = (de @ mu).scale(lmd)
    rep.results["frobenius_left"] = (mu & I) @ (I & de) == dm
    rep.results["frobenius_right"] = (I & mu) @ (de & I) == dm
    rep.results["sigma_involution"] = sig @ sig == TensorMap.identity(r, 2)
    if sys.theta is not None:
        th = sys.theta
        rep.results["sphere_zero"] = (eps @ eta).is_zero()
        rep.results["dotted_sphere_one"] = (eps @ th @ eta) == TensorMap.identity(r, 0)
    return rep


def torus_value(sys: FrobeniusSystem):
    m = sys.counit @ sys.mu @ sys.delta @ sys.unit
    return m.table[()].get((), sys.ring.zero)


def mixed_relation_holds(sys: FrobeniusSystem) -> bool:
    """(1 - XY) * mu o Delta vanishes."""
    r = sys.ring
    return (sys.mu @ sys.delta).scale(r.coerce(1 - X * Y)).is_zero()


def _left_mult(sys: FrobeniusSystem, y: Dict[tuple, object]) -> TensorMap:
    """a -> mu(y (x) a) as a degree-zero endomorphism (needs deg y = (1,0))."""
    r = sys.ring
    table = {}
    for a in words(1):
        vec = {}
        for w, c in y.items():
            vec[tuple(w) + a] = c
        table[a] = sys.mu.apply(vec)
    return TensorMap(r, 1, 1, ZERO_DEG, table)


def _unit_inverse(ring, c):
    if isinstance(ring, LambdaRing):
        u = c.as_unit()
        if u is None:
            return None
        return u.inverse().to_coeff()
    if ring.modulus:
        try:
            return pow(c, -1, ring.modulus)
        except ValueError:
            return None
    return c if c in (1, -1) else None


def twist(sys: FrobeniusSystem, y: Dict[tuple, object]) -> FrobeniusSystem:
    """Twist the coalgebra by an invertible y of degree (1,0).

    counit'(a) = counit(y a) and Delta'(a) = Delta(y^{-1} a).
    """
    r = sys.ring
    y = {tuple(w): r.coerce(c) for w, c in y.items() if not r.is_zero(r.coerce(c))}
    if r.graded:
        for w, c in y.items():
            for deg, _ in r.parts(c):
                if word_degree(w) + deg != BIRTH:
                    raise FrobeniusError("twisting element must have degree (1,0)")
    L = _left_mult(sys, y)
    # invert the 2x2 matrix of L by the adjugate
    a = L.table[(0,)].get((0,), r.zero)
    b = L.table[(1,)].get((0,), r.zero)
    c = L.table[(0,)].get((1,), r.zero)
    d = L.table[(1,)].get((1,), r.zero)
    det = r.add(r.mul(a, d), r.neg(r.mul(b, c)))
    inv = _unit_inverse(r, det)
    if inv is None:
        raise FrobeniusError("twisting element is not invertible")
    yinv = {}
    # inverse applied to v+ : first column of adj/det
    for w, val in (((0,), r.mul(inv, d)), ((1,), r.mul(inv, r.neg(c)))):
        if not r.is_zero(val):
            yinv[w] = val
    Linv = _left_mult(sys, yinv)
    if Linv @ L != TensorMap.identity(r) or L @ Linv != TensorMap.identity(r):
        raise FrobeniusError("twisting element has no two-sided inverse")
    return replace(
        sys,
        name=f"{sys.name}~twist",
        counit=sys.counit @ L,
        delta=sys.delta @ Linv,
    )



@dataclass(frozen=True)
class RingHom:
    """A degree-zero unital map of scalar rings."""

    name: str
    target: object
    fn: Callable

    def __call__(self, c):
        return self.target.coerce(self.fn(c))

    def then(self, other: "RingHom") -> "RingHom":
        return RingHom(f"{self.name};{other.name}", other.target, lambda c: other(self(c)))


def specialization_hom(spec: Specialization) -> RingHom:
    return RingHom(spec.name, IntRing(spec), spec.apply)


def drop_dots_hom() -> RingHom:
    def fn(c: CoeffElement):
        return CoeffElement({k: v for k, v in c.items() if not (k[3] or k[4])})

    return RingHom("h=t=0", LAMBDA, fn)


def reduce_mod_hom(source_spec: Specialization, modulus: int) -> RingHom:
    spec = Specialization(f"{source_spec.name}/{modulus}", source_spec.x, source_spec.y, source_spec.z,
                          source_spec.h, source_spec.t, modulus)
    return RingHom(spec.name, IntRing(spec), lambda n: n % modulus)


def base_change(sys: FrobeniusSystem, hom) -> FrobeniusSystem:
    if isinstance(hom, Specialization):
        hom = specialization_hom(hom)
    tgt = hom.target
    if hom(sys.ring.one) != tgt.one:
        raise FrobeniusError("base change must be unital")
    maps = {k: m.map_scalars(hom) for k, m in sys.maps().items()}
    return FrobeniusSystem(
        name=f"{sys.name}@{hom.name}",
        ring=tgt,
        mu=maps["mu"],
        delta=maps["delta"],
        unit=maps["unit"],
        counit=maps["counit"],
        theta=maps.get("theta"),
        handle=None if sys.handle is None else hom(sys.handle),
    )


@dataclass
class NeckReport:
    identity: bool
    sphere_with_two_dots: bool
    composites: Dict[str, TensorMap]

    @property
    def ok(self) -> bool:
        return self.identity and self.sphere_with_two_dots

    def __bool__(self):
        return self.ok


def neck_cutting_identity(sys: FrobeniusSystem) -> NeckReport:
    """Check id = C1 + C2 - C3 for the three capped composites.

    C1 puts a dot below the cut, C2 above it, and C3 replaces the neck by a
    cap, a sphere carrying two dots (the scalar ``handle``) and a cup.
    """
    if sys.theta is None or sys.handle is None:
        raise FrobeniusError("neck cutting needs a dot map theta")
    r = sys.ring
    eta, eps, th = sys.unit, sys.counit, sys.theta
    c1 = eta @ eps @ th
    c2 = th @ eta @ eps
    h = r.coerce(sys.handle)
    deg = DOT + DOT + BIRTH + DEATH
    scal = TensorMap(r, 0, 0, deg, {(): {(): h}})
    c3 = eta @ scal @ eps
    ident = (c1 + c2 - c3) == TensorMap.identity(r)
    two_dots = eps @ th @ th @ eta
    sphere_ok = two_dots.table[()].get((), r.zero) == h
    return NeckReport(ident, sphere_ok, {"C1": c1, "C2": c2, "C3": c3})
