"""Exact arithmetic over the ground ring Z[X, Y, Z^{+-1}]/(X^2 = Y^2 = 1).

Elements are stored as dictionaries keyed by exponent tuples.  The same
class also carries the dotted extension by central parameters h, t with
(XY - 1)h = (XY - 1)t = 0, which is what the universal dotted algebra needs.
On any monomial containing h or t the relation lets us fold Y into X, so
those keys keep ey = 0.  That makes the canonical form a plain dict compare.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, NamedTuple, Tuple

__all__ = [
    "Bidegree",
    "MERGE",
    "SPLIT",
    "BIRTH",
    "DEATH",
    "UnitMonomial",
    "UNIT_ONE",
    "lam",
    "CoeffElement",
    "Specialization",
    "Z_EV",
    "Z_ODD",
    "F2",
    "LambdaRing",
    "IntRing",
    "LAMBDA",
    "DOTTED",
    "Laurent",
]


class Bidegree(NamedTuple):
    a: int
    b: int

    def __add__(self, other):  # type: ignore[override]
        return Bidegree(self.a + other[0], self.b + other[1])

    def __sub__(self, other):
        return Bidegree(self.a - other[0], self.b - other[1])

    def __neg__(self):
        return Bidegree(-self.a, -self.b)

    def scale(self, n: int) -> "Bidegree":
        return Bidegree(n * self.a, n * self.b)

    def collapse(self) -> int:
        return self.a + self.b


ZERO_DEG = Bidegree(0, 0)
MERGE = Bidegree(-1, 0)
SPLIT = Bidegree(0, -1)
BIRTH = Bidegree(1, 0)
DEATH = Bidegree(0, 1)


class UnitMonomial(NamedTuple):
    """A unit +-X^ex Y^ey Z^k of the ground ring."""

    sign: int = 1
    ex: int = 0
    ey: int = 0
    k: int = 0

    def __mul__(self, other):  # type: ignore[override]
        return UnitMonomial(
            self.sign * other.sign,
            (self.ex + other.ex) & 1,
            (self.ey + other.ey) & 1,
            self.k + other.k,
        )

    def inverse(self) -> "UnitMonomial":
        # X and Y are involutions, so only Z flips
        return UnitMonomial(self.sign, self.ex, self.ey, -self.k)

    def __truediv__(self, other):
        return self * other.inverse()

    def negate(self) -> "UnitMonomial":
        return UnitMonomial(-self.sign, self.ex, self.ey, self.k)

    def to_coeff(self) -> "CoeffElement":
        return CoeffElement({(self.ex, self.ey, self.k, 0, 0): self.sign})

    def __str__(self):
        body = _mono_str(self.ex, self.ey, self.k, 0, 0)
        if self.sign < 0:
            return "-" + (body or "1")
        return body or "1"

    @classmethod
    def parse(cls, text: str) -> "UnitMonomial":
        c = CoeffElement.parse(text)
        u = c.as_unit()
        if u is None:
            raise ValueError(f"not a unit monomial: {text!r}")
        return u


UNIT_ONE = UnitMonomial()
UNIT_X = UnitMonomial(1, 1, 0, 0)
UNIT_Y = UnitMonomial(1, 0, 1, 0)
UNIT_Z = UnitMonomial(1, 0, 0, 1)


def lam(d1, d2) -> UnitMonomial:
    """The pairing X^{ac} Y^{bd} Z^{ad-bc} for d1 = (a, b), d2 = (c, d)."""
    a, b = d1
    c, d = d2
    return UnitMonomial(1, (a * c) & 1, (b * d) & 1, a * d - b * c)


Key = Tuple[int, int, int, int, int]


def _canon_key(ex: int, ey: int, k: int, ih: int, it: int) -> Key:
    if ih or it:
        return ((ex + ey) & 1, 0, k, ih, it)
    return (ex & 1, ey & 1, k, 0, 0)


def _mono_str(ex, ey, k, ih, it) -> str:
    parts = []
    if ex:
        parts.append("X")
    if ey:
        parts.append("Y")
    if k == 1:
        parts.append("Z")
    elif k:
        parts.append(f"Z^{k}")
    for sym, e in (("h", ih), ("t", it)):
        if e == 1:
            parts.append(sym)
        elif e:
            parts.append(f"{sym}^{e}")
    return "*".join(parts)


class CoeffElement:
    """Immutable element of the ground ring (optionally with h, t)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Dict[Key, int] | None = None, _canonical: bool = False):
        if terms is None:
            terms = {}
        if not _canonical:
            acc: Dict[Key, int] = {}
            for key, c in terms.items():
                if len(key) == 3:
                    key = (key[0], key[1], key[2], 0, 0)
                ck = _canon_key(*key)
                acc[ck] = acc.get(ck, 0) + c
            terms = {k: c for k, c in acc.items() if c}
        self._terms = terms
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def from_int(cls, n: int) -> "CoeffElement":
        return cls({(0, 0, 0, 0, 0): n} if n else {}, _canonical=True)

    @classmethod
    def monomial(cls, ex=0, ey=0, k=0, h=0, t=0, c=1) -> "CoeffElement":
        return cls({(ex, ey, k, h, t): c})

    @classmethod
    def parse(cls, text: str) -> "CoeffElement":
        """Parse sums like ``2 - 2*X*Y + Z^-1*h``."""
        s = text.replace(" ", "").replace("−", "-")
        if not s:
            raise ValueError("empty coefficient")
        out = cls()
        terms = []
        cur = ""
        depth_prev = ""
        for ch in s:
            # a sign starts a new term unless it follows '^'
            if ch in "+-" and cur and depth_prev != "^":
                terms.append(cur)
                cur = ch
            else:
                cur += ch
            depth_prev = ch
        terms.append(cur)
        for term in terms:
            sign = 1
            if term[0] in "+-":
                sign = -1 if term[0] == "-" else 1
                term = term[1:]
            c, ex, ey, k, ih, it = 1, 0, 0, 0, 0, 0
            for fac in term.split("*"):
                if not fac:
                    raise ValueError(f"bad coefficient {text!r}")
                base, _, exp = fac.partition("^")
                e = int(exp) if exp else 1
                if base.isdigit():
                    c *= int(base) ** e
                elif base == "X":
                    ex += e
                elif base == "Y":
                    ey += e
                elif base == "Z":
                    k += e
                elif base == "h" and e >= 0:
                    ih += e
                elif base == "t" and e >= 0:
                    it += e
                else:
                    raise ValueError(f"bad factor {fac!r} in {text!r}")
            out = out + cls.monomial(ex, ey, k, ih, it, sign * c)
        return out

    # -- views --------------------------------------------------------
    @property
    def terms(self) -> Dict[Key, int]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Key, int]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def has_dots(self) -> bool:
        return any(k[3] or k[4] for k in self._terms)

    def as_unit(self) -> UnitMonomial | None:
        if len(self._terms) != 1:
            return None
        (key, c), = self._terms.items()
        if c not in (1, -1) or key[3] or key[4]:
            return None
        return UnitMonomial(c, key[0], key[1], key[2])

    def homogeneous_parts(self) -> Iterable[Tuple[Bidegree, "CoeffElement"]]:
        by_deg: Dict[int, Dict[Key, int]] = {}
        for key, c in self._terms.items():
            w = key[3] + 2 * key[4]
            by_deg.setdefault(w, {})[key] = c
        for w in sorted(by_deg):
            yield Bidegree(-w, -w), CoeffElement(by_deg[w], _canonical=True)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if not other._terms:
            return self
        acc = dict(self._terms)
        for key, c in other._terms.items():
            v = acc.get(key, 0) + c
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
        return CoeffElement(acc, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return CoeffElement({k: -c for k, c in self._terms.items()}, _canonical=True)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, UnitMonomial):
            return self.mul_unit(other)
        other = _coerce(other)
        acc: Dict[Key, int] = {}
        for (ax, ay, ak, ah, at), ac in self._terms.items():
            for (bx, by, bk, bh, bt), bc in other._terms.items():
                key = _canon_key(ax + bx, ay + by, ak + bk, ah + bh, at + bt)
                v = acc.get(key, 0) + ac * bc
                if v:
                    acc[key] = v
                else:
                    del acc[key]
        return CoeffElement(acc, _canonical=True)

    __rmul__ = __mul__

    def mul_unit(self, u: UnitMonomial) -> "CoeffElement":
        acc = {}
        for (ax, ay, ak, ah, at), c in self._terms.items():
            acc[_canon_key(ax + u.ex, ay + u.ey, ak + u.k, ah, at)] = c * u.sign
        return CoeffElement(acc, _canonical=True)

    def __eq__(self, other):
        if isinstance(other, (int, UnitMonomial)):
            other = _coerce(other)
        if not isinstance(other, CoeffElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"CoeffElement({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for key in sorted(self._terms, key=lambda k: (k[3] + 2 * k[4], k[3], k[2], k[0], k[1])):
            c = self._terms[key]
            body = _mono_str(*key)
            if not body:
                s = str(abs(c))
            elif abs(c) == 1:
                s = body
            else:
                s = f"{abs(c)}*{body}"
            out.append(("-" if c < 0 else "+") + s)
        text = " ".join(out)
        if text.startswith("+"):
            text = text[1:]
        return text.replace(" +", " + ").replace(" -", " - ")

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        rows = []
        for key in sorted(self._terms):
            ex, ey, k, ih, it = key
            row = {"x": ex, "y": ey, "k": k, "c": self._terms[key]}
            if ih:
                row["h"] = ih
            if it:
                row["t"] = it
            rows.append(row)
        return {"terms": rows}

    @classmethod
    def from_json(cls, obj: dict) -> "CoeffElement":
        acc: Dict[Key, int] = {}
        for row in obj["terms"]:
            key = (row["x"], row["y"], row["k"], row.get("h", 0), row.get("t", 0))
            acc[key] = acc.get(key, 0) + row["c"]
        return cls(acc)


def _coerce(v) -> CoeffElement:
    if isinstance(v, CoeffElement):
        return v
    if isinstance(v, UnitMonomial):
        return v.to_coeff()
    if isinstance(v, int):
        return CoeffElement.from_int(v)
    raise TypeError(f"cannot use {type(v).__name__} as a coefficient")


ONE = CoeffElement.from_int(1)
ZERO = CoeffElement()
X = CoeffElement.monomial(ex=1)
Y = CoeffElement.monomial(ey=1)
Z = CoeffElement.monomial(k=1)
ZINV = CoeffElement.monomial(k=-1)
H = CoeffElement.monomial(h=1)
T = CoeffElement.monomial(t=1)


@dataclass(frozen=True)
class Specialization:
    """A ring map from the ground ring to Z or Z/m.

    ``x, y, z`` are the images of X, Y, Z (each +-1) and ``h, t`` the images
    of the dot parameters.  ``modulus`` 0 means the integers.
    """

    name: str
    x: int = 1
    y: int = 1
    z: int = 1
    h: int = 0
    t: int = 0
    modulus: int = 0

    def __post_init__(self):
        for v in (self.x, self.y, self.z):
            if v not in (1, -1):
                raise ValueError(f"{self.name}: images of X, Y, Z must be +-1")
        if self.modulus < 0 or self.modulus == 1:
            raise ValueError(f"{self.name}: bad modulus {self.modulus}")
        dots = self._red(self.h) or self._red(self.t)
        if dots and self._red(self.x * self.y - 1):
            raise ValueError(f"{self.name}: (XY-1)h = 0 forces h = t = 0 when XY maps to -1")
        if dots and self.modulus != 2 and (self.x, self.y, self.z) != (1, 1, 1):
            # dot parameters have nonzero degree; collapsing them is only
            # consistent when every lambda value becomes 1
            raise ValueError(f"{self.name}: nonzero h, t need X = Y = Z = 1")

    def _red(self, n: int) -> int:
        return n % self.modulus if self.modulus else n

    def apply(self, c: CoeffElement) -> int:
        total = 0
        for (ex, ey, k, ih, it), v in c.items():
            term = v
            if ex and self.x < 0:
                term = -term
            if ey and self.y < 0:
                term = -term
            if k & 1 and self.z < 0:
                term = -term
            if ih:
                term *= self.h ** ih
            if it:
                term *= self.t ** it
            total += term
        return self._red(total)

    def apply_unit(self, u: UnitMonomial) -> int:
        s = u.sign
        if u.ex and self.x < 0:
            s = -s
        if u.ey and self.y < 0:
            s = -s
        if u.k & 1 and self.z < 0:
            s = -s
        return self._red(s)

    @property
    def has_dots(self) -> bool:
        return bool(self._red(self.h) or self._red(self.t))


Z_EV = Specialization("Z_ev", 1, 1, 1)
Z_ODD = Specialization("Z_odd", 1, -1, 1)
F2 = Specialization("F2", 1, 1, 1, modulus=2)


class LambdaRing:
    """Scalar ring descriptor for CoeffElement values."""

    graded = True

    def __init__(self, dotted: bool = False):
        self.dotted = dotted
        self.name = "Lambda[h,t]" if dotted else "Lambda"
        self.zero = ZERO
        self.one = ONE

    def __repr__(self):
        return f"LambdaRing({self.name})"

    def __eq__(self, other):
        return isinstance(other, LambdaRing) and other.dotted == self.dotted

    def __hash__(self):
        return hash(("lambda", self.dotted))

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return not a

    def coerce(self, v) -> CoeffElement:
        c = _coerce(v)
        if c.has_dots() and not self.dotted:
            raise ValueError("dot parameters are not in this ring")
        return c

    def from_unit(self, u: UnitMonomial) -> CoeffElement:
        return u.to_coeff()

    def lam(self, d1, d2) -> CoeffElement:
        return lam(d1, d2).to_coeff()

    def mul_unit(self, a: CoeffElement, u: UnitMonomial) -> CoeffElement:
        return a.mul_unit(u)

    def parts(self, a: CoeffElement):
        return list(a.homogeneous_parts())

    def fmt(self, a) -> str:
        return str(a)

    def to_json(self, a):
        return str(a)


class IntRing:
    """Z or Z/m viewed as an algebra over the ground ring via a Specialization."""

    graded = False

    def __init__(self, spec: Specialization):
        self.spec = spec
        self.modulus = spec.modulus
        self.name = spec.name
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"IntRing({self.spec.name})"

    def __eq__(self, other):
        return isinstance(other, IntRing) and other.spec == self.spec

    def __hash__(self):
        return hash(("int", self.spec))

    def _red(self, n):
        return n % self.modulus if self.modulus else n

    def add(self, a, b):
        return self._red(a + b)

    def mul(self, a, b):
        return self._red(a * b)

    def neg(self, a):
        return self._red(-a)

    def is_zero(self, a) -> bool:
        return self._red(a) == 0

    def coerce(self, v) -> int:
        if isinstance(v, int):
            return self._red(v)
        if isinstance(v, UnitMonomial):
            return self.spec.apply_unit(v)
        return self.spec.apply(_coerce(v))

    def from_unit(self, u: UnitMonomial) -> int:
        return self.spec.apply_unit(u)

    def lam(self, d1, d2) -> int:
        return self.spec.apply_unit(lam(d1, d2))

    def mul_unit(self, a, u: UnitMonomial):
        return self._red(a * self.spec.apply_unit(u))

    def parts(self, a):
        # degrees are collapsed; the Specialization guarantees every lambda
        # factor involving a dot parameter is 1 here
        return [(ZERO_DEG, a)]

    def fmt(self, a) -> str:
        return str(a)

    def to_json(self, a):
        return a


LAMBDA = LambdaRing(False)
DOTTED = LambdaRing(True)


class Laurent:
    """Integer Laurent polynomial in one variable q, as {exponent: coeff}."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Dict[int, int] | None = None):
        self.c = {e: v for e, v in (coeffs or {}).items() if v}

    @classmethod
    def q(cls, e: int = 1, c: int = 1) -> "Laurent":
        return cls({e: c})

    def __add__(self, other):
        out = dict(self.c)
        for e, v in other.c.items():
            out[e] = out.get(e, 0) + v
        return Laurent(out)

    def __neg__(self):
        return Laurent({e: -v for e, v in self.c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return Laurent({e: v * other for e, v in self.c.items()})
        out: Dict[int, int] = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + v1 * v2
        return Laurent(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        base = self
        if n < 0:
            if len(self.c) != 1 or abs(next(iter(self.c.values()))) != 1:
                raise ValueError("only unit monomials have negative powers")
            (e, v), = self.c.items()
            base, n = Laurent({-e: v}), -n
        out = Laurent({0: 1})
        for _ in range(n):
            out = out * base
        return out

    def invert_variable(self) -> "Laurent":
        return Laurent({-e: v for e, v in self.c.items()})

    def __eq__(self, other):
        return isinstance(other, Laurent) and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def pairs(self):
        return sorted(self.c.items())

    def __repr__(self):
        return f"Laurent({self})"

    def __str__(self):
        if not self.c:
            return "0"
        bits = []
        for e, v in sorted(self.c.items(), reverse=True):
            mag = abs(v)
            if e == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else f"{mag}*") + ("q" if e == 1 else f"q^{e}")
            bits.append(("- " if v < 0 else "+ ") + body)
        s = " ".join(bits)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]
