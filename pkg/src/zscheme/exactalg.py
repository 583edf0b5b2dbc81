"""Exact arithmetic: rationals, rational functions in ``v`` and sparse
multivariate polynomials over weighted graded rings.

Coefficients are :class:`gmpy2.mpq` rationals (field tag ``QQ``) or
:class:`RatFunc` elements of the rational function field in the distinguished
variable ``v`` (field tag ``QQ(v)``).  A polynomial is an immutable mapping from
exponent tuples to nonzero coefficients.

Expression grammar accepted by :func:`parse_polynomial`::

    expr   := ['+' | '-'] term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' uint)?
    base   := uint | ident | '(' expr ')'

Division is only allowed by constants (elements of the coefficient field), so
that printed rational coefficients such as ``1/2*x1`` parse back.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import gmpy2

from .errors import ZSchemeError

QQ = gmpy2.mpq
_MPQ = type(QQ(0))
RATIONAL = "QQ"
RATIONAL_FUNCTIONS_IN_V = "QQ(v)"
PARAM = "v"


def qq(x) -> "gmpy2.mpq":
    """Coerce ints, Fractions, mpz/mpq and ``"a/b"`` strings to an exact rational."""
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, str):
        num, _, den = x.strip().partition("/")
        return QQ(int(num), int(den)) if den else QQ(int(num))
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not supported")
    return QQ(x)


# ---------------------------------------------------------------------------
# univariate polynomials and rational functions in v


class UPoly:
    """Dense univariate polynomial over QQ, coefficients stored low to high."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [qq(a) for a in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def _make(cls, c: list) -> "UPoly":
        while c and not c[-1]:
            c.pop()
        obj = object.__new__(cls)
        obj.c = tuple(c)
        return obj

    @classmethod
    def const(cls, a) -> "UPoly":
        return cls._make([qq(a)])

    @classmethod
    def monomial(cls, k: int, a=1) -> "UPoly":
        return cls._make([QQ(0)] * k + [qq(a)])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def lc(self):
        return self.c[-1] if self.c else QQ(0)

    def __bool__(self):
        return bool(self.c)

    def is_one(self) -> bool:
        return len(self.c) == 1 and self.c[0] == 1

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.c == other.c
        if isinstance(other, (int, _MPQ)):
            return self.c == (UPoly.const(other).c)
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __neg__(self):
        return UPoly._make([-a for a in self.c])

    def __add__(self, other):
        other = _as_upoly(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return UPoly._make(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_upoly(other))

    def __rsub__(self, other):
        return _as_upoly(other) - self

    def __mul__(self, other):
        other = _as_upoly(other)
        if not self.c or not other.c:
            return UPoly._make([])
        out = [QQ(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return UPoly._make(out)

    __rmul__ = __mul__

    def scale(self, a) -> "UPoly":
        a = qq(a)
        return UPoly._make([x * a for x in self.c])

    def __pow__(self, k: int):
        out = UPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "UPoly"):
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return UPoly._make([]), self
        q = [QQ(0)] * (dq + 1)
        inv = 1 / other.c[-1]
        for k in range(dq, -1, -1):
            coef = r[k + len(other.c) - 1] * inv
            q[k] = coef
            if coef:
                for j, y in enumerate(other.c):
                    r[k + j] -= coef * y
        return UPoly._make(q), UPoly._make(r[: len(other.c) - 1])

    def __floordiv__(self, other):
        return self.divmod(_as_upoly(other))[0]

    def __mod__(self, other):
        return self.divmod(_as_upoly(other))[1]

    def monic(self) -> "UPoly":
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(1 / self.c[-1])

    def gcd(self, other: "UPoly") -> "UPoly":
        a, b = self, _as_upoly(other)
        while b.c:
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def derivative(self) -> "UPoly":
        return UPoly._make([i * a for i, a in enumerate(self.c)][1:])

    def squarefree_part(self) -> "UPoly":
        if self.degree <= 0:
            return self.monic()
        return (self // self.gcd(self.derivative())).monic()

    def __call__(self, x):
        acc = QQ(0) if not isinstance(x, (UPoly, RatFunc)) else x * 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def to_str(self, var: str = PARAM) -> str:
        if not self.c:
            return "0"
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if not a:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            parts.append(_term_str(a, mono))
        return _join_terms(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"UPoly({self.to_str()})"


def _as_upoly(x) -> UPoly:
    if isinstance(x, UPoly):
        return x
    if isinstance(x, RatFunc):
        return x.as_upoly()
    return UPoly.const(x)


_UONE = UPoly.const(1)


class RatFunc:
    """Element of QQ(v): ``num/den`` with ``gcd(num, den) = 1`` and ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_upoly(num)
        den = _UONE if den is None else _as_upoly(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            num, den = UPoly._make([]), _UONE
        elif den.degree > 0:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
        lc = den.lc()
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def _poly(cls, num: UPoly) -> "RatFunc":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = _UONE
        return obj

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, UPoly):
            return cls._poly(x)
        return cls._poly(UPoly.const(x))

    @classmethod
    def v(cls) -> "RatFunc":
        return cls._poly(UPoly.monomial(1))

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def as_upoly(self) -> UPoly:
        if not self.den.is_one():
            raise ZSchemeError("NONPOLYNOMIAL", f"{self} is not a polynomial in v")
        return self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, _MPQ, UPoly)):
            return self.den.is_one() and self.num == _as_upoly(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        obj = object.__new__(RatFunc)
        obj.num, obj.den = -self.num, self.den
        return obj

    def __add__(self, other):
        other = RatFunc.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return RatFunc._poly(self.num + other.num)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, _MPQ)):
            if not other:
                return RatFunc._poly(UPoly._make([]))
            obj = object.__new__(RatFunc)
            obj.num, obj.den = self.num.scale(other), self.den
            return obj
        other = RatFunc.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return RatFunc._poly(self.num * other.num)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFunc.coerce(other)
        if not other.num:
            raise ZeroDivisionError("division by zero in QQ(v)")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(self.den ** (-k), self.num ** (-k))
        return RatFunc(self.num**k, self.den**k)

    def __call__(self, v0):
        d = self.den(v0)
        if not d:
            raise ZeroDivisionError(f"pole at v = {v0}")
        return self.num(v0) / d

    def to_str(self, var: str = PARAM) -> str:
        if self.den.is_one():
            return self.num.to_str(var)
        return f"({self.num.to_str(var)})/({self.den.to_str(var)})"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"RatFunc({self})"


# ---------------------------------------------------------------------------
# rings and monomials


class Degree(enum.Enum):
    MIXED = "MIXED"
    ZERO_POLY = "ZERO_POLY"


MIXED = Degree.MIXED
ZERO_POLY = Degree.ZERO_POLY

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class WeightedRing:
    """Polynomial ring with positive even variable weights.

    ``field`` is ``"QQ"`` or ``"QQ(v)"``; in the latter case ``v`` is a
    coefficient parameter and must not appear among the variables.
    """

    names: tuple
    weights: tuple
    field: str = RATIONAL

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.names) != len(self.weights):
            raise ZSchemeError("DIMENSION_MISMATCH", "one weight per variable required")
        if len(set(self.names)) != len(self.names):
            raise ZSchemeError("INVALID_RING", f"duplicate variable names in {self.names}")
        for name, w in zip(self.names, self.weights):
            if not _IDENT.match(name):
                raise ZSchemeError("INVALID_RING", f"bad variable name {name!r}")
            if w <= 0 or w % 2:
                raise ZSchemeError("INVALID_RING", f"weight of {name} must be positive and even, got {w}")
            if name == PARAM and w != 2:
                raise ZSchemeError("INVALID_RING", "the variable v must have weight 2")
        if self.field not in (RATIONAL, RATIONAL_FUNCTIONS_IN_V):
            raise ZSchemeError("INVALID_RING", f"unknown coefficient field {self.field!r}")
        if self.field == RATIONAL_FUNCTIONS_IN_V and PARAM in self.names:
            raise ZSchemeError("INVALID_RING", "v cannot be both a variable and the field parameter")

    @classmethod
    def of(cls, spec: str | Mapping, field: str = RATIONAL) -> "WeightedRing":
        """``WeightedRing.of("x1:2, v:2")`` or ``WeightedRing.of({"x1": 2})``."""
        if isinstance(spec, str):
            items = []
            for chunk in spec.split(","):
                name, _, w = chunk.strip().partition(":")
                items.append((name.strip(), int(w) if w else 2))
        else:
            items = list(spec.items())
        return cls(tuple(n for n, _ in items), tuple(w for _, w in items), field)

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def is_param(self) -> bool:
        return self.field == RATIONAL_FUNCTIONS_IN_V

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ZSchemeError("UNKNOWN_VARIABLE", f"{name!r} is not a variable of {self}") from None

    def __contains__(self, name):
        return name in self.names

    def __str__(self):
        body = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"{self.field}[{body}]"

    def coerce_coeff(self, c):
        if self.is_param:
            return RatFunc.coerce(c)
        if isinstance(c, RatFunc):
            if c.den.is_one() and c.num.degree <= 0:
                return c.num.c[0] if c.num.c else QQ(0)
            raise ZSchemeError("RING_MISMATCH", f"coefficient {c} is not in QQ")
        return qq(c)

    def zero_coeff(self):
        return self.coerce_coeff(0)

    # constructors
    def zero(self) -> "Polynomial":
        return Polynomial._from_clean(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.coerce_coeff(c)
        return Polynomial._from_clean(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exps: Sequence[int], c=1) -> "Polynomial":
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.nvars or min(exps, default=0) < 0:
            raise ZSchemeError("DIMENSION_MISMATCH", f"bad exponent vector {exps}")
        return Polynomial(self, {exps: c})

    def var(self, name: str) -> "Polynomial":
        if self.is_param and name == PARAM:
            return self.const(RatFunc.v())
        i = self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial._from_clean(self, {tuple(e): self.coerce_coeff(1)})

    def gens(self) -> list:
        return [self.var(n) for n in self.names]

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    # derived rings
    def extend(self, name: str, weight: int) -> "WeightedRing":
        return WeightedRing(self.names + (name,), self.weights + (weight,), self.field)

    def drop(self, *names: str) -> "WeightedRing":
        keep = [(n, w) for n, w in zip(self.names, self.weights) if n not in names]
        return WeightedRing(tuple(n for n, _ in keep), tuple(w for _, w in keep), self.field)

    def param_field(self) -> "WeightedRing":
        """The same ring with ``v`` moved into the coefficient field."""
        return WeightedRing(self.drop(PARAM).names, self.drop(PARAM).weights, RATIONAL_FUNCTIONS_IN_V)

    def with_field(self, field: str) -> "WeightedRing":
        return WeightedRing(self.names, self.weights, field)

    def weighted_degree_of(self, exps: Sequence[int]) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))


@lru_cache(maxsize=None)
def grevlex_key(weights: tuple, perm: tuple | None = None):
    """Sort key for weighted graded reverse lexicographic order.

    Larger key means larger monomial.  ``perm`` lists variable indices from
    highest to lowest priority (default: the ring order).
    """
    n = len(weights)
    order = tuple(range(n)) if perm is None else tuple(perm)
    rev = tuple(reversed(order))
    cache: dict = {}

    def key(e):
        k = cache.get(e)
        if k is None:
            k = (sum(a * w for a, w in zip(e, weights)), tuple(-e[i] for i in rev))
            cache[e] = k
        return k

    return key


def default_priority(ring: "WeightedRing") -> tuple:
    """Variable indices, most significant first, for the default grevlex order.

    Ties in weighted degree are broken reverse-lexicographically scanning
    ``v`` first and then the remaining variables in ring order, so ``v`` is
    the least significant variable and ``x2 > x1^2`` when both have degree 4.
    """
    idx = [i for i, n in enumerate(ring.names) if n != PARAM]
    tail = [ring.names.index(PARAM)] if PARAM in ring.names else []
    return tuple(reversed(idx)) + tuple(tail)


def default_key(ring: "WeightedRing"):
    return grevlex_key(ring.weights, default_priority(ring))


@lru_cache(maxsize=None)
def lex_key(n: int, perm: tuple | None = None):
    order = tuple(range(n)) if perm is None else tuple(perm)
    if order == tuple(range(n)):
        return lambda e: e
    return lambda e: tuple(e[i] for i in order)


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: WeightedRing, terms: Mapping | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != ring.nvars:
                raise ZSchemeError("DIMENSION_MISMATCH", f"exponent {e} does not fit {ring}")
            c = ring.coerce_coeff(c)
            if c:
                clean[e] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, ring, terms: dict) -> "Polynomial":
        obj = object.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # -- basic protocol
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring.const(other).terms
        except (TypeError, ZSchemeError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ZSchemeError("RING_MISMATCH", f"{other.ring} vs {self.ring}")
            return other
        return self.ring.const(other)

    # -- arithmetic
    def __neg__(self):
        return Polynomial._from_clean(self.ring, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial._from_clean(self.ring, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ring.coerce_coeff(other)
            if not c:
                return self.ring.zero()
            return Polynomial._from_clean(self.ring, {e: a * c for e, a in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return Polynomial._from_clean(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero constant only."""
        if isinstance(other, Polynomial):
            if not other.is_constant() or not other:
                raise ZSchemeError("SYNTAX_ERROR", "division is only defined by nonzero constants")
            other = other.constant_term()
        c = self.ring.coerce_coeff(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (1 / c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- inspection
    def is_constant(self) -> bool:
        zero = (0,) * self.ring.nvars
        return all(e == zero for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.zero_coeff())

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.ring.zero_coeff())

    def variables(self) -> list:
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return [self.ring.names[i] for i in sorted(used)]

    def weighted_degree(self):
        return weighted_degree(self)

    def is_homogeneous(self) -> bool:
        return weighted_degree(self) is not MIXED

    def homogeneous_components(self) -> dict:
        comps: dict = {}
        for e, c in self.terms.items():
            comps.setdefault(self.ring.weighted_degree_of(e), {})[e] = c
        return {d: Polynomial._from_clean(self.ring, t) for d, t in sorted(comps.items())}

    def sorted_terms(self, key=None) -> list:
        key = key or default_key(self.ring)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, key=None):
        key = key or default_key(self.ring)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def max_coeff_bits(self) -> int:
        bits = 0
        for c in self.terms.values():
            for q in _rationals_of(c):
                bits = max(bits, int(gmpy2.numer(q)).bit_length(), int(gmpy2.denom(q)).bit_length())
        return bits

    def diff(self, var: str) -> "Polynomial":
        return partial_derivative(self, var)

    def subs(self, assignment: Mapping, ring: WeightedRing | None = None) -> "Polynomial":
        return substitute(self, assignment, ring)

    def __call__(self, **values):
        return substitute(self, values)

    # -- printing
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if a == 1 else f"{n}^{a}" for n, a in zip(self.ring.names, e) if a
            )
            parts.append(_term_str(c, mono))
        return _join_terms(parts)

    def __repr__(self):
        return f"Polynomial({self}, ring={self.ring})"


def _rationals_of(c):
    if isinstance(c, RatFunc):
        return list(c.num.c) + list(c.den.c)
    return [c]


def _coeff_str(c) -> tuple:
    """Return (text, needs_parens) for a coefficient."""
    if isinstance(c, RatFunc):
        if c.den.is_one():
            s = c.num.to_str()
            return s, len([a for a in c.num.c if a]) > 1
        return c.to_str(), True
    return str(c), False


def _term_str(c, mono: str) -> str:
    s, paren = _coeff_str(c)
    if not mono:
        return f"({s})" if paren and isinstance(c, RatFunc) and not c.den.is_one() else s
    if s == "1":
        return mono
    if s == "-1":
        return "-" + mono
    if paren:
        return f"({s})*{mono}"
    return f"{s}*{mono}"


def _join_terms(parts: list) -> str:
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


# ---------------------------------------------------------------------------
# operations


def weighted_degree(p: Polynomial):
    """Common weighted degree of a homogeneous polynomial, ``MIXED`` otherwise.

    The zero polynomial has degree ``ZERO_POLY``.
    """
    if not p.terms:
        return ZERO_POLY
    degs = {p.ring.weighted_degree_of(e) for e in p.terms}
    return degs.pop() if len(degs) == 1 else MIXED


def partial_derivative(p: Polynomial, var: str) -> Polynomial:
    i = p.ring.index(var)
    out = {}
    for e, c in p.terms.items():
        a = e[i]
        if a:
            e2 = e[:i] + (a - 1,) + e[i + 1 :]
            out[e2] = c * a
    return Polynomial._from_clean(p.ring, out)


def substitute(p: Polynomial, assignment: Mapping, ring: WeightedRing | None = None) -> Polynomial:
    """Simultaneous substitution ``var -> value``.

    Values may be scalars or polynomials of the target ring (default: the
    ring of the first polynomial value, else ``p.ring``).  Unsubstituted
    variables are carried over by name and must exist in the target ring.
    """
    if ring is None:
        poly_rings = {v.ring for v in assignment.values() if isinstance(v, Polynomial)}
        if len(poly_rings) > 1:
            raise ZSchemeError("RING_MISMATCH", "substituted values live in different rings")
        ring = poly_rings.pop() if poly_rings else p.ring
    for name in assignment:
        p.ring.index(name)
    vals = []
    for name in p.ring.names:
        if name in assignment:
            val = assignment[name]
            if isinstance(val, Polynomial):
                if val.ring != ring:
                    raise ZSchemeError("RING_MISMATCH", f"value for {name} lives in {val.ring}, not {ring}")
            else:
                val = ring.const(val)
        elif name in ring.names:
            val = ring.var(name)
        elif ring.is_param and name == PARAM:
            val = ring.var(PARAM)
        else:
            raise ZSchemeError("RING_MISMATCH", f"variable {name} has no image in {ring}")
        vals.append(val)
    if p.ring.is_param and not ring.is_param:
        raise ZSchemeError("RING_MISMATCH", "cannot substitute a QQ(v) polynomial into a QQ ring")

    powers: list = [dict() for _ in vals]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            cache[k] = vals[i] ** k
        return cache[k]

    acc: dict = {}
    for e, c in p.terms.items():
        term = ring.const(c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        for e2, c2 in term.terms.items():
            s = acc.get(e2)
            acc[e2] = c2 if s is None else s + c2
    return Polynomial._from_clean(ring, {e: c for e, c in acc.items() if c})


def to_param_field(p: Polynomial) -> Polynomial:
    """Move ``v`` from the variables into the coefficient field QQ(v)."""
    ring = p.ring
    vi = ring.index(PARAM)
    target = ring.param_field()
    acc: dict = {}
    for e, c in p.terms.items():
        k = e[vi]
        e2 = e[:vi] + e[vi + 1 :]
        acc.setdefault(e2, {})
        acc[e2][k] = acc[e2].get(k, QQ(0)) + c
    out = {}
    for e2, coeffs in acc.items():
        top = max(coeffs)
        lst = [QQ(0)] * (top + 1)
        for k, c in coeffs.items():
            lst[k] = c
        rf = RatFunc._poly(UPoly._make(lst))
        if rf:
            out[e2] = rf
    return Polynomial._from_clean(target, out)


def from_param_field(p: Polynomial, ring: WeightedRing) -> Polynomial:
    """Inverse of :func:`to_param_field`; coefficients must be polynomials in v."""
    if not p.ring.is_param:
        raise ZSchemeError("RING_MISMATCH", "expected a QQ(v) polynomial")
    vi = ring.index(PARAM)
    if ring.drop(PARAM).names != p.ring.names:
        raise ZSchemeError("RING_MISMATCH", f"{p.ring} does not match {ring}")
    out = {}
    for e, c in p.terms.items():
        num = c.as_upoly()
        for k, a in enumerate(num.c):
            if a:
                out[e[:vi] + (k,) + e[vi:]] = a
    return Polynomial._from_clean(ring, out)


def specialize_param(p: Polynomial, v0) -> Polynomial:
    """Evaluate the QQ(v) coefficients at ``v = v0``; result lives over QQ."""
    ring = p.ring.with_field(RATIONAL)
    return Polynomial(ring, {e: c(qq(v0)) for e, c in p.terms.items()})


def exact_divide(a: Polynomial, b: Polynomial) -> Polynomial:
    """Quotient ``a / b`` when ``b`` divides ``a``; raises otherwise."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    key = default_key(a.ring)
    lb, cb = b.leading_term(key)
    inv = 1 / cb
    rem = dict(a.terms)
    quo = {}
    while rem:
        e = max(rem, key=key)
        if not mono_divides(lb, e):
            raise ZSchemeError("NOT_DIVISIBLE", f"{b} does not divide {a}")
        q = mono_div(e, lb)
        c = rem[e] * inv
        quo[q] = c
        for eb, cbb in b.terms.items():
            m = mono_mul(eb, q)
            s = rem.get(m, 0) - c * cbb
            if s:
                rem[m] = s
            else:
                rem.pop(m, None)
    return Polynomial._from_clean(a.ring, quo)


def _det_cofactor(m: list) -> Polynomial:
    n = len(m)
    ring = m[0][0].ring
    memo: dict = {}

    def minor(row: int, cols: tuple) -> Polynomial:
        if row == n:
            return ring.one()
        if cols in memo:
            return memo[cols]
        acc = ring.zero()
        for k, j in enumerate(cols):
            entry = m[row][j]
            if entry:
                sub = minor(row + 1, cols[:k] + cols[k + 1 :])
                term = entry * sub
                acc = acc - term if k % 2 else acc + term
        memo[cols] = acc
        return acc

    return minor(0, tuple(range(n)))


def _det_bareiss(m: list) -> Polynomial:
    n = len(m)
    a = [list(row) for row in m]
    ring = a[0][0].ring
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ring.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_divide(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def poly_determinant(m: Sequence[Sequence[Polynomial]], method: str = "auto") -> Polynomial:
    """Determinant of a square matrix of polynomials.

    Fraction-free Bareiss elimination; small matrices (n <= 4) use cofactor
    expansion, which avoids the exact divisions.
    """
    n = len(m)
    if n == 0:
        raise ZSchemeError("DIMENSION_MISMATCH", "empty matrix")
    if any(len(row) != n for row in m):
        raise ZSchemeError("DIMENSION_MISMATCH", "matrix is not square")
    if method == "cofactor" or (method == "auto" and n <= 4):
        return _det_cofactor(list(m))
    return _det_bareiss(list(m))


def jacobian_matrix(polys: Sequence[Polynomial], variables: Sequence[str]) -> list:
    return [[partial_derivative(p, x) for x in variables] for p in polys]


def jacobian_determinant(polys: Sequence[Polynomial], variables: Sequence[str], method: str = "auto") -> Polynomial:
    """Determinant of the matrix of partials ``d polys[i] / d variables[j]``."""
    if len(polys) != len(variables):
        raise ZSchemeError(
            "DIMENSION_MISMATCH", f"{len(polys)} polynomials but {len(variables)} variables"
        )
    if len(set(variables)) != len(variables):
        raise ZSchemeError("DIMENSION_MISMATCH", "variables must be distinct")
    if not polys:
        raise ZSchemeError("DIMENSION_MISMATCH", "empty system")
    ring = polys[0].ring
    if any(p.ring != ring for p in polys):
        raise ZSchemeError("RING_MISMATCH", "all polynomials must share a ring")
    return poly_determinant(jacobian_matrix(polys, variables), method)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ZSchemeError("SYNTAX_ERROR", f"unexpected character {ch!r}", position=m.start(3))
            toks.append(("op", ch, m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ring: WeightedRing):
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ZSchemeError("SYNTAX_ERROR", msg, position=tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            f = self.factor()
            if tok[1] == "*":
                acc = acc * f
            else:
                if not f.is_constant() or not f:
                    self.fail("division only by nonzero constants", tok)
                acc = acc / f.constant_term()
        return acc

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.fail("exponent must be a non-negative integer", tok)
            base = base ** int(tok[1])
        return base

    def base(self) -> Polynomial:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return self.ring.const(int(val))
        if kind == "ident":
            if val in self.ring.names or (self.ring.is_param and val == PARAM):
                return self.ring.var(val)
            raise ZSchemeError("UNKNOWN_VARIABLE", f"unknown variable {val!r}", position=pos, name=val)
        if kind == "op" and val == "(":
            inner = self.expr()
            close = self.take()
            if close[1] != ")":
                self.fail("expected ')'", close)
            return inner
        self.fail(f"unexpected {val!r}" if val else "unexpected end of input", tok)


def parse_polynomial(text: str, ring: WeightedRing) -> Polynomial:
    """Parse ``text`` into its expanded normal form over ``ring``."""
    return _Parser(text, ring).parse()
