"""Buchberger's algorithm, normal forms, zero-dimensional quotients and
Hilbert series of weighted homogeneous ideals.

Works over either coefficient field supported by :mod:`zscheme.exactalg`.
Internally polynomials are plain ``{exponent: coeff}`` dicts; public results
are wrapped back into :class:`~zscheme.exactalg.Polynomial`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import linalg
from .errors import ZSchemeError
from .exactalg import (
    MIXED,
    ZERO_POLY,
    Polynomial,
    UPoly,
    WeightedRing,
    default_priority,
    grevlex_key,
    lex_key,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    weighted_degree,
)

WEIGHTED_GREVLEX_KIND = "WEIGHTED_GREVLEX"
LEX_KIND = "LEX"


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on a ring; ``priority`` lists variable names from
    most to least significant.

    Defaults: lex follows the ring order; weighted grevlex ranks the
    variables in reverse ring order and puts ``v`` last.
    """

    kind: str = WEIGHTED_GREVLEX_KIND
    priority: tuple | None = None

    def __post_init__(self):
        if self.kind not in (WEIGHTED_GREVLEX_KIND, LEX_KIND):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.priority is not None:
            object.__setattr__(self, "priority", tuple(self.priority))

    def key(self, ring: WeightedRing):
        perm = None if self.kind == LEX_KIND else default_priority(ring)
        if self.priority is not None:
            if sorted(self.priority) != sorted(ring.names):
                raise ZSchemeError("RING_MISMATCH", "order priority must list every variable once")
            perm = tuple(ring.index(n) for n in self.priority)
        if self.kind == WEIGHTED_GREVLEX_KIND:
            return grevlex_key(ring.weights, perm)
        return lex_key(ring.nvars, perm)


WEIGHTED_GREVLEX = MonomialOrder(WEIGHTED_GREVLEX_KIND)
LEX = MonomialOrder(LEX_KIND)


# ---------------------------------------------------------------------------
# dict-level kernels


def _reduce(f: dict, basis: list, key) -> dict:
    """Full reduction of ``f`` by monic ``basis = [(lm, poly_dict), ...]``."""
    p = dict(f)
    rem = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, g in basis:
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                for eg, cg in g.items():
                    mm = mono_mul(eg, q)
                    s = p.get(mm)
                    if s is None:
                        p[mm] = -(c * cg)
                    else:
                        s = s - c * cg
                        if s:
                            p[mm] = s
                        else:
                            del p[mm]
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def _monic(f: dict, key):
    lm = max(f, key=key)
    c = f[lm]
    if c == 1:
        return lm, f
    inv = 1 / c
    return lm, {e: a * inv for e, a in f.items()}


def _spoly(lm1, f1, lm2, f2) -> dict:
    lcm = mono_lcm(lm1, lm2)
    q1, q2 = mono_div(lcm, lm1), mono_div(lcm, lm2)
    out = {mono_mul(e, q1): c for e, c in f1.items()}
    for e, c in f2.items():
        m = mono_mul(e, q2)
        s = out.get(m)
        if s is None:
            out[m] = -c
        else:
            s = s - c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Engine:
    """Single-use Buchberger run with Gebauer-Moeller pair management and
    sugar-degree selection."""

    def __init__(self, ring: WeightedRing, key):
        self.ring = ring
        self.key = key
        self.w = ring.weights
        self.polys: list = []  # (lm, dict, sugar)
        self.active: list = []
        self.pairs: list = []
        self.unit = False

    def deg(self, e):
        return sum(a * b for a, b in zip(e, self.w))

    def sugar_of(self, f):
        return max(self.deg(e) for e in f)

    def add(self, f: dict, sugar: int):
        lm, f = _monic(f, self.key)
        if not any(lm):
            self.unit = True
            return
        h = len(self.polys)
        self.polys.append((lm, f, sugar))
        self._update(h)

    def _update(self, h):
        P = self.polys
        lmh = P[h][0]
        cand = list(self.active)
        keep = []
        while cand:
            g = cand.pop(0)
            lmg = P[g][0]
            lcm = mono_lcm(lmg, lmh)
            if _coprime(lmg, lmh):
                keep.append(g)
                continue
            redundant = any(mono_divides(mono_lcm(P[g2][0], lmh), lcm) for g2 in cand) or any(
                mono_divides(mono_lcm(P[g2][0], lmh), lcm) for g2 in keep
            )
            if not redundant:
                keep.append(g)
        new_pairs = [(g, h) for g in keep if not _coprime(P[g][0], lmh)]
        survivors = []
        for g1, g2, lcm in self.pairs:
            if (
                mono_divides(lmh, lcm)
                and mono_lcm(P[g1][0], lmh) != lcm
                and mono_lcm(P[g2][0], lmh) != lcm
            ):
                continue
            survivors.append((g1, g2, lcm))
        survivors.extend((g, h2, mono_lcm(P[g][0], lmh)) for g, h2 in new_pairs)
        self.pairs = survivors
        self.active = [g for g in self.active if not mono_divides(lmh, P[g][0])] + [h]

    def _pair_sugar(self, pair):
        i, j, lcm = pair
        P = self.polys
        d = self.deg(lcm)
        return max(P[i][2] - self.deg(P[i][0]), P[j][2] - self.deg(P[j][0])) + d

    def run(self) -> list:
        key = self.key
        while self.pairs and not self.unit:
            best = min(range(len(self.pairs)), key=lambda k: (self._pair_sugar(self.pairs[k]), key(self.pairs[k][2])))
            pair = self.pairs.pop(best)
            sugar = self._pair_sugar(pair)
            i, j, _ = pair
            s = _spoly(self.polys[i][0], self.polys[i][1], self.polys[j][0], self.polys[j][1])
            if not s:
                continue
            basis = [(self.polys[g][0], self.polys[g][1]) for g in self.active]
            h = _reduce(s, basis, key)
            if h:
                self.add(h, max(sugar, self.sugar_of(h)))
        if self.unit:
            one = (0,) * self.ring.nvars
            return [(one, {one: self.ring.coerce_coeff(1)})]
        return _interreduce([(self.polys[g][0], self.polys[g][1]) for g in self.active], key)


def _interreduce(basis: list, key) -> list:
    """Minimal, monic, tail-reduced basis sorted by increasing leading monomial."""
    basis = sorted(basis, key=lambda t: key(t[0]))
    minimal = []
    for lm, f in basis:
        if not any(mono_divides(lm2, lm) for lm2, _ in minimal):
            minimal.append((lm, f))
    out = []
    for idx, (lm, f) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        tail = {e: c for e, c in f.items() if e != lm}
        red = _reduce(tail, others, key)
        red[lm] = f[lm]
        out.append(_monic(red, key))
    return out


# ---------------------------------------------------------------------------
# public Groebner basis type


@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    """Reduced Groebner basis: monic, interreduced, sorted by leading monomial."""

    ring: WeightedRing
    order: MonomialOrder
    elements: tuple
    generators: tuple = field(default=())

    @cached_property
    def key(self):
        return self.order.key(self.ring)

    @cached_property
    def _basis(self) -> list:
        return [(p.leading_term(self.key)[0], p.terms) for p in self.elements]

    @classmethod
    def from_reduced(cls, ring, order, elements, generators=()):
        """Wrap a basis already known to be Groebner, interreducing it."""
        key = order.key(ring)
        raw = [_monic(dict(p.terms), key) for p in elements if p]
        if any(not any(lm) for lm, _ in raw):
            one = (0,) * ring.nvars
            raw = [(one, {one: ring.coerce_coeff(1)})]
        red = _interreduce(raw, key)
        polys = tuple(Polynomial._from_clean(ring, f) for _, f in red)
        return cls(ring, order, polys, tuple(generators))

    @property
    def leading_monomials(self) -> list:
        return [lm for lm, _ in self._basis]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def is_unit_ideal(self) -> bool:
        return any(not any(lm) for lm in self.leading_monomials)

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise ZSchemeError("RING_MISMATCH", f"{f.ring} vs {self.ring}")
        return Polynomial._from_clean(self.ring, _reduce(f.terms, self._basis, self.key))

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f)

    def s_pairs_reduce_to_zero(self) -> bool:
        """Replay Buchberger's criterion on every pair of basis elements."""
        b = self._basis
        for i in range(len(b)):
            for j in range(i + 1, len(b)):
                s = _spoly(b[i][0], b[i][1], b[j][0], b[j][1])
                if s and _reduce(s, b, self.key):
                    return False
        return True

    def is_zero_dimensional(self) -> bool:
        n = self.ring.nvars
        have = set()
        for lm in self.leading_monomials:
            support = [i for i, a in enumerate(lm) if a]
            if len(support) == 1:
                have.add(support[0])
            elif not support:
                return True
        return len(have) == n

    def standard_monomials(self) -> list:
        """Monomials outside the leading-term ideal, in increasing order."""
        if not self.is_zero_dimensional():
            raise ZSchemeError("NOT_ZERO_DIMENSIONAL", "quotient is not finite-dimensional")
        if self.is_unit_ideal():
            return []
        lms = self.leading_monomials
        n = self.ring.nvars
        start = (0,) * n
        seen = {start}
        stack = [start]
        while stack:
            m = stack.pop()
            for i in range(n):
                nxt = m[:i] + (m[i] + 1,) + m[i + 1 :]
                if nxt not in seen and not any(mono_divides(lm, nxt) for lm in lms):
                    seen.add(nxt)
                    stack.append(nxt)
        return sorted(seen, key=self.key)

    def quotient_dimension(self) -> int:
        return len(self.standard_monomials())

    def hilbert_series(self) -> "HilbertSeries":
        for p in self.elements:
            if weighted_degree(p) is MIXED:
                raise ZSchemeError("NOT_HOMOGENEOUS", f"basis element {p} is not homogeneous")
        num = _hilbert_numerator(list(self.leading_monomials), self.ring.weights)
        return HilbertSeries(tuple(num), self.ring.weights)

    def algebra(self) -> "QuotientAlgebra":
        return QuotientAlgebra(self)


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder = WEIGHTED_GREVLEX, ring: WeightedRing | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ZSchemeError("RING_MISMATCH", "ring required for an empty generator list")
        ring = gens[0].ring
    if any(g.ring != ring for g in gens):
        raise ZSchemeError("RING_MISMATCH", "generators must share one ring")
    key = order.key(ring)
    eng = _Engine(ring, key)
    for g in sorted((g for g in gens if g), key=lambda g: key(g.leading_term(key)[0])):
        eng.add(dict(g.terms), eng.sugar_of(g.terms))
    red = eng.run()
    elements = tuple(Polynomial._from_clean(ring, f) for _, f in red)
    return GroebnerBasis(ring, order, elements, tuple(gens))


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.normal_form(f)


def standard_monomials(gb: GroebnerBasis) -> list:
    return gb.standard_monomials()


# ---------------------------------------------------------------------------
# finite-dimensional quotient algebras


class QuotientAlgebra:
    """The algebra ring/ideal for a zero-dimensional Groebner basis, with the
    standard monomials as basis.  Coordinates are lists of field elements."""

    def __init__(self, gb: GroebnerBasis):
        self.gb = gb
        self.ring = gb.ring
        self.basis = gb.standard_monomials()
        self.index = {m: i for i, m in enumerate(self.basis)}
        self._zero = self.ring.zero_coeff()
        self._products: dict = {}

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def coords_of_dict(self, terms: dict) -> list:
        rem = _reduce(terms, self.gb._basis, self.gb.key)
        vec = [self._zero] * len(self.basis)
        for e, c in rem.items():
            vec[self.index[e]] = c
        return vec

    def coords(self, f: Polynomial) -> list:
        if f.ring != self.ring:
            raise ZSchemeError("RING_MISMATCH", f"{f.ring} vs {self.ring}")
        return self.coords_of_dict(f.terms)

    def element(self, vec: Sequence) -> Polynomial:
        return Polynomial(self.ring, {m: c for m, c in zip(self.basis, vec) if c})

    def product(self, i: int, j: int) -> list:
        if i > j:
            i, j = j, i
        got = self._products.get((i, j))
        if got is None:
            m = mono_mul(self.basis[i], self.basis[j])
            got = self.coords_of_dict({m: self.ring.coerce_coeff(1)})
            self._products[(i, j)] = got
        return got

    def multiplication_matrix(self, f: Polynomial) -> list:
        """Matrix of ``b -> f*b``; column j holds the coordinates of f*b_j."""
        r = len(self.basis)
        fc = self.coords(f)
        cols = []
        for j in range(r):
            col = [self._zero] * r
            for i, a in enumerate(fc):
                if a:
                    prod = self.product(i, j)
                    for k, c in enumerate(prod):
                        if c:
                            col[k] = col[k] + a * c
            cols.append(col)
        return [[cols[j][i] for j in range(r)] for i in range(r)]

    def multiply(self, x: Sequence, y: Sequence) -> list:
        r = len(self.basis)
        out = [self._zero] * r
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.product(i, j)):
                    if c:
                        out[k] = out[k] + ab * c
        return out

    @cached_property
    def trace_vector(self) -> list:
        """``Tr(b_k)`` for each basis monomial."""
        r = len(self.basis)
        out = []
        for k in range(r):
            acc = self._zero
            for j in range(r):
                c = self.product(k, j)[j]
                if c:
                    acc = acc + c
            out.append(acc)
        return out

    def trace_of_coords(self, vec: Sequence):
        acc = self._zero
        for a, t in zip(vec, self.trace_vector):
            if a and t:
                acc = acc + a * t
        return acc

    def trace(self, f: Polynomial):
        return self.trace_of_coords(self.coords(f))

    def trace_form(self) -> list:
        r = len(self.basis)
        return [[self.trace_of_coords(self.product(i, j)) for j in range(r)] for i in range(r)]

    def charpoly(self, f: Polynomial) -> UPoly:
        if self.ring.is_param:
            raise ZSchemeError("RING_MISMATCH", "characteristic polynomials are computed over QQ only")
        return linalg.charpoly(self.multiplication_matrix(f))

    def count_distinct_points(self, tries: int = 4) -> int:
        """Number of distinct points of a QQ-fiber, from the squarefree part of
        the characteristic polynomial of a generic linear form."""
        best = 0
        names = self.ring.names
        for t in range(tries):
            form = self.ring.zero()
            for i, n in enumerate(names):
                form = form + self.ring.var(n) * ((i + 1) ** (t + 1) + t)
            cp = self.charpoly(form)
            best = max(best, cp.squarefree_part().degree)
            if best == self.dimension:
                break
        return best


def multiplication_matrix(f: Polynomial, gb: GroebnerBasis) -> list:
    return QuotientAlgebra(gb).multiplication_matrix(f)


def trace_form_determinant(gb: GroebnerBasis):
    """Determinant of the trace form; nonzero exactly when the algebra is reduced."""
    alg = QuotientAlgebra(gb)
    if alg.dimension == 0:
        return gb.ring.coerce_coeff(1)
    return linalg.determinant(alg.trace_form())


# ---------------------------------------------------------------------------
# Hilbert series


def _padd(a: list, b: list) -> list:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return _ptrim(out)


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def _ptrim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _one_minus(k: int) -> list:
    if k == 0:
        return []
    out = [0] * (k + 1)
    out[0] = 1
    out[k] -= 1
    return out


def _div_one_minus(a: list, k: int) -> list | None:
    """Exact quotient of ``a`` by ``1 - t^k``, or None."""
    a = list(a)
    if not a:
        return []
    n = len(a) - 1 - k
    if n < 0:
        return None
    q = [0] * (n + 1)
    for i in range(n + 1):
        q[i] = a[i] + (q[i - k] if i >= k else 0)
    if _pmul(q, _one_minus(k)) != _ptrim(a):
        return None
    return q


def _minimalize(gens: list) -> list:
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(mono_divides(h, g) for h in out):
            out.append(g)
    return out


def _hilbert_numerator(gens: list, weights: tuple) -> list:
    """Numerator N with HS(R/I) = N / prod(1 - t^w) for a monomial ideal I."""
    gens = _minimalize(gens)
    if not gens:
        return [1]
    if any(not any(g) for g in gens):
        return []
    supports = [[i for i, a in enumerate(g) if a] for g in gens]
    used: dict = {}
    coprime = True
    for s in supports:
        for i in s:
            if i in used:
                coprime = False
            used[i] = used.get(i, 0) + 1
    if coprime:
        out = [1]
        for g in gens:
            out = _pmul(out, _one_minus(sum(a * w for a, w in zip(g, weights))))
        return out
    mixed = [g for g, s in zip(gens, supports) if len(s) > 1]
    counts: dict = {}
    for g in mixed:
        for i, a in enumerate(g):
            if a:
                counts[i] = counts.get(i, 0) + 1
    j = max(sorted(counts), key=lambda i: counts[i])
    k = min(g[j] for g in mixed if g[j])
    pivot = tuple(k if i == j else 0 for i in range(len(weights)))
    left = _hilbert_numerator(gens + [pivot], weights)
    colon = [tuple(max(0, a - k) if i == j else a for i, a in enumerate(g)) for g in gens]
    right = _hilbert_numerator(colon, weights)
    shift = k * weights[j]
    return _padd(left, [0] * shift + right)


@dataclass(frozen=True)
class HilbertSeries:
    """Rational function ``numerator(t) / prod(1 - t^d for d in denominator)``."""

    numerator: tuple
    denominator: tuple

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(_ptrim([int(a) for a in self.numerator])))
        object.__setattr__(self, "denominator", tuple(sorted(int(d) for d in self.denominator)))

    @classmethod
    def from_polynomial(cls, coeffs: Sequence[int], denominator: Sequence[int] = ()) -> "HilbertSeries":
        """Series ``P(t) / prod(1 - t^d)`` given the coefficients of P."""
        return cls(tuple(coeffs), tuple(denominator))

    @classmethod
    def complete_intersection(cls, degrees: Sequence[int], weights: Sequence[int]) -> "HilbertSeries":
        num = [1]
        for d in degrees:
            num = _pmul(num, _one_minus(d))
        return cls(tuple(num), tuple(weights))

    def _cross(self) -> list:
        return list(self.numerator)

    def __eq__(self, other):
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        lhs = list(self.numerator)
        for d in other.denominator:
            lhs = _pmul(lhs, _one_minus(d))
        rhs = list(other.numerator)
        for d in self.denominator:
            rhs = _pmul(rhs, _one_minus(d))
        return lhs == rhs

    def __hash__(self):
        # equal series can reduce differently, but their expansions agree
        return hash(tuple(self.coefficients(24)))

    def coefficients(self, upto: int) -> list:
        """Power-series coefficients of t^0 .. t^upto."""
        out = [0] * (upto + 1)
        for i, a in enumerate(self.numerator):
            if i <= upto:
                out[i] = a
        for d in self.denominator:
            for i in range(d, upto + 1):
                out[i] += out[i - d]
        return out

    def reduced(self) -> "HilbertSeries":
        """Cancel as many denominator factors as divide the numerator.

        Largest weights go first so that ``(1 - t^4)`` is not traded for a
        leftover ``(1 - t^2)`` pair that no longer divides.
        """
        num = list(self.numerator)
        left = []
        for d in sorted(self.denominator, reverse=True):
            q = _div_one_minus(num, d)
            if q is None:
                left.append(d)
            else:
                num = q
        return HilbertSeries(tuple(num), tuple(left))

    def as_polynomial(self) -> tuple | None:
        """Coefficients of the series when it is a polynomial, else None."""
        red = self.reduced()
        return red.numerator if not red.denominator else None

    def dimension(self) -> int | None:
        poly = self.as_polynomial()
        return None if poly is None else sum(poly)

    def times(self, *factors: int) -> "HilbertSeries":
        """Multiply by ``prod(1 - t^f)``."""
        num = list(self.numerator)
        for f in factors:
            num = _pmul(num, _one_minus(f))
        return HilbertSeries(tuple(num), self.denominator)

    def numerator_over(self, weights: Sequence[int]) -> list | None:
        """Numerator when the series is rewritten over ``prod(1 - t^w)``."""
        num = list(self.numerator)
        extra = list(weights)
        for d in self.denominator:
            if d in extra:
                extra.remove(d)
            else:
                q = _div_one_minus(num, d)
                if q is None:
                    return None
                num = q
        for d in extra:
            num = _pmul(num, _one_minus(d))
        return num

    def to_dict(self) -> dict:
        return {"numerator": list(self.numerator), "denominator_weights": list(self.denominator)}

    def __str__(self):
        num = poly_str(self.numerator)
        if not self.denominator:
            return num
        den = "*".join(f"(1 - t^{d})" for d in self.denominator)
        return f"({num})/({den})"


def poly_str(coeffs: Sequence[int], var: str = "t") -> str:
    return UPoly(coeffs).to_str(var)


def hilbert_series(gens: Sequence[Polynomial], ring: WeightedRing | None = None) -> HilbertSeries:
    """Hilbert series of ring/(gens) for weighted homogeneous generators."""
    gens = [g for g in gens if g]
    ring = ring or (gens[0].ring if gens else None)
    if ring is None:
        raise ZSchemeError("RING_MISMATCH", "ring required for an empty generator list")
    for g in gens:
        if weighted_degree(g) is MIXED:
            raise ZSchemeError("NOT_HOMOGENEOUS", f"{g} is not weighted homogeneous")
    if not gens:
        return HilbertSeries((1,), ring.weights)
    return buchberger(gens, WEIGHTED_GREVLEX, ring).hilbert_series()


def is_regular_sequence(gens: Sequence[Polynomial], ring: WeightedRing | None = None):
    """Regular-sequence test for homogeneous generators via Hilbert series.

    Returns ``(ok, certificate)`` where the certificate records the computed
    series and the complete-intersection prediction.
    """
    gens = list(gens)
    ring = ring or (gens[0].ring if gens else None)
    if ring is None:
        return True, {"computed": "1", "expected": "1"}
    degrees = []
    for g in gens:
        d = weighted_degree(g)
        if d is MIXED:
            raise ZSchemeError("NOT_HOMOGENEOUS", f"{g} is not weighted homogeneous")
        if d is ZERO_POLY:
            return False, {"reason": "zero element in sequence"}
        degrees.append(d)
    computed = hilbert_series(gens, ring)
    expected = HilbertSeries.complete_intersection(degrees, ring.weights)
    ok = computed == expected
    return ok, {
        "degrees": degrees,
        "computed": computed.to_dict(),
        "expected": expected.to_dict(),
    }
