"""The zero scheme Z of ``2V - vW`` on chart x line, and its certificates."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .errors import ZSchemeError
from .exactalg import (
    MIXED,
    PARAM,
    QQ,
    Polynomial,
    WeightedRing,
    qq,
    substitute,
    to_param_field,
    weighted_degree,
)
from .groebner import (
    WEIGHTED_GREVLEX,
    GroebnerBasis,
    QuotientAlgebra,
    buchberger,
    is_regular_sequence,
)
from .regvariety import PN, RegularModel
from . import linalg

DEFAULT_SAMPLES = (1, 2, -1)


class ZSchemeIdeal:
    """Ideal of Z in ``QQ[x_1..x_n, v]`` with lazily cached Groebner data.

    Caches are filled under a lock, so a shared instance is safe to use from
    several threads.
    """

    def __init__(self, model: RegularModel, generators=None):
        self.model = model
        self.ring: WeightedRing = model.ambient_ring()
        self.chart_ring: WeightedRing = model.ring
        gens = tuple(generators) if generators is not None else model.canonical_generators()
        if len(gens) != model.dimension:
            raise ZSchemeError("DIMENSION_MISMATCH", "one generator per coordinate required")
        self.generators = tuple(g if g.ring == self.ring else substitute(g, {}, ring=self.ring) for g in gens)
        self._lock = threading.RLock()
        self._cache: dict = {}

    def __repr__(self):
        return f"ZSchemeIdeal({self.model.label}, {len(self.generators)} generators)"

    def _cached(self, key, build):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    @property
    def degrees(self) -> list:
        return [weighted_degree(g) for g in self.generators]

    @property
    def v(self) -> Polynomial:
        return self.ring.var(PARAM)

    def scaled(self, index: int, factor) -> "ZSchemeIdeal":
        """Same ideal with generator ``index`` multiplied by ``factor``."""
        gens = list(self.generators)
        gens[index] = gens[index] * qq(factor)
        return ZSchemeIdeal(self.model, gens)

    # Groebner data
    @property
    def gb(self) -> GroebnerBasis:
        """Basis over QQ in the weighted order where v is least significant."""
        return self._cached("gb", lambda: buchberger(self.generators, WEIGHTED_GREVLEX, self.ring))

    @property
    def ordinary_gb(self) -> GroebnerBasis:
        """Basis of the ideal modulo v, in the chart ring."""
        return self._cached("ordinary", self._build_ordinary)

    def _build_ordinary(self) -> GroebnerBasis:
        gens = [self.restrict_v(g, 0) for g in self.generators]
        return buchberger(gens, WEIGHTED_GREVLEX, self.chart_ring)

    @property
    def param_gb(self) -> GroebnerBasis:
        """Basis over QQ(v) obtained from :attr:`gb`."""
        return self._cached("param", self._build_param)

    def _build_param(self) -> GroebnerBasis:
        vi = self.ring.index(PARAM)
        gb = self.gb
        target = self.ring.param_field()
        moved = [to_param_field(p) for p in gb.elements]
        if all(lm[vi] == 0 for lm in gb.leading_monomials):
            # leading terms are v-free, so they stay leading over QQ(v)
            return GroebnerBasis.from_reduced(target, WEIGHTED_GREVLEX, moved, moved)
        return buchberger([to_param_field(g) for g in self.generators], WEIGHTED_GREVLEX, target)

    def restrict_v(self, p: Polynomial, v0) -> Polynomial:
        """Specialize ``v = v0`` and land in the chart ring."""
        return substitute(p, {PARAM: qq(v0)}, ring=self.chart_ring)

    def normalization_ok(self) -> bool:
        """Coefficient of ``v*x_i`` in generator i equals ``+a_i``."""
        vi = self.ring.index(PARAM)
        for i, (g, a) in enumerate(zip(self.generators, self.model.weights)):
            e = [0] * self.ring.nvars
            e[i] += 1
            e[vi] += 1
            if g.coefficient(tuple(e)) != a:
                return False
        return True


def zscheme_ideal(m: RegularModel) -> ZSchemeIdeal:
    z = ZSchemeIdeal(m)
    for name, g, a in zip(m.names, z.generators, m.weights):
        d = weighted_degree(g)
        if d is MIXED or d != a + 2:
            raise ZSchemeError(
                "DEGREE_MISMATCH", f"generator for {name} has degree {d}, expected {a + 2}",
                coordinate=name,
            )
    return z


def flat_degree(z: ZSchemeIdeal) -> int:
    """Rank of the coordinate ring over ``QQ[v]``.

    Counted over QQ(v) and at v = 0; the two counts must agree.
    """
    generic = z.param_gb.quotient_dimension()
    special = z.ordinary_gb.quotient_dimension()
    if generic != special:
        raise ZSchemeError(
            "NOT_FREE", f"rank over QQ(v) is {generic} but the v=0 fiber has dimension {special}",
            generic=generic, special=special,
        )
    return generic


def certify_regular_sequence(z: ZSchemeIdeal) -> dict:
    ok, cert = is_regular_sequence(list(z.generators) + [z.v], z.ring)
    if not ok:
        raise ZSchemeError("CERTIFICATE_FAILED", "generators and v do not form a regular sequence", **cert)
    return {"regular_sequence": True, **cert}


@dataclass(frozen=True)
class FiberDecomposition:
    v0: object
    dimension: int
    reduced: bool
    trace_form_determinant: object
    charpolys: dict = field(default_factory=dict)
    distinct_points: int | None = None

    def to_dict(self) -> dict:
        return {
            "v0": str(self.v0),
            "dimension": self.dimension,
            "reduced": self.reduced,
            "trace_form_determinant": str(self.trace_form_determinant),
            "charpolys": {k: p.to_str("x") for k, p in self.charpolys.items()},
            "distinct_points": self.distinct_points,
        }


def fiber_algebra(z: ZSchemeIdeal, v0) -> QuotientAlgebra:
    """The finite QQ-algebra of the fiber over ``v = v0`` (cached)."""
    v0 = qq(v0)

    def build():
        gens = [z.restrict_v(g, v0) for g in z.generators]
        return QuotientAlgebra(buchberger(gens, WEIGHTED_GREVLEX, z.chart_ring))

    return z._cached(("fiber", v0), build)


def fiber(z: ZSchemeIdeal, v0, charpolys: bool = True) -> FiberDecomposition:
    v0 = qq(v0)
    alg = fiber_algebra(z, v0)
    det = linalg.determinant(alg.trace_form()) if alg.dimension else QQ(1)
    polys = {}
    if charpolys:
        for name in z.chart_ring.names:
            polys[name] = alg.charpoly(z.chart_ring.var(name))
    points = alg.count_distinct_points() if det else None
    return FiberDecomposition(v0, alg.dimension, bool(det), det, polys, points)


def hilbert_series_Z(z: ZSchemeIdeal) -> tuple:
    """``(F, P)``: series of the coordinate ring of Z and of its quotient by v."""
    F = z.gb.hilbert_series()
    P = z.ordinary_gb.hilbert_series()
    if F.times(2) != P:
        raise ZSchemeError("NOT_FREE", "F(t)(1 - t^2) differs from P(t)", F=F.to_dict(), P=P.to_dict())
    return F, P


# ---------------------------------------------------------------------------
# P^n components


@dataclass(frozen=True)
class ComponentData:
    """Affine line of Z through the m-th fixed point of P^n, as ``x_j(v)``."""

    n: int
    index: int
    chain: tuple  # x_1(v), ..., x_n(v) in QQ[v]


PARAM_RING = WeightedRing((PARAM,), (2,))


def component_data(n: int, m: int) -> ComponentData:
    if not 0 <= m <= n:
        raise ZSchemeError("BAD_COMPONENT", f"component index must lie in 0..{n}")
    v = PARAM_RING.var(PARAM)
    chain = [-m * v]
    for j in range(1, n):
        chain.append(chain[-1] * (chain[0] + j * v))
    return ComponentData(n, m, tuple(chain))


def component_restriction(z: ZSchemeIdeal, f: Polynomial, m: int) -> Polynomial:
    """Restrict the class ``f`` to the m-th component; a polynomial in v."""
    kind, n = z.model.provenance
    if kind != PN:
        raise ZSchemeError("WRONG_PROVENANCE", f"components are only built for P^n, not {z.model.label}")
    data = component_data(n, m)
    if f.ring != z.ring:
        f = substitute(f, {}, ring=z.ring)
    assignment = dict(zip(z.chart_ring.names, data.chain))
    assignment[PARAM] = PARAM_RING.var(PARAM)
    return substitute(f, assignment, ring=PARAM_RING)
