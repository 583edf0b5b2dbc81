"""Equivariant push-forward to a point as a trace over the finite ``QQ(v)``-algebra.

For a class f, ``integral(f) = Tr(f / J)`` where J is the Jacobian of the
canonical generators; at a reduced fiber this is the sum of ``f/J`` over
its points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ZSchemeError
from .exactalg import (
    MIXED,
    PARAM,
    QQ,
    ZERO_POLY,
    Polynomial,
    RatFunc,
    UPoly,
    jacobian_determinant,
    parse_polynomial,
    qq,
    substitute,
    to_param_field,
    weighted_degree,
)
from .fundscheme import PARAM_RING, ZSchemeIdeal, fiber_algebra, flat_degree
from .groebner import WEIGHTED_GREVLEX, QuotientAlgebra, buchberger
from . import linalg

TRACE = "TRACE"
FIBER_SUM = "FIBER_SUM"


@dataclass(frozen=True)
class JacobianClass:
    J: Polynomial
    ideal: ZSchemeIdeal = field(repr=False)

    @property
    def degree(self):
        return weighted_degree(self.J)


def jacobian_class(z: ZSchemeIdeal) -> JacobianClass:
    J = jacobian_determinant(z.generators, z.chart_ring.names)
    return JacobianClass(J, z)


def jacobian_not_in_ideal(polys, variables=None) -> tuple:
    """``(ok, normal form)`` of the Jacobian of ``polys`` modulo the ideal they generate."""
    polys = list(polys)
    ring = polys[0].ring
    variables = list(variables or ring.names)
    J = jacobian_determinant(polys, variables)
    nonzero = [p for p in polys if p]
    if not J:
        return False, J
    if not nonzero:
        return True, J
    nf = buchberger(nonzero, WEIGHTED_GREVLEX, ring).normal_form(J)
    return bool(nf), nf


def jacobian_nondivisibility(z: ZSchemeIdeal) -> dict:
    """J does not vanish modulo ``I(Z) + (v)``."""
    J = jacobian_class(z).J
    nf = z.ordinary_gb.normal_form(z.restrict_v(J, 0))
    if not nf:
        raise ZSchemeError("CERTIFICATE_FAILED", "J lies in I(Z) + (v)", J=str(J))
    return {"ok": True, "J": str(J), "normal_form": str(nf)}


def _as_v_polynomial(value: RatFunc, code: str, what: str) -> Polynomial:
    if not value.is_polynomial():
        raise ZSchemeError(code, f"{what} is {value}, not a polynomial in v", value=str(value))
    return upoly_to_polynomial(value.as_upoly())


def upoly_to_polynomial(p: UPoly) -> Polynomial:
    return Polynomial(PARAM_RING, {(k,): c for k, c in enumerate(p.c) if c})


def _lift(z: ZSchemeIdeal, f) -> Polynomial:
    if isinstance(f, str):
        return parse_polynomial(f, z.ring)
    if not isinstance(f, Polynomial):
        return z.ring.const(f)
    if f.ring != z.ring:
        return substitute(f, {}, ring=z.ring)
    return f


def _param_algebra(z: ZSchemeIdeal) -> QuotientAlgebra:
    return z._cached("param_algebra", lambda: QuotientAlgebra(z.param_gb))


def trace(z: ZSchemeIdeal, f) -> Polynomial:
    """``Tr(f)`` over ``QQ(v)``; a polynomial in v since the algebra is free."""
    alg = _param_algebra(z)
    value = alg.trace(to_param_field(_lift(z, f)))
    return _as_v_polynomial(RatFunc.coerce(value), "NONPOLYNOMIAL_TRACE", "the trace")


@dataclass(frozen=True)
class IntegralResult:
    value: Polynomial  # in QQ[v]
    degree: object  # weighted degree of the input class
    model: str
    method: str = TRACE
    dimension: int = 0

    @property
    def expected_degree(self):
        if self.degree in (MIXED, ZERO_POLY):
            return None
        return self.degree - 2 * self.dimension

    def at(self, v0):
        return substitute(self.value, {PARAM: qq(v0)}).constant_term()

    def to_dict(self) -> dict:
        return {
            "polynomial": str(self.value) if self.value else "0",
            "input_degree": self.degree if isinstance(self.degree, int) else str(self.degree.name),
            "model": self.model,
            "method": self.method,
        }


def _jacobian_inverse_solver(z: ZSchemeIdeal, J: Polynomial, alg: QuotientAlgebra):
    key = ("jac_matrix", J)

    def build():
        return alg.multiplication_matrix(to_param_field(J))

    return z._cached(key, build)


def equivariant_integral(z: ZSchemeIdeal, f, J: Polynomial | None = None) -> IntegralResult:
    """Residue formula ``sum over Z of f/J``, computed as ``Tr(M_f M_J^-1)``."""
    f = _lift(z, f)
    J = jacobian_class(z).J if J is None else _lift(z, J)
    alg = _param_algebra(z)
    MJ = _jacobian_inverse_solver(z, J, alg)
    rhs = alg.coords(to_param_field(f))
    try:
        h = linalg.solve(MJ, rhs)
    except ZSchemeError as exc:
        raise ZSchemeError("J_NOT_INVERTIBLE", "J is a zero divisor modulo I(Z)") from exc
    value = RatFunc.coerce(alg.trace_of_coords(h))
    poly = _as_v_polynomial(value, "NONPOLYNOMIAL_INTEGRAL", "the integral")
    return IntegralResult(poly, weighted_degree(f), z.model.label, TRACE, z.model.dimension)


def fiber_sum_oracle(z: ZSchemeIdeal, f, v0, J: Polynomial | None = None):
    """``sum f/J`` over the fiber at ``v = v0``, using only QQ arithmetic."""
    v0 = qq(v0)
    if not v0:
        raise ZSchemeError("ZERO_FIBER", "the oracle needs v0 != 0")
    f = _lift(z, f)
    J = jacobian_class(z).J if J is None else _lift(z, J)
    alg = fiber_algebra(z, v0)
    MJ = alg.multiplication_matrix(z.restrict_v(J, v0))
    try:
        h = linalg.solve(MJ, alg.coords(z.restrict_v(f, v0)))
    except ZSchemeError:
        raise ZSchemeError("SINGULAR_J_AT_FIBER", f"J is not invertible on the fiber v = {v0}") from None
    return alg.trace_of_coords(h)


def normalization_guard(z: ZSchemeIdeal) -> dict:
    """Catches a rescaled generator: normalization and ``integral(J) = r`` must both hold."""
    r = flat_degree(z)
    canonical = ZSchemeIdeal(z.model)
    J_canonical = jacobian_class(canonical).J
    value = equivariant_integral(z, J_canonical).value
    integral_ok = value == PARAM_RING.const(r)
    coeffs_ok = z.normalization_ok()
    return {
        "ok": integral_ok and coeffs_ok,
        "normalization": coeffs_ok,
        "integral_of_J": str(value) if value else "0",
        "rank": r,
    }


def random_homogeneous_class(z: ZSchemeIdeal, degree: int, rng, terms: int = 4, bound: int = 5) -> Polynomial:
    """Random class of the given weighted degree with small integer coefficients."""
    ring = z.ring
    monos = list(_monomials_of_degree(ring.weights, degree))
    if not monos:
        return ring.zero()
    chosen = rng.sample(monos, min(terms, len(monos)))
    out = {}
    for m in chosen:
        c = rng.randint(-bound, bound)
        if c:
            out[m] = QQ(c)
    return Polynomial(ring, out)


def _monomials_of_degree(weights, degree):
    def rec(i, left):
        if i == len(weights):
            if left == 0:
                yield ()
            return
        for k in range(left // weights[i] + 1):
            for rest in rec(i + 1, left - k * weights[i]):
                yield (k,) + rest

    yield from rec(0, degree)
