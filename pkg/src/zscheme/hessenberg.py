"""Regular nilpotent Hessenberg varieties inside type A flag varieties.

The ideal of Z_Y is generated by every ``F_a`` of the flag model together
with ``v_b`` for the negative roots b outside omega.  The generated ideal
can have embedded structure along ``v = 0`` (for omega empty it is the whole
flag fiber there), so computations use its saturation by v, which is the
ideal of the closure of the part over ``v != 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .cohomology import graded_duality_certificate
from .errors import ZSchemeError
from .exactalg import PARAM, Polynomial, substitute
from .groebner import (
    WEIGHTED_GREVLEX,
    GroebnerBasis,
    HilbertSeries,
    _div_one_minus,
    buchberger,
)
from .regvariety import RegularModel, flag_model_a
from .rootsys import HessenbergSpace, format_root, hessenberg_fixed_points, require_valid


def _strip_v(p: Polynomial, vi: int) -> tuple:
    """Divide by the largest power of v dividing p; returns (quotient, power)."""
    k = min(e[vi] for e in p.terms)
    if not k:
        return p, 0
    terms = {e[:vi] + (e[vi] - k,) + e[vi + 1 :]: c for e, c in p.terms.items()}
    return Polynomial(p.ring, terms), k


class HessenbergIdeal:
    def __init__(self, space: HessenbergSpace, model: RegularModel | None = None):
        require_valid(space)
        self.space = space
        self.model = model or flag_model_a(space.rank)
        data = self.model.flag
        self.ring = self.model.ambient_ring()
        self.chart_ring = self.model.ring
        gens = [data.F_alpha[r] for r in data.coordinates]
        self.added = tuple(r for r in data.coordinates if r not in space.omega)
        gens += [substitute(data.v_alpha[r], {}, ring=self.ring) for r in self.added]
        self.generators = tuple(gens)

    @property
    def rank(self) -> int:
        return self.space.rank

    @cached_property
    def generated_gb(self) -> GroebnerBasis:
        return buchberger(self.generators, WEIGHTED_GREVLEX, self.ring)

    @cached_property
    def _saturation(self) -> tuple:
        vi = self.ring.index(PARAM)
        stripped = [_strip_v(p, vi) for p in self.generated_gb.elements]
        changed = any(k for _, k in stripped)
        gb = GroebnerBasis.from_reduced(
            self.ring, WEIGHTED_GREVLEX, [p for p, _ in stripped], self.generators
        )
        return gb, not changed

    @property
    def gb(self) -> GroebnerBasis:
        """Basis of the saturation ``(generators) : v^infinity``."""
        return self._saturation[0]

    @property
    def generated_is_saturated(self) -> bool:
        return self._saturation[1]

    @cached_property
    def ordinary_gb(self) -> GroebnerBasis:
        gens = [substitute(p, {PARAM: 0}, ring=self.chart_ring) for p in self.gb.elements]
        return buchberger([g for g in gens if g], WEIGHTED_GREVLEX, self.chart_ring)

    def contains_flag_ideal(self) -> bool:
        return all(not self.gb.normal_form(g) for g in self.model.canonical_generators())


def hessenberg_ideal(rank: int, space: HessenbergSpace) -> HessenbergIdeal:
    if space.rank != rank:
        raise ZSchemeError("DIMENSION_MISMATCH", f"omega lives in A{space.rank}, not A{rank}")
    h = HessenbergIdeal(space)
    if not h.contains_flag_ideal():
        raise ZSchemeError("CHECK_FAILED", "ideal of Z_Y does not contain the flag ideal")
    return h


# ---------------------------------------------------------------------------
# product formula


def _q_to_t(coeffs) -> tuple:
    out = []
    for c in coeffs:
        out += [c, 0]
    return tuple(out[:-1]) if out else ()


@dataclass(frozen=True)
class ProductFormula:
    """``prod (1 - q^{ht+1}) / (1 - q^{ht})`` over the roots of omega."""

    heights: tuple
    series: HilbertSeries  # in q
    diagnostic: str | None = None

    @property
    def polynomial(self) -> tuple | None:
        return self.series.as_polynomial()

    @property
    def is_polynomial(self) -> bool:
        return self.diagnostic is None

    def in_t(self) -> HilbertSeries:
        """The same product with ``q = t^2``."""
        red = self.series.reduced()
        return HilbertSeries(_q_to_t(red.numerator), tuple(2 * d for d in red.denominator))

    def to_dict(self) -> dict:
        return {
            "heights": list(self.heights),
            "q_numerator": list(self.series.reduced().numerator),
            "q_denominator": list(self.series.reduced().denominator),
            "diagnostic": self.diagnostic,
        }


def product_formula(space: HessenbergSpace) -> ProductFormula:
    """Evaluates the product for any omega; invalid ones may not give a polynomial."""
    rs = space.root_system
    heights = tuple(sorted(rs.height(r) for r in space.omega))
    num = [1]
    for h in heights:
        nxt = [0] * (len(num) + h + 1)
        for i, a in enumerate(num):
            nxt[i] += a
            nxt[i + h + 1] -= a
        num = nxt
    series = HilbertSeries(tuple(num), heights).reduced()
    diagnostic = None
    if series.denominator:
        diagnostic = "NOT_POLYNOMIAL"
    elif any(c < 0 for c in series.numerator):
        diagnostic = "NEGATIVE_COEFFICIENT"
    return ProductFormula(heights, series, diagnostic)


# ---------------------------------------------------------------------------
# certificates


def hessenberg_poincare(rank: int, space: HessenbergSpace, h: HessenbergIdeal | None = None) -> HilbertSeries:
    """Hilbert series of the ordinary quotient; must match the product formula."""
    h = h or hessenberg_ideal(rank, space)
    series = h.ordinary_gb.hilbert_series().reduced()
    expected = product_formula(space).in_t()
    if series != expected:
        raise ZSchemeError(
            "MISMATCH", f"Poincare series of omega {space} disagrees with the product formula",
            computed=series.to_dict(), product_formula=expected.to_dict(),
            generated_is_saturated=h.generated_is_saturated,
        )
    return series


def _peel(numerator: list) -> list | None:
    """Write ``numerator`` as ``prod (1 - t^e)``; returns the exponents or None."""
    num = list(numerator)
    exps = []
    while len(num) > 1:
        k = next(i for i in range(1, len(num)) if num[i])
        if num[k] > 0:
            return None
        q = _div_one_minus(num, k)
        if q is None:
            return None
        exps.append(k)
        num = q
    return exps if num == [1] else None


def complete_intersection_check(h: HessenbergIdeal, strict: bool = True) -> dict:
    series = h.gb.hilbert_series()
    numerator = series.numerator_over(h.ring.weights)
    exps = _peel(numerator) if numerator is not None else None
    codim = h.ring.nvars - 1
    ok = exps is not None and len(exps) == codim
    cert = {"ok": ok, "codimension": codim, "degrees": sorted(exps) if exps else exps}
    if strict and not ok:
        raise ZSchemeError("CHECK_FAILED", f"Z_Y for omega {h.space} is not a complete intersection", **cert)
    return cert


def poincare_duality_check(target, strict: bool = True) -> dict:
    """Duality on the ordinary quotient of a HessenbergIdeal or a finite GB."""
    gb = target.ordinary_gb if isinstance(target, HessenbergIdeal) else target
    cert = graded_duality_certificate(gb)
    if strict and not cert["ok"]:
        raise ZSchemeError("CHECK_FAILED", "Poincare duality fails", **cert)
    return cert


@dataclass(frozen=True)
class HessenbergReport:
    rank: int
    omega: tuple
    generators: tuple
    poincare: HilbertSeries
    product: ProductFormula
    euler: int
    fixed_points: tuple
    complete_intersection: dict
    duality: dict
    generated_is_saturated: bool
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (
            self.poincare == self.product.in_t()
            and self.euler == len(self.fixed_points)
            and self.complete_intersection["ok"]
            and self.duality["ok"]
        )

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "omega": list(self.omega),
            "generators": list(self.generators),
            "poincare_numerator": list(self.poincare.numerator),
            "product_formula": self.product.to_dict(),
            "euler": self.euler,
            "fixed_points": list(self.fixed_points),
            "complete_intersection": self.complete_intersection,
            "poincare_duality": {k: v for k, v in self.duality.items() if k != "pairing_ranks"},
            "generated_is_saturated": self.generated_is_saturated,
            "ok": self.ok,
        }


def analyze(space: HessenbergSpace) -> HessenbergReport:
    h = hessenberg_ideal(space.rank, space)
    series = h.ordinary_gb.hilbert_series().reduced()
    fixed = hessenberg_fixed_points(space)
    return HessenbergReport(
        rank=space.rank,
        omega=tuple(format_root(r) for r in space.sorted_omega()),
        generators=tuple(str(g) for g in h.generators),
        poincare=series,
        product=product_formula(space),
        euler=series.dimension(),
        fixed_points=tuple(str(w) for w in fixed),
        complete_intersection=complete_intersection_check(h, strict=False),
        duality=poincare_duality_check(h, strict=False),
        generated_is_saturated=h.generated_is_saturated,
    )


def sweep(rank: int, workers: int | None = None) -> list:
    """Report for every valid omega; ``workers > 1`` runs them in processes."""
    from .rootsys import all_hessenberg_spaces

    spaces = all_hessenberg_spaces(rank)
    if workers and workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(analyze, spaces))
    return [analyze(s) for s in spaces]
