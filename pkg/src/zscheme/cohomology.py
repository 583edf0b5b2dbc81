"""Cohomology presentations built from the zero scheme Z.

All series use cohomological degree: ``deg x_i = a_i`` and ``deg v = 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ZSchemeError
from .exactalg import PARAM, Polynomial, WeightedRing, substitute
from .fundscheme import (
    certify_regular_sequence,
    fiber,
    flat_degree,
    hilbert_series_Z,
    zscheme_ideal,
)
from .groebner import WEIGHTED_GREVLEX, GroebnerBasis, HilbertSeries, QuotientAlgebra, buchberger
from .regvariety import RegularModel, projective_space_model
from . import linalg

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class PresentationReport:
    kind: str
    model: str
    ring: str
    generators: tuple
    series: HilbertSeries
    euler: int
    groebner_basis: tuple = ()
    certificates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "model": self.model,
            "ring": self.ring,
            "generators": list(self.generators),
            "groebner_basis": list(self.groebner_basis),
            "hilbert_numerator": list(self.series.numerator),
            "denominator_weights": list(self.series.denominator),
            "euler": self.euler,
            "certificates": self.certificates,
        }


def equivariant_presentation(m: RegularModel, samples=(1, 2, -1)) -> PresentationReport:
    """``QQ[x, v] / I(Z)`` with its regular-sequence, rank and fiber certificates."""
    z = zscheme_ideal(m)
    r = flat_degree(z)
    F, P = hilbert_series_Z(z)
    fibers = {}
    for v0 in samples:
        fb = fiber(z, v0, charpolys=False)
        fibers[str(v0)] = {"dimension": fb.dimension, "reduced": fb.reduced}
    certs = {
        "regular_sequence": certify_regular_sequence(z)["regular_sequence"],
        "flat_degree": r,
        "degrees": [int(d) for d in z.degrees],
        "fibers": fibers,
        "series_times_one_minus_t2_is_ordinary": F.times(2) == P,
    }
    return PresentationReport(
        "equivariant", m.label, str(z.ring),
        tuple(str(g) for g in z.generators), F.reduced(), r,
        tuple(str(g) for g in z.gb.elements), certs,
    )


def ordinary_presentation(m: RegularModel) -> PresentationReport:
    """``QQ[x] / (V(x_1), ..., V(x_n))``, the v = 0 specialization."""
    z = zscheme_ideal(m)
    gb = z.ordinary_gb
    P = gb.hilbert_series()
    poly = P.as_polynomial()
    if poly is None:
        raise ZSchemeError("NOT_FINITE", "ordinary quotient is not finite-dimensional")
    certs = {"poincare_duality": graded_duality_certificate(gb)["ok"]}
    return PresentationReport(
        "ordinary", m.label, str(z.chart_ring),
        tuple(str(z.restrict_v(g, 0)) for g in z.generators),
        HilbertSeries(poly, ()), sum(poly),
        tuple(str(g) for g in gb.elements), certs,
    )


def euler_characteristic(m: RegularModel) -> int:
    poly = zscheme_ideal(m).ordinary_gb.hilbert_series().as_polynomial()
    return sum(poly)


# ---------------------------------------------------------------------------
# Poincare duality of a graded finite quotient


def graded_duality_certificate(gb: GroebnerBasis) -> dict:
    """Top degree is one-dimensional and each pairing ``A_k x A_{D-k} -> A_D`` is perfect."""
    alg = QuotientAlgebra(gb)
    if alg.dimension == 0:
        return {"ok": False, "reason": "zero algebra"}
    ring = gb.ring
    degs = [ring.weighted_degree_of(b) for b in alg.basis]
    top = max(degs)
    tops = [i for i, d in enumerate(degs) if d == top]
    if len(tops) != 1:
        return {"ok": False, "top_degree": top, "top_dimension": len(tops)}
    t = tops[0]
    by_degree: dict = {}
    for i, d in enumerate(degs):
        by_degree.setdefault(d, []).append(i)
    ranks = {}
    ok = True
    for d, rows in sorted(by_degree.items()):
        cols = by_degree.get(top - d, [])
        if len(cols) != len(rows):
            ok = False
            ranks[d] = None
            continue
        mat = [[alg.product(i, j)[t] for j in cols] for i in rows]
        rk = linalg.rank(mat)
        ranks[d] = rk
        ok = ok and rk == len(rows)
    return {"ok": ok, "top_degree": top, "top_dimension": 1, "pairing_ranks": ranks}


# ---------------------------------------------------------------------------
# P^n closed form and line bundle


def _closed_form_ring() -> WeightedRing:
    return WeightedRing(("x1", PARAM), (2, 2))


def pn_closed_form_product(n: int) -> Polynomial:
    ring = _closed_form_ring()
    x1, v = ring.var("x1"), ring.var(PARAM)
    out = ring.one()
    for m in range(n + 1):
        out = out * (x1 + m * v)
    return out


def pn_closed_form_check(n: int) -> dict:
    """Equivariant cohomology of P^n is ``QQ[x1, v] / prod_{m=0..n} (x1 + m v)``.

    Checks that eliminating ``x_2..x_n`` by ``x_{j+1} = x_j (x1 + j v)`` sends
    the first n-1 generators to 0 and the last to a unit multiple of the
    product, that the product lies in I(Z), and that both series agree.
    """
    z = zscheme_ideal(projective_space_model(n))
    small = _closed_form_ring()
    x1, v = small.var("x1"), small.var(PARAM)
    chain = [x1]
    for j in range(1, n):
        chain.append(chain[-1] * (x1 + j * v))
    assignment = {f"x{j + 1}": chain[j] for j in range(1, n)}
    product = pn_closed_form_product(n)
    principal = buchberger([product], WEIGHTED_GREVLEX, small)

    images = [substitute(g, assignment, ring=small) for g in z.generators]
    for k, img in enumerate(images[:-1]):
        if img:
            raise ZSchemeError("CHECK_FAILED", f"generator {k + 1} does not vanish on the chain", image=str(img))
    last = images[-1]
    unit = None
    if last and not principal.normal_form(last):
        ratio = last.leading_term(principal.key)[1] / product.leading_term(principal.key)[1]
        if last == product * ratio:
            unit = ratio
    if unit is None:
        raise ZSchemeError("CHECK_FAILED", "last generator is not a unit multiple of the product", image=str(last))

    lifted = substitute(product, {}, ring=z.ring)
    residue = z.gb.normal_form(lifted)
    if residue:
        raise ZSchemeError("CHECK_FAILED", "product does not reduce to zero modulo I(Z)", residue=str(residue))

    F, _ = hilbert_series_Z(z)
    closed = principal.hilbert_series()
    if F != closed:
        raise ZSchemeError("CHECK_FAILED", "Hilbert series differ", ideal=F.to_dict(), closed_form=closed.to_dict())
    return {
        "ok": True,
        "n": n,
        "product": str(product),
        "unit": str(unit),
        "chain": [str(c) for c in chain],
        "series": F.to_dict(),
    }


def line_bundle_matrix(n: int, ring: WeightedRing) -> list:
    """``xi(v) = v h' - 2 e'`` on QQ^{n+1}, with ``h' = diag(2j - n)``."""
    v = ring.var(PARAM)
    size = n + 1
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            entry = ring.zero()
            if i == j:
                entry = entry + (2 * i - n) * v
            if j == i + 1:
                entry = entry - 2
            row.append(entry)
        out.append(row)
    return out


def chern_line_bundle_image(n: int) -> dict:
    """Scalar by which ``xi(v)`` acts on the tautological line ``s(x) = (1, x_1..x_n)``."""
    z = zscheme_ideal(projective_space_model(n))
    ring = z.ring
    s = [ring.one()] + [ring.var(f"x{k}") for k in range(1, n + 1)]
    xi = line_bundle_matrix(n, ring)
    image = [sum((xi[i][j] * s[j] for j in range(n + 1)), ring.zero()) for i in range(n + 1)]
    c = image[0]
    residues = []
    for k in range(1, n + 1):
        res = z.gb.normal_form(image[k] - c * s[k])
        if res:
            raise ZSchemeError("CONGRUENCE_FAILED", f"coordinate {k} is not an eigenvector entry", residue=str(res))
        residues.append("0")
    discrepancy = z.gb.normal_form(c + ring.var("x1"))
    return {
        "c": c,
        "congruences": residues,
        "discrepancy": discrepancy,
        "ok": True,
    }
