import itertools
import json

import pytest

from zscheme.cohomology import (
    SCHEMA_VERSION,
    chern_line_bundle_image,
    equivariant_presentation,
    euler_characteristic,
    graded_duality_certificate,
    line_bundle_matrix,
    ordinary_presentation,
    pn_closed_form_check,
    pn_closed_form_product,
)
from zscheme.exactalg import WeightedRing, parse_polynomial, substitute
from zscheme.fundscheme import PARAM_RING, component_data, component_restriction, zscheme_ideal
from zscheme.groebner import HilbertSeries, buchberger
from zscheme.regvariety import flag_model_a, projective_space_model


def inversion_poincare(rank):
    """Sum over permutations of t^(2 * inversions): an independent count of flag Betti numbers."""
    n = rank + 1
    top = n * (n - 1)
    coeffs = [0] * (top + 1)
    for p in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        coeffs[2 * inv] += 1
    return tuple(coeffs)


# -- presentations ---------------------------------------------------------------------


def test_line_equivariant_presentation():
    rep = equivariant_presentation(projective_space_model(1))
    # x1 (x1 + v) after dividing by the unit 2
    assert rep.groebner_basis == ("x1^2 + x1*v",)
    assert rep.series == HilbertSeries((1, 0, 1), (2,))
    assert rep.euler == 2


def test_plane_equivariant_presentation():
    rep = equivariant_presentation(projective_space_model(2))
    ring = WeightedRing.of("x1:2, x2:4, v:2")
    printed = [parse_polynomial(t, ring) * 2 for t in ("-x2 + x1*(x1 + v)", "x2*(x1 + 2*v)")]
    assert list(rep.generators) == [str(p) for p in printed]
    assert rep.series == HilbertSeries((1, 0, 1, 0, 1), (2,))
    assert rep.certificates["regular_sequence"]
    assert all(f["reduced"] and f["dimension"] == 3 for f in rep.certificates["fibers"].values())


def test_rank_one_flag_matches_line():
    assert equivariant_presentation(flag_model_a(1)).series == equivariant_presentation(projective_space_model(1)).series


def test_ordinary_plane():
    rep = ordinary_presentation(projective_space_model(2))
    assert rep.groebner_basis == ("x2 - x1^2", "x1^3")
    assert rep.series.as_polynomial() == (1, 0, 1, 0, 1)
    assert rep.certificates["poincare_duality"]


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_ordinary_flag_matches_inversion_count(rank):
    rep = ordinary_presentation(flag_model_a(rank))
    assert rep.series.as_polynomial() == inversion_poincare(rank)


def test_ordinary_line():
    assert ordinary_presentation(projective_space_model(1)).series.as_polynomial() == (1, 0, 1)


@pytest.mark.parametrize(
    "model", [lambda: projective_space_model(1), lambda: projective_space_model(3), lambda: flag_model_a(2)]
)
def test_equivariant_series_times_one_minus_t2_is_ordinary(model):
    m = model()
    eq, ordinary = equivariant_presentation(m), ordinary_presentation(m)
    assert eq.series.times(2) == ordinary.series
    coeffs = ordinary.series.as_polynomial()
    assert all(c >= 0 for c in coeffs)
    assert all(c == 0 for c in coeffs[1::2])


@pytest.mark.parametrize(
    "model,r", [(lambda: projective_space_model(4), 5), (lambda: flag_model_a(3), 24), (lambda: flag_model_a(1), 2)]
)
def test_euler_characteristic(model, r):
    assert euler_characteristic(model()) == r


def test_report_is_json_ready():
    d = equivariant_presentation(projective_space_model(2)).to_dict()
    assert d["schema_version"] == SCHEMA_VERSION
    assert d["hilbert_numerator"] == [1, 0, 1, 0, 1] and d["denominator_weights"] == [2]
    assert json.loads(json.dumps(d, sort_keys=True)) == d


# -- duality ---------------------------------------------------------------------------------


def test_duality_of_plane():
    cert = graded_duality_certificate(zscheme_ideal(projective_space_model(2)).ordinary_gb)
    assert cert["ok"] and cert["top_degree"] == 4


def test_duality_fails_without_single_socle():
    ring = WeightedRing.of("x1:2, x2:2")
    x1, x2 = ring.gens()
    # QQ[x1, x2]/(x1, x2)^2 has a two-dimensional top degree
    cert = graded_duality_certificate(buchberger([x1 * x1, x1 * x2, x2 * x2]))
    assert not cert["ok"] and cert["top_dimension"] == 2


# -- closed form ----------------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_closed_form(n):
    cert = pn_closed_form_check(n)
    assert cert["ok"] and cert["unit"] == "2"


def test_closed_form_products():
    assert str(pn_closed_form_product(1)) == "x1^2 + x1*v"
    assert str(pn_closed_form_product(2)) == "x1^3 + 3*x1^2*v + 2*x1*v^2"


@pytest.mark.parametrize("n", [2, 4])
def test_closed_form_product_vanishes_on_every_component(n):
    # oracle: substitute x1 = -m v directly, no Groebner basis involved
    product = pn_closed_form_product(n)
    v = PARAM_RING.var("v")
    for m in range(n + 1):
        assert not substitute(product, {"x1": v * (-m), "v": v}, ring=PARAM_RING)


# -- line bundle ---------------------------------------------------------------------------------------


def test_line_bundle_matrix_shape():
    ring = WeightedRing.of("x1:2, v:2")
    xi = line_bundle_matrix(1, ring)
    assert [[str(e) for e in row] for row in xi] == [["-v", "-2"], ["0", "v"]]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_line_bundle_congruences(n):
    out = chern_line_bundle_image(n)
    assert out["ok"] and out["congruences"] == ["0"] * n
    assert str(out["c"]) == f"-2*x1 - {n}*v" if n > 1 else str(out["c"]) == "-2*x1 - v"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_line_bundle_eigenvector_on_components(n):
    # oracle: on each component s(x) is an eigenvector of xi(v), checked by substitution
    z = zscheme_ideal(projective_space_model(n))
    out = chern_line_bundle_image(n)
    xi = line_bundle_matrix(n, z.ring)
    v = PARAM_RING.var("v")
    for m in range(n + 1):
        chain = component_data(n, m).chain
        s = [PARAM_RING.one(), *chain]
        c = component_restriction(z, out["c"], m)
        assert c == v * (2 * m - n)
        for i in range(n + 1):
            row = [component_restriction(z, e, m) for e in xi[i]]
            lhs = sum((row[j] * s[j] for j in range(n + 1)), PARAM_RING.zero())
            assert lhs == c * s[i]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_line_bundle_discrepancy(n):
    out = chern_line_bundle_image(n)
    z = zscheme_ideal(projective_space_model(n))
    expected = z.gb.normal_form(z.ring.parse(f"-x1 - {n}*v"))
    assert out["discrepancy"] == expected
