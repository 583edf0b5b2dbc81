import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zscheme.errors import ZSchemeError
from zscheme.exactalg import QQ, UPoly, WeightedRing, substitute, weighted_degree
from zscheme.fundscheme import (
    DEFAULT_SAMPLES,
    PARAM_RING,
    ZSchemeIdeal,
    certify_regular_sequence,
    component_data,
    component_restriction,
    fiber,
    flat_degree,
    hilbert_series_Z,
    zscheme_ideal,
)
from zscheme.groebner import HilbertSeries
from zscheme.regvariety import custom_model, flag_model_a, projective_space_model

from strategies import homogeneous


def pn(n):
    return zscheme_ideal(projective_space_model(n))


def flag(rank):
    return zscheme_ideal(flag_model_a(rank))


def chain_charpoly(n, v0):
    """prod over m of (x + m*v0): the x1 values -m*v0 on the components."""
    out = UPoly([1])
    for m in range(n + 1):
        out = out * UPoly([m * v0, 1])
    return out


# -- generators ----------------------------------------------------------------------


def test_plane_generators_are_twice_the_printed_ones():
    z = pn(2)
    printed = [z.ring.parse("-x2 + x1*(x1 + v)"), z.ring.parse("x2*(x1 + 2*v)")]
    assert list(z.generators) == [p * 2 for p in printed]


def test_line_generator():
    assert [str(g) for g in pn(1).generators] == ["2*x1^2 + 2*x1*v"]


def test_flag_generator_degrees():
    assert flag(2).degrees == [4, 4, 6]


def test_degree_contract_enforced():
    ring = WeightedRing.of("x1:2")
    m = custom_model(ring, None, ["-x1^2"])
    assert zscheme_ideal(m).degrees == [4]


def test_scaled_generator_breaks_normalization():
    z = pn(2)
    assert z.normalization_ok()
    assert not z.scaled(0, 3).normalization_ok()


# -- flat degree and certificates ----------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_flat_degree_of_projective_space(n):
    assert flat_degree(pn(n)) == n + 1


@pytest.mark.parametrize("rank,r", [(1, 2), (2, 6)])
def test_flat_degree_of_flags(rank, r):
    assert flat_degree(flag(rank)) == r


@pytest.mark.parametrize("z", [lambda: pn(3), lambda: flag(2)])
def test_regular_sequence_certificate(z):
    assert certify_regular_sequence(z())["regular_sequence"]


def test_broken_sequence_fails_certificate():
    z = pn(2)
    bad = ZSchemeIdeal(z.model, generators=(z.generators[0], z.generators[0]))
    with pytest.raises(ZSchemeError) as exc:
        certify_regular_sequence(bad)
    assert exc.value.code == "CERTIFICATE_FAILED"


# -- fibers --------------------------------------------------------------------------------------


def test_plane_fiber_at_one():
    fb = fiber(pn(2), 1)
    assert fb.dimension == 3 and fb.reduced
    assert fb.charpolys["x1"] == chain_charpoly(2, 1) == UPoly([0, 2, 3, 1])
    assert fb.distinct_points == 3


def test_plane_fiber_at_zero_is_fat():
    fb = fiber(pn(2), 0)
    assert fb.dimension == 3
    assert not fb.reduced and fb.trace_form_determinant == 0


def test_line_fiber_at_two():
    fb = fiber(pn(1), 2)
    # points x1 in {0, -2}
    assert fb.charpolys["x1"] == UPoly([0, 2, 1])


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("v0", DEFAULT_SAMPLES)
def test_projective_fibers_match_chain(n, v0):
    fb = fiber(pn(n), v0)
    assert fb.reduced and fb.dimension == n + 1
    assert fb.charpolys["x1"] == chain_charpoly(n, v0)


@pytest.mark.parametrize("v0", DEFAULT_SAMPLES)
def test_flag_fibers_reduced(v0):
    fb = fiber(flag(2), v0, charpolys=False)
    assert fb.reduced and fb.dimension == 6 and fb.distinct_points == 6


def test_fiber_report_serializes():
    d = fiber(pn(1), 2).to_dict()
    assert d["v0"] == "2" and d["dimension"] == 2 and d["reduced"]


# -- Hilbert series ----------------------------------------------------------------------------


def test_line_series():
    F, P = hilbert_series_Z(pn(1))
    assert P.as_polynomial() == (1, 0, 1)
    assert F == HilbertSeries((1, 0, 1), (2,))


def test_plane_series():
    assert hilbert_series_Z(pn(2))[1].as_polynomial() == (1, 0, 1, 0, 1)


def test_flag_series():
    # (1 + t^2)(1 + t^2 + t^4)
    assert hilbert_series_Z(flag(2))[1].as_polynomial() == (1, 0, 2, 0, 2, 0, 1)


@pytest.mark.parametrize("z", [lambda: pn(1), lambda: pn(3), lambda: flag(1), lambda: flag(2)])
def test_series_are_free_over_v(z):
    z = z()
    F, P = hilbert_series_Z(z)
    assert F.times(2) == P
    assert sum(P.as_polynomial()) == flat_degree(z)


# -- components ----------------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_chain_kills_generators(n):
    z = pn(n)
    for m in range(n + 1):
        for g in z.generators:
            assert not component_restriction(z, g, m)


def test_restriction_examples():
    z = pn(3)
    v = PARAM_RING.var("v")
    for m in range(4):
        assert component_restriction(z, z.ring.var("x1"), m) == v * (-m)
        assert component_restriction(z, z.v, m) == v


def test_chain_values():
    chain = component_data(2, 1).chain
    assert [str(c) for c in chain] == ["-v", "0"]
    with pytest.raises(ZSchemeError):
        component_data(2, 3)


def test_restriction_needs_projective_space():
    z = flag(1)
    with pytest.raises(ZSchemeError) as exc:
        component_restriction(z, z.v, 0)
    assert exc.value.code == "WRONG_PROVENANCE"


P3 = projective_space_model(3).ambient_ring()


@settings(max_examples=30, deadline=None)
@given(homogeneous(P3, 4, 3), homogeneous(P3, 6, 3), st.integers(0, 3))
def test_restriction_is_multiplicative(f, g, m):
    z = pn(3)
    rf, rg = component_restriction(z, f, m), component_restriction(z, g, m)
    assert component_restriction(z, f * g, m) == rf * rg
    assert component_restriction(z, f + g, m) == rf + rg


@settings(max_examples=20, deadline=None)
@given(homogeneous(P3, 6, 3), st.integers(0, 3))
def test_restriction_respects_degree(f, m):
    r = component_restriction(pn(3), f, m)
    assert not r or weighted_degree(r) == 6


def test_restriction_agrees_with_fiber_points():
    # at v0 = 1 the m-th fiber point has x1 = -m, matching the chain
    z = pn(2)
    for m in range(3):
        point = [substitute(c, {"v": 1}).constant_term() for c in component_data(2, m).chain]
        assert point[0] == QQ(-m)
        for g in z.generators:
            assert substitute(g, {"x1": point[0], "x2": point[1], "v": 1}).constant_term() == 0
