import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zscheme.errors import ZSchemeError
from zscheme.exactalg import QQ, WeightedRing, substitute, weighted_degree
from zscheme.fundscheme import PARAM_RING, component_restriction, flat_degree, zscheme_ideal
from zscheme.pushforward import (
    equivariant_integral,
    fiber_sum_oracle,
    jacobian_class,
    jacobian_nondivisibility,
    jacobian_not_in_ideal,
    normalization_guard,
    random_homogeneous_class,
    trace,
)
from zscheme.regvariety import flag_model_a, projective_space_model

from strategies import homogeneous


def pn(n):
    return zscheme_ideal(projective_space_model(n))


def flag(rank):
    return zscheme_ideal(flag_model_a(rank))


def v_poly(text):
    return PARAM_RING.parse(text)


def point_sum(z, f, v0):
    """Sum of f/J over the explicit component points of P^n at v = v0."""
    n = z.model.dimension
    J = jacobian_class(z).J
    total = QQ(0)
    for m in range(n + 1):
        fm = substitute(component_restriction(z, f, m), {"v": v0}).constant_term()
        Jm = substitute(component_restriction(z, J, m), {"v": v0}).constant_term()
        total += fm / Jm
    return total


# -- Jacobian -----------------------------------------------------------------------------


def test_line_jacobian():
    z = pn(1)
    assert jacobian_class(z).J == z.ring.parse("2*v + 4*x1")


def test_plane_jacobian_by_cofactors():
    z = pn(2)
    # rows (2v + 4x1, -2) and (2x2, 4v + 2x1)
    expected = z.ring.parse("(2*v + 4*x1)*(4*v + 2*x1) + 4*x2")
    jc = jacobian_class(z)
    assert jc.J == expected and jc.degree == 4
    assert not substitute(jc.J, {"x1": 0, "x2": 0, "v": 0}).constant_term()


@pytest.mark.parametrize("z", [lambda: pn(1), lambda: pn(2), lambda: pn(3), lambda: flag(2)])
def test_jacobian_not_divisible_by_v(z):
    cert = jacobian_nondivisibility(z())
    assert cert["ok"] and cert["normal_form"] != "0"


def test_jacobian_membership_sanity():
    ring = WeightedRing.of("x1:2, x2:2")
    x1, x2 = ring.gens()
    ok, nf = jacobian_not_in_ideal([x1 * x1], ["x1"])
    assert ok and nf == x1 * 2
    assert not jacobian_not_in_ideal([x1 * x2, x1 * x2], ["x1", "x2"])[0]


# -- trace -------------------------------------------------------------------------------------


def test_traces():
    assert trace(pn(2), 1) == PARAM_RING.const(3)
    assert trace(pn(1), "x1") == v_poly("-v")
    assert trace(pn(2), "x1") == v_poly("-3*v")


# -- integrals ----------------------------------------------------------------------------------


@pytest.mark.parametrize("z,r", [(lambda: pn(1), 2), (lambda: pn(2), 3), (lambda: pn(3), 4), (lambda: flag(1), 2), (lambda: flag(2), 6)])
def test_integral_of_jacobian_is_rank(z, r):
    z = z()
    assert equivariant_integral(z, jacobian_class(z).J).value == PARAM_RING.const(r)
    assert not equivariant_integral(z, 1).value


def test_line_integral_of_x1():
    res = equivariant_integral(pn(1), "x1")
    assert res.value == PARAM_RING.const(QQ(1, 2))
    assert res.to_dict()["polynomial"] == "1/2"


def test_oracle_examples():
    z = pn(1)
    assert fiber_sum_oracle(z, "x1", 2) == QQ(1, 2)
    assert fiber_sum_oracle(z, "v*x1", 3) == QQ(3, 2)
    z3 = pn(3)
    assert fiber_sum_oracle(z3, jacobian_class(z3).J, 1) == 4


def test_oracle_needs_nonzero_v():
    with pytest.raises(ZSchemeError) as exc:
        fiber_sum_oracle(pn(1), "x1", 0)
    assert exc.value.code == "ZERO_FIBER"


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("degree", [2 * k for k in range(0, 5)])
def test_integral_matches_explicit_points(n, degree):
    z = pn(n)
    rng = random.Random(1000 * n + degree)
    for _ in range(3):
        f = random_homogeneous_class(z, degree, rng)
        res = equivariant_integral(z, f)
        for v0 in (1, 3, -2):
            assert res.at(v0) == point_sum(z, f, v0)


@pytest.mark.parametrize("z", [lambda: pn(2), lambda: flag(1), lambda: flag(2)])
def test_degree_contract_and_oracle(z):
    z = z()
    n = z.model.dimension
    rng = random.Random(7)
    for degree in range(0, 2 * n + 6, 2):
        f = random_homogeneous_class(z, degree, rng)
        res = equivariant_integral(z, f)
        if degree < 2 * n:
            assert not res.value
        elif res.value:
            assert weighted_degree(res.value) == degree - 2 * n
        for v0 in (1, 2):
            assert fiber_sum_oracle(z, f, v0) == res.at(v0)


P2 = projective_space_model(2).ambient_ring()


@settings(max_examples=25, deadline=None)
@given(homogeneous(P2, 6, 3), homogeneous(P2, 6, 3), st.integers(-4, 4))
def test_integral_is_v_linear(f, g, c):
    z = pn(2)
    integral = lambda h: equivariant_integral(z, h).value  # noqa: E731
    v = PARAM_RING.var("v")
    assert integral(f + g * c) == integral(f) + integral(g) * c
    assert integral(z.v * f) == v * integral(f)


# -- normalization guard ----------------------------------------------------------------------------


@pytest.mark.parametrize("z", [lambda: pn(2), lambda: flag(2)])
def test_guard_passes_on_canonical_generators(z):
    out = normalization_guard(z())
    assert out["ok"] and out["integral_of_J"] == str(out["rank"])


@pytest.mark.parametrize("index", [0, 1])
def test_guard_catches_rescaled_generator(index):
    z = pn(2)
    bad = z.scaled(index, 3)
    out = normalization_guard(bad)
    assert not out["ok"]
    assert out["integral_of_J"] == "1"  # r / 3 with r = 3


def test_rescaling_divides_every_integral():
    z = pn(2)
    bad = z.scaled(0, 3)
    assert flat_degree(bad) == 3
    for text in ("x1^2", "x2", "x1*v", "x2*x1 + v^3"):
        assert equivariant_integral(bad, text).value * 3 == equivariant_integral(z, text).value
