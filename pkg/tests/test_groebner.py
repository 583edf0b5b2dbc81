import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zscheme.errors import ZSchemeError
from zscheme.exactalg import RATIONAL_FUNCTIONS_IN_V, RatFunc, WeightedRing, parse_polynomial
from zscheme.groebner import (
    LEX,
    WEIGHTED_GREVLEX,
    HilbertSeries,
    MonomialOrder,
    QuotientAlgebra,
    buchberger,
    hilbert_series,
    is_regular_sequence,
    multiplication_matrix,
    standard_monomials,
    trace_form_determinant,
)
from zscheme import linalg

from strategies import homogeneous

X3 = WeightedRing.of("x1:2, x2:2, x3:4")


def parse_all(ring, *texts):
    return [parse_polynomial(t, ring) for t in texts]


# -- Buchberger --------------------------------------------------------------------


def test_lex_basis_of_substitution_ideal():
    ring = WeightedRing.of("x1:2, x2:2")
    gb = buchberger(parse_all(ring, "x1^2 - x2", "x2"), LEX)
    assert [str(g) for g in gb] == ["x2", "x1^2"]


def test_single_generator_is_made_monic(r1):
    gb = buchberger(parse_all(r1, "2*v*x1 + 2*x1^2"))
    assert [str(g) for g in gb] == ["x1^2 + x1*v"]


def test_unit_ideal():
    ring = WeightedRing.of("x1:2")
    gb = buchberger(parse_all(ring, "x1", "x1 + 1"))
    assert gb.is_unit_ideal()
    assert [str(g) for g in gb] == ["1"]


def test_empty_input_is_zero_ideal(r1):
    gb = buchberger([], ring=r1)
    assert len(gb) == 0
    assert gb.normal_form(r1.var("x1")) == r1.var("x1")


def test_generators_must_share_a_ring(r1, p2_ring):
    with pytest.raises(ZSchemeError):
        buchberger([r1.var("x1"), p2_ring.var("x1")])


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.sampled_from([2, 4, 6]).flatmap(lambda d: homogeneous(X3, d, 3)), min_size=1, max_size=3),
    st.sampled_from([WEIGHTED_GREVLEX, LEX]),
)
def test_s_pairs_replay_to_zero(gens, order):
    gb = buchberger(gens, order)
    assert gb.s_pairs_reduce_to_zero()
    assert all(not gb.normal_form(g) for g in gens)
    lms = gb.leading_monomials
    for i, a in enumerate(lms):
        for j, b in enumerate(lms):
            if i != j:
                assert not all(x <= y for x, y in zip(a, b))


# -- normal forms ---------------------------------------------------------------------


def test_normal_form_in_projective_plane_ideal(p2_ring):
    gb = buchberger(parse_all(p2_ring, "2*v*x1 - 2*x2 + 2*x1^2", "4*v*x2 + 2*x1*x2"))
    # hand reduction: x2 = x1^2 + x1*v modulo the first generator
    assert gb.normal_form(p2_ring.var("x2")) == parse_polynomial("x1^2 + x1*v", p2_ring)
    assert gb.normal_form(p2_ring.one()) == p2_ring.one()
    for g in gb.generators:
        assert not gb.normal_form(g)


@settings(max_examples=30, deadline=None)
@given(homogeneous(X3, 4, 3), homogeneous(X3, 6, 4), homogeneous(X3, 6, 4), st.integers(-3, 3))
def test_normal_form_is_idempotent_and_linear(g, f, h, c):
    gb = buchberger([g, X3.var("x1") ** 3 + X3.var("x3") * X3.var("x2")])
    nf = gb.normal_form
    assert nf(nf(f)) == nf(f)
    assert nf(f + h * c) == nf(f) + nf(h) * c
    assert gb.contains(f - nf(f))


# -- standard monomials and quotient algebras ------------------------------------------


def test_standard_monomials_of_plane_cohomology():
    ring = WeightedRing.of("x1:2, x2:4")
    gb = buchberger(parse_all(ring, "x2 - x1^2", "x1*x2"))
    assert standard_monomials(gb) == [(0, 0), (1, 0), (2, 0)]


def test_standard_monomials_over_rational_functions():
    ring = WeightedRing.of("x1:2", field=RATIONAL_FUNCTIONS_IN_V)
    gb = buchberger(parse_all(ring, "2*v*x1 + 2*x1^2"))
    assert standard_monomials(gb) == [(0,), (1,)]


def test_standard_monomials_trivial_and_infinite():
    ring = WeightedRing.of("x1:2, x2:2")
    assert standard_monomials(buchberger([ring.var("x1"), ring.var("x2")])) == [(0, 0)]
    with pytest.raises(ZSchemeError) as exc:
        standard_monomials(buchberger([ring.var("x1")]))
    assert exc.value.code == "NOT_ZERO_DIMENSIONAL"


def test_multiplication_by_one_is_identity(p2_ring):
    gb = buchberger(parse_all(p2_ring.drop("v"), "x2 - x1^2", "x1*x2"))
    m = multiplication_matrix(gb.ring.one(), gb)
    assert m == linalg.identity(3)


def test_multiplication_matrix_over_rational_functions():
    ring = WeightedRing.of("x1:2", field=RATIONAL_FUNCTIONS_IN_V)
    gb = buchberger(parse_all(ring, "x1*(x1 + v)"))
    m = multiplication_matrix(ring.var("x1"), gb)
    v = RatFunc.v()
    # characteristic polynomial x^2 - tr x + det should be x(x + v)
    assert m[0][0] + m[1][1] == -v
    assert m[0][0] * m[1][1] - m[0][1] * m[1][0] == RatFunc.coerce(0)


@settings(max_examples=20, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_multiplication_is_a_homomorphism(a, b, c, d):
    ring = WeightedRing.of("x1:2, x2:4")
    gb = buchberger(parse_all(ring, "x2 - x1^2 - x1", "x1*x2 + 2*x2"))
    alg = QuotientAlgebra(gb)
    x1, x2 = ring.gens()
    f, g = x1 * a + x2 * b + 1, x1 * x1 * c + d
    mf, mg = alg.multiplication_matrix(f), alg.multiplication_matrix(g)
    assert alg.multiplication_matrix(f * g) == linalg.matmul(mf, mg) == linalg.matmul(mg, mf)


# -- trace form ------------------------------------------------------------------------


def test_trace_form_detects_double_point():
    ring = WeightedRing.of("x:2")
    assert trace_form_determinant(buchberger(parse_all(ring, "x^2"))) == 0
    assert trace_form_determinant(buchberger(parse_all(ring, "x*(x+1)"))) != 0


def test_trace_form_of_plane_fiber_is_nonzero():
    ring = WeightedRing.of("x1:2, x2:4")
    gens = parse_all(ring, "2*x1 - 2*x2 + 2*x1^2", "4*x2 + 2*x1*x2")
    assert trace_form_determinant(buchberger(gens)) != 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=5))
def test_trace_form_matches_root_multiplicities(roots):
    ring = WeightedRing.of("x:2")
    x = ring.var("x")
    f = ring.one()
    for a in roots:
        f = f * (x - a)
    gb = buchberger([f])
    reduced = len(set(roots)) == len(roots)
    assert (trace_form_determinant(gb) != 0) == reduced
    assert QuotientAlgebra(gb).count_distinct_points() == len(set(roots))


# -- Hilbert series ----------------------------------------------------------------------


def test_series_of_square():
    ring = WeightedRing.of("x1:2")
    hs = hilbert_series(parse_all(ring, "x1^2"))
    assert hs == HilbertSeries((1, 0, 0, 0, -1), (2,))
    assert hs.as_polynomial() == (1, 0, 1)


def test_series_of_line_scheme(r1):
    hs = hilbert_series(parse_all(r1, "2*v*x1 + 2*x1^2"))
    assert hs == HilbertSeries((1, 0, 1), (2,))


def test_series_of_plane_flag_cohomology():
    ring = WeightedRing.of("u21:2, u32:2, u31:4")
    gens = parse_all(ring, "u31 - u21^2", "u31 + u32^2 - u21*u32", "u21*u31")
    # (1 + t^2)(1 + t^2 + t^4)
    assert hilbert_series(gens).as_polynomial() == (1, 0, 2, 0, 2, 0, 1)


def test_series_rejects_inhomogeneous(r1):
    with pytest.raises(ZSchemeError) as exc:
        hilbert_series(parse_all(r1, "x1 + 1"))
    assert exc.value.code == "NOT_HOMOGENEOUS"


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from([2, 4, 6]).flatmap(lambda d: homogeneous(X3, d, 3)), min_size=1, max_size=3), st.randoms())
def test_series_independent_of_order_and_generator_order(gens, rnd):
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    other = MonomialOrder("WEIGHTED_GREVLEX", ("x3", "x1", "x2"))
    series = [
        buchberger(gens, WEIGHTED_GREVLEX).hilbert_series(),
        buchberger(shuffled, WEIGHTED_GREVLEX).hilbert_series(),
        buchberger(gens, LEX).hilbert_series(),
        buchberger(gens, other).hilbert_series(),
    ]
    assert all(s == series[0] for s in series)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from([2, 4]).flatmap(lambda d: homogeneous(X3, d, 3)), min_size=3, max_size=3))
def test_dimension_matches_standard_monomials(gens):
    gb = buchberger(gens)
    if gb.is_zero_dimensional():
        assert gb.hilbert_series().dimension() == gb.quotient_dimension()


def test_series_coefficients_expand():
    hs = HilbertSeries((1,), (2, 2))
    assert hs.coefficients(6) == [1, 0, 2, 0, 3, 0, 4]


# -- regular sequences --------------------------------------------------------------------


def test_regular_sequence_examples(p2_ring):
    gens = parse_all(p2_ring, "2*v*x1 - 2*x2 + 2*x1^2", "4*v*x2 + 2*x1*x2", "v")
    assert is_regular_sequence(gens)[0]
    ring = WeightedRing.of("x1:2")
    assert not is_regular_sequence(parse_all(ring, "x1", "x1^2"))[0]
    assert is_regular_sequence([], ring)[0]
