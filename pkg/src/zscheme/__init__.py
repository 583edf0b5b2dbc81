"""Exact presentations of torus-equivariant cohomology from the zero scheme
of a vector field, with Hessenberg varieties and equivariant integration."""

from .errors import ZSchemeError
from .exactalg import QQ, Polynomial, RatFunc, UPoly, WeightedRing, parse_polynomial
from .groebner import LEX, WEIGHTED_GREVLEX, GroebnerBasis, HilbertSeries, MonomialOrder, buchberger
from .regvariety import RegularModel, custom_model, flag_model_a, projective_space_model, validate_regular
from .fundscheme import ZSchemeIdeal, fiber, flat_degree, hilbert_series_Z, zscheme_ideal
from .pushforward import equivariant_integral, fiber_sum_oracle, jacobian_class, trace

__version__ = "0.1.0"

__all__ = [
    "LEX",
    "QQ",
    "WEIGHTED_GREVLEX",
    "GroebnerBasis",
    "HilbertSeries",
    "MonomialOrder",
    "Polynomial",
    "RatFunc",
    "RegularModel",
    "UPoly",
    "WeightedRing",
    "ZSchemeError",
    "ZSchemeIdeal",
    "buchberger",
    "custom_model",
    "equivariant_integral",
    "fiber",
    "fiber_sum_oracle",
    "flag_model_a",
    "flat_degree",
    "hilbert_series_Z",
    "jacobian_class",
    "parse_polynomial",
    "projective_space_model",
    "trace",
    "validate_regular",
    "zscheme_ideal",
]
