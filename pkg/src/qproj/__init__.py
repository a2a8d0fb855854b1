"""Exact arithmetic for q-boson algebras and their extremal projectors."""

from .algebra import AlgebraElement, Flavor, render
from .cartan import CartanDatum, preset, validate_cartan
from .config import limit_heights, set_height_limit
from .expr import parse_expression
from .hopf import TensorElement, antipode, coproduct, phi
from .pairing import canonical_element, dual_basis, gram, pair
from .projector import build_C, build_C_inverse, build_gamma, verify_C_identities, verify_gamma
from .scalars import Scalar, parse_scalar, q

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement", "CartanDatum", "Flavor", "Scalar", "TensorElement", "antipode", "build_C",
    "build_C_inverse", "build_gamma", "canonical_element", "coproduct", "dual_basis", "gram",
    "limit_heights", "pair", "parse_expression", "parse_scalar", "phi", "preset", "q", "render",
    "set_height_limit", "validate_cartan", "verify_C_identities", "verify_gamma",
]
