"""Exact computation of hyperdeterminant-type discriminants from root data."""

from .exactnum import BigRational, EisensteinRational, PrimeFieldElement
from .exterior import HypercubeTensor, Multivector, contract, project_to_hypercube, wedge
from .polynomial import Polynomial, parse_polynomial
from .roots import (
    e7_restricted_roots,
    e8_restricted_roots,
    family_invariants,
    power_sum_invariant,
    restricted_discriminant,
    semisimple_tensor,
)

__version__ = "0.1.0"
