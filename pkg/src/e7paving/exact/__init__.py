"""Exact arithmetic: rationals, prime fields, dense matrices, polynomials."""

from fractions import Fraction as Rational

from .fields import GF, QQ, Field, Fq, is_prime
from .matrix import (
    Matrix,
    annihilator,
    contains,
    is_subspace,
    kernel_basis,
    pivots,
    row_space,
    rref,
    subspace_intersection,
    subspace_sum,
)
from .poly import MultiPoly, UniPoly, lagrange_interpolate

__all__ = [
    "Rational", "Fq", "Field", "GF", "QQ", "is_prime",
    "Matrix", "rref", "pivots", "kernel_basis", "row_space", "annihilator",
    "subspace_sum", "subspace_intersection", "contains", "is_subspace",
    "UniPoly", "MultiPoly", "lagrange_interpolate",
]
