"""Intra-basis polynomial multiplication for recurrence, Bernstein and Lagrange bases."""

from ._scalars import PolyMulError
from .bases import (
    BUILTIN_NAMES,
    DgPolynomial,
    RecurrenceBasis,
    basis_from_json,
    basis_to_monomial_matrix,
    builtin_basis,
    eval_basis_vector,
)
from .bernstein import BernsteinPolynomial
from .dgmul import ProductOperator, build_product_operator, multiply, power
from .lagrange import LagrangePolynomial
from .opmatrix import OpMatrix, OpMatrixCache, build_H, cache_get, extend_H, pad_to_Htilde

__version__ = "0.1.0"

__all__ = [
    "PolyMulError",
    "BUILTIN_NAMES",
    "DgPolynomial",
    "RecurrenceBasis",
    "basis_from_json",
    "basis_to_monomial_matrix",
    "builtin_basis",
    "eval_basis_vector",
    "BernsteinPolynomial",
    "LagrangePolynomial",
    "ProductOperator",
    "build_product_operator",
    "multiply",
    "power",
    "OpMatrix",
    "OpMatrixCache",
    "build_H",
    "cache_get",
    "extend_H",
    "pad_to_Htilde",
]
