"""Brute-force reference computations for the test suite and ``verify``.

Nothing in the production paths imports this module. Products are checked by
converting to the monomial basis, convolving, and converting back, which is
the route the library itself avoids.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._scalars import PolyMulError, as_array, is_exact, is_rational_value, zeros
from . import bernstein, dgmul, lagrange
from .bases import DgPolynomial, RecurrenceBasis, basis_to_monomial_matrix

__all__ = [
    "MonomialPoly",
    "to_monomial",
    "from_monomial",
    "convolve",
    "mul_via_monomial",
    "CheckReport",
    "pointwise_check",
    "evaluate_any",
    "relative_linf",
]


@dataclass(frozen=True, eq=False)
class MonomialPoly:
    coeffs: np.ndarray

    def __post_init__(self):
        c = self.coeffs
        if not isinstance(c, np.ndarray):
            c = list(c)
            c = as_array(c, all(is_rational_value(v) for v in c))
        if len(c) < 1:
            raise PolyMulError("monomial polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, x):
        acc = 0 * x
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return acc


@functools.lru_cache(maxsize=256)
def _transform(basis: RecurrenceBasis, n: int, exact: bool) -> np.ndarray:
    M = basis_to_monomial_matrix(basis, n)
    M = M if exact else M.astype(float)
    M.flags.writeable = False
    return M


def to_monomial(xi: DgPolynomial) -> MonomialPoly:
    exact = xi.exact and xi.basis.exact
    M = _transform(xi.basis, xi.degree, exact)
    c = xi.coeffs if exact else np.asarray(xi.coeffs, dtype=float)
    return MonomialPoly(c @ M)


def from_monomial(mono: MonomialPoly, basis: RecurrenceBasis) -> DgPolynomial:
    """Solve c @ M = mono for c (M lower triangular), top degree first."""
    exact = is_exact(mono.coeffs) and basis.exact
    N = len(mono.coeffs) - 1
    M = _transform(basis, N, exact)
    rhs = mono.coeffs if exact else np.asarray(mono.coeffs, dtype=float)
    c = zeros(N + 1, exact)
    for i in range(N, -1, -1):
        if M[i, i] == 0:
            raise PolyMulError("singular basis transform")
        c[i] = (rhs[i] - np.dot(c[i + 1 :], M[i + 1 :, i])) / M[i, i]
    return DgPolynomial(basis, c)


def convolve(a: MonomialPoly, b: MonomialPoly) -> MonomialPoly:
    """c_k = sum_i a_i b_{k-i}."""
    exact = is_exact(a.coeffs) and is_exact(b.coeffs)
    x = a.coeffs if exact else np.asarray(a.coeffs, dtype=float)
    y = b.coeffs if exact else np.asarray(b.coeffs, dtype=float)
    out = zeros(len(x) + len(y) - 1, exact)
    for i, ai in enumerate(x):
        out[i : i + len(y)] += ai * y
    return MonomialPoly(out)


def mul_via_monomial(xi: DgPolynomial, psi: DgPolynomial) -> DgPolynomial:
    if xi.basis.key[0::2] != psi.basis.key[0::2]:
        raise PolyMulError("basis mismatch")
    prod = convolve(to_monomial(xi), to_monomial(psi))
    return from_monomial(prod, xi.basis)


def relative_linf(got, want) -> float:
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    scale = np.max(np.abs(want))
    diff = np.max(np.abs(got - want))
    if scale == 0:
        return float(diff)
    return float(diff / scale)


def evaluate_any(poly, x):
    """Evaluate a polynomial of any supported representation at ``x``."""
    if isinstance(poly, DgPolynomial):
        return dgmul.evaluate(poly, x)
    if isinstance(poly, bernstein.BernsteinPolynomial):
        return bernstein.evaluate(poly, x)
    if isinstance(poly, lagrange.LagrangePolynomial):
        return lagrange.evaluate(poly, x)
    if isinstance(poly, MonomialPoly):
        return poly(x)
    raise TypeError(f"cannot evaluate {type(poly).__name__}")


@dataclass(frozen=True)
class CheckReport:
    max_deviation: float
    tol: float
    npoints: int

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def pointwise_check(product, factors: Sequence, points, tol: float) -> CheckReport:
    """Compare product(x) with prod_i factor_i(x) over ``points``.

    The deviation is max|difference| / max|reference| over the point set, so
    isolated roots of the product do not blow it up.
    """
    got, want = [], []
    for x in points:
        ref = 1
        for f in factors:
            ref = ref * evaluate_any(f, x)
        got.append(evaluate_any(product, x))
        want.append(ref)
    if all(is_rational_value(g) for g in got + want):
        dev = max(abs(g - w) for g, w in zip(got, want))
        scale = max(abs(w) for w in want)
        deviation = float(dev / scale) if scale else float(dev)
    else:
        deviation = relative_linf(got, want)
    return CheckReport(deviation, tol, len(points))
