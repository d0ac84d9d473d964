"""Multiplication and powers of polynomials in a degree-graded basis.

The product of xi (degree n) and psi (degree m) has coefficients
``xi @ Hcal`` with ``Hcal = sum_k psi_k * pad(H_{n,k}, m)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._scalars import PolyMulError, is_exact, zeros
from .bases import DgPolynomial, RecurrenceBasis, eval_basis_vector
from .opmatrix import OpMatrixCache, cache_get

__all__ = ["ProductOperator", "build_product_operator", "multiply", "power", "evaluate"]


@dataclass(frozen=True, eq=False)
class ProductOperator:
    basis: RecurrenceBasis
    n: int
    m: int
    matrix: np.ndarray

    def apply(self, xi) -> np.ndarray:
        """Product coefficients for a left factor with coefficient vector ``xi``."""
        xi = np.asarray(xi, dtype=self.matrix.dtype)
        if len(xi) != self.n + 1:
            raise PolyMulError(f"left factor must have degree {self.n}")
        return xi @ self.matrix


def _working_basis(*polys: DgPolynomial) -> RecurrenceBasis:
    basis = polys[0].basis
    if all(p.exact for p in polys):
        return basis
    return basis.as_float()


def _coeffs(p: DgPolynomial, basis: RecurrenceBasis) -> np.ndarray:
    return p.coeffs if basis.exact else np.asarray(p.coeffs, dtype=float)


def build_product_operator(
    psi: DgPolynomial, n: int, cache: OpMatrixCache | None = None
) -> ProductOperator:
    """Operator that multiplies any degree-n polynomial by ``psi``."""
    if n < 0:
        raise PolyMulError("left degree must be nonnegative")
    basis = _working_basis(psi)
    c = _coeffs(psi, basis)
    m = psi.degree
    H = zeros((n + 1, n + m + 1), basis.exact)
    if basis.name == "monomial" and basis.key[2] == ():
        # banded Toeplitz: row r is psi shifted right by r
        for r in range(n + 1):
            H[r, r : r + m + 1] = c
    else:
        for k in range(m + 1):
            if c[k] == 0:
                continue
            Hk = cache_get(basis, n, k, cache).entries
            for r in range(n + 1):
                # row r of H_{n,k} vanishes outside columns |k-r|..k+r
                lo, hi = abs(k - r), k + r + 1
                H[r, lo:hi] += c[k] * Hk[r, lo:hi]
    H.flags.writeable = False
    return ProductOperator(basis, n, m, H)


def multiply(
    xi: DgPolynomial, psi: DgPolynomial, cache: OpMatrixCache | None = None
) -> DgPolynomial:
    if xi.basis.key[0::2] != psi.basis.key[0::2]:
        raise PolyMulError(
            f"basis mismatch: {xi.basis.name!r} vs {psi.basis.name!r}"
        )
    basis = _working_basis(xi, psi)
    a, b = _coeffs(xi, basis), _coeffs(psi, basis)
    # degree-0 factors are plain scalings
    if psi.degree == 0:
        return DgPolynomial(xi.basis, a * b[0])
    if xi.degree == 0:
        return DgPolynomial(xi.basis, b * a[0])
    op = build_product_operator(DgPolynomial(basis, b), xi.degree, cache)
    return DgPolynomial(xi.basis, op.apply(a))


def power(xi: DgPolynomial, p: int, cache: OpMatrixCache | None = None) -> DgPolynomial:
    """xi**p by left-associated products: ((xi*xi)*xi)*..."""
    if int(p) != p or p < 1:
        raise PolyMulError(f"power must be an integer >= 1, got {p}")
    out = xi
    for _ in range(int(p) - 1):
        out = multiply(out, xi, cache)
    return out


def evaluate(xi: DgPolynomial, x):
    """xi(x) as the dot product with [phi_0(x), ..., phi_n(x)]."""
    exact = xi.exact and xi.basis.exact
    basis = xi.basis if exact else xi.basis.as_float()
    phi = eval_basis_vector(basis, xi.degree, x)
    c = xi.coeffs if is_exact(phi) else np.asarray(xi.coeffs, dtype=float)
    return c @ phi
