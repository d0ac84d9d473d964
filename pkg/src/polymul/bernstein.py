"""Bernstein-basis polynomials on [a, b]: lifting (degree elevation) and products.

    b_{j,n}(x) = C(n, j) (x - a)^j (b - x)^(n - j) / (b - a)^n

Coefficient vectors are rows; lifting a degree-n vector c to degree m is
``c @ T_{n,m}``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._scalars import PolyMulError, as_array, is_exact, is_rational_value, zeros

__all__ = [
    "BernsteinPolynomial",
    "BernsteinLift",
    "bernstein_basis_eval",
    "lift_matrix",
    "lift",
    "element_product_row",
    "element_product_matrix",
    "gamma_matrix",
    "multiply",
    "power",
    "evaluate",
]


def _scalar(v, exact):
    return Fraction(v) if exact else float(v)


@dataclass(frozen=True, eq=False)
class BernsteinPolynomial:
    a: object
    b: object
    coeffs: np.ndarray

    def __post_init__(self):
        c = self.coeffs
        if not isinstance(c, np.ndarray):
            c = list(c)
            c = as_array(c, all(is_rational_value(v) for v in c))
        if c.ndim != 1 or len(c) < 1:
            raise PolyMulError("Bernstein polynomial needs at least one coefficient")
        if not self.a < self.b:
            raise PolyMulError(f"degenerate interval [{self.a}, {self.b}]")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return is_exact(self.coeffs) and is_rational_value(self.a) and is_rational_value(self.b)

    @property
    def interval(self) -> tuple:
        return (self.a, self.b)


@dataclass(frozen=True, eq=False)
class BernsteinLift:
    n: int
    m: int
    matrix: np.ndarray


def bernstein_basis_eval(n: int, a, b, x) -> np.ndarray:
    """[b_{0,n}(x), ..., b_{n,n}(x)]; ``x`` may be a scalar or 1-d array."""
    if n < 0:
        raise PolyMulError("degree must be nonnegative")
    if not a < b:
        raise PolyMulError(f"degenerate interval [{a}, {b}]")
    if all(is_rational_value(v) for v in (a, b, x)):
        a, b, x = Fraction(a), Fraction(b), Fraction(x)
        t, s = (x - a) / (b - a), (b - x) / (b - a)
        return as_array([math.comb(n, j) * t**j * s ** (n - j) for j in range(n + 1)], True)
    x = np.asarray(x, dtype=float)
    t = (x - float(a)) / (float(b) - float(a))
    s = (float(b) - x) / (float(b) - float(a))
    return np.array([math.comb(n, j) * t**j * s ** (n - j) for j in range(n + 1)])


@functools.lru_cache(maxsize=512)
def _lift_entries(n: int, m: int, exact: bool) -> np.ndarray:
    T = zeros((n + 1, m + 1), exact)
    d = m - n
    for i in range(n + 1):
        for j in range(i, i + d + 1):
            v = Fraction(math.comb(n, i) * math.comb(d, j - i), math.comb(m, j))
            T[i, j] = _scalar(v, exact)
    T.flags.writeable = False
    return T


def lift_matrix(n: int, m: int, exact: bool = True) -> BernsteinLift:
    """T_{n,m}: T[i, j] = C(n, i) C(m-n, j-i) / C(m, j) for i <= j <= i+m-n (0-based)."""
    if n < 0 or m <= n:
        raise PolyMulError(f"lift needs 0 <= n < m, got n={n}, m={m}")
    return BernsteinLift(n, m, _lift_entries(n, m, bool(exact)))


def lift(P: BernsteinPolynomial, m: int) -> BernsteinPolynomial:
    T = lift_matrix(P.degree, m, P.exact).matrix
    c = P.coeffs if P.exact else np.asarray(P.coeffs, dtype=float)
    return BernsteinPolynomial(P.a, P.b, c @ T)


def element_product_row(j: int, k: int, n: int, m: int, exact: bool = True) -> np.ndarray:
    """Coefficients of b_{k,m} * b_{j,n} in the degree m+n basis (one nonzero, at k+j)."""
    if not (0 <= j <= n and 0 <= k <= m):
        raise PolyMulError(f"index out of range: j={j} (n={n}), k={k} (m={m})")
    row = zeros(m + n + 1, exact)
    v = Fraction(math.comb(m, k) * math.comb(n, j), math.comb(m + n, k + j))
    row[k + j] = _scalar(v, exact)
    return row


def element_product_matrix(k: int, n: int, m: int, exact: bool = True) -> np.ndarray:
    """Rows j = 0..n stacked: b_{k,m} * b_n = Htilde_{n,k} @ b_{m+n}."""
    return np.vstack([element_product_row(j, k, n, m, exact) for j in range(n + 1)])


def gamma_matrix(psi, m: int) -> np.ndarray:
    """Gamma[i, j] = psi[j-i] * T_{m, m+q}[i, j] where q = deg(psi); shape (m+1, m+q+1).

    A left factor of degree ``m`` times this matrix gives the product coefficients.
    """
    psi = psi if isinstance(psi, np.ndarray) else as_array(
        list(psi), all(is_rational_value(v) for v in psi)
    )
    q = len(psi) - 1
    exact = is_exact(psi)
    out = zeros((m + 1, m + q + 1), exact)
    if q == 0:
        for i in range(m + 1):
            out[i, i] = psi[0]
        return out
    T = lift_matrix(m, m + q, exact).matrix
    for i in range(m + 1):
        out[i, i : i + q + 1] = psi * T[i, i : i + q + 1]
    return out


def _check_pair(P: BernsteinPolynomial, Q: BernsteinPolynomial) -> bool:
    if P.a != Q.a or P.b != Q.b:
        raise PolyMulError(
            f"interval mismatch: [{P.a}, {P.b}] vs [{Q.a}, {Q.b}]"
        )
    return P.exact and Q.exact


def multiply(P: BernsteinPolynomial, Q: BernsteinPolynomial, route: str = "left") -> BernsteinPolynomial:
    """Product of degree-m P and degree-n Q in the degree m+n basis.

    ``route="left"`` computes ``xi @ Gamma_psi`` (P's coefficients times a matrix
    built from Q); ``route="right"`` the mirror ``psi @ Gamma_xi``. They agree.
    """
    exact = _check_pair(P, Q)
    xi, psi = P.coeffs, Q.coeffs
    if not exact:
        xi, psi = np.asarray(xi, dtype=float), np.asarray(psi, dtype=float)
    if route == "left":
        c = xi @ gamma_matrix(psi, P.degree)
    elif route == "right":
        c = psi @ gamma_matrix(xi, Q.degree)
    else:
        raise PolyMulError(f"unknown route {route!r}")
    return BernsteinPolynomial(P.a, P.b, c)


def power(P: BernsteinPolynomial, p: int) -> BernsteinPolynomial:
    """P**p = xi @ Gamma_{xi, 2n} @ ... @ Gamma_{xi, pn}."""
    if int(p) != p or p < 1:
        raise PolyMulError(f"power must be an integer >= 1, got {p}")
    xi = P.coeffs if P.exact else np.asarray(P.coeffs, dtype=float)
    n = P.degree
    c = xi
    for j in range(2, int(p) + 1):
        c = c @ gamma_matrix(xi, (j - 1) * n)
    return BernsteinPolynomial(P.a, P.b, c)


def evaluate(P: BernsteinPolynomial, x):
    basis = bernstein_basis_eval(P.degree, P.a, P.b, x)
    c = P.coeffs if is_exact(basis) else np.asarray(P.coeffs, dtype=float)
    return c @ basis
