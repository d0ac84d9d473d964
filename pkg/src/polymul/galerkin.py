"""Stochastic Galerkin matrices from operational matrices.

For an orthonormal family psi_j, U_{k,p}[i, j] = <psi_k psi_i psi_j> is the
leading (p+1) x (p+1) block of H_{p,k}. Multivariate blocks are Kronecker
products U_{alpha_M, p_M} (x) ... (x) U_{alpha_1, p_1}, last dimension outermost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from ._scalars import PolyMulError, identity
from .bases import RecurrenceBasis, eval_basis_vector
from .opmatrix import OpMatrixCache, cache_get

__all__ = [
    "GalerkinBlock",
    "univariate_U",
    "assemble_G",
    "gauss_rule",
    "triple_product_quadrature",
]


@dataclass(frozen=True, eq=False)
class GalerkinBlock:
    basis: RecurrenceBasis
    k: int
    p: int
    matrix: np.ndarray


def univariate_U(
    basis: RecurrenceBasis, k: int, p: int, cache: OpMatrixCache | None = None
) -> GalerkinBlock:
    if not basis.orthonormal:
        raise PolyMulError(f"basis {basis.name!r} is not flagged orthonormal")
    if k < 0 or p < 0:
        raise PolyMulError("k and p must be nonnegative")
    if k == 0:
        # psi_0 = 1, so orthonormality gives the identity directly
        U = identity(p + 1, basis.exact)
    else:
        U = cache_get(basis, p, k, cache).entries[: p + 1, : p + 1].copy()
    U.flags.writeable = False
    return GalerkinBlock(basis, k, p, U)


def assemble_G(
    alpha: Sequence[int],
    orders: Sequence[int],
    bases: RecurrenceBasis | Sequence[RecurrenceBasis],
    cache: OpMatrixCache | None = None,
) -> np.ndarray:
    """G_alpha = U_{alpha_M,p_M} (x) ... (x) U_{alpha_1,p_1}; size prod(p_m + 1)."""
    alpha, orders = list(alpha), list(orders)
    if isinstance(bases, RecurrenceBasis):
        bases = [bases] * len(alpha)
    bases = list(bases)
    if not alpha or len(alpha) != len(orders) or len(alpha) != len(bases):
        raise PolyMulError("alpha, orders and bases must have the same nonzero length")
    if any(a < 0 for a in alpha):
        raise PolyMulError("multi-index entries must be nonnegative")
    G = None
    for a, p, b in zip(alpha, orders, bases):
        U = univariate_U(b, a, p, cache).matrix
        G = U if G is None else np.kron(U, G)
    return G


def gauss_rule(basis: RecurrenceBasis, npts: int):
    """Golub-Welsch nodes/weights from the basis recurrence (symmetric Jacobi matrix).

    Weights are normalized to the basis' probability measure (mass 1).
    """
    if basis.measure is None:
        raise PolyMulError(f"basis {basis.name!r} has no associated measure")
    if npts < 1:
        raise PolyMulError("need at least one quadrature point")
    diag = np.array([float(basis.beta(j)) for j in range(npts)])
    off = np.array(
        [math.sqrt(float(basis.alpha(j)) * float(basis.gamma(j + 1))) for j in range(npts - 1)]
    )
    nodes, vecs = eigh_tridiagonal(diag, off)
    return nodes, vecs[0] ** 2


def triple_product_quadrature(basis: RecurrenceBasis, k: int, i: int, j: int) -> float:
    """<psi_k psi_i psi_j> by a Gauss rule exact for degree k+i+j."""
    npts = (k + i + j) // 2 + 1
    x, w = gauss_rule(basis, npts)
    phi = eval_basis_vector(basis.as_float(), max(k, i, j), x)
    return float(np.sum(w * phi[k] * phi[i] * phi[j]))
