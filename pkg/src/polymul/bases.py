"""Degree-graded bases given by three-term recurrences.

Every basis satisfies

    x * phi_j(x) = alpha_j * phi_{j+1}(x) + beta_j * phi_j(x) + gamma_j * phi_{j-1}(x)

with phi_{-1} = 0 and phi_0 = 1. Indices are 0-based throughout.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from ._scalars import (
    EXACT,
    FLOAT,
    PolyMulError,
    as_array,
    is_exact,
    is_rational_value,
    json_exact_hint,
    parse_scalar,
    zeros,
)

__all__ = [
    "RecurrenceBasis",
    "DgPolynomial",
    "BUILTIN_NAMES",
    "builtin_basis",
    "basis_from_json",
    "eval_basis_vector",
    "basis_to_monomial_matrix",
]

# density names understood by the quadrature oracle in ``galerkin``
NORMAL = "normal"
UNIFORM = "uniform"


class RecurrenceBasis:
    """A degree-graded basis defined by its recurrence coefficient sequences.

    ``alpha``, ``beta`` and ``gamma`` are callables ``j -> scalar``; values are
    memoized on first access. ``measure`` is set only for orthonormal families
    (``"normal"`` or ``"uniform"``) and is what the Galerkin code checks.
    """

    def __init__(
        self,
        name: str,
        alpha: Callable[[int], object],
        beta: Callable[[int], object],
        gamma: Callable[[int], object],
        *,
        nodes: Sequence | None = None,
        scalar_mode: str = EXACT,
        measure: str | None = None,
        max_degree: int | None = None,
        fingerprint: tuple = (),
    ):
        if scalar_mode not in (EXACT, FLOAT):
            raise PolyMulError(f"unknown scalar mode {scalar_mode!r}")
        self._name = name
        self._fns = {"alpha": alpha, "beta": beta, "gamma": gamma}
        self._memo: dict[str, list] = {"alpha": [], "beta": [], "gamma": []}
        self._lock = threading.Lock()
        self._nodes = None if nodes is None else tuple(nodes)
        self._mode = scalar_mode
        self._measure = measure
        self._max_degree = max_degree
        self._fingerprint = fingerprint
        self._float_twin = None

    name = property(lambda self: self._name)
    nodes = property(lambda self: self._nodes)
    scalar_mode = property(lambda self: self._mode)
    measure = property(lambda self: self._measure)
    max_degree = property(lambda self: self._max_degree)

    @property
    def exact(self) -> bool:
        return self._mode == EXACT

    @property
    def orthonormal(self) -> bool:
        return self._measure is not None

    @property
    def key(self) -> tuple:
        return (self._name, self._mode, self._fingerprint)

    def __repr__(self):
        return f"RecurrenceBasis({self._name!r}, mode={self._mode})"

    def _get(self, which: str, j: int):
        if j < 0:
            raise PolyMulError(f"{which} index must be nonnegative, got {j}")
        memo = self._memo[which]
        if j < len(memo):
            return memo[j]
        with self._lock:
            fn = self._fns[which]
            while len(memo) <= j:
                i = len(memo)
                if self._max_degree is not None and i > self._max_degree:
                    raise PolyMulError(
                        f"basis {self._name!r} defines coefficients only up to "
                        f"index {self._max_degree}"
                    )
                v = fn(i)
                v = Fraction(v) if self.exact else float(v)
                if which == "alpha" and v == 0:
                    raise PolyMulError(f"basis {self._name!r} has alpha_{i} = 0")
                memo.append(v)
        return memo[j]

    def alpha(self, j: int):
        return self._get("alpha", j)

    def beta(self, j: int):
        return self._get("beta", j)

    def gamma(self, j: int):
        return self._get("gamma", j)

    def coefficient_arrays(self, count: int):
        """(alpha, beta, gamma) for indices ``0..count-1`` as arrays."""
        out = []
        for which in ("alpha", "beta", "gamma"):
            vals = [self._get(which, j) for j in range(count)]
            out.append(as_array(vals, self.exact))
        return tuple(out)

    def as_float(self) -> "RecurrenceBasis":
        if not self.exact:
            return self
        if self._float_twin is None:
            self._float_twin = RecurrenceBasis(
                self._name,
                self._fns["alpha"],
                self._fns["beta"],
                self._fns["gamma"],
                nodes=self._nodes,
                scalar_mode=FLOAT,
                measure=self._measure,
                max_degree=self._max_degree,
                fingerprint=self._fingerprint,
            )
        return self._float_twin


@dataclass(frozen=True, eq=False)
class DgPolynomial:
    """Coefficient vector over a degree-graded basis; ``coeffs[j]`` multiplies phi_j."""

    basis: RecurrenceBasis
    coeffs: np.ndarray = field()

    def __post_init__(self):
        c = self.coeffs
        if not isinstance(c, np.ndarray):
            c = list(c)
            exact = self.basis.exact and all(
                is_rational_value(v) or isinstance(v, (str, dict)) for v in c
            )
            c = as_array(c, exact)
        elif not self.basis.exact and is_exact(c):
            c = c.astype(float)
        if c.ndim != 1 or len(c) < 1:
            raise PolyMulError("polynomial needs at least one coefficient")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return is_exact(self.coeffs)


# -- registry --------------------------------------------------------------


def _monomial(nodes=None):
    return RecurrenceBasis("monomial", lambda j: 1, lambda j: 0, lambda j: 0)


def _newton(nodes=None):
    if nodes is None or len(nodes) == 0:
        raise PolyMulError("the newton basis requires nodes")
    exact = all(is_rational_value(v) or isinstance(v, (str, dict)) for v in nodes)
    vals = [parse_scalar(v, exact) for v in nodes]
    if len(set(vals)) != len(vals):
        raise PolyMulError("newton nodes must be pairwise distinct")
    return RecurrenceBasis(
        "newton",
        lambda j: 1,
        lambda j: vals[j],
        lambda j: 0,
        nodes=vals,
        scalar_mode=EXACT if exact else FLOAT,
        max_degree=len(vals) - 1,
        fingerprint=tuple(vals),
    )


def _chebyshev_t(nodes=None):
    half = Fraction(1, 2)
    return RecurrenceBasis(
        "chebyshev-t",
        lambda j: 1 if j == 0 else half,
        lambda j: 0,
        lambda j: 0 if j == 0 else half,
    )


def _legendre(nodes=None):
    return RecurrenceBasis(
        "legendre",
        lambda j: Fraction(j + 1, 2 * j + 1),
        lambda j: 0,
        lambda j: Fraction(j, 2 * j + 1),
    )


def _legendre_orthonormal(nodes=None):
    # orthonormal w.r.t. the uniform probability density on [-1, 1]
    return RecurrenceBasis(
        "legendre-orthonormal",
        lambda j: (j + 1) / math.sqrt((2 * j + 1) * (2 * j + 3)),
        lambda j: 0.0,
        lambda j: 0.0 if j == 0 else j / math.sqrt((2 * j - 1) * (2 * j + 1)),
        scalar_mode=FLOAT,
        measure=UNIFORM,
    )


def _hermite_orthonormal(nodes=None):
    # orthonormal w.r.t. the standard Gaussian density
    return RecurrenceBasis(
        "hermite-orthonormal",
        lambda j: math.sqrt(j + 1),
        lambda j: 0.0,
        lambda j: math.sqrt(j),
        scalar_mode=FLOAT,
        measure=NORMAL,
    )


def _chelyshkov2(nodes=None):
    # orthogonal on [0, 1] with weight x; gamma is taken positive, which is the
    # sign that makes the family orthogonal (alpha_{j-1} * gamma_j > 0)
    return RecurrenceBasis(
        "chelyshkov2",
        lambda i: Fraction(i + 2, 4 * i + 6),
        lambda i: Fraction(2 * (i + 1) ** 2, (2 * i + 3) * (2 * i + 1)),
        lambda i: Fraction(i, 4 * i + 2),
    )


_REGISTRY = {
    "monomial": _monomial,
    "newton": _newton,
    "chebyshev-t": _chebyshev_t,
    "legendre": _legendre,
    "legendre-orthonormal": _legendre_orthonormal,
    "hermite-orthonormal": _hermite_orthonormal,
    "chelyshkov2": _chelyshkov2,
}
BUILTIN_NAMES = tuple(_REGISTRY)

_shared: dict[str, RecurrenceBasis] = {}
_shared_lock = threading.Lock()


def builtin_basis(name: str, nodes: Sequence | None = None) -> RecurrenceBasis:
    """Look up a registered basis; ``nodes`` is required for (and only for) newton."""
    if name not in _REGISTRY:
        raise PolyMulError(
            f"unknown basis {name!r}; choose from {', '.join(BUILTIN_NAMES)}"
        )
    if name == "newton":
        return _newton(nodes)
    if nodes is not None:
        raise PolyMulError(f"basis {name!r} takes no nodes")
    # one shared instance per name so memo tables are reused
    with _shared_lock:
        if name not in _shared:
            _shared[name] = _REGISTRY[name]()
        return _shared[name]


def basis_from_json(source) -> RecurrenceBasis:
    """Build a custom basis from ``{"name", "alpha", "beta", "gamma"[, "measure"]}``.

    ``source`` may be a dict, a JSON string, or a path to a JSON file. The lists
    cover indices ``0..len-1``; asking for anything beyond raises.
    """
    if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("{"):
        source = Path(source).read_text()
    if isinstance(source, str):
        try:
            source = json.loads(source)
        except json.JSONDecodeError as exc:
            raise PolyMulError(f"malformed basis JSON: {exc}") from exc
    try:
        name = str(source["name"])
        lists = [list(source[k]) for k in ("alpha", "beta", "gamma")]
    except (KeyError, TypeError) as exc:
        raise PolyMulError("basis JSON needs name, alpha, beta and gamma lists") from exc
    if len({len(v) for v in lists}) != 1 or not lists[0]:
        raise PolyMulError("alpha, beta and gamma must be non-empty and equally long")
    exact = all(json_exact_hint(v) for v in lists)
    a, b, g = ([parse_scalar(v, exact) for v in lst] for lst in lists)
    measure = source.get("measure")
    if measure not in (None, NORMAL, UNIFORM):
        raise PolyMulError(f"unsupported measure {measure!r}")
    return RecurrenceBasis(
        name,
        a.__getitem__,
        b.__getitem__,
        g.__getitem__,
        scalar_mode=EXACT if exact else FLOAT,
        measure=measure,
        max_degree=len(a) - 1,
        fingerprint=(tuple(a), tuple(b), tuple(g)),
    )


# -- evaluation --------------------------------------------------------------


def eval_basis_vector(basis: RecurrenceBasis, n: int, x) -> np.ndarray:
    """[phi_0(x), ..., phi_n(x)] by the forward recurrence.

    ``x`` may be a scalar or a 1-d array (result then has shape (n+1, len(x))).
    Exact output only when the basis is exact and ``x`` is rational.
    """
    if n < 0:
        raise PolyMulError("degree must be nonnegative")
    exact = basis.exact and is_rational_value(x)
    if exact:
        x = Fraction(x)
        out = zeros(n + 1, True)
    else:
        x = np.asarray(x, dtype=float)
        out = np.zeros((n + 1,) + x.shape)
    b = basis if exact else basis.as_float()
    out[0] = Fraction(1) if exact else 1.0
    prev, cur = 0, out[0]
    for j in range(n):
        nxt = ((x - b.beta(j)) * cur - b.gamma(j) * prev) / b.alpha(j)
        out[j + 1] = nxt
        prev, cur = cur, nxt
    return out


def basis_to_monomial_matrix(basis: RecurrenceBasis, n: int) -> np.ndarray:
    """Lower-triangular matrix whose row j holds the monomial coefficients of phi_j."""
    if n < 0:
        raise PolyMulError("degree must be nonnegative")
    exact = basis.exact
    M = zeros((n + 1, n + 1), exact)
    M[0, 0] = Fraction(1) if exact else 1.0
    for j in range(n):
        a, b, g = basis.alpha(j), basis.beta(j), basis.gamma(j)
        row = zeros(n + 1, exact)
        row[1:] += M[j, :-1]  # x * phi_j
        row -= b * M[j]
        if j > 0:
            row -= g * M[j - 1]
        M[j + 1] = row / a
    return M
