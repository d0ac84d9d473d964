"""Scalar plumbing shared by every module.

Two scalar modes exist: exact rationals (``fractions.Fraction`` held in numpy
``object`` arrays) and plain float64 arrays. Everything downstream dispatches
on ``arr.dtype == object``.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

import numpy as np

EXACT = "exact-rational"
FLOAT = "float64"


class PolyMulError(ValueError):
    """Domain error raised by the library (bad basis, bad nodes, ...)."""


def is_exact(arr) -> bool:
    return isinstance(arr, np.ndarray) and arr.dtype == object


def is_rational_value(v) -> bool:
    return isinstance(v, (numbers.Rational, Fraction)) and not isinstance(v, bool)


def parse_scalar(obj, exact: bool):
    """Parse a JSON-ish scalar: number, ``"p/q"`` string or ``{"num", "den"}``."""
    if isinstance(obj, dict):
        try:
            v = Fraction(int(obj["num"]), int(obj["den"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise PolyMulError(f"malformed rational {obj!r}") from exc
    elif isinstance(obj, str):
        try:
            v = Fraction(obj.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PolyMulError(f"malformed scalar {obj!r}") from exc
    elif isinstance(obj, bool) or not isinstance(obj, numbers.Real):
        raise PolyMulError(f"malformed scalar {obj!r}")
    elif isinstance(obj, float):
        # decimal reading: 0.1 -> 1/10 rather than the binary expansion
        v = Fraction(repr(obj)) if exact else obj
    else:
        v = obj
    if exact:
        return Fraction(v)
    return float(v)


def as_array(values, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(len(values), dtype=object)
        for i, v in enumerate(values):
            out[i] = v if isinstance(v, Fraction) else parse_scalar(v, True)
        return out
    return np.array([float(v) for v in values], dtype=float)


def zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=float)


def identity(size: int, exact: bool) -> np.ndarray:
    out = zeros((size, size), exact)
    for i in range(size):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def one(exact: bool):
    return Fraction(1) if exact else 1.0


def to_float(arr) -> np.ndarray:
    return np.asarray(arr, dtype=float)


def common_mode(*arrays) -> bool:
    """True when every array is exact; mixed inputs fall back to float."""
    return all(is_exact(a) for a in arrays)


def coerce(arr, exact: bool) -> np.ndarray:
    if exact:
        if is_exact(arr):
            return arr
        raise PolyMulError("cannot promote float data to exact-rational mode")
    return to_float(arr)


def encode_json(v):
    if isinstance(v, (Fraction, numbers.Integral)) and not isinstance(v, bool):
        v = Fraction(v)
        return {"num": v.numerator, "den": v.denominator}
    return float(v)


def encode_csv(v) -> str:
    if isinstance(v, (Fraction, numbers.Integral)) and not isinstance(v, bool):
        v = Fraction(v)
        return f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def json_exact_hint(values) -> bool:
    """Exact iff no JSON float appears among ``values``."""
    return not any(isinstance(v, float) for v in values)
