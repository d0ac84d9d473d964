"""JSON / CSV encodings for matrices and polynomials.

Exact values serialize as ``{"num": p, "den": q}`` in JSON and ``"p/q"`` in CSV;
floats use Python's shortest round-trip repr.
"""

from __future__ import annotations

import io
import json

import numpy as np

from ._scalars import PolyMulError, as_array, encode_csv, encode_json, parse_scalar


def encode_vector(values) -> list:
    return [encode_json(v) for v in values]


def encode_matrix(mat) -> list:
    return [encode_vector(row) for row in mat]


def _json_values_exact(values) -> bool:
    return all(isinstance(v, (dict, str, int)) and not isinstance(v, bool) for v in values)


def decode_vector(values, exact: bool | None = None) -> np.ndarray:
    if not isinstance(values, list) or not values:
        raise PolyMulError("expected a non-empty JSON list of scalars")
    if exact is None:
        exact = _json_values_exact(values)
    return as_array([parse_scalar(v, exact) for v in values], exact)


def decode_matrix(rows, exact: bool | None = None) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise PolyMulError("expected a JSON list of rows")
    if len({len(r) for r in rows}) != 1:
        raise PolyMulError("matrix rows have unequal lengths")
    if exact is None:
        exact = all(_json_values_exact(r) for r in rows)
    out = np.empty((len(rows), len(rows[0])), dtype=object if exact else float)
    for i, r in enumerate(rows):
        out[i] = decode_vector(r, exact)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, separators=(", ", ": "))


def matrix_csv(mat, header: str | None = None) -> str:
    buf = io.StringIO()
    if header:
        buf.write(f"# {header}\n")
    for row in mat:
        buf.write(",".join(encode_csv(v) for v in row) + "\n")
    return buf.getvalue()


def matrix_coo(mat, tol: float = 0.0) -> list:
    """Nonzero entries as ``[i, j, value]`` triplets (row-major order)."""
    out = []
    for i, row in enumerate(mat):
        for j, v in enumerate(row):
            if abs(v) > tol:
                out.append([i, j, encode_json(v)])
    return out


def load_json_arg(text: str):
    """Parse inline JSON, or read it from the file named by ``text``."""
    stripped = text.strip()
    if stripped[:1] in "[{":
        src = stripped
    else:
        try:
            with open(text) as fh:
                src = fh.read()
        except OSError as exc:
            raise PolyMulError(f"cannot read {text!r}: {exc.strerror}") from exc
    try:
        return json.loads(src)
    except json.JSONDecodeError as exc:
        raise PolyMulError(f"malformed JSON input: {exc.msg}") from exc
