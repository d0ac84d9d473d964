"""Operational matrices H_{n,k} for degree-graded bases.

Row r of H_{n,k} (0-based, r = 0..n) holds the coefficients of phi_r * phi_k in
phi_0..phi_{n+k}. Rows are produced top-down by

    H[r, c] = ( alpha_{c-1} H[r-1, c-1] + (beta_c - beta_{r-1}) H[r-1, c]
                + gamma_{c+1} H[r-1, c+1] - gamma_{r-1} H[r-2, c] ) / alpha_{r-1}

which is the 1-based recurrence with i = r+2, j = c+1. Row 0 is the unit
vector at column k and every out-of-range reference is zero. Row r is
structurally zero outside columns |k-r| .. k+r.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._scalars import PolyMulError, is_exact, one, zeros
from .bases import RecurrenceBasis
from .formats import decode_matrix, encode_matrix

__all__ = [
    "OpMatrix",
    "OpMatrixCache",
    "build_H",
    "extend_H",
    "pad_to_Htilde",
    "cache_get",
    "default_cache",
    "opmatrix_json",
]

CLAMP_RTOL = 1e-14


@dataclass(frozen=True, eq=False)
class OpMatrix:
    basis: RecurrenceBasis
    n: int
    k: int
    entries: np.ndarray

    @property
    def exact(self) -> bool:
        return is_exact(self.entries)

    @property
    def last_row(self) -> np.ndarray:
        return self.entries[-1]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def _first_row(k: int, width: int, exact: bool) -> np.ndarray:
    row = zeros(width, exact)
    row[k] = one(exact)
    return row


def _recurrence_row(basis, k, r, prev, prev2):
    """Row r (length k+r+1) from rows r-1 and r-2 (any length >= their support)."""
    exact = basis.exact
    s = k + r  # row r-1 is supported on columns 0..s-1
    a, b, g = basis.coefficient_arrays(s)
    P = zeros(s, exact)
    P[: min(len(prev), s)] = prev[:s]
    row = zeros(s + 1, exact)
    row[1:] += a * P
    row[:s] += (b - basis.beta(r - 1)) * P
    row[: s - 1] += g[1:] * P[1:]
    if prev2 is not None:
        m2 = min(len(prev2), s - 1)
        row[:m2] -= basis.gamma(r - 1) * prev2[:m2]
    row = row / basis.alpha(r - 1)
    lo = abs(k - r)
    if not exact and lo > 0:
        # clamp roundoff only inside the structural zero band
        scale = np.max(np.abs(row))
        band = row[:lo]
        band[np.abs(band) <= CLAMP_RTOL * scale] = 0.0
    return row


def _assemble(basis, n, k, rows) -> OpMatrix:
    width = n + k + 1
    H = zeros((n + 1, width), basis.exact)
    for r, row in enumerate(rows):
        H[r, : len(row)] = row[: width]
    return OpMatrix(basis, n, k, _frozen(H))


def build_H(basis: RecurrenceBasis, n: int, k: int) -> OpMatrix:
    """Build the (n+1) x (n+k+1) operational matrix from scratch."""
    if n < 0 or k < 0:
        raise PolyMulError("n and k must be nonnegative")
    rows = [_first_row(k, k + 1, basis.exact)]
    for r in range(1, n + 1):
        rows.append(_recurrence_row(basis, k, r, rows[-1], rows[-2] if r > 1 else None))
    return _assemble(basis, n, k, rows)


def extend_H(H_prev: OpMatrix) -> OpMatrix:
    """H_{n,k} from H_{n-1,k}: only the new last row is computed."""
    basis, k, n = H_prev.basis, H_prev.k, H_prev.n + 1
    E = H_prev.entries
    new = _recurrence_row(basis, k, n, E[-1], E[-2] if n > 1 else None)
    return _assemble(basis, n, k, list(E) + [new])


def pad_to_Htilde(H: OpMatrix, m: int) -> np.ndarray:
    """Append m-k zero columns, giving an (n+1) x (n+m+1) matrix."""
    if m < H.k:
        raise PolyMulError(f"padding target m={m} is below k={H.k}")
    out = zeros((H.n + 1, H.n + m + 1), H.exact)
    out[:, : H.n + H.k + 1] = H.entries
    return out


def opmatrix_json(H: OpMatrix, rows=None) -> dict:
    return {
        "basis": H.basis.name,
        "n": H.n,
        "k": H.k,
        "rows": encode_matrix(H.entries if rows is None else rows),
    }


class OpMatrixCache:
    """Thread-safe store of operational matrices keyed by (basis, n, k).

    Misses are filled by truncating a larger cached H_{n',k}, or by appending
    rows to a smaller one. A row phi_r * phi_k that already sits in a cached
    H_{a,r} with a >= k is copied instead of recomputed. ``rows_computed``
    counts recurrence evaluations only.
    """

    def __init__(self, persist_dir: str | os.PathLike | None = None):
        self._store: dict[tuple, OpMatrix] = {}
        self._by_k: dict[tuple, set] = {}
        self._lock = threading.RLock()
        self.persist_dir = Path(persist_dir) if persist_dir else None
        self.rows_computed = 0
        self.rows_copied = 0

    def __len__(self):
        return len(self._store)

    def clear(self):
        with self._lock:
            self._store.clear()
            self._by_k.clear()
            self.rows_computed = self.rows_copied = 0

    def _put(self, H: OpMatrix):
        bkey = H.basis.key
        self._store[(bkey, H.n, H.k)] = H
        self._by_k.setdefault((bkey, H.k), set()).add(H.n)

    def _cached_ns(self, basis, k):
        return self._by_k.get((basis.key, k), set())

    def _symmetric_row(self, basis, k, r):
        # phi_r * phi_k is row k of any cached H_{a,r} with a >= k
        ns = [a for a in self._cached_ns(basis, r) if a >= k]
        if not ns:
            return None
        H = self._store[(basis.key, min(ns), r)]
        return H.entries[k, : k + r + 1].copy()

    def _persist_path(self, basis, n, k):
        if self.persist_dir is None or basis.key[2] != ():
            return None
        return self.persist_dir / f"H_{basis.name}_{n}_{k}.json"

    def _load(self, basis, n, k):
        path = self._persist_path(basis, n, k)
        if path is None or not path.exists():
            return None
        try:
            data = json.loads(path.read_text())
            E = decode_matrix(data["rows"])
        except (OSError, ValueError, KeyError):
            return None
        if is_exact(E) != basis.exact or E.shape != (n + 1, n + k + 1):
            return None
        return OpMatrix(basis, n, k, _frozen(E))

    def _save(self, H: OpMatrix):
        path = self._persist_path(H.basis, H.n, H.k)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(opmatrix_json(H)))
        tmp.replace(path)

    def get(self, basis: RecurrenceBasis, n: int, k: int) -> OpMatrix:
        if n < 0 or k < 0:
            raise PolyMulError("n and k must be nonnegative")
        key = (basis.key, n, k)
        with self._lock:
            hit = self._store.get(key)
            if hit is not None:
                return hit
            H = self._load(basis, n, k)
            if H is not None:
                self._put(H)
                return H
            ns = self._cached_ns(basis, k)
            larger = [a for a in ns if a > n]
            if larger:
                big = self._store[(basis.key, min(larger), k)]
                H = OpMatrix(basis, n, k, _frozen(big.entries[: n + 1, : n + k + 1].copy()))
                self._put(H)
                return H
            smaller = [a for a in ns if a < n]
            if smaller:
                rows = list(self._store[(basis.key, max(smaller), k)].entries)
            else:
                rows = [_first_row(k, k + 1, basis.exact)]
            for r in range(len(rows), n + 1):
                row = self._symmetric_row(basis, k, r)
                if row is None:
                    row = _recurrence_row(basis, k, r, rows[-1], rows[-2] if r > 1 else None)
                    self.rows_computed += 1
                else:
                    self.rows_copied += 1
                rows.append(row)
            H = _assemble(basis, n, k, rows)
            self._put(H)
            self._save(H)
            return H


_default = OpMatrixCache()


def default_cache() -> OpMatrixCache:
    return _default


def cache_get(basis: RecurrenceBasis, n: int, k: int, cache: OpMatrixCache | None = None) -> OpMatrix:
    return (_default if cache is None else cache).get(basis, n, k)
