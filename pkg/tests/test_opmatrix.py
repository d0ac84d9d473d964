import json
import math
import threading
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_basis
from polymul import PolyMulError
from polymul.bases import BUILTIN_NAMES, builtin_basis, eval_basis_vector
from polymul.opmatrix import (
    OpMatrixCache,
    build_H,
    cache_get,
    extend_H,
    opmatrix_json,
    pad_to_Htilde,
)

F = Fraction
s = math.sqrt

# H_{5,3} for orthonormal Hermite, entries as displayed (0-based positions)
HERMITE_H53 = {
    (0, 3): 1,
    (1, 2): s(3), (1, 4): 2,
    (2, 1): s(3), (2, 3): 3 * s(2), (2, 5): s(10),
    (3, 0): 1, (3, 2): 3 * s(2), (3, 4): 3 * s(6), (3, 6): 2 * s(5),
    (4, 1): 2, (4, 3): 3 * s(6), (4, 5): 2 * s(30), (4, 7): s(35),
    (5, 2): s(10), (5, 4): 2 * s(30), (5, 6): 15, (5, 8): 2 * s(14),
}


def dense(entries, shape):
    out = np.zeros(shape)
    for (i, j), v in entries.items():
        out[i, j] = v
    return out


def test_hermite_H53_matches_display():
    H = build_H(builtin_basis("hermite-orthonormal"), 5, 3).entries
    assert H.shape == (6, 9)
    assert np.max(np.abs(H - dense(HERMITE_H53, (6, 9)))) <= 1e-12
    assert np.allclose(H[3], [1, 0, 3 * s(2), 0, 3 * s(6), 0, 2 * s(5), 0, 0], atol=1e-12)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_k_zero_is_identity(name):
    H = build_H(make_basis(name), 4, 0).entries
    assert (H == np.eye(5)).all()


def test_monomial_shift():
    H = build_H(builtin_basis("monomial"), 2, 2).entries
    assert H.tolist() == np.eye(5, dtype=int)[2:].tolist()


def test_chelyshkov_matrices():
    b = builtin_basis("chelyshkov2")
    assert build_H(b, 1, 1).entries.tolist() == [[0, 1, 0], [F(1, 2), F(-2, 5), F(9, 10)]]
    assert build_H(b, 1, 2).entries[1].tolist() == [0, F(3, 5), F(-16, 35), F(6, 7)]
    assert build_H(b, 2, 2).entries[2].tolist() == [
        F(1, 3), F(-32, 105), F(24, 35), F(-32, 63), F(50, 63)
    ]


def test_pad():
    b = builtin_basis("chelyshkov2")
    H11 = build_H(b, 1, 1)
    P = pad_to_Htilde(H11, 2)
    assert P.shape == (2, 4) and list(P[:, 3]) == [0, 0]
    assert (pad_to_Htilde(H11, 1) == H11.entries).all()
    assert pad_to_Htilde(build_H(b, 0, 1), 3).tolist() == [[0, 1, 0, 0]]
    with pytest.raises(PolyMulError):
        pad_to_Htilde(H11, 0)


def test_extend_chelyshkov():
    b = builtin_basis("chelyshkov2")
    H = extend_H(build_H(b, 1, 2))
    assert (H.n, H.k) == (2, 2)
    assert (H.entries == build_H(b, 2, 2).entries).all()
    assert extend_H(build_H(b, 0, 0)).entries.tolist() == [[1, 0], [0, 1]]


def test_extend_hermite_last_row():
    H = extend_H(build_H(builtin_basis("hermite-orthonormal"), 4, 3))
    want = [0, 0, s(10), 0, 2 * s(30), 0, 15, 0, 2 * s(14)]
    assert np.allclose(H.last_row, want, atol=1e-12)


def test_negative_sizes_rejected():
    with pytest.raises(PolyMulError):
        build_H(builtin_basis("monomial"), -1, 0)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_embedding(name):
    b = make_basis(name)
    for k in range(0, 13, 3):
        big = build_H(b, 12, k).entries
        for n in range(1, 13):
            small = build_H(b, n - 1, k).entries
            assert (small == big[:n, : n + k]).all()
            assert all(v == 0 for v in big[:n, n + k])


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_last_row_symmetry(name):
    b = make_basis(name)
    for i in range(11):
        for j in range(i + 1, 11):
            a, c = build_H(b, i, j).last_row, build_H(b, j, i).last_row
            if b.exact:
                assert list(a) == list(c)
            else:
                assert np.max(np.abs(a - c)) <= 1e-12 * np.max(np.abs(a))


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_band_and_sparsity(name):
    b = make_basis(name)
    for k in range(8):
        H = build_H(b, 12, k).entries
        for r in range(13):
            nz = [c for c, v in enumerate(H[r]) if v != 0]
            assert all(abs(k - r) <= c <= k + r for c in nz)
            if r >= k:
                assert len(nz) <= 2 * k + 1


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_against_evaluation(name):
    b = make_basis(name).as_float()
    rng = np.random.default_rng(11)
    for n in range(9):
        for k in range(9):
            Ht = pad_to_Htilde(build_H(b, n, k), k)
            for x in rng.uniform(-1, 1, size=10):
                lhs = eval_basis_vector(b, n, x) * eval_basis_vector(b, k, x)[k]
                rhs = Ht @ eval_basis_vector(b, n + k, x)
                scale = max(1.0, np.max(np.abs(lhs)))
                assert np.max(np.abs(lhs - rhs)) <= 1e-10 * scale


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.fractions(-2, 2, max_denominator=9))
def test_exact_identity_at_rational_points(n, k, x):
    b = builtin_basis("chelyshkov2")
    Ht = pad_to_Htilde(build_H(b, n, k), k)
    lhs = eval_basis_vector(b, n, x) * eval_basis_vector(b, k, x)[k]
    assert list(lhs) == list(Ht @ eval_basis_vector(b, n + k, x))


def test_cache_symmetric_reuse():
    cache = OpMatrixCache()
    b = builtin_basis("chelyshkov2")
    cache.get(b, 1, 1)
    cache.get(b, 1, 2)
    H21 = cache.get(b, 2, 1)
    assert list(H21.last_row) == list(cache.get(b, 1, 2).last_row)
    assert cache.rows_copied >= 1


def test_cache_hit_and_row_count():
    cache = OpMatrixCache()
    b = builtin_basis("legendre")
    first = cache.get(b, 3, 2)
    assert cache.get(b, 3, 2) is first
    cache.clear()
    for n in range(1, 8):
        cache.get(b, n, 5)
    assert cache.rows_computed + cache.rows_copied == 7
    # truncation of a cached larger matrix computes nothing
    before = cache.rows_computed
    assert (cache.get(b, 4, 5).entries == build_H(b, 4, 5).entries).all()
    assert cache.rows_computed == before


def test_cache_matches_direct_build():
    cache = OpMatrixCache()
    q = builtin_basis("legendre")
    for n, k in [(2, 5), (5, 2), (7, 3), (3, 7)]:
        assert cache.get(q, n, k).entries.tolist() == build_H(q, n, k).entries.tolist()
    b = builtin_basis("hermite-orthonormal")
    for n, k in [(2, 5), (5, 2), (7, 3), (3, 7), (6, 6)]:
        # rows copied from H_{k,n} agree with the recurrence up to roundoff
        got, want = cache.get(b, n, k).entries, build_H(b, n, k).entries
        assert np.max(np.abs(got - want)) <= 1e-12 * np.max(np.abs(want))


def test_cache_threads():
    cache = OpMatrixCache()
    b = builtin_basis("chebyshev-t")
    results = []

    def work():
        results.append(cache.get(b, 9, 4))

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r is results[0] for r in results)


def test_cache_persistence(tmp_path):
    b = builtin_basis("chelyshkov2")
    OpMatrixCache(tmp_path).get(b, 2, 2)
    path = tmp_path / "H_chelyshkov2_2_2.json"
    assert path.exists()
    data = json.loads(path.read_text())
    assert data == opmatrix_json(build_H(b, 2, 2))
    fresh = OpMatrixCache(tmp_path)
    H = fresh.get(b, 2, 2)
    assert fresh.rows_computed == 0
    assert H.entries.tolist() == build_H(b, 2, 2).entries.tolist()


def test_default_cache_shared():
    b = builtin_basis("legendre")
    assert cache_get(b, 3, 3) is cache_get(b, 3, 3)
