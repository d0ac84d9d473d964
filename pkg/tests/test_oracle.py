from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import as_obj, make_basis, random_coeffs, rational_vectors
from polymul import PolyMulError
from polymul.bases import BUILTIN_NAMES, DgPolynomial, builtin_basis
from polymul.bernstein import BernsteinPolynomial
from polymul.bernstein import multiply as bmul
from polymul.dgmul import multiply
from polymul.oracle import (
    MonomialPoly,
    convolve,
    from_monomial,
    mul_via_monomial,
    pointwise_check,
    to_monomial,
)

F = Fraction


def test_convolve_examples():
    assert convolve(MonomialPoly([1, 1]), MonomialPoly([1, 1])).coeffs.tolist() == [1, 2, 1]
    assert convolve(MonomialPoly([2]), MonomialPoly([-1, 0, 5])).coeffs.tolist() == [-2, 0, 10]
    with pytest.raises(PolyMulError):
        MonomialPoly([])


def test_convolve_matches_numpy():
    rng = np.random.default_rng(0)
    a, b = rng.uniform(-1, 1, 7), rng.uniform(-1, 1, 8)
    assert np.allclose(convolve(MonomialPoly(a), MonomialPoly(b)).coeffs, np.convolve(a, b))


def test_oracle_examples():
    cheb = builtin_basis("chebyshev-t")
    t1 = DgPolynomial(cheb, [0, 1])
    assert mul_via_monomial(t1, t1).coeffs.tolist() == [F(1, 2), 0, F(1, 2)]
    xi = DgPolynomial(builtin_basis("legendre"), [F(1), F(2), F(-3)])
    one = DgPolynomial(builtin_basis("legendre"), [1])
    assert mul_via_monomial(xi, one).coeffs.tolist() == xi.coeffs.tolist()


def test_monomial_random_deg6_by_7():
    rng = np.random.default_rng(1)
    mono = builtin_basis("monomial")
    a, b = random_coeffs(rng, 6, True), random_coeffs(rng, 7, True)
    want = convolve(MonomialPoly(a), MonomialPoly(b)).coeffs.tolist()
    assert multiply(DgPolynomial(mono, a), DgPolynomial(mono, b)).coeffs.tolist() == want
    assert mul_via_monomial(DgPolynomial(mono, a), DgPolynomial(mono, b)).coeffs.tolist() == want


@settings(max_examples=40, deadline=None)
@given(rational_vectors(max_size=9), rational_vectors(max_size=9))
def test_monomial_oracle_is_convolution(a, b):
    mono = builtin_basis("monomial")
    got = mul_via_monomial(DgPolynomial(mono, as_obj(a)), DgPolynomial(mono, as_obj(b)))
    assert got.coeffs.tolist() == convolve(MonomialPoly(as_obj(a)), MonomialPoly(as_obj(b))).coeffs.tolist()


@settings(max_examples=30, deadline=None)
@given(rational_vectors(max_size=12), st.sampled_from([n for n in BUILTIN_NAMES if n not in ("legendre-orthonormal", "hermite-orthonormal")]))
def test_roundtrip_exact(c, name):
    b = make_basis(name)
    p = DgPolynomial(b, as_obj(c))
    assert from_monomial(to_monomial(p), b).coeffs.tolist() == p.coeffs.tolist()


ILL_CONDITIONED = pytest.mark.xfail(
    strict=True,
    reason="chelyshkov2 to-monomial matrix has condition ~5e11 at degree 16; "
    "float64 round-trip cannot reach 1e-11 (exact mode is tested separately)",
)


@pytest.mark.parametrize(
    "name", [pytest.param(n, marks=ILL_CONDITIONED) if n == "chelyshkov2" else n for n in BUILTIN_NAMES]
)
def test_roundtrip_float(name):
    b = make_basis(name).as_float()
    rng = np.random.default_rng(2)
    for n in range(17):
        c = rng.uniform(-1, 1, n + 1)
        back = from_monomial(to_monomial(DgPolynomial(b, c)), b).coeffs
        assert np.max(np.abs(back - c)) <= 1e-11 * np.max(np.abs(c))


def test_pointwise_check_exact_and_float():
    P = BernsteinPolynomial(0, 1, [F(1), F(-2), F(3)])
    Q = BernsteinPolynomial(0, 1, [F(2), F(5)])
    rep = pointwise_check(bmul(P, Q), [P, Q], [F(j, 9) for j in range(10)], 0.0)
    assert rep.max_deviation == 0 and rep.passed

    rng = np.random.default_rng(3)
    Pf = BernsteinPolynomial(0.0, 1.0, rng.uniform(-1, 1, 9))
    Qf = BernsteinPolynomial(0.0, 1.0, rng.uniform(-1, 1, 9))
    pts = 0.5 + 0.5 * np.cos(np.pi * (2 * np.arange(50) + 1) / 100)
    rep = pointwise_check(bmul(Pf, Qf), [Pf, Qf], pts, 1e-12)
    assert rep.passed and rep.npoints == 50


def test_pointwise_check_flags_corruption():
    rng = np.random.default_rng(4)
    Pf = BernsteinPolynomial(0.0, 1.0, rng.uniform(-1, 1, 5))
    Qf = BernsteinPolynomial(0.0, 1.0, rng.uniform(-1, 1, 5))
    c = bmul(Pf, Qf).coeffs.copy()
    c[3] += 1e-3
    bad = BernsteinPolynomial(0.0, 1.0, c)
    rep = pointwise_check(bad, [Pf, Qf], np.linspace(0, 1, 50), 1e-12)
    assert not rep.passed


def test_oracle_rejects_mismatch():
    with pytest.raises(PolyMulError):
        mul_via_monomial(DgPolynomial(builtin_basis("monomial"), [1]), DgPolynomial(builtin_basis("legendre"), [1]))
