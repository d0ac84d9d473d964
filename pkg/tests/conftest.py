from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from polymul.bases import BUILTIN_NAMES, builtin_basis

NEWTON_NODES = [Fraction(2 * j - 24, 24) for j in range(25)]


def make_basis(name):
    return builtin_basis(name, nodes=NEWTON_NODES if name == "newton" else None)


@pytest.fixture(params=BUILTIN_NAMES)
def any_basis(request):
    return make_basis(request.param)


def random_coeffs(rng, n, exact):
    if exact:
        num = rng.integers(-9, 10, size=n + 1)
        den = rng.integers(1, 10, size=n + 1)
        out = np.empty(n + 1, dtype=object)
        out[:] = [Fraction(int(p), int(q)) for p, q in zip(num, den)]
        return out
    return rng.uniform(-1.0, 1.0, size=n + 1)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def rational_vectors(min_size=1, max_size=6):
    return st.lists(rationals, min_size=min_size, max_size=max_size)


def as_obj(values):
    out = np.empty(len(values), dtype=object)
    out[:] = [Fraction(v) for v in values]
    return out
