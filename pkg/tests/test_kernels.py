import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatks import _kernels_py, kernels

try:
    from quatks import _kernels
except ImportError:  # extension not built
    _kernels = None

backends = [pytest.param(_kernels_py, id="python"),
            pytest.param(_kernels, id="cython",
                         marks=pytest.mark.skipif(_kernels is None, reason="extension not built"))]


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


def test_balanced_order():
    assert [_kernels_py.balanced(n) for n in range(7)] == [0, 1, -1, 2, -2, 3, -3]


def local_oracle(a, b, p, k):
    m = p**k
    squares = {z * z % m for z in range(m)}
    return any((a * x * x + b * y * y) % m in squares
               for x, y in itertools.product(range(m), repeat=2) if x % p or y % p)


@pytest.mark.parametrize("backend", backends)
@given(st.integers(-30, 30).filter(bool), st.integers(-30, 30).filter(bool), st.sampled_from([2, 3, 5]))
@settings(max_examples=100, deadline=None)
def test_local_solution_exists_oracle(backend, a, b, p):
    k = 4 if p == 2 else 2
    assert backend.local_solution_exists(a, b, p, k) == local_oracle(a, b, p, k)


def mu_oracle(traces, gram, target, bound):
    order = [_kernels_py.balanced(n) for n in range(2 * bound + 1)]
    for c in itertools.product(order, repeat=4):
        if sum(t * x for t, x in zip(traces, c)) == 0 and \
                sum(gram[i][j] * c[i] * c[j] for i in range(4) for j in range(4)) == target:
            return c
    return None


@st.composite
def forms(draw):
    traces = [draw(st.integers(-2, 2)) for _ in range(4)]
    g = [[0] * 4 for _ in range(4)]
    for i in range(4):
        g[i][i] = 2 * draw(st.integers(-3, 3))
        for j in range(i + 1, 4):
            g[i][j] = g[j][i] = draw(st.integers(-3, 3))
    return traces, g, 2 * draw(st.integers(1, 6)), draw(st.integers(1, 3))


@pytest.mark.parametrize("backend", backends)
@given(forms())
@settings(max_examples=150, deadline=None)
def test_mu_search_is_first_hit_in_balanced_order(backend, f):
    assert backend.mu_search(*f) == mu_oracle(*f)


@given(forms())
@settings(max_examples=100, deadline=None)
def test_backends_agree(f):
    if _kernels is None:
        pytest.skip("extension not built")
    assert _kernels.mu_search(*f) == _kernels_py.mu_search(*f)
