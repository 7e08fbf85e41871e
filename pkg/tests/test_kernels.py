import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcsum import _kernels_py, kernels

try:
    from mcsum import _kernels
except ImportError:  # pragma: no cover - extension not built
    _kernels = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
if _kernels is not None:
    BACKENDS.append(pytest.param(_kernels, id="cython"))

finite = st.floats(min_value=-50, max_value=50, allow_nan=False)


def forward(a, b):
    """Approximant K a_k/b_k via the forward recurrence."""
    A_prev, A, B_prev, B = 1.0, 0.0, 0.0, 1.0
    for ak, bk in zip(a, b):
        A_prev, A = A, bk * A + ak * A_prev
        B_prev, B = B, bk * B + ak * B_prev
    return A / B


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_forced_fallback(monkeypatch):
    import importlib

    before = kernels.BACKEND
    monkeypatch.setenv("MCSUM_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.undo()  # restores the caller's environment, set or not
        importlib.reload(kernels)
    assert kernels.BACKEND == before


@pytest.mark.parametrize("impl", BACKENDS)
def test_cf_tails_three_depths(impl):
    a = np.array([1.0, 2.0, 3.0, 4.0])
    b = np.array([2.0, 3.0, 4.0, 5.0])
    v0, v1, v2, status = impl.cf_tails(a, b)
    assert status == 0
    assert v0 == pytest.approx(forward(a, b), rel=1e-15)
    assert v1 == pytest.approx(forward(a[:3], b[:3]), rel=1e-15)
    assert v2 == pytest.approx(forward(a[:2], b[:2]), rel=1e-15)


@pytest.mark.parametrize("impl", BACKENDS)
def test_cf_tails_empty(impl):
    v0, v1, v2, status = impl.cf_tails(np.empty(0), np.empty(0))
    assert v0 == 0.0 and math.isnan(v1) and math.isnan(v2) and status == 0


@pytest.mark.parametrize("impl", BACKENDS)
def test_cf_tails_zero_denominator(impl):
    v0, _, _, _ = impl.cf_tails(np.array([1.0]), np.array([0.0]))
    assert math.isinf(v0)


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=40))
def test_cf_tails_backends_agree(pairs):
    if _kernels is None:
        return
    a = np.array([p[0] for p in pairs])
    b = np.array([p[1] for p in pairs])
    x, y = _kernels.cf_tails(a, b), _kernels_py.cf_tails(a, b)
    for p, q in zip(x, y):
        assert (math.isnan(p) and math.isnan(q)) or p == q


@pytest.mark.parametrize("impl", BACKENDS)
@pytest.mark.parametrize("alternating", [False, True])
def test_partial_sum_small(impl, alternating):
    num = np.array([1.0])
    den = np.array([0.0, 0.0, 1.0])
    total, total_abs, last = impl.rational_partial_sum(num, den, 1, 4, alternating)
    signs = [1, -1, 1, -1] if alternating else [1, 1, 1, 1]
    terms = [s / n**2 for s, n in zip(signs, range(1, 5))]
    assert total == pytest.approx(sum(terms), rel=1e-15)
    assert total_abs == pytest.approx(sum(abs(t) for t in terms), rel=1e-15)
    assert last == pytest.approx(terms[-1])


@given(
    st.lists(finite, min_size=1, max_size=4),
    st.integers(1, 300),
    st.integers(1, 50),
    st.booleans(),
)
def test_partial_sum_backends_agree(num, count, n0, alternating):
    if _kernels is None:
        return
    num = np.array(num)
    den = np.array([1.0, 0.0, 1.0, 0.5])
    x = _kernels.rational_partial_sum(num, den, n0, count, alternating)
    y = _kernels_py.rational_partial_sum(num, den, n0, count, alternating)
    assert x == pytest.approx(y, rel=1e-14, abs=1e-300)
