import math

import numpy as np
import pytest

from negcalc import oracle
from negcalc.random_states import random_hermitian, random_pure_state


def test_fd_polynomials():
    assert oracle.fd_scalar(lambda x: x * x, 3.0).value == pytest.approx(6.0, abs=1e-9)
    assert oracle.fd_scalar(lambda x: x**3, 2.0, order=2).value == pytest.approx(12.0, abs=1e-6)
    assert oracle.fd_scalar(lambda x: x**4, 1.0, order=3).value == pytest.approx(24.0, abs=1e-6)
    assert oracle.fd_scalar(lambda x: x**5, 1.0, order=4).value == pytest.approx(120.0, abs=1e-4)


def test_fd_smooth_functions():
    for order, expected in ((1, math.cos(0.7)), (2, -math.sin(0.7)), (3, -math.cos(0.7)), (4, math.sin(0.7))):
        assert oracle.fd_scalar(math.sin, 0.7, order=order).value == pytest.approx(expected, rel=1e-5)


def test_fd_abs_away_from_kink():
    assert oracle.fd_scalar(abs, 1.0).value == pytest.approx(1.0, abs=1e-10)


def test_fd_trace_is_linear(rng):
    a = random_hermitian(4, rng)
    v = random_hermitian(4, rng)
    trace = lambda m: float(np.trace(m).real)
    assert oracle.fd_directional(a, v, trace).value == pytest.approx(np.trace(v).real, abs=1e-9)
    assert oracle.fd_directional(a, v, trace, order=2).value == pytest.approx(0.0, abs=1e-6)


def test_fd_real_gradient_of_frobenius_norm(rng):
    a = random_hermitian(3, rng)
    grad = oracle.fd_real_gradient(lambda m: float(np.sum(np.abs(m) ** 2)), a)
    expected = [2 * a[k, k].real for k in range(3)]
    for k in range(3):
        for l in range(k + 1, 3):
            expected += [4 * a[k, l].real, 4 * a[k, l].imag]
    assert grad == pytest.approx(expected, abs=1e-8)


def test_error_estimate_bounds_actual_error(rng):
    hits = 0
    trials = 200
    for _ in range(trials):
        x0, w = rng.uniform(-2, 2), rng.uniform(0.5, 3)
        f = lambda x: math.exp(0.3 * x) * math.sin(w * x)
        exact = math.exp(0.3 * x0) * (0.3 * math.sin(w * x0) + w * math.cos(w * x0))
        res = oracle.fd_scalar(f, x0)
        hits += abs(res.value - exact) <= res.error
    assert hits >= 0.95 * trials


def test_scheme_without_richardson():
    res = oracle.fd_scalar(lambda x: x**3, 1.0, oracle.FDScheme((1e-3, 1e-4), richardson=False))
    assert res.value == pytest.approx(3.0, abs=1e-7)
    assert res.error > 0
    single = oracle.fd_scalar(lambda x: x**2, 1.0, oracle.FDScheme((1e-4,)))
    assert math.isnan(single.error)


def test_scheme_validation():
    with pytest.raises(ValueError):
        oracle.FDScheme((1e-5, 1e-4))
    with pytest.raises(ValueError):
        oracle.FDScheme(())
    with pytest.raises(ValueError):
        oracle.FDScheme((1e-3,), order=5)
    with pytest.raises(ValueError):
        oracle.FDScheme((1e-9,), order=1)
    with pytest.raises(ValueError):
        oracle.fd_directional(np.eye(2), np.eye(2), np.trace, order=2, scheme=oracle.default_scheme(1))


def test_non_finite_samples_raise():
    with pytest.raises(FloatingPointError):
        oracle.fd_scalar(lambda x: math.inf if x > 0 else 0.0, 0.0)


def test_eigensum_and_partial_transpose():
    assert oracle.negativity_eigensum(np.diag([0.75, 0.25, 0.25, -0.25])) == pytest.approx(0.25)
    assert oracle.negativity_eigensum(np.eye(3) / 3) == 0.0
    bell = np.zeros(4)
    bell[[0, 3]] = 1 / math.sqrt(2)
    assert oracle.negativity_of_state(np.outer(bell, bell), 2, 2) == pytest.approx(0.5)
    a, b = np.arange(4.0).reshape(2, 2), np.arange(9.0).reshape(3, 3)
    assert np.array_equal(oracle.partial_transpose_b(np.kron(a, b), 2, 3), np.kron(a, b.T))


def test_ranks(rng):
    assert oracle.schmidt_rank(np.kron([1, 0], [0, 1, 0]), (2, 3)) == 1
    assert oracle.schmidt_rank(np.array([1, 0, 0, 1]) / math.sqrt(2), (2, 2)) == 2
    for r in (1, 2):
        psi = random_pure_state((2, 4), rng, schmidt_rank=r)
        assert oracle.schmidt_rank(psi, (2, 4)) == r
    with pytest.raises(ValueError):
        oracle.schmidt_rank(np.ones(5), (2, 3))
    assert oracle.matrix_rank(np.diag([1.0, 0.0, 1e-12])) == 1
