import math

import numpy as np
import pytest

from negcalc import oracle
from negcalc.errors import DimensionError, InvariantViolationError, PatternViolationError, SingularityError
from negcalc.models import JCMParams, bound_entangled_trajectory, jcm_analytic_state
from negcalc.negativity import (
    DensityMatrix,
    FunctionTrajectory,
    invertibility_report,
    log_negativity,
    negativity,
    negativity_d1,
    negativity_d2,
    renyi2_entropy,
    resummed_expansion,
    taylor_expand,
)
from negcalc.random_states import random_density_matrix, random_hermitian

BELL = DensityMatrix.from_ket(np.array([1, 0, 0, 1]) / math.sqrt(2), (2, 2))
PRODUCT = DensityMatrix.from_ket(np.kron([1, 0], [0.6, 0.8]), (2, 2))


def unitary_trajectory(rho0: DensityMatrix, h: np.ndarray) -> FunctionTrajectory:
    w, v = np.linalg.eigh(h)

    def state(t):
        u = (v * np.exp(-1j * w * t)) @ v.conj().T
        m = u @ rho0.matrix @ u.conj().T
        return DensityMatrix(0.5 * (m + m.conj().T), rho0.dims)

    def partial(t, order):
        m = state(t).matrix
        for _ in range(order):
            m = -1j * (h @ m - m @ h)
        return m

    return FunctionTrajectory(state, partial)


def test_density_matrix_validation():
    with pytest.raises(InvariantViolationError):
        DensityMatrix(np.eye(4), (2, 2))
    with pytest.raises(InvariantViolationError):
        DensityMatrix(np.diag([1.5, -0.5, 0, 0]), (2, 2))
    with pytest.raises(PatternViolationError):
        DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]), (1, 2))
    with pytest.raises(DimensionError):
        DensityMatrix(np.eye(4) / 4, (2, 3))
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4) / 4, (2, 3))


def test_density_matrix_is_read_only():
    with pytest.raises(ValueError):
        BELL.matrix[0, 0] = 1.0


def test_trivial_values():
    assert negativity(PRODUCT) == 0.0
    assert negativity(BELL) == pytest.approx(0.5, abs=1e-15)
    assert log_negativity(PRODUCT) == 0.0
    assert log_negativity(BELL) == pytest.approx(1.0)
    assert renyi2_entropy(PRODUCT) == pytest.approx(0.0, abs=1e-15)
    assert renyi2_entropy(BELL) == pytest.approx(math.log(2))
    assert sorted(np.linalg.eigvalsh(BELL.partial_transpose())) == pytest.approx([-0.5, 0.5, 0.5, 0.5])


def test_invertibility_report():
    bell = invertibility_report(BELL)
    assert bell.min_abs_eig == pytest.approx(0.5)
    assert bell.invertible
    assert not invertibility_report(PRODUCT).invertible


def test_jcm_resonant_negativity():
    params = JCMParams(delta=0.0, g=5.0)
    for t in np.linspace(0.01, 1.0, 13):
        assert negativity(jcm_analytic_state(t, params)) == pytest.approx(abs(math.sin(4 * 5.0 * t)) / 2, abs=1e-12)
    # equal superposition of |g4> and |e3> at t = pi / (8 g)
    rho = jcm_analytic_state(math.pi / 40, params)
    assert np.diag(rho.matrix).real[[1, 2]] == pytest.approx([0.5, 0.5])
    assert negativity(rho) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (2, 4)])
def test_negativity_forms_agree(rng, dims):
    for _ in range(500 // 3):
        rho = random_density_matrix(dims, rng)
        n = negativity(rho)
        assert n >= 0.0
        assert n == pytest.approx(oracle.negativity_eigensum(rho.partial_transpose()), abs=1e-12)
        assert log_negativity(rho) == pytest.approx(math.log2(np.abs(np.linalg.eigvalsh(rho.partial_transpose())).sum()))


def test_renyi_matches_reduced_eigensolve(rng):
    rho = random_density_matrix((2, 3), rng)
    reduced = rho.matrix.reshape(2, 3, 2, 3).trace(axis1=1, axis2=3)
    lam = np.linalg.eigvalsh(reduced)
    assert renyi2_entropy(rho) == pytest.approx(-math.log(np.sum(lam**2)))


def test_d1_zero_direction_and_validation(rng):
    rho = random_density_matrix((2, 2), rng)
    assert negativity_d1(rho, np.zeros((4, 4))) == 0.0
    assert negativity_d2(rho, np.zeros((4, 4)), np.zeros((4, 4))) == 0.0
    with pytest.raises(InvariantViolationError):
        negativity_d1(rho, np.eye(4))
    with pytest.raises(DimensionError):
        negativity_d1(rho, np.zeros((2, 2)))


def test_d1_refuses_singular_partial_transpose():
    with pytest.raises(SingularityError) as info:
        negativity_d1(PRODUCT, np.zeros((4, 4)))
    assert info.value.min_abs_eig < 1e-12


def _directions(rng, n):
    d1 = random_hermitian(n, rng)
    d1 -= np.trace(d1) / n * np.eye(n)
    d2 = random_hermitian(n, rng)
    d2 -= np.trace(d2) / n * np.eye(n)
    return d1, d2


def test_d1_d2_match_fd_along_quadratic_path(rng):
    checked = 0
    while checked < 10:
        rho = random_density_matrix((2, 3), rng)
        if negativity(rho) < 1e-3 or invertibility_report(rho).min_abs_eig < 1e-2:
            continue
        d1, d2 = (d / np.abs(np.linalg.eigvalsh(d)).max() for d in _directions(rng, 6))

        def f(s):
            return oracle.negativity_of_state(rho.matrix + s * d1 + 0.5 * s * s * d2, 2, 3)

        assert negativity_d1(rho, d1) == pytest.approx(oracle.fd_scalar(f, 0.0).value, rel=1e-6)
        assert negativity_d2(rho, d1, d2) == pytest.approx(oracle.fd_scalar(f, 0.0, order=2).value, rel=1e-4)
        checked += 1


def test_chain_rule_scaling(rng):
    rho = random_density_matrix((2, 2), rng)
    d1, d2 = _directions(rng, 4)
    c = 1.7
    assert negativity_d1(rho, c * d1) == pytest.approx(c * negativity_d1(rho, d1))
    assert negativity_d2(rho, c * d1, c * c * d2) == pytest.approx(c * c * negativity_d2(rho, d1, d2))


def test_unitary_trajectory_purity_and_real_d1(rng):
    rho0 = random_density_matrix((2, 2), rng)
    h = random_hermitian(4, rng)
    traj = unitary_trajectory(rho0, h)
    for t in (0.0, 0.3, 1.1):
        assert traj.state_at(t).purity() == pytest.approx(rho0.purity())
        drho = traj.partial_at(t, 1)
        assert np.trace(drho) == pytest.approx(0.0, abs=1e-14)
        assert np.allclose(drho, drho.conj().T)


def test_constant_trajectory_expansion():
    traj = FunctionTrajectory(lambda t: BELL, lambda t, k: np.zeros((4, 4)))
    res = taylor_expand(traj, 0.3)
    assert res.value == pytest.approx(0.5)
    assert res.d1 == 0.0 and res.d2 == 0.0
    assert res.predict(10.0) == pytest.approx(0.5)
    assert taylor_expand(traj, 0.3, order=1).d2 is None
    with pytest.raises(ValueError):
        taylor_expand(traj, 0.3, order=3)


def test_expansion_value_is_oracle_eigensum(rng):
    rho0 = random_density_matrix((2, 2), rng)
    traj = unitary_trajectory(rho0, random_hermitian(4, rng))
    res = taylor_expand(traj, 0.2)
    lam = res.spectrum.eigvals
    assert res.value == -lam[lam < 0].sum()
    assert res.value == pytest.approx(oracle.negativity_eigensum(traj.state_at(0.2).partial_transpose()), abs=1e-15)
    assert res.min_abs_eig == pytest.approx(np.abs(res.spectrum.eigvals).min())


def test_second_order_residual_is_cubic():
    traj = bound_entangled_trajectory(JCMParams())
    t0 = 0.2
    res = taylor_expand(traj, t0)
    errors = [abs(negativity(traj.state_at(t0 + h)) - res.predict(t0 + h)) for h in (2e-3, 1e-3, 5e-4)]
    ratios = [errors[0] / errors[1], errors[1] / errors[2]]
    assert all(6.0 < r < 10.0 for r in ratios), ratios


def test_resummed_at_t0_is_exact(rng):
    rho0 = random_density_matrix((2, 2), rng)
    traj = unitary_trajectory(rho0, random_hermitian(4, rng))
    value, validated = resummed_expansion(traj, 0.4, 0.4)
    assert validated
    assert value == pytest.approx(negativity(traj.state_at(0.4)), abs=1e-14)


def test_resummed_exact_for_fixed_eigenbasis():
    """Werner states: the partial-transpose eigenbasis is fixed and no sign changes for p > 1/3."""
    phi = np.array([1, 0, 0, 1]) / math.sqrt(2)

    def state(t):
        p = 0.6 + 0.3 * t
        return DensityMatrix(p * np.outer(phi, phi) + (1 - p) * np.eye(4) / 4, (2, 2))

    traj = FunctionTrajectory(state, lambda t, k: None)
    for t in np.linspace(0.0, 1.0, 6):
        res = resummed_expansion(traj, 0.0, t)
        assert res.validated
        assert res.value == pytest.approx(res.exact, abs=1e-14)


def test_resummed_fails_across_sign_change():
    traj = bound_entangled_trajectory(JCMParams(), field_space="2x4")
    t0 = 0.05
    results = [resummed_expansion(traj, t0, t) for t in np.linspace(t0, 0.4, 30)]
    assert results[0].validated
    assert not all(r.validated for r in results)
