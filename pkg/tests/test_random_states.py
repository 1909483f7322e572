import numpy as np
import pytest

from negcalc import oracle
from negcalc.random_states import (
    random_density_matrix,
    random_hermitian,
    random_nonsingular_hermitian,
    random_pure_state,
    random_unitary,
)


def test_unitary(rng):
    for n in (1, 3):
        u = random_unitary(n, rng)
        assert np.allclose(u @ u.conj().T, np.eye(n))


def test_prescribed_spectrum(rng):
    a = random_hermitian(4, rng, spectrum=[3.0, -1.0, 0.5, 0.0])
    assert np.allclose(np.linalg.eigvalsh(a), [-1.0, 0.0, 0.5, 3.0])


def test_nonsingular_signature(rng):
    lam = np.linalg.eigvalsh(random_nonsingular_hermitian(5, rng, gap=0.3, n_negative=2))
    assert np.sum(lam < 0) == 2
    assert np.abs(lam).min() >= 0.3 - 1e-12


def test_density_matrix_rank(rng):
    rho = random_density_matrix((2, 3), rng, rank=2)
    assert oracle.matrix_rank(rho.matrix) == 2
    assert np.trace(rho.matrix).real == pytest.approx(1.0)


def test_pure_state(rng):
    psi = random_pure_state((3, 2), rng)
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        random_pure_state((2, 2), rng, schmidt_rank=3)
