"""Random Hermitian matrices and bipartite states for property tests."""
from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .negativity import DensityMatrix
from .tensor import as_dims


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(n, random_state=rng) if n > 1 else np.ones((1, 1), dtype=complex)


def random_hermitian(n: int, rng: np.random.Generator, spectrum=None) -> np.ndarray:
    """Hermitian matrix with Haar eigenvectors; the spectrum is Gaussian unless given."""
    lam = rng.standard_normal(n) if spectrum is None else np.asarray(spectrum, dtype=float)
    u = random_unitary(n, rng)
    a = (u * lam) @ u.conj().T
    return 0.5 * (a + a.conj().T)


def random_nonsingular_hermitian(n: int, rng: np.random.Generator, gap: float = 0.2, n_negative=None) -> np.ndarray:
    """Eigenvalue magnitudes in ``[gap, 1 + gap]`` with random (or ``n_negative``) signs."""
    mags = gap + rng.random(n)
    if n_negative is None:
        signs = rng.choice([-1.0, 1.0], size=n)
    else:
        signs = np.where(np.arange(n) < n_negative, -1.0, 1.0)
    return random_hermitian(n, rng, mags * signs)


def random_density_matrix(dims, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Induced-measure mixed state ``G G^dagger / Tr`` with ``G`` of width ``rank``."""
    dims = as_dims(dims)
    n = dims.total
    k = n if rank is None else rank
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real, dims)


def random_pure_state(dims, rng: np.random.Generator, schmidt_rank: int | None = None) -> np.ndarray:
    """Normalized ket with the requested Schmidt rank (random rank if omitted)."""
    d_a, d_b = as_dims(dims)
    r_max = min(d_a, d_b)
    r = int(rng.integers(1, r_max + 1)) if schmidt_rank is None else schmidt_rank
    if not 1 <= r <= r_max:
        raise ValueError(f"Schmidt rank {r} impossible for dims {(d_a, d_b)}")
    coeffs = rng.random(r) + 0.1
    coeffs /= np.linalg.norm(coeffs)
    ua, ub = random_unitary(d_a, rng), random_unitary(d_b, rng)
    m = (ua[:, :r] * coeffs) @ ub[:, :r].T
    return m.reshape(-1)
