"""Brute-force ground truth used to check the analytic derivative formulas.

Nothing here imports the calculus or engine modules: negativity comes from an
eigenvalue sum, derivatives from Richardson-refined central differences.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

_EPS = np.finfo(float).eps

# central stencils: offsets and weights for the k-th derivative, error O(h^2)
_STENCILS = {
    1: ((-1, 1), (-0.5, 0.5)),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0)),
}


@dataclass(frozen=True)
class FDScheme:
    steps: tuple[float, ...]
    order: int = 1
    richardson: bool = True

    def __post_init__(self):
        steps = tuple(float(h) for h in self.steps)
        object.__setattr__(self, "steps", steps)
        if self.order not in _STENCILS:
            raise ValueError(f"finite-difference order must be in {sorted(_STENCILS)}")
        if not steps or any(b >= a for a, b in zip(steps, steps[1:])):
            raise ValueError("steps must be non-empty and strictly decreasing")
        floor = 10 * _EPS ** (1.0 / (self.order + 1))
        if steps[-1] <= floor:
            raise ValueError(f"step {steps[-1]:g} is below the cancellation floor {floor:.2e}")


DEFAULT_SCHEMES = {
    1: FDScheme((1e-4, 1e-5, 1e-6), order=1),
    2: FDScheme((1e-3, 1e-4), order=2),
    3: FDScheme((2e-2, 1e-2, 5e-3), order=3),
    4: FDScheme((4e-2, 2e-2, 1e-2), order=4),
}


def default_scheme(order: int) -> FDScheme:
    return DEFAULT_SCHEMES[order]


@dataclass(frozen=True)
class FDResult:
    value: float
    error: float


def _stencil(f, x0, h, order):
    offsets, weights = _STENCILS[order]
    total = scale = 0.0
    for o, w in zip(offsets, weights):
        y = f(x0 + o * h)
        if not np.isfinite(y):
            raise FloatingPointError(f"non-finite sample f({x0 + o * h!r}) = {y!r}")
        total += w * y
        scale += abs(w * y)
    return total / h**order, scale / h**order


def fd_scalar(f: Callable[[float], float], x0: float, scheme: FDScheme | None = None, order: int = 1) -> FDResult:
    """Central-difference derivative with Richardson extrapolation in ``h^2``.

    The error estimate is the larger of the change contributed by the last
    extrapolation level (between the two finest raw estimates without
    refinement) and a cancellation bound at the finest step.
    """
    scheme = default_scheme(order) if scheme is None else scheme
    samples = [_stencil(f, x0, h, scheme.order) for h in scheme.steps]
    raw = [v for v, _ in samples]
    # extrapolation weights grow the rounding noise by a modest factor
    noise = 4 * len(raw) * _EPS * samples[-1][1]
    if len(raw) == 1:
        return FDResult(float(raw[0]), float("nan"))
    if not scheme.richardson:
        return FDResult(float(raw[-1]), float(max(abs(raw[-1] - raw[-2]), noise)))
    h2 = np.array(scheme.steps) ** 2
    # Neville tableau extrapolating D(h) to h = 0 as a polynomial in h^2
    table = list(raw)
    previous = table[-1]
    for level in range(1, len(table)):
        previous = table[-1]
        table = [
            (h2[i] * table[i + 1] - h2[i + level] * table[i]) / (h2[i] - h2[i + level])
            for i in range(len(table) - 1)
        ]
    return FDResult(float(table[0]), float(max(abs(table[0] - previous), noise)))


def fd_directional(
    a: np.ndarray,
    v: np.ndarray,
    g: Callable[[np.ndarray], float],
    order: int = 1,
    scheme: FDScheme | None = None,
) -> FDResult:
    """``order``-th derivative of ``s -> g(A + sV)`` at ``s = 0``."""
    a, v = np.asarray(a), np.asarray(v)
    scheme = default_scheme(order) if scheme is None else scheme
    if scheme.order != order:
        raise ValueError("scheme order does not match requested order")
    return fd_scalar(lambda s: g(a + s * v), 0.0, scheme)


def fd_real_gradient(g: Callable[[np.ndarray], float], a: np.ndarray, scheme: FDScheme | None = None) -> np.ndarray:
    """Gradient of ``g`` over the independent real parameters of Hermitian ``A``.

    Ordering: diagonal entries, then ``Re A[k, l]`` and ``Im A[k, l]`` for ``k < l``.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    directions = []
    for k in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[k, k] = 1.0
        directions.append(e)
    for k in range(n):
        for l in range(k + 1, n):
            re = np.zeros((n, n), dtype=complex)
            re[k, l] = re[l, k] = 1.0
            im = np.zeros((n, n), dtype=complex)
            im[k, l], im[l, k] = 1j, -1j
            directions += [re, im]
    return np.array([fd_directional(a, d, g, 1, scheme).value for d in directions])


def partial_transpose_b(rho: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    return np.asarray(rho).reshape(d_a, d_b, d_a, d_b).transpose(0, 3, 2, 1).reshape(d_a * d_b, d_a * d_b)


def negativity_eigensum(rho_tb: np.ndarray) -> float:
    """Sum of the magnitudes of the negative eigenvalues of a Hermitian matrix."""
    lam = np.linalg.eigvalsh(np.asarray(rho_tb))
    return float(-lam[lam < 0].sum())


def negativity_of_state(rho: np.ndarray, d_a: int, d_b: int) -> float:
    return negativity_eigensum(partial_transpose_b(rho, d_a, d_b))


def schmidt_rank(psi: np.ndarray, dims, tol: float = 1e-10) -> int:
    d_a, d_b = dims
    psi = np.asarray(psi)
    if psi.size != d_a * d_b:
        raise ValueError(f"state of length {psi.size} does not fit dims {tuple(dims)}")
    s = np.linalg.svd(psi.reshape(d_a, d_b), compute_uv=False)
    return int(np.sum(s > tol))


def matrix_rank(m: np.ndarray, tol: float = 1e-10) -> int:
    return int(np.sum(np.abs(np.linalg.eigvalsh(m)) > tol))
