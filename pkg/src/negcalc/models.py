"""Concrete systems: Jaynes-Cummings dynamics and a damped two-cavity state.

Tensor ordering is atom (x) field for the JCM with atom index 0 = |g>, 1 = |e>,
and cavity-1 (x) cavity-2 for the open system.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
from numpy.polynomial import Polynomial

from .errors import InvariantViolationError, ParameterRangeError, SeparablePointError
from .negativity import DensityMatrix
from .tensor import BipartiteDims

GROUND, EXCITED = 0, 1


# --------------------------------------------------------------------------- JCM


@dataclass(frozen=True)
class JCMParams:
    omega: float = 10.0
    delta: float = 1.0
    g: float = 5.0
    n_fock: int = 8

    def __post_init__(self):
        if self.n_fock < 2:
            raise ParameterRangeError(f"n_fock must be >= 2, got {self.n_fock}")

    @property
    def rabi(self) -> float:
        return float(np.hypot(self.delta, 4.0 * self.g))


def _annihilation(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1)


def excitation_number(n_fock: int) -> np.ndarray:
    a = _annihilation(n_fock)
    sp = np.array([[0.0, 0.0], [0.0, 1.0]])
    return np.kron(np.eye(2), a.T @ a) + np.kron(sp, np.eye(n_fock))


def jcm_hamiltonian(params: JCMParams) -> np.ndarray:
    n = params.n_fock
    a = _annihilation(n)
    sigma = np.array([[0.0, 1.0], [0.0, 0.0]])  # |g><e|
    h = params.omega * np.kron(np.eye(2), a.T @ a)
    h = h + (params.omega - params.delta) * np.kron(sigma.T @ sigma, np.eye(n))
    return h - 1j * params.g * (np.kron(sigma, a.T) - np.kron(sigma.T, a))


def von_neumann_partials(h: np.ndarray, rho, order: int) -> list[np.ndarray]:
    """``[d rho/dt, ..., d^order rho/dt^order]`` for ``d rho/dt = -i[H, rho]``."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    out = []
    for _ in range(order):
        m = -1j * (h @ m - m @ h)
        out.append(m)
    return out


class ClosedEvolution:
    """``rho(t) = exp(-iHt) rho0 exp(iHt)`` through one eigendecomposition of ``H``."""

    def __init__(self, h: np.ndarray):
        self.h = np.asarray(h)
        self.energies, self.modes = np.linalg.eigh(self.h)

    def propagator(self, t: float) -> np.ndarray:
        return (self.modes * np.exp(-1j * self.energies * t)) @ self.modes.conj().T

    def evolve(self, rho0: np.ndarray, t: float) -> np.ndarray:
        u = self.propagator(t)
        out = u @ np.asarray(rho0) @ u.conj().T
        return 0.5 * (out + out.conj().T)


def evolve_closed(h: np.ndarray, rho0: DensityMatrix, t: float) -> DensityMatrix:
    return DensityMatrix(ClosedEvolution(h).evolve(rho0.matrix, t), rho0.dims)


def basis_index(atom: int, level: int, n_fock: int) -> int:
    return atom * n_fock + level


def embed(rho_small: np.ndarray, levels, n_fock: int) -> np.ndarray:
    """Place an operator on ``atom (x) span{levels}`` into the ``2 * n_fock`` space."""
    levels = list(levels)
    idx = [basis_index(a, f, n_fock) for a in (GROUND, EXCITED) for f in levels]
    out = np.zeros((2 * n_fock, 2 * n_fock), dtype=complex)
    out[np.ix_(idx, idx)] = rho_small
    return out


def restrict(rho_full: np.ndarray, levels, n_fock: int) -> np.ndarray:
    levels = list(levels)
    idx = [basis_index(a, f, n_fock) for a in (GROUND, EXCITED) for f in levels]
    return np.asarray(rho_full)[np.ix_(idx, idx)]


def _jcm_amplitudes(t: float, params: JCMParams, k: int = 0) -> np.ndarray:
    """k-th time derivative of the (unnormalized-phase) amplitudes on |g3>,|g4>,|e3>,|e4>."""
    om = params.rabi
    half = 0.5 * om
    s = half**k * np.sin(half * t + 0.5 * k * np.pi)
    c = half**k * np.cos(half * t + 0.5 * k * np.pi)
    amp = np.zeros(4, dtype=complex)
    amp[1] = 4.0 * params.g * s / om
    amp[2] = (om * c - 1j * params.delta * s) / om
    return amp


def jcm_analytic_state(t: float, params: JCMParams) -> DensityMatrix:
    """Closed-form state from ``|e,3>`` on the effective 2x2 support.

    Basis ``|g3>, |g4>, |e3>, |e4>`` (atom (x) {field 3, field 4}).
    """
    psi = _jcm_amplitudes(t, params)
    return DensityMatrix(np.outer(psi, psi.conj()), (2, 2))


def jcm_analytic_partial(t: float, params: JCMParams, order: int) -> np.ndarray:
    """Leibniz rule on ``|psi><psi|`` with analytic amplitude derivatives."""
    out = np.zeros((4, 4), dtype=complex)
    for k in range(order + 1):
        out += comb(order, k) * np.outer(_jcm_amplitudes(t, params, k), _jcm_amplitudes(t, params, order - k).conj())
    return out


def jcm_analytic_negativity(t: float, params: JCMParams) -> float:
    """``(4g|sin(Wt/2)|/W^2) * sqrt(W^2 cos^2(Wt/2) + D^2 sin^2(Wt/2))``."""
    om, d = params.rabi, params.delta
    s, c = np.sin(0.5 * om * t), np.cos(0.5 * om * t)
    return float(4.0 * abs(params.g * s) / om**2 * np.sqrt(om**2 * c**2 + d**2 * s**2))


def jcm_analytic_dndt(t: float, params: JCMParams, tol: float = 1e-12) -> float:
    om, d, g = params.rabi, params.delta, params.g
    s, c = np.sin(om * t), np.cos(om * t)
    denom = om * np.sqrt(d**2 * (1.0 - c) ** 2 + om**2 * s**2)
    if denom < tol:
        raise SeparablePointError(f"closed-form dN/dt undefined at separable instant t={t!r}")
    return float(2.0 * g * s * (d**2 + (4.0 * g) ** 2 * c) / denom)


@dataclass(frozen=True)
class JCMAnalyticTrajectory:
    params: JCMParams

    def state_at(self, t: float) -> DensityMatrix:
        return jcm_analytic_state(t, self.params)

    def partial_at(self, t: float, order: int) -> np.ndarray:
        return jcm_analytic_partial(t, self.params, order)


def bound_entangled_state(n_fock: int = 4) -> DensityMatrix:
    """PPT entangled atom-field state with weights 4,4,9,9 | 1,1,1,1 and 2,2,3 coherences.

    ``n_fock > 4`` pads the field with empty levels (no longer a valid
    ``DensityMatrix`` input for derivatives, since padding makes it singular).
    """
    if n_fock < 4:
        raise ParameterRangeError("the bound-entangled state needs at least 4 field levels")
    r = np.zeros((2 * n_fock, 2 * n_fock))
    for level, w in enumerate((4, 4, 9, 9)):
        gi, ei = basis_index(GROUND, level, n_fock), basis_index(EXCITED, level, n_fock)
        r[gi, gi], r[ei, ei] = w, 1
    for g_level, e_level, c in ((1, 0, 2), (2, 1, 2), (3, 2, 3)):
        i, j = basis_index(GROUND, g_level, n_fock), basis_index(EXCITED, e_level, n_fock)
        r[i, j] = r[j, i] = c
    return DensityMatrix(r / 30.0, (2, n_fock))


FIELD_SPACES = ("support", "2x4")


@dataclass
class ClosedTrajectory:
    """Unitary trajectory on ``2 * n_fock`` levels, reported on a subset of field levels.

    Partials are iterated commutators on the full space, then restricted.
    """

    h: np.ndarray
    rho0: np.ndarray
    n_fock: int
    levels: tuple[int, ...]
    leakage_tol: float = 1e-12
    evolution: ClosedEvolution = field(init=False, repr=False)

    def __post_init__(self):
        self.evolution = ClosedEvolution(self.h)

    @property
    def dims(self) -> BipartiteDims:
        return BipartiteDims(2, len(self.levels))

    def full_state(self, t: float) -> np.ndarray:
        return self.evolution.evolve(self.rho0, t)

    def _restrict(self, m: np.ndarray) -> np.ndarray:
        return restrict(m, self.levels, self.n_fock)

    def state_at(self, t: float) -> DensityMatrix:
        full = self.full_state(t)
        small = self._restrict(full)
        leak = abs(1.0 - np.trace(small).real)
        if leak > self.leakage_tol:
            raise InvariantViolationError(f"population {leak:.3e} left the retained field levels at t={t!r}")
        return DensityMatrix(small, self.dims)

    def partial_at(self, t: float, order: int) -> np.ndarray:
        return self._restrict(von_neumann_partials(self.h, self.full_state(t), order)[-1])


def bound_entangled_trajectory(params: JCMParams, field_space: str = "support") -> ClosedTrajectory:
    """JCM evolution of the bound-entangled state.

    ``support``: exact dynamics on ``n_fock`` levels, reported on field levels
    0..4 (the only ones reachable; excitation number is conserved).
    ``2x4``: field truncated to levels 0..3, so the dynamics stay 2x4.
    """
    if field_space == "support":
        if params.n_fock < 5:
            raise ParameterRangeError("field_space='support' needs n_fock >= 5")
        n, levels = params.n_fock, tuple(range(5))
    elif field_space == "2x4":
        n, levels = 4, tuple(range(4))
    else:
        raise ParameterRangeError(f"field_space must be one of {FIELD_SPACES}, got {field_space!r}")
    h = jcm_hamiltonian(JCMParams(params.omega, params.delta, params.g, n))
    return ClosedTrajectory(h, bound_entangled_state(n).matrix, n, levels)


def jcm_e3_trajectory(params: JCMParams) -> ClosedTrajectory:
    """Numerical evolution of ``|e,3>`` reported on field levels 3 and 4."""
    if params.n_fock < 5:
        raise ParameterRangeError("|e,3> dynamics need n_fock >= 5")
    n = params.n_fock
    psi = np.zeros(2 * n)
    psi[basis_index(EXCITED, 3, n)] = 1.0
    return ClosedTrajectory(jcm_hamiltonian(params), np.outer(psi, psi), n, (3, 4))


# ------------------------------------------------------------------ two cavities


@dataclass(frozen=True)
class CavityParams:
    p: float
    t: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ParameterRangeError(f"p must lie in [0, 1], got {self.p!r}")
        if not self.t >= 0.0:
            raise ParameterRangeError(f"t must be >= 0, got {self.t!r}")

    @property
    def xi(self) -> float:
        return float(np.exp(-0.5 * self.t))

    @property
    def chi(self) -> float:
        return float(np.sqrt(-np.expm1(-self.t)))


CAVITY_DIMS = BipartiteDims(2, 4)


def _cavity_elements(p):
    """Matrix elements as polynomials in ``E = exp(-t)`` (``xi^2 = E``, ``chi^2 = 1 - E``)."""
    xi2 = Polynomial([0.0, 1.0])
    chi2 = 1.0 - xi2
    r3 = np.sqrt(3.0)
    return {
        (0, 0): (p + chi2**2 + chi2**4 - p * chi2**4) / 2,
        (1, 1): xi2 * chi2 * (2 - p + 3 * (1 - p) * chi2**2) / 2,
        (2, 2): (1 - p) * xi2**2 * (1 + 3 * chi2**2) / 2,
        (3, 3): (1 - p) * xi2**3 * chi2 / 2,
        (4, 4): xi2 * chi2 * (p + chi2**2 - p * chi2**2) / 2,
        (5, 5): xi2**2 * (p + 3 * (1 - p) * chi2**2) / 2,
        (6, 6): 3 * (1 - p) * xi2**3 * chi2 / 2,
        (7, 7): (1 - p) * xi2**4 / 2,
        (0, 5): xi2 * (p + r3 * (1 - p) * chi2**2) / 2,
        (1, 6): np.sqrt(1.5) * (1 - p) * xi2**2 * chi2,
        (2, 7): (1 - p) * xi2**3 / 2,
    }


def _as_poly(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial([float(x)])


def _coefficients() -> tuple[np.ndarray, np.ndarray, list]:
    """``a_ij(t, p) = sum_k (c0[k] + p * c1[k]) E^k`` for every stored element."""
    at0 = {key: _as_poly(v) for key, v in _cavity_elements(0.0).items()}
    at1 = {key: _as_poly(v) for key, v in _cavity_elements(1.0).items()}
    keys = list(at0)
    width = 1 + max(len(v.coef) for v in (*at0.values(), *at1.values()))
    c0 = np.zeros((len(keys), width))
    c1 = np.zeros((len(keys), width))
    for row, key in enumerate(keys):
        base = at0[key].coef
        slope = (at1[key] - at0[key]).coef
        c0[row, : base.size] = base
        c1[row, : slope.size] = slope
    return c0, c1, keys


_C0, _C1, _KEYS = _coefficients()


def _assemble(values: np.ndarray) -> np.ndarray:
    out = np.zeros((8, 8))
    for (i, j), v in zip(_KEYS, values):
        out[i, j] = out[j, i] = v
    return out


def _evaluate(coef: np.ndarray, t: float, t_order: int) -> np.ndarray:
    k = np.arange(coef.shape[1], dtype=float)
    powers = np.exp(-k * t) * (-k) ** t_order
    return coef @ powers


def cavity_matrix(params: CavityParams) -> np.ndarray:
    return _assemble(_evaluate(_C0 + params.p * _C1, params.t, 0))


def cavity_state(params: CavityParams) -> DensityMatrix:
    return DensityMatrix(cavity_matrix(params), CAVITY_DIMS)


def cavity_partials(params: CavityParams, wrt: str, order: int) -> np.ndarray:
    """Analytic ``d^order rho / d wrt^order`` (exact at ``t = 0`` as well)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if wrt == "t":
        return _assemble(_evaluate(_C0 + params.p * _C1, params.t, order))
    if wrt == "p":
        if order >= 2:
            return np.zeros((8, 8))
        return _assemble(_evaluate(_C1, params.t, 0))
    raise ValueError(f"wrt must be 't' or 'p', got {wrt!r}")


@dataclass(frozen=True)
class CavityTimeTrajectory:
    p: float

    def state_at(self, t: float) -> DensityMatrix:
        return cavity_state(CavityParams(self.p, t))

    def partial_at(self, t: float, order: int) -> np.ndarray:
        return cavity_partials(CavityParams(self.p, t), "t", order)


@dataclass(frozen=True)
class CavityMixingTrajectory:
    t: float

    def state_at(self, p: float) -> DensityMatrix:
        return cavity_state(CavityParams(p, self.t))

    def partial_at(self, p: float, order: int) -> np.ndarray:
        return cavity_partials(CavityParams(p, self.t), "p", order)
