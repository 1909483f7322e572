"""Negativity, its first two derivatives along a trajectory, and expansions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np

from . import tolerances
from .calculus import (
    EigDecomp,
    _check_nonsingular,
    check_hermitian,
    hermitian_eig,
    trace_norm,
    trace_norm_hessian_hermitian,
    trace_norm_jacobian_hermitian,
)
from .errors import DimensionError, InvariantViolationError
from .tensor import BipartiteDims, as_dims, partial_commutation_matrix, partial_transpose, vec


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated bipartite state: Hermitian, unit trace, positive semidefinite."""

    matrix: np.ndarray
    dims: BipartiteDims

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dims = as_dims(self.dims)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        dims.check(m.shape[0])
        check_hermitian(m, "density matrix")
        tol = tolerances.get()
        tr = np.trace(m)
        if abs(tr - 1.0) > tol.trace:
            raise InvariantViolationError(f"trace is {tr.real:.15g}, expected 1")
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < -tol.psd:
            raise InvariantViolationError(f"density matrix has eigenvalue {lo:.3e} < 0")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_ket(cls, psi: np.ndarray, dims) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), dims)

    def partial_transpose(self) -> np.ndarray:
        return partial_transpose(self.matrix, self.dims)

    def reduced_a(self) -> np.ndarray:
        """Partial trace over subsystem B."""
        d_a, d_b = self.dims
        return np.einsum("ibjb->ij", self.matrix.reshape(d_a, d_b, d_a, d_b))

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))


def _pt_spectrum(rho: DensityMatrix) -> tuple[np.ndarray, EigDecomp]:
    rho_tb = rho.partial_transpose()
    return rho_tb, hermitian_eig(rho_tb)


def negativity_from_spectrum(eigvals: np.ndarray) -> float:
    neg = eigvals[eigvals < 0]
    return float(-neg.sum()) if neg.size else 0.0


def negativity(rho: DensityMatrix) -> float:
    """Sum of magnitudes of the negative eigenvalues of the partial transpose.

    Cross-checked against ``(||rho^T_B||_1 - 1) / 2`` computed from singular values.
    """
    rho_tb, eig = _pt_spectrum(rho)
    value = negativity_from_spectrum(eig.eigvals)
    alt = 0.5 * (trace_norm(rho_tb) - 1.0)
    if abs(value - alt) > tolerances.get().crosscheck:
        raise InvariantViolationError(f"negativity forms disagree: {value!r} vs {alt!r}")
    return value


def log_negativity(rho: DensityMatrix) -> float:
    """``log2(2N + 1)``, equal to ``log2 ||rho^T_B||_1``."""
    return float(np.log2(2.0 * negativity(rho) + 1.0))


def renyi2_entropy(rho: DensityMatrix) -> float:
    """``-ln Tr(rho_A^2)`` of the reduced state on A."""
    r = rho.reduced_a()
    return float(-np.log(np.real(np.vdot(r, r))))


@dataclass(frozen=True)
class InvertibilityReport:
    min_abs_eig: float
    invertible: bool


def invertibility_report(rho: DensityMatrix) -> InvertibilityReport:
    _, eig = _pt_spectrum(rho)
    abs_l = np.abs(eig.eigvals)
    threshold = tolerances.get().singular_threshold(abs_l.max())
    return InvertibilityReport(float(abs_l.min()), bool(abs_l.min() > threshold))


def _check_variation(d: np.ndarray, rho: DensityMatrix, name: str) -> np.ndarray:
    d = check_hermitian(np.asarray(d), name)
    if d.shape != rho.matrix.shape:
        raise DimensionError(f"{name} has shape {d.shape}, state has {rho.matrix.shape}")
    tr = np.trace(d)
    if abs(tr) > tolerances.get().trace:
        raise InvariantViolationError(f"{name} must be traceless, trace = {tr:.3e}")
    return d


def _pt_vec(d: np.ndarray, dims) -> np.ndarray:
    return partial_commutation_matrix(dims) @ vec(d)


def _all_positive(eig: EigDecomp) -> bool:
    return bool(np.all(eig.eigvals > 0))


def _first_order(eig: EigDecomp, drho: np.ndarray, dims) -> float:
    if _all_positive(eig):
        # sign(L) = 1 reduces the Jacobian row to vec(1): d1 = Tr(drho)/2 = 0
        return 0.0
    jac = trace_norm_jacobian_hermitian(None, eig)
    return 0.5 * float(np.real(jac @ _pt_vec(drho, dims)))


def negativity_d1(rho: DensityMatrix, drho: np.ndarray, *, eig: EigDecomp | None = None) -> float:
    """First derivative of negativity given ``drho = d rho / d mu``.

    Raises ``SingularityError`` when the partial transpose is singular.
    """
    drho = _check_variation(drho, rho, "drho")
    eig = _pt_spectrum(rho)[1] if eig is None else eig
    _check_nonsingular(np.abs(eig.eigvals), "partial transpose")
    return _first_order(eig, drho, rho.dims)


def negativity_d2(
    rho: DensityMatrix, drho: np.ndarray, d2rho: np.ndarray, *, eig: EigDecomp | None = None
) -> float:
    """Second derivative of negativity along a path with velocity ``drho`` and acceleration ``d2rho``."""
    drho = _check_variation(drho, rho, "drho")
    d2rho = _check_variation(d2rho, rho, "d2rho")
    eig = _pt_spectrum(rho)[1] if eig is None else eig
    _check_nonsingular(np.abs(eig.eigvals), "partial transpose")
    if _all_positive(eig):
        # Hessian vanishes identically and the linear term is Tr(d2rho)/2 = 0
        return 0.0
    y = _pt_vec(drho, rho.dims)
    hess = trace_norm_hessian_hermitian(None, eig)
    quad = 0.5 * float(np.real(y @ hess @ y))
    return quad + _first_order(eig, d2rho, rho.dims)


class Trajectory(Protocol):
    """One-parameter family of states with analytic partial derivatives."""

    def state_at(self, mu: float) -> DensityMatrix: ...

    def partial_at(self, mu: float, order: int) -> np.ndarray: ...


@dataclass(frozen=True)
class FunctionTrajectory:
    """Trajectory assembled from plain callables."""

    state: Callable[[float], DensityMatrix]
    partial: Callable[[float, int], np.ndarray]

    def state_at(self, mu: float) -> DensityMatrix:
        return self.state(mu)

    def partial_at(self, mu: float, order: int) -> np.ndarray:
        return self.partial(mu, order)


@dataclass(frozen=True, eq=False)
class ExpansionResult:
    t0: float
    value: float
    d1: float
    d2: float | None
    spectrum: EigDecomp
    min_abs_eig: float
    resummed_valid: bool | None = field(default=None)

    def predict(self, t: float | np.ndarray) -> float | np.ndarray:
        dt = np.asarray(t, dtype=float) - self.t0
        out = self.value + self.d1 * dt
        if self.d2 is not None:
            out = out + 0.5 * self.d2 * dt**2
        return out


def taylor_expand(traj: Trajectory, t0: float, order: int = 2) -> ExpansionResult:
    if order not in (1, 2):
        raise ValueError("taylor_expand supports order 1 or 2")
    rho = traj.state_at(t0)
    _, eig = _pt_spectrum(rho)
    value = negativity(rho)
    d1 = negativity_d1(rho, traj.partial_at(t0, 1), eig=eig)
    d2 = negativity_d2(rho, traj.partial_at(t0, 1), traj.partial_at(t0, 2), eig=eig) if order == 2 else None
    return ExpansionResult(float(t0), value, d1, d2, eig, eig.min_abs)


@dataclass(frozen=True)
class ResummedValue:
    value: float
    validated: bool
    exact: float

    def __iter__(self):
        return iter((self.value, self.validated))


def resummed_expansion(traj: Trajectory, t0: float, t: float) -> ResummedValue:
    """All-orders straight-line resummation about ``t0``, checked against the exact value.

    No a priori validity condition is known, so ``validated`` is purely the
    outcome of comparing with ``negativity(rho(t))``.
    """
    rho0 = traj.state_at(t0)
    _, eig = _pt_spectrum(rho0)
    _check_nonsingular(np.abs(eig.eigvals), "partial transpose")
    rho_t = traj.state_at(t)
    jac = trace_norm_jacobian_hermitian(None, eig)
    delta = rho_t.matrix - rho0.matrix
    value = negativity_from_spectrum(eig.eigvals) + 0.5 * float(np.real(jac @ _pt_vec(delta, rho0.dims)))
    exact = negativity(rho_t)
    return ResummedValue(value, bool(abs(value - exact) <= tolerances.get().resummed), exact)
