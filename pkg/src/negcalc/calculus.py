"""Derivatives of the trace norm with respect to general and Hermitian arguments.

Conventions: a Jacobian is a row vector ``D`` with ``dg = D @ vec(dX)``; a
Hessian ``H`` satisfies ``d^2 g = vec(dX)^T H vec(dX)`` (plain transpose, no
conjugation).  Unpatterned (Wirtinger) derivatives treat ``X`` and ``X*`` as
independent; Hermitian-patterned ones account for ``vec(dA*) = K vec(dA)``.
"""
from __future__ import annotations

from math import comb
from typing import NamedTuple

import numpy as np
import scipy.linalg

from . import tolerances
from .errors import DimensionError, OrderOverflowError, PatternViolationError, SingularityError
from .tensor import commutation_matrix, kron_sum, vec


class EigDecomp(NamedTuple):
    """``A = U diag(eigvals) U^dagger`` with eigenvalues in decreasing order."""

    U: np.ndarray
    eigvals: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.eigvals) @ self.U.conj().T

    @property
    def min_abs(self) -> float:
        return float(np.min(np.abs(self.eigvals)))


class WirtingerJacobian(NamedTuple):
    d_x: np.ndarray
    d_xstar: np.ndarray

    def differential(self, dx: np.ndarray) -> complex:
        """First-order change ``D_X vec(dX) + D_{X*} vec(dX*)``."""
        return self.d_x @ vec(dx) + self.d_xstar @ vec(np.conj(dx))


class UnpatternedHessians(NamedTuple):
    xx: np.ndarray
    xsxs: np.ndarray
    xxs: np.ndarray
    xsx: np.ndarray

    def second_differential(self, dx: np.ndarray) -> complex:
        x = vec(dx)
        xs = x.conj()
        return x @ self.xx @ x + xs @ self.xxs @ x + x @ self.xsx @ xs + xs @ self.xsxs @ xs


class BMatrices(NamedTuple):
    """Coefficients of ``d^2||X||_1`` before symmetrization.

    ``d^2 g = x^T B10 x + x*^T B00 x + x^T B11 x* + x*^T B01 x*`` with
    ``x = vec(dX)``.
    """

    b00: np.ndarray
    b01: np.ndarray
    b10: np.ndarray
    b11: np.ndarray


def _require_square(a: np.ndarray, name: str = "argument") -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a


def check_hermitian(a: np.ndarray, name: str = "argument") -> np.ndarray:
    a = _require_square(a, name)
    dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    tol = tolerances.get().hermitian
    if dev > tol:
        raise PatternViolationError(f"{name} is not Hermitian: max |A - A^dagger| = {dev:.3e} > {tol:.1e}")
    return a


def _check_nonsingular(abs_vals: np.ndarray, what: str) -> None:
    tol = tolerances.get()
    threshold = tol.singular_threshold(np.max(abs_vals))
    smallest = float(np.min(abs_vals))
    if smallest <= threshold:
        raise SingularityError(smallest, threshold, what)


def hermitian_eig(a: np.ndarray) -> EigDecomp:
    a = check_hermitian(a)
    w, u = np.linalg.eigh(a)
    order = np.argsort(-w, kind="stable")
    return EigDecomp(u[:, order], w[order])


def is_singular(eig: EigDecomp) -> bool:
    abs_vals = np.abs(eig.eigvals)
    return float(abs_vals.min()) <= tolerances.get().singular_threshold(abs_vals.max())


def _eig(a, eig):
    return hermitian_eig(a) if eig is None else eig


def matrix_abs(a: np.ndarray, eig: EigDecomp | None = None) -> np.ndarray:
    eig = _eig(a, eig)
    return (eig.U * np.abs(eig.eigvals)) @ eig.U.conj().T


def hermitian_sign(a: np.ndarray, eig: EigDecomp | None = None) -> np.ndarray:
    """``U sign(Lambda) U^dagger``; refuses singular arguments."""
    eig = _eig(a, eig)
    _check_nonsingular(np.abs(eig.eigvals), "Hermitian argument")
    return (eig.U * np.sign(eig.eigvals)) @ eig.U.conj().T


def trace_norm(x: np.ndarray) -> float:
    """Sum of singular values (nuclear norm)."""
    return float(np.sum(np.linalg.svd(np.asarray(x), compute_uv=False)))


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    return 0.5 * trace_norm(rho - sigma)


def _abs_factors(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``Z, s`` with ``|X| = sqrt(X^dagger X) = Z diag(s) Z^dagger``; refuses singular ``X``."""
    x = _require_square(x)
    _, s, vh = np.linalg.svd(x)
    _check_nonsingular(s, "matrix")
    return vh.conj().T, s


def _kron_sum_inverse(z: np.ndarray, s: np.ndarray) -> np.ndarray:
    """``(|X|^T (+) |X|)^{-1}`` assembled from the spectrum, ``1/(s_i + s_j)``."""
    w = np.kron(z.conj(), z)
    inv = 1.0 / np.add.outer(s, s).ravel()
    return (w * inv) @ w.conj().T


def trace_norm_jacobian_unpatterned(x: np.ndarray) -> WirtingerJacobian:
    z, s = _abs_factors(x)
    inv_abs_t = ((z / s) @ z.conj().T).T
    k = commutation_matrix(x.shape[0])
    d_x = 0.5 * vec(x.conj() @ inv_abs_t)
    d_xstar = 0.5 * (vec(inv_abs_t @ x.T) @ k)
    return WirtingerJacobian(d_x, d_xstar)


def trace_norm_jacobian_hermitian(a: np.ndarray, eig: EigDecomp | None = None) -> np.ndarray:
    """Row vector ``vec^T(U* sign(Lambda) U^T)``."""
    eig = _eig(a, eig)
    _check_nonsingular(np.abs(eig.eigvals), "Hermitian argument")
    u = eig.U
    return vec((u.conj() * np.sign(eig.eigvals)) @ u.T)


def hermitian_parametrization(n: int) -> np.ndarray:
    """Matrix ``M`` with ``vec(A) = M p`` for the ``n^2`` real parameters of a Hermitian ``A``.

    Parameters are ordered as diagonal entries, then for each ``k < l`` the
    real and imaginary parts of ``A[k, l]``.
    """
    cols = []
    for k in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[k, k] = 1.0
        cols.append(vec(e))
    for k in range(n):
        for l in range(k + 1, n):
            re = np.zeros((n, n), dtype=complex)
            re[k, l] = re[l, k] = 1.0
            im = np.zeros((n, n), dtype=complex)
            im[k, l], im[l, k] = 1j, -1j
            cols += [vec(re), vec(im)]
    return np.column_stack(cols)


def patterned_jacobian(d_x: np.ndarray, d_xstar: np.ndarray) -> np.ndarray:
    """Hermitian-patterned Jacobian through an explicit minimal parametrization.

    Chain rule onto the real parameters ``p`` (``D_P = D_X M + D_{X*} M*``),
    then back to the standard basis with ``M^{-1}``.
    """
    d_x = np.asarray(d_x)
    n = int(round(np.sqrt(d_x.size)))
    m = hermitian_parametrization(n)
    d_p = d_x @ m + np.asarray(d_xstar) @ m.conj()
    return np.linalg.solve(m.T, d_p)


def trace_norm_hessian_hermitian(
    a: np.ndarray, eig: EigDecomp | None = None, form: str = "spectral"
) -> np.ndarray:
    """Hessian of ``||A||_1`` with respect to a Hermitian argument.

    ``form="spectral"`` evaluates
    ``K (U* (x) U) [1 - sign(L) (x) sign(L)] (|L| (+) |L|)^{-1} (U^T (x) U^dagger)``;
    ``form="kronecker"`` evaluates the Kronecker-sum expression with dense
    solves and is kept as an independent cross-check.
    """
    if form == "kronecker":
        return _hessian_kronecker_form(a)
    if form != "spectral":
        raise ValueError(f"unknown Hessian form {form!r}")
    eig = _eig(a, eig)
    abs_l = np.abs(eig.eigvals)
    _check_nonsingular(abs_l, "Hermitian argument")
    sgn = np.sign(eig.eigvals)
    n = abs_l.size
    diag = ((1.0 - np.outer(sgn, sgn)) / np.add.outer(abs_l, abs_l)).ravel()
    w = np.kron(eig.U.conj(), eig.U)
    k = commutation_matrix(n)
    return k @ ((w * diag) @ w.conj().T)


def _hessian_kronecker_form(a: np.ndarray) -> np.ndarray:
    a = check_hermitian(a)
    n = a.shape[0]
    _check_nonsingular(np.abs(np.linalg.eigvalsh(a)), "Hermitian argument")
    abs_a = scipy.linalg.sqrtm(a.conj().T @ a)
    inv_abs = np.linalg.inv(abs_a)

    def plus(x):
        return kron_sum(x.T, x)

    a_plus = plus(a)
    abs_plus = plus(abs_a)
    inner = np.linalg.solve(abs_plus, plus(inv_abs) @ np.linalg.solve(abs_plus, a_plus.conj().T))
    bracket = plus(inv_abs) - a_plus @ inner
    return 0.5 * (commutation_matrix(n) @ bracket)


def hessian_b_matrices(x: np.ndarray) -> BMatrices:
    """Raw second-differential coefficients of the trace norm at nonsingular ``X``."""
    x = _require_square(x)
    n = x.shape[0]
    z, s = _abs_factors(x)
    eye = np.eye(n)
    inv_abs = (z / s) @ z.conj().T
    k = commutation_matrix(n)
    sylv_inv = _kron_sum_inverse(z, s)
    # dvec|X| = P dvec X + Q dvec X*
    p = sylv_inv @ np.kron(eye, x.conj().T)
    q = (sylv_inv @ np.kron(x.T, eye)) @ k
    m = k @ np.kron(eye, inv_abs)
    return BMatrices(
        b00=np.kron(inv_abs.T, eye) - q.T @ m @ p,
        b01=-(q.T @ m @ q),
        b10=-(p.T @ m @ p),
        b11=-(p.T @ m @ q),
    )


def unpatterned_hessians(x: np.ndarray) -> UnpatternedHessians:
    b = hessian_b_matrices(x)
    xxs = 0.5 * (b.b00 + b.b11.T)
    return UnpatternedHessians(
        xx=0.5 * (b.b10 + b.b10.T),
        xsxs=0.5 * (b.b01 + b.b01.T),
        xxs=xxs,
        xsx=xxs.T,
    )


def hermitian_hessian_from_unpatterned(h: UnpatternedHessians) -> np.ndarray:
    """``H_XX + K H_XX* + H_X*X K + K H_X*X* K`` evaluated at a Hermitian point."""
    k = commutation_matrix(int(round(np.sqrt(h.xx.shape[0]))))
    return h.xx + k @ h.xxs + h.xsx @ k + (k @ h.xsxs) @ k


class HermitianHessianBlocks(NamedTuple):
    """``H_{YZ} = D_Y (D_Z g)^T`` for ``Y, Z`` in ``{A, A*}``."""

    aa: np.ndarray
    aas: np.ndarray
    asa: np.ndarray
    asas: np.ndarray


def hermitian_hessian_blocks(a: np.ndarray) -> HermitianHessianBlocks:
    """All four patterned Hessians of the trace norm at Hermitian ``A``.

    ``A*`` is itself Hermitian with the same trace norm, so derivatives with
    respect to ``A*`` are the spectral Hessian evaluated at ``A*``; mixed
    blocks follow from ``vec(dA*) = K vec(dA)``.
    """
    a = check_hermitian(a)
    k = commutation_matrix(a.shape[0])
    h = trace_norm_hessian_hermitian(a)
    h_conj = trace_norm_hessian_hermitian(a.conj())
    return HermitianHessianBlocks(aa=h, aas=h_conj @ k, asa=h @ k, asas=h_conj)


def _sylvester_abs(z: np.ndarray, s: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Solve ``|X| D + D |X| = C`` in the eigenbasis of ``|X|``."""
    c_hat = z.conj().T @ c @ z
    return z @ (c_hat / np.add.outer(s, s)) @ z.conj().T


def directional_differentials(
    a: np.ndarray, v: np.ndarray, order: int, max_order: int | None = None
) -> list[float]:
    """``d^k ||A + sV||_1 / ds^k`` at ``s = 0`` for ``k = 1..order``.

    Each ``d^k|X|`` solves ``|X| d^k|X| + d^k|X| |X| = C_k`` where ``C_k`` is
    ``d^k(X^dagger X)`` minus the binomial cross terms of lower orders, and
    ``d^k ||X||_1 = Tr(|X|^{-1} C_k) / 2``.
    """
    a = check_hermitian(a, "A")
    v = check_hermitian(v, "V")
    if a.shape != v.shape:
        raise DimensionError(f"direction shape {v.shape} does not match {a.shape}")
    max_order = tolerances.get().max_order if max_order is None else max_order
    if order < 1 or order > max_order:
        raise OrderOverflowError(f"order {order} outside 1..{max_order}")
    z, s = _abs_factors(a)
    inv_abs = (z / s) @ z.conj().T
    source = {1: a.conj().T @ v + v.conj().T @ a, 2: 2.0 * v.conj().T @ v}
    d_abs: list[np.ndarray] = []
    out = []
    for n in range(1, order + 1):
        c = source.get(n, np.zeros_like(a, dtype=complex)).astype(complex)
        for k in range(1, n):
            c = c - comb(n, k) * d_abs[k - 1] @ d_abs[n - k - 1]
        d_abs.append(_sylvester_abs(z, s, c))
        out.append(float(0.5 * np.trace(inv_abs @ c).real))
    return out


def analytic_shortcut_check(a: np.ndarray, alpha: int, v: np.ndarray | None = None) -> tuple[float, float]:
    """Directional derivative of ``Tr(X^alpha)`` at Hermitian ``A``, computed two ways.

    The first value goes through the minimal Hermitian parametrization, the
    second evaluates the unpatterned derivative at ``X = A``.  For a function
    independent of ``X*`` the two must coincide.
    """
    a = check_hermitian(a)
    if int(alpha) != alpha or alpha < 1:
        raise ValueError("alpha must be a positive integer")
    alpha = int(alpha)
    n = a.shape[0]
    v = np.eye(n) if v is None else check_hermitian(v, "V")
    d_x = alpha * vec(np.linalg.matrix_power(a, alpha - 1).T)
    patterned = patterned_jacobian(d_x, np.zeros_like(d_x)) @ vec(v)
    unpatterned = d_x @ vec(v)
    return float(patterned.real), float(unpatterned.real)
