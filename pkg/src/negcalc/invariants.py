"""Randomized property suite behind ``negcalc invariants``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import oracle
from .calculus import (
    hermitian_hessian_blocks,
    hermitian_sign,
    matrix_abs,
    trace_norm_hessian_hermitian,
    trace_norm_jacobian_hermitian,
    trace_norm_jacobian_unpatterned,
)
from .models import (
    CavityParams,
    JCMParams,
    cavity_matrix,
    excitation_number,
    jcm_hamiltonian,
)
from .negativity import DensityMatrix, negativity, negativity_d1
from .random_states import (
    random_density_matrix,
    random_hermitian,
    random_nonsingular_hermitian,
    random_pure_state,
)
from .tensor import (
    commutation_matrix,
    partial_commutation_eigenbasis,
    partial_commutation_matrix,
    partial_transpose,
    unvec,
    vec,
)

DIMS = ((2, 2), (2, 3), (2, 4))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _worst(values) -> float:
    return float(max(values, default=0.0))


def check_partial_transpose(rng, samples):
    worst = 0.0
    for dims in DIMS:
        kb = partial_commutation_matrix(dims)
        n = dims[0] * dims[1]
        for _ in range(samples):
            rho = random_hermitian(n, rng)
            worst = max(worst, np.abs(unvec(kb @ vec(rho), n, n) - partial_transpose(rho, dims)).max())
        worst = max(worst, float(not np.array_equal((kb @ kb).perm, np.arange(n * n))))
        worst = max(worst, np.abs(partial_commutation_eigenbasis(dims).reconstruct() - kb.dense()).max())
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def check_negativity_forms(rng, samples):
    worst = _worst(
        abs(negativity(rho) - oracle.negativity_eigensum(rho.partial_transpose()))
        for dims in DIMS
        for rho in (random_density_matrix(dims, rng) for _ in range(samples))
    )
    return worst <= 1e-12, f"max |engine - eigensum| {worst:.2e}"


def check_jacobian(rng, samples):
    worst_imag = worst_twice = 0.0
    for _ in range(samples):
        a = random_nonsingular_hermitian(4, rng)
        v = random_hermitian(4, rng)
        d = trace_norm_jacobian_hermitian(a) @ vec(v)
        wirt = trace_norm_jacobian_unpatterned(a).differential(v)
        worst_imag = max(worst_imag, abs(d.imag))
        worst_twice = max(worst_twice, abs(d - wirt))
    ok = worst_imag <= 1e-10 and worst_twice <= 1e-10
    return ok, f"max imag {worst_imag:.2e}, patterned vs unpatterned differential {worst_twice:.2e}"


def check_hessian(rng, samples):
    worst_psd = worst_form = worst_rel = 0.0
    k = commutation_matrix(4).dense()
    for _ in range(samples):
        pos = random_nonsingular_hermitian(4, rng, n_negative=0)
        worst_psd = max(worst_psd, np.abs(trace_norm_hessian_hermitian(pos)).max())
        a = random_nonsingular_hermitian(4, rng, n_negative=2)
        spectral = trace_norm_hessian_hermitian(a)
        worst_form = max(worst_form, np.abs(spectral - trace_norm_hessian_hermitian(a, form="kronecker")).max())
        b = hermitian_hessian_blocks(a)
        worst_rel = max(
            worst_rel,
            np.abs(b.aas - k @ b.aa).max(),
            np.abs(b.asa - b.aa @ k).max(),
            np.abs(b.asas - k @ b.aa @ k).max(),
        )
    ok = worst_psd <= 1e-12 and worst_form <= 1e-10 and worst_rel <= 1e-10
    return ok, f"PSD Hessian {worst_psd:.2e}, forms {worst_form:.2e}, K relations {worst_rel:.2e}"


def check_sign_abs(rng, samples):
    worst = 0.0
    for _ in range(samples):
        a = random_nonsingular_hermitian(5, rng)
        s = hermitian_sign(a)
        worst = max(worst, np.abs(s @ matrix_abs(a) - a).max(), np.abs(s @ s - np.eye(5)).max())
    return worst <= 1e-12, f"max residual {worst:.2e}"


def check_schmidt_rank(rng, samples):
    bad = 0
    for dims in ((2, 2), (3, 3)):
        for _ in range(samples):
            psi = random_pure_state(dims, rng)
            r = oracle.schmidt_rank(psi, dims)
            rho = DensityMatrix.from_ket(psi, dims)
            bad += oracle.matrix_rank(rho.partial_transpose()) != r * r
    return bad == 0, f"{bad} states violate rank(rho^T_B) = r^2"


def check_cavity_psd(rng, samples):
    floor, trace_err = np.inf, 0.0
    for t in np.linspace(0.0, 2.0, 20):
        for p in np.linspace(0.0, 1.0, 20):
            m = cavity_matrix(CavityParams(p, t))
            floor = min(floor, np.linalg.eigvalsh(m)[0])
            trace_err = max(trace_err, abs(np.trace(m) - 1.0))
    return floor >= -1e-12 and trace_err <= 1e-12, f"eigenvalue floor {floor:.2e}, trace error {trace_err:.2e}"


def check_excitation_conservation(rng, samples):
    params = JCMParams(n_fock=6)
    h = jcm_hamiltonian(params)
    num = excitation_number(6)
    err = np.abs(h @ num - num @ h).max()
    return err <= 1e-12, f"commutator norm {err:.2e}"


def check_reparametrization(rng, samples):
    """d1 along ``rho(c t)`` equals ``c`` times d1 along ``rho(t)``."""
    worst = 0.0
    for _ in range(samples):
        rho = random_density_matrix((2, 2), rng)
        h = random_hermitian(4, rng)
        drho = -1j * (h @ rho.matrix - rho.matrix @ h)
        c = 0.5 + 2.0 * rng.random()
        base = negativity_d1(rho, drho)
        worst = max(worst, abs(negativity_d1(rho, c * drho) - c * base) / max(1.0, abs(base)))
    return worst <= 1e-12, f"max relative deviation {worst:.2e}"


CHECKS: dict[str, Callable] = {
    "partial-transpose superoperator": check_partial_transpose,
    "negativity eigensum vs trace norm": check_negativity_forms,
    "patterned Jacobian": check_jacobian,
    "patterned Hessian": check_hessian,
    "sign and absolute value": check_sign_abs,
    "Schmidt rank of partial transpose": check_schmidt_rank,
    "cavity state PSD grid": check_cavity_psd,
    "JCM excitation conservation": check_excitation_conservation,
    "reparametrization scaling": check_reparametrization,
}


def run_invariants(seed: int = 0, samples: int = 20) -> list[CheckResult]:
    out = []
    for name, check in CHECKS.items():
        rng = np.random.default_rng([seed, len(out)])
        try:
            ok, detail = check(rng, samples)
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail))
    return out
