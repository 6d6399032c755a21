"""Density matrices and concurrence for the two-molecule qubit pair."""

from dataclasses import dataclass

import numpy as np

from planar_dipoles.errors import NonPhysicalState
from planar_dipoles.pair import DEGENERACY_TOL, PairEigensystem

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
IMAG_TOL = 1e-8
NORM_TOL = 1e-8

# σ_y ⊗ σ_y in the |00>, |01>, |10>, |11> ordering
SIGMA_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)


@dataclass(frozen=True)
class DensityMatrix4:
    entries: np.ndarray
    degenerate: bool = False

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        if rho.shape != (4, 4):
            raise NonPhysicalState(f"expected a 4x4 matrix, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise NonPhysicalState("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > TRACE_TOL:
            raise NonPhysicalState(f"trace is {np.trace(rho).real!r}, expected 1")
        if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
            raise NonPhysicalState("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", rho)

    @classmethod
    def pure(cls, state) -> "DensityMatrix4":
        psi = _unit_quadruple(state)
        return cls(np.outer(psi, psi.conj()))


def _unit_quadruple(state) -> np.ndarray:
    psi = np.asarray(state, dtype=complex).reshape(-1)
    if psi.shape != (4,):
        raise NonPhysicalState(f"expected four coefficients, got {psi.size}")
    if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise NonPhysicalState(f"state norm {np.linalg.norm(psi)!r} deviates from 1")
    return psi


def boltzmann_weights(energies, kT_over_B: float) -> tuple[np.ndarray, bool]:
    """Normalized weights exp(-(E_n - E_min)/kT); kT = 0 is the ground-state limit.

    Returns ``(weights, degenerate_ground)``.
    """
    if not np.isfinite(kT_over_B) or kT_over_B < 0:
        raise ValueError(f"kT_over_B must be finite and >= 0, got {kT_over_B!r}")
    energies = np.asarray(energies, dtype=float)
    shifted = energies - energies.min()
    ground = shifted < DEGENERACY_TOL * max(1.0, abs(energies.min()))
    degenerate = int(ground.sum()) > 1
    if kT_over_B == 0:
        w = ground.astype(float)
    else:
        w = np.exp(-shifted / kT_over_B)
    return w / w.sum(), degenerate


def thermal_density_matrix(pair: PairEigensystem, kT_over_B: float) -> DensityMatrix4:
    """ρ = Σ_n w_n |Ψ_n><Ψ_n| with Boltzmann weights at k_B T / B = ``kT_over_B``."""
    w, degenerate = boltzmann_weights(pair.energies, kT_over_B)
    v = pair.states
    rho = (v * w) @ v.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix4(rho, degenerate=degenerate and kT_over_B == 0)


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """ρ (σy⊗σy) ρ* (σy⊗σy)."""
    return rho @ SIGMA_YY @ rho.conj() @ SIGMA_YY


def wootters_concurrence(rho) -> float:
    """Wootters concurrence max(0, √λ1 - √λ2 - √λ3 - √λ4), λ the eigenvalues of
    ρ (σy⊗σy) ρ* (σy⊗σy) in decreasing order.

    With ρ = A A†, the √λ are the singular values of Aᵀ(σy⊗σy)A. Taking them
    from an SVD keeps full absolute precision for near-zero λ, where √ of an
    eigenvalue carrying 1e-16 round-off would give errors of order 1e-8.
    """
    if not isinstance(rho, DensityMatrix4):
        rho = DensityMatrix4(rho)
    lam = np.linalg.eigvals(spin_flip(rho.entries))
    if np.max(np.abs(lam.imag)) >= IMAG_TOL:
        raise NonPhysicalState(f"spin-flipped matrix has complex eigenvalues {lam!r}")
    w, v = np.linalg.eigh(rho.entries)
    a = v * np.sqrt(np.clip(w, 0.0, None))
    roots = np.linalg.svd(a.T @ SIGMA_YY @ a, compute_uv=False)
    return float(min(1.0, max(0.0, roots[0] - roots[1:].sum())))


def pure_concurrence(state) -> float:
    """2 |d2 d3 - d1 d4| for a unit-norm quadruple (d1, d2, d3, d4)."""
    d = _unit_quadruple(state)
    return float(2.0 * abs(d[1] * d[2] - d[0] * d[3]))


def thermal_concurrence(pair: PairEigensystem, kT_over_B: float) -> float:
    return wootters_concurrence(thermal_density_matrix(pair, kT_over_B))
