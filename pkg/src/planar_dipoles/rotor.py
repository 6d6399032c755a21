"""Single planar rotor in a tilted static field, solved in the free-rotor basis.

Energies are in units of the rotational constant B. The basis is
exp(i m θ)/sqrt(2π) for m = -m_max .. m_max, stored in ascending m.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from planar_dipoles._linalg import eigh_checked, fix_gauge
from planar_dipoles.errors import GuardRejected

DEFAULT_M_MAX = 30
DEFAULT_GUARD_TOL = 1e-6
_REAL_TOL = 1e-10


@dataclass(frozen=True)
class RotorParams:
    omega_over_B: float
    theta_t: float = 0.0
    m_max: int = DEFAULT_M_MAX

    def __post_init__(self):
        if int(self.m_max) != self.m_max or self.m_max < 1:
            raise ValueError(f"m_max must be a positive integer, got {self.m_max!r}")
        if not np.isfinite(self.omega_over_B) or self.omega_over_B < 0:
            raise ValueError(f"omega_over_B must be finite and >= 0, got {self.omega_over_B!r}")
        if not np.isfinite(self.theta_t):
            raise ValueError(f"theta_t must be finite, got {self.theta_t!r}")

    @property
    def dim(self) -> int:
        return 2 * self.m_max + 1

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(-self.m_max, self.m_max + 1)


@dataclass(frozen=True)
class RotorEigensystem:
    """Sorted energies ε_l/B and coefficient columns c_m^l (``coefficients[:, l]``)."""

    params: RotorParams
    energies: np.ndarray
    coefficients: np.ndarray = field(repr=False)

    @property
    def n_levels(self) -> int:
        return len(self.energies)

    def state(self, level: int) -> np.ndarray:
        return self.coefficients[:, level]


@dataclass(frozen=True)
class DipoleFactors:
    """Matrix elements of cos θ and sin θ between the lowest two rotor states.

    ``cx = <ψ0|cos θ|ψ1>``, ``cxc = <ψ1|cos θ|ψ0>``; same pattern for the s family.
    """

    c0: complex
    c1: complex
    cx: complex
    cxc: complex
    s0: complex
    s1: complex
    sx: complex
    sxc: complex

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in _FACTOR_NAMES}

    def check(self, tol: float = _REAL_TOL) -> None:
        if abs(self.cxc - np.conj(self.cx)) > tol or abs(self.sxc - np.conj(self.sx)) > tol:
            raise ValueError("cross factors are not complex conjugates")
        for name in ("c0", "c1", "s0", "s1"):
            if abs(np.imag(getattr(self, name))) > tol:
                raise ValueError(f"diagonal factor {name} is not real")
        for name in _FACTOR_NAMES:
            if abs(getattr(self, name)) > 1 + tol:
                raise ValueError(f"|{name}| exceeds 1")


_FACTOR_NAMES = ("c0", "c1", "cx", "cxc", "s0", "s1", "sx", "sxc")


class GuardResult(NamedTuple):
    accepted: bool
    reason: str = ""


def build_rotor_hamiltonian(params: RotorParams) -> np.ndarray:
    """H/B = m² on the diagonal plus -(ω/B) cos(θ - θ_t) in the e^{imθ} basis.

    cos(θ - θ_t) raises m by one with amplitude e^{-iθ_t}/2 and lowers it with
    e^{+iθ_t}/2, so H[m+1, m] = -(ω/B) e^{-iθ_t}/2 and H[m, m+1] is its conjugate.
    """
    m = params.m_values
    h = np.diag((m**2).astype(complex))
    half = -0.5 * params.omega_over_B
    lower = half * np.exp(-1j * params.theta_t)
    idx = np.arange(params.dim - 1)
    h[idx + 1, idx] = lower
    h[idx, idx + 1] = np.conj(lower)
    assert np.array_equal(h, h.conj().T)
    return h


def _real_tridiagonal_form(h):
    """Write a Hermitian tridiagonal h as D R D† with R real symmetric, D diagonal unitary.

    R carries |h[k+1, k]| off the diagonal, so the tilt phase drops out of the
    eigenvalue problem entirely instead of passing through a complex reduction.
    """
    sub = np.diagonal(h, -1)
    mag = np.abs(sub)
    step = np.ones_like(sub)
    step[mag > 0] = sub[mag > 0] / mag[mag > 0]
    d = np.concatenate([[1.0 + 0j], np.cumprod(step)])
    r = np.diag(np.real(np.diagonal(h))) + np.diag(mag, -1) + np.diag(mag, 1)
    return r, d


def solve_rotor(params: RotorParams) -> RotorEigensystem:
    r, d = _real_tridiagonal_form(build_rotor_hamiltonian(params))
    energies, vectors = eigh_checked(r)
    return RotorEigensystem(params, energies, fix_gauge(d[:, None] * vectors))


def level_gap(eigensystem: RotorEigensystem, i: int, j: int) -> float:
    """ε_j - ε_i for i < j."""
    if not 0 <= i < j < eigensystem.n_levels:
        raise IndexError(f"need 0 <= i < j < {eigensystem.n_levels}, got i={i}, j={j}")
    return float(eigensystem.energies[j] - eigensystem.energies[i])


def two_level_guard(eigensystem: RotorEigensystem, tolerance: float = DEFAULT_GUARD_TOL) -> GuardResult:
    """Reject the lowest-two-state truncation when ε_2 is (nearly) degenerate with ε_1."""
    if eigensystem.n_levels < 3:
        raise ValueError("two_level_guard needs at least three levels")
    e = eigensystem.energies
    split = e[2] - e[1]
    threshold = tolerance * max(1.0, abs(e[1]))
    if split < threshold:
        return GuardResult(
            False,
            f"eps2 - eps1 = {split:.3e} < {threshold:.3e} at omega/B={eigensystem.params.omega_over_B!r}: "
            "second and third rotor levels are degenerate, two-level truncation invalid",
        )
    return GuardResult(True)


def _shifted(c: np.ndarray, s: int) -> np.ndarray:
    # out[m] = c[m - s]; out-of-range entries are zero
    out = np.zeros_like(c)
    if s > 0:
        out[s:] = c[:-s]
    else:
        out[:s] = c[-s:]
    return out


def cos_element(a: np.ndarray, b: np.ndarray) -> complex:
    """<a|cos θ|b> for coefficient vectors over ascending m."""
    return complex(np.vdot(a, 0.5 * (_shifted(b, 1) + _shifted(b, -1))))


def sin_element(a: np.ndarray, b: np.ndarray) -> complex:
    """<a|sin θ|b> for coefficient vectors over ascending m."""
    return complex(np.vdot(a, (_shifted(b, 1) - _shifted(b, -1)) / 2j))


def dipole_factors(eigensystem: RotorEigensystem, tolerance: float = DEFAULT_GUARD_TOL) -> DipoleFactors:
    guard = two_level_guard(eigensystem, tolerance)
    if not guard.accepted:
        raise GuardRejected(guard.reason)
    p0, p1 = eigensystem.state(0), eigensystem.state(1)
    factors = DipoleFactors(
        c0=cos_element(p0, p0),
        c1=cos_element(p1, p1),
        cx=cos_element(p0, p1),
        cxc=cos_element(p1, p0),
        s0=sin_element(p0, p0),
        s1=sin_element(p1, p1),
        sx=sin_element(p0, p1),
        sxc=sin_element(p1, p0),
    )
    factors.check()
    return factors


def wavefunction(eigensystem: RotorEigensystem, level: int, theta) -> np.ndarray:
    """ψ_l(θ) = Σ_m c_m^l exp(i m θ)/sqrt(2π)."""
    theta = np.asarray(theta, dtype=float)
    phases = np.exp(1j * np.multiply.outer(theta, eigensystem.params.m_values))
    return phases @ eigensystem.state(level) / np.sqrt(2 * np.pi)


def probability_density(eigensystem: RotorEigensystem, level: int, theta) -> np.ndarray:
    return np.abs(wavefunction(eigensystem, level, theta)) ** 2
