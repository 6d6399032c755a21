"""Two identical planar rotors, each truncated to its lowest two field-dressed
states, coupled by the point dipole-dipole interaction.

Composite basis order is |00>, |01>, |10>, |11> with the left molecule first.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from planar_dipoles._linalg import eigh_checked, fix_gauge
from planar_dipoles.rotor import (
    DEFAULT_GUARD_TOL,
    DipoleFactors,
    RotorParams,
    dipole_factors,
    solve_rotor,
)

BASIS_LABELS = ("00", "01", "10", "11")
DEGENERACY_TOL = 1e-10
AMBIGUITY_TOL = 1e-6

# exchange of the two molecules, and the excitation-number parity Z⊗Z
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
_PARITY = np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class PairParams:
    rotor: RotorParams
    coupling_over_B: float

    def __post_init__(self):
        if not np.isfinite(self.coupling_over_B) or self.coupling_over_B < 0:
            raise ValueError(f"coupling_over_B must be finite and >= 0, got {self.coupling_over_B!r}")

    @classmethod
    def make(cls, omega_over_B, coupling_over_B, theta_t=0.0, m_max=30):
        return cls(RotorParams(omega_over_B, theta_t, m_max), coupling_over_B)


@dataclass(frozen=True)
class PairEigensystem:
    """Energies E_n/B ascending; ``states[:, k]`` is (d1, d2, d3, d4) of the k-th.

    ``labels[k]`` is the tracked label (1-based) of the k-th state in energy
    order; it is (1, 2, 3, 4) unless relabelled by :func:`track_labels`.
    """

    params: PairParams
    energies: np.ndarray
    states: np.ndarray = field(repr=False)
    labels: tuple = (1, 2, 3, 4)
    factors: DipoleFactors = field(default=None, repr=False)
    rotor_energies: tuple = (np.nan, np.nan)
    degenerate: bool = False
    ambiguous: bool = False

    def by_label(self, label: int) -> int:
        """Column index of the state carrying ``label``."""
        return self.labels.index(label)

    def energy(self, label: int) -> float:
        return float(self.energies[self.by_label(label)])

    def state(self, label: int) -> np.ndarray:
        return self.states[:, self.by_label(label)]

    def relabel(self, labels, ambiguous=False) -> "PairEigensystem":
        return PairEigensystem(
            self.params, self.energies, self.states, tuple(int(x) for x in labels),
            self.factors, self.rotor_energies, self.degenerate, ambiguous,
        )


class LabelMatch(NamedTuple):
    labels: tuple
    ambiguous: bool


def build_pair_hamiltonian(factors: DipoleFactors, eps0: float, eps1: float, coupling_over_B: float) -> np.ndarray:
    """4x4 Hamiltonian: δ_{α,β} = ε_α + ε_β on the diagonal plus
    Γ_{α,β} = (Ω/B)(S_α S_β - 2 C_α C_β)."""
    values = [eps0, eps1, coupling_over_B, *factors.as_dict().values()]
    if not np.all(np.isfinite(np.asarray(values, dtype=complex))):
        raise ValueError("non-finite input to build_pair_hamiltonian")
    C = {"0": factors.c0, "1": factors.c1, "X": factors.cx, "XC": factors.cxc}
    S = {"0": factors.s0, "1": factors.s1, "X": factors.sx, "XC": factors.sxc}

    def gamma(a, b):
        return coupling_over_B * (S[a] * S[b] - 2.0 * C[a] * C[b])

    g0x, gxx, gxxc, g1x = gamma("0", "X"), gamma("X", "X"), gamma("X", "XC"), gamma("1", "X")
    d01 = eps0 + eps1 + gamma("0", "1")
    h = np.array(
        [
            [2 * eps0 + gamma("0", "0"), g0x, g0x, gxx],
            [np.conj(g0x), d01, gxxc, g1x],
            [np.conj(g0x), gxxc, d01, g1x],
            [np.conj(gxx), np.conj(g1x), np.conj(g1x), 2 * eps1 + gamma("1", "1")],
        ],
        dtype=complex,
    )
    # diagonal and Γ_{X,XC} are real for Hermitian cos/sin; drop round-off
    idx = np.diag_indices(4)
    h[idx] = h[idx].real
    h[1, 2] = h[2, 1] = h[1, 2].real
    assert np.array_equal(h, h.conj().T)
    return h


def _resolve_degenerate(energies, vectors, tol=DEGENERACY_TOL):
    """Within each exactly degenerate cluster pick joint eigenvectors of the
    molecule exchange and Z⊗Z (both commute with H at θ_t = 0°, 90°)."""
    selector = _SWAP + 0.5 * _PARITY
    vectors = vectors.copy()
    degenerate = False
    start = 0
    while start < 4:
        stop = start + 1
        scale = max(1.0, abs(energies[start]))
        while stop < 4 and energies[stop] - energies[stop - 1] < tol * scale:
            stop += 1
        if stop - start > 1:
            degenerate = True
            block = vectors[:, start:stop]
            _, rot = np.linalg.eigh(block.conj().T @ selector @ block)
            vectors[:, start:stop] = block @ rot
        start = stop
    return vectors, degenerate


def solve_pair(params: PairParams, guard_tol: float = DEFAULT_GUARD_TOL, rotor=None) -> PairEigensystem:
    """Solve the rotor, build the 4x4 matrix and diagonalize it.

    ``rotor`` may carry an already solved eigensystem for ``params.rotor``.
    Raises :class:`GuardRejected` when the two-level truncation is invalid.
    """
    if rotor is None:
        rotor = solve_rotor(params.rotor)
    elif rotor.params != params.rotor:
        raise ValueError("rotor eigensystem does not match params.rotor")
    factors = dipole_factors(rotor, guard_tol)
    eps0, eps1 = float(rotor.energies[0]), float(rotor.energies[1])
    h = build_pair_hamiltonian(factors, eps0, eps1, params.coupling_over_B)
    energies, vectors = eigh_checked(h)
    vectors, degenerate = _resolve_degenerate(energies, vectors)
    return PairEigensystem(
        params, energies, fix_gauge(vectors), (1, 2, 3, 4), factors, (eps0, eps1), degenerate
    )


def track_labels(previous: PairEigensystem, current: PairEigensystem, tol: float = AMBIGUITY_TOL) -> LabelMatch:
    """Carry labels from ``previous`` to ``current`` by maximal state overlap.

    Greedy perfect matching on descending |<prev_i|cur_k>|, ties broken by
    (prev index, current index). ``ambiguous`` is set when some current
    state's best and second-best overlaps differ by less than ``tol``.
    """
    overlap = np.abs(previous.states.conj().T @ current.states)
    pairs = sorted(
        ((overlap[i, k], i, k) for i in range(4) for k in range(4)),
        key=lambda t: (-t[0], t[1], t[2]),
    )
    labels = [0] * 4
    used_prev, used_cur = set(), set()
    for _, i, k in pairs:
        if i in used_prev or k in used_cur:
            continue
        labels[k] = previous.labels[i]
        used_prev.add(i)
        used_cur.add(k)
    top2 = np.sort(overlap, axis=0)[-2:, :]
    ambiguous = bool(np.any(top2[1] - top2[0] < tol))
    return LabelMatch(tuple(labels), ambiguous)
