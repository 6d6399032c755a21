import math

import numpy as np
import pytest

from planar_dipoles import (
    GuardRejected,
    PairParams,
    RotorParams,
    build_pair_hamiltonian,
    dipole_factors,
    solve_pair,
    solve_rotor,
    track_labels,
)
from planar_dipoles.analytic import solve_special
from planar_dipoles.pair import PairEigensystem

from oracles import pair_matrix_by_quadrature


def _rotor(omega, theta_t):
    eig = solve_rotor(RotorParams(omega, theta_t))
    return eig, dipole_factors(eig)


def test_zero_coupling_is_diagonal():
    eig, f = _rotor(2.0, 0.4)
    e0, e1 = eig.energies[:2]
    h = build_pair_hamiltonian(f, e0, e1, 0.0)
    assert np.array_equal(h, np.diag([2 * e0, e0 + e1, e0 + e1, 2 * e1]).astype(complex))


def test_parallel_entry():
    eig, f = _rotor(2.0, 0.0)
    e0, e1 = eig.energies[:2]
    h = build_pair_hamiltonian(f, e0, e1, 0.8)
    assert h[0, 0].real == pytest.approx(2 * e0 - 2 * 0.8 * f.c0.real**2, abs=1e-14)


def test_rejects_nonfinite():
    eig, f = _rotor(2.0, 0.0)
    with pytest.raises(ValueError):
        build_pair_hamiltonian(f, np.nan, 0.0, 0.8)
    with pytest.raises(ValueError):
        PairParams(RotorParams(2.0), -0.1)


@pytest.mark.parametrize("omega,theta_deg,coupling", [(2.0, 30.0, 0.8), (0.4, 71.0, 2.2), (5.0, 155.0, 0.3)])
def test_matrix_matches_2d_quadrature(omega, theta_deg, coupling):
    eig, f = _rotor(omega, math.radians(theta_deg))
    h = build_pair_hamiltonian(f, eig.energies[0], eig.energies[1], coupling)
    ref = pair_matrix_by_quadrature(eig, coupling)
    assert np.max(np.abs(h - ref)) < 1e-8
    assert np.array_equal(h, h.conj().T)


def test_eigensystem_invariants():
    pair = solve_pair(PairParams.make(2.0, 0.8, 0.5))
    assert np.allclose(np.linalg.norm(pair.states, axis=0), 1.0)
    assert np.max(np.abs(pair.states.conj().T @ pair.states - np.eye(4))) < 1e-10
    assert np.all(np.diff(pair.energies) >= 0)
    assert pair.energies.dtype == float


def test_guard_rejection_propagates():
    with pytest.raises(GuardRejected):
        solve_pair(PairParams.make(0.0, 0.8))


@pytest.mark.parametrize("theta_t", [0.0, math.pi / 2])
def test_energies_match_closed_form(theta_t):
    params = PairParams.make(2.0, 0.8, theta_t)
    numeric = solve_pair(params).energies
    analytic = np.sort(solve_special(params).energies)
    assert np.max(np.abs(numeric - analytic)) < 1e-10


def test_weak_coupling_limit():
    pair = solve_pair(PairParams.make(2.0, 1e-9, 0.6))
    assert abs(pair.states[0, 0]) > 1 - 1e-8
    assert abs(pair.states[3, 3]) > 1 - 1e-8


def test_exact_degeneracy_resolved_by_exchange_symmetry():
    pair = solve_pair(PairParams.make(2.0, 0.0, 0.0))
    assert pair.degenerate
    s = math.sqrt(0.5)
    singlet, triplet = np.array([0, s, -s, 0]), np.array([0, s, s, 0])
    overlaps = sorted(abs(np.vdot(singlet, pair.states[:, k])) for k in (1, 2))
    assert overlaps == pytest.approx([0.0, 1.0], abs=1e-12)
    assert abs(np.vdot(triplet, pair.states[:, 1])) + abs(np.vdot(triplet, pair.states[:, 2])) == pytest.approx(1.0, abs=1e-12)


def test_energies_decrease_with_coupling_parallel():
    couplings = np.linspace(0.0, 5.0, 51)
    energies = np.array([solve_pair(PairParams.make(2.0, w, 0.0)).energies for w in couplings])
    assert np.all(np.diff(energies, axis=0) < 0)


def test_track_labels_identity():
    pair = solve_pair(PairParams.make(2.0, 0.8, 0.3))
    match = track_labels(pair, pair)
    assert match.labels == (1, 2, 3, 4)
    assert not match.ambiguous


def test_track_labels_far_from_crossing_is_identity():
    thetas = np.radians(np.linspace(5.0, 25.0, 41))
    prev = solve_pair(PairParams.make(2.0, 0.8, thetas[0]))
    for th in thetas[1:]:
        cur = solve_pair(PairParams.make(2.0, 0.8, th))
        overlap = np.abs(prev.states.conj().T @ cur.states)
        assert np.all(np.diag(overlap) > 0.99)
        assert track_labels(prev, cur).labels == (1, 2, 3, 4)
        prev = cur


def test_track_labels_swap_through_tilt_crossing():
    thetas = np.radians(np.linspace(40.0, 47.0, 71))
    prev = solve_pair(PairParams.make(2.0, 0.8, 0.0))
    for th in np.radians(np.linspace(0.0, 40.0, 81)):
        cur = solve_pair(PairParams.make(2.0, 0.8, th))
        prev = cur.relabel(track_labels(prev, cur).labels)
    assert prev.labels == (1, 2, 3, 4)
    for th in thetas:
        cur = solve_pair(PairParams.make(2.0, 0.8, th))
        prev = cur.relabel(track_labels(prev, cur).labels)
    # past 43.5° the tracked Ψ2 (singlet) sits above Ψ3
    assert prev.labels == (1, 3, 2, 4)
    s = math.sqrt(0.5)
    singlet = np.array([0, s, -s, 0])
    assert abs(np.vdot(singlet, prev.state(2))) == pytest.approx(1.0, abs=1e-10)


def test_track_labels_flags_ambiguity():
    pair = solve_pair(PairParams.make(2.0, 0.8, 0.3))
    s = math.sqrt(0.5)
    mixed = pair.states.copy()
    mixed[:, [1, 2]] = np.column_stack([(pair.states[:, 1] + pair.states[:, 2]) * s, (pair.states[:, 1] - pair.states[:, 2]) * s])
    other = PairEigensystem(pair.params, pair.energies, mixed)
    assert track_labels(pair, other).ambiguous


def test_relabel_lookup():
    pair = solve_pair(PairParams.make(2.0, 0.8, 0.3)).relabel((2, 1, 3, 4))
    assert pair.energy(1) == pair.energies[1]
    assert np.array_equal(pair.state(2), pair.states[:, 0])
