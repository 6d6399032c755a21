import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from planar_dipoles import (
    DensityMatrix4,
    NonPhysicalState,
    PairParams,
    pure_concurrence,
    solve_pair,
    thermal_concurrence,
    thermal_density_matrix,
    wootters_concurrence,
)
from planar_dipoles.entanglement import SIGMA_YY
from planar_dipoles.pair import PairEigensystem

from oracles import random_state

S = math.sqrt(0.5)


@pytest.fixture(scope="module")
def pair_parallel():
    return solve_pair(PairParams.make(2.0, 0.8, 0.0))


def test_spin_flip_ordering():
    ket01 = np.array([0, 1, 0, 0], dtype=complex)
    ket10 = np.array([0, 0, 1, 0], dtype=complex)
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    # σy|0> = i|1>, σy|1> = -i|0>
    assert np.allclose(SIGMA_YY @ ket01, ket10)
    assert np.allclose(SIGMA_YY @ ket00, -np.array([0, 0, 0, 1]))
    sy = np.array([[0, -1j], [1j, 0]])
    assert np.array_equal(SIGMA_YY, np.kron(sy, sy))


def test_bell_state_concurrence():
    phi = np.array([S, 0, 0, S])
    assert wootters_concurrence(DensityMatrix4.pure(phi)) == pytest.approx(1.0, abs=1e-12)
    assert pure_concurrence(phi) == pytest.approx(1.0, abs=1e-15)
    assert pure_concurrence([S, 0, 0, -S]) == pytest.approx(1.0, abs=1e-15)


def test_maximally_mixed():
    assert wootters_concurrence(np.eye(4) / 4) == 0.0


def test_product_state():
    assert pure_concurrence([1, 0, 0, 0]) == 0.0
    assert wootters_concurrence(DensityMatrix4.pure([1, 0, 0, 0])) == pytest.approx(0.0, abs=1e-12)


def test_werner_state():
    # p|Φ+><Φ+| + (1-p) I/4 has C = max(0, (3p-1)/2)
    phi = np.array([S, 0, 0, S])
    for p in (0.2, 1 / 3, 0.6, 0.9):
        rho = p * np.outer(phi, phi) + (1 - p) * np.eye(4) / 4
        assert wootters_concurrence(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-10)


def test_pure_concurrence_rejects_unnormalized():
    with pytest.raises(NonPhysicalState):
        pure_concurrence([1, 1, 0, 0])


@pytest.mark.parametrize(
    "rho",
    [np.eye(4) / 2, np.diag([1.5, -0.5, 0, 0]), np.array([[0.5, 1], [0, 0.5]]), np.triu(np.ones((4, 4))) / 4],
)
def test_density_matrix_validation(rho):
    with pytest.raises(NonPhysicalState):
        DensityMatrix4(rho)


def test_pure_vs_wootters_random():
    rng = np.random.default_rng(1234)
    for _ in range(200):
        psi = random_state(rng)
        assert abs(wootters_concurrence(DensityMatrix4.pure(psi)) - pure_concurrence(psi)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), phi1=st.floats(0, 2 * math.pi), phi2=st.floats(0, 2 * math.pi))
def test_local_phase_invariance(seed, phi1, phi2):
    rng = np.random.default_rng(seed)
    states = np.column_stack([random_state(rng) for _ in range(3)])
    w = rng.random(3)
    w /= w.sum()
    rho = (states * w) @ states.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    u = np.kron(np.diag([1, np.exp(1j * phi1)]), np.diag([1, np.exp(1j * phi2)]))
    rotated = u @ rho @ u.conj().T
    assert abs(wootters_concurrence(rho) - wootters_concurrence(0.5 * (rotated + rotated.conj().T))) < 1e-10


def test_zero_temperature_is_ground_projector(pair_parallel):
    rho = thermal_density_matrix(pair_parallel, 0.0).entries
    g = pair_parallel.states[:, 0]
    assert np.max(np.abs(rho - np.outer(g, g.conj()))) < 1e-14
    assert thermal_concurrence(pair_parallel, 0.0) == pytest.approx(pure_concurrence(g), abs=1e-10)


def test_infinite_temperature_limit(pair_parallel):
    rho = thermal_density_matrix(pair_parallel, 1e12).entries
    assert np.max(np.abs(rho - np.eye(4) / 4)) < 1e-10


def test_thermal_weights_extended_precision(pair_parallel):
    mpmath.mp.dps = 40
    kT = 1.0
    boltz = [mpmath.exp(-mpmath.mpf(float(e)) / kT) for e in pair_parallel.energies]
    z = mpmath.fsum(boltz)
    w = np.array([float(b / z) for b in boltz])
    v = pair_parallel.states
    expected = (v * w) @ v.conj().T
    assert np.max(np.abs(thermal_density_matrix(pair_parallel, kT).entries - expected)) < 1e-14


def test_energy_offset_invariance(pair_parallel):
    shifted = PairEigensystem(pair_parallel.params, pair_parallel.energies + 123.456, pair_parallel.states)
    for kT in (0.0, 0.1, 1.0, 10.0):
        a = thermal_density_matrix(pair_parallel, kT).entries
        b = thermal_density_matrix(shifted, kT).entries
        assert np.max(np.abs(a - b)) < 1e-12


def test_high_temperature_concurrence_vanishes(pair_parallel):
    assert thermal_concurrence(pair_parallel, 100.0) < 1e-3


@pytest.mark.parametrize("theta_t", [0.0, math.pi / 2])
def test_concurrence_nonincreasing_on_grid(theta_t):
    pair = solve_pair(PairParams.make(2.0, 0.8, theta_t))
    values = [thermal_concurrence(pair, t) for t in (0.1, 0.3, 1.0)]
    assert values[0] >= values[1] >= values[2]


def test_degenerate_ground_flagged_at_zero_temperature():
    e = np.array([-1.0, -1.0, 0.0, 1.0])
    pair = PairEigensystem(None, e, np.eye(4, dtype=complex))
    rho = thermal_density_matrix(pair, 0.0)
    assert rho.degenerate
    assert np.allclose(np.diag(rho.entries).real, [0.5, 0.5, 0, 0])


def test_mixture_bound_on_grid():
    for theta_deg in (0.0, 30.0, 60.0, 90.0):
        for coupling in (0.3, 0.8, 2.0):
            pair = solve_pair(PairParams.make(2.0, coupling, math.radians(theta_deg)))
            pure = [pure_concurrence(pair.states[:, k]) for k in range(4)]
            for kT in (0.05, 0.2, 1.0):
                w = np.exp(-(pair.energies - pair.energies[0]) / kT)
                w /= w.sum()
                assert thermal_concurrence(pair, kT) <= float(np.dot(w, pure)) + 1e-12


def test_nonphysical_spin_flip_raises():
    rho = np.eye(4, dtype=complex) / 4
    rho[0, 1] = rho[1, 0] = 0.2  # Hermitian, unit trace, but check PSD
    rho[0, 3] = 0.1j
    rho[3, 0] = -0.1j
    with pytest.raises(NonPhysicalState):
        DensityMatrix4(np.diag([0.6, 0.6, -0.1, -0.1]))
    assert 0.0 <= wootters_concurrence(rho) <= 1.0
