"""Closed-form Bell-like eigensystem at θ_t = 0° (field along the
intermolecular axis) and θ_t = 90°.

At these two angles the cross factors Γ_{0,X} and Γ_{1,X} vanish and the 4x4
matrix splits into a {|00>, |11>} block and a {|01>, |10>} block:

    [[2ε0 + a, 0, 0, d], [0, ε0+ε1+b, f, 0], [0, f, ε0+ε1+b, 0], [d, 0, 0, 2ε1 + c]]

The cross factor (sx at 0°, cx at 90°) is taken purely imaginary, so its
square is -|.|². Only |d| enters energies and concurrences; the sign of d
fixes the relative phase of |00> and |11> in Ψ1, Ψ4.
"""

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from planar_dipoles.errors import DegeneracyWarning
from planar_dipoles.pair import PairParams
from planar_dipoles.rotor import DEFAULT_GUARD_TOL, DipoleFactors, dipole_factors, solve_rotor

VANISH_TOL = 1e-8
_SQRT_HALF = math.sqrt(0.5)


class AngleCase(enum.Enum):
    PARALLEL = "parallel"  # θ_t = 0°
    PERPENDICULAR = "perpendicular"  # θ_t = 90°


def angle_case_for(theta_t: float, tol: float = 1e-12):
    """AngleCase for tilt angles on a multiple of π/2, else None."""
    quarter = theta_t / (math.pi / 2)
    k = round(quarter)
    if abs(quarter - k) > tol:
        return None
    return AngleCase.PARALLEL if k % 2 == 0 else AngleCase.PERPENDICULAR


@dataclass(frozen=True)
class ReducedParams:
    a: float
    b: float
    c: float
    d: float
    f: float
    eps0: float
    eps1: float
    angle_case: AngleCase
    coupling_over_B: float = 0.0
    # |.|² of the surviving diagonal factors and of the cross factor
    diag0_sq: float = 0.0
    diag1_sq: float = 0.0
    cross_abs_sq: float = 0.0

    @property
    def delta(self) -> float:
        return self.eps1 - self.eps0 + 0.5 * (self.c - self.a)


@dataclass(frozen=True)
class BellLikeSolution:
    """Energies and states indexed by label: ``energies[n-1]``, ``states[:, n-1]``."""

    energies: np.ndarray
    states: np.ndarray = field(repr=False)
    delta: float
    n_plus: float
    n_minus: float
    concurrence_14: float
    degenerate: bool = False

    @property
    def singlet_label(self) -> int:
        singlet = np.array([0, _SQRT_HALF, -_SQRT_HALF, 0])
        return 2 if np.allclose(self.states[:, 1], singlet) else 3


def reduce(
    factors: DipoleFactors,
    eps0: float,
    eps1: float,
    coupling_over_B: float,
    angle_case: AngleCase,
    tol: float = VANISH_TOL,
) -> ReducedParams:
    w = coupling_over_B
    if angle_case is AngleCase.PARALLEL:
        vanishing = {"s0": factors.s0, "s1": factors.s1, "cx": factors.cx}
    else:
        vanishing = {"c0": factors.c0, "c1": factors.c1, "sx": factors.sx}
    bad = {k: abs(v) for k, v in vanishing.items() if abs(v) > tol}
    if bad:
        raise ValueError(
            f"factors are not those of the {angle_case.value} case; non-vanishing: {bad}"
        )
    if angle_case is AngleCase.PARALLEL:
        p0, p1 = factors.c0.real, factors.c1.real
        cross = abs(factors.sx) ** 2
        return ReducedParams(
            a=-2 * w * p0 * p0, b=-2 * w * p0 * p1, c=-2 * w * p1 * p1,
            d=-w * cross, f=w * cross,
            eps0=eps0, eps1=eps1, angle_case=angle_case, coupling_over_B=w,
            diag0_sq=p0 * p0, diag1_sq=p1 * p1, cross_abs_sq=cross,
        )
    p0, p1 = factors.s0.real, factors.s1.real
    cross = abs(factors.cx) ** 2
    return ReducedParams(
        a=w * p0 * p0, b=w * p0 * p1, c=w * p1 * p1,
        d=2 * w * cross, f=-2 * w * cross,
        eps0=eps0, eps1=eps1, angle_case=angle_case, coupling_over_B=w,
        diag0_sq=p0 * p0, diag1_sq=p1 * p1, cross_abs_sq=cross,
    )


def bell_solution(params: ReducedParams) -> BellLikeSolution:
    p = params
    delta, d = p.delta, p.d
    root = math.hypot(d, delta)
    mean = p.eps0 + p.eps1 + 0.5 * (p.a + p.c)
    degenerate = False

    # Δ ± √(d²+Δ²) evaluated without cancellation
    if delta >= 0:
        plus = delta + root
        minus = -d * d / plus if plus > 0 else 0.0
    else:
        minus = delta - root
        plus = -d * d / minus
    n_plus = root * plus
    n_minus = -root * minus

    states = np.zeros((4, 4))
    if d == 0.0:
        if delta == 0.0:
            degenerate = True
            warnings.warn("d = 0 and Δ = 0: {|00>, |11>} block is fully degenerate", DegeneracyWarning)
        lower, upper = (0, 3) if delta >= 0 else (3, 0)
        states[lower, 0] = 1.0
        states[upper, 3] = 1.0
    else:
        states[[0, 3], 0] = np.array([plus, -d]) / math.sqrt(2 * n_plus)
        states[[0, 3], 3] = np.array([minus, -d]) / math.sqrt(2 * n_minus)

    singlet = np.array([0, _SQRT_HALF, -_SQRT_HALF, 0])
    triplet = np.array([0, _SQRT_HALF, _SQRT_HALF, 0])
    e_singlet = p.eps0 + p.eps1 + p.b - p.f
    e_triplet = p.eps0 + p.eps1 + p.b + p.f
    if p.angle_case is AngleCase.PARALLEL:
        states[:, 1], states[:, 2] = singlet, triplet
        e2, e3 = e_singlet, e_triplet
    else:
        states[:, 1], states[:, 2] = triplet, singlet
        e2, e3 = e_triplet, e_singlet

    energies = np.array([mean - root, e2, e3, mean + root])
    return BellLikeSolution(
        energies=energies,
        states=states,
        delta=delta,
        n_plus=n_plus,
        n_minus=n_minus,
        concurrence_14=_concurrence_from_ratio(delta, d),
        degenerate=degenerate,
    )


def _concurrence_from_ratio(delta, d):
    if d == 0.0:
        return 0.0
    return 1.0 / math.sqrt(1.0 + (delta / d) ** 2)


def analytic_concurrence_14(params: ReducedParams) -> float:
    """Shared concurrence of Ψ1 and Ψ4, 1/sqrt(1 + Δ²/d²), with Δ/d written in
    terms of the rotor factors. Returns 0 with a warning when d = 0."""
    p = params
    w = p.coupling_over_B
    gap = p.eps1 - p.eps0
    # the cross factor is purely imaginary: its square is -|.|²
    cross_sq = -p.cross_abs_sq
    if w == 0.0 or cross_sq == 0.0:
        warnings.warn("d = 0: Ψ1, Ψ4 are product states, concurrence set to 0", DegeneracyWarning)
        return 0.0
    if p.angle_case is AngleCase.PARALLEL:
        ratio = (gap - w * (p.diag1_sq - p.diag0_sq)) / (w * cross_sq)
    else:
        ratio = (gap + w * (p.diag1_sq - p.diag0_sq) / 2) / (2 * w * cross_sq)
    return 1.0 / math.sqrt(1.0 + ratio * ratio)


def solve_special(params: PairParams, guard_tol: float = DEFAULT_GUARD_TOL) -> BellLikeSolution:
    """Rotor solve + reduction + closed form for θ_t on a multiple of 90°."""
    case = angle_case_for(params.rotor.theta_t)
    if case is None:
        raise ValueError(f"no closed form at theta_t = {params.rotor.theta_t!r} rad")
    rotor = solve_rotor(params.rotor)
    factors = dipole_factors(rotor, guard_tol)
    reduced = reduce(factors, float(rotor.energies[0]), float(rotor.energies[1]), params.coupling_over_B, case)
    return bell_solution(reduced)
