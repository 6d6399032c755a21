"""Parameter sweeps, feature location and figure-data generation."""

import dataclasses
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import optimize

from planar_dipoles import __version__
from planar_dipoles.dataset import Dataset
from planar_dipoles.entanglement import pure_concurrence, thermal_concurrence
from planar_dipoles.errors import DegeneracyWarning, FeatureNotFound, GuardRejected
from planar_dipoles.pair import AMBIGUITY_TOL, DEGENERACY_TOL, PairParams, solve_pair, track_labels
from planar_dipoles.rotor import (
    DEFAULT_GUARD_TOL,
    DEFAULT_M_MAX,
    RotorParams,
    dipole_factors,
    probability_density,
    solve_rotor,
)

AXES = ("omega_over_B", "coupling_over_B", "theta_t_deg", "kT_over_B")
QUANTITIES = (
    "rotor_energies",
    "rotor_gap",
    "factors",
    "pair_energies",
    "pure_concurrences",
    "thermal_concurrence",
)
PAIR_QUANTITIES = ("pair_energies", "pure_concurrences", "thermal_concurrence")
FACTOR_NAMES = ("c0", "c1", "cx", "cxc", "s0", "s1", "sx", "sxc")
DEFAULT_TEMPERATURES = (0.1, 0.2, 0.5, 1.0)
DEFAULT_FIXED = {"omega_over_B": 2.0, "coupling_over_B": 0.8, "theta_t_deg": 0.0}
OMEGA_FLOOR = 0.01
FIGURE_POINTS = 500
FEATURE_XTOL = 1e-7
FEATURE_KINDS = ("crossing", "anticrossing", "concurrence_minimum")


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep over ``axis``; everything else is held at ``fixed``.

    ``fixed`` may hold omega_over_B, coupling_over_B, theta_t_deg and
    ``temperatures`` (kT/B list used by thermal_concurrence when the axis is
    not kT_over_B). Missing entries fall back to DEFAULT_FIXED.
    """

    axis: str
    start: float
    stop: float
    count: int
    fixed: dict = field(default_factory=dict)
    quantities: tuple = ("pair_energies",)
    output: str | None = None
    m_max: int = DEFAULT_M_MAX
    n_levels: int = 6
    guard_tol: float = DEFAULT_GUARD_TOL
    omega_floor: float = OMEGA_FLOOR

    def __post_init__(self):
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "stop", float(self.stop))
        object.__setattr__(self, "quantities", tuple(self.quantities))
        if self.axis not in AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; expected one of {AXES}")
        if not self.start < self.stop:
            raise ValueError(f"sweep needs start < stop, got {self.start!r}..{self.stop!r}")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"sweep count must be an integer >= 2, got {self.count!r}")
        if self.axis in self.fixed:
            raise ValueError(f"axis {self.axis!r} also given as a fixed parameter")
        unknown = set(self.quantities) - set(QUANTITIES)
        if unknown or not self.quantities:
            raise ValueError(f"unknown quantities {sorted(unknown)}; expected a subset of {QUANTITIES}")
        if self.axis == "kT_over_B" and self.start < 0:
            raise ValueError("kT_over_B must be >= 0")
        if self.axis == "kT_over_B" and "thermal_concurrence" not in self.quantities:
            raise ValueError("a kT_over_B sweep only makes sense with thermal_concurrence")
        if self.n_levels < 2 or self.n_levels > 2 * self.m_max + 1:
            raise ValueError(f"n_levels must be in [2, {2 * self.m_max + 1}]")

    def grid(self) -> np.ndarray:
        x = np.linspace(self.start, self.stop, int(self.count))
        if self.axis == "omega_over_B":
            x = _floor_omega(x, self.omega_floor)
        return x

    def point(self, x: float) -> dict:
        """Full parameter set at axis value ``x``."""
        p = dict(DEFAULT_FIXED)
        p.update(self.fixed)
        for key in DEFAULT_FIXED:
            p[key] = float(p[key])
        p[self.axis] = float(x)
        p.setdefault("temperatures", DEFAULT_TEMPERATURES)
        if self.axis != "omega_over_B":
            p["omega_over_B"] = float(_floor_omega(np.array([p["omega_over_B"]]), self.omega_floor)[0])
        return p

    @property
    def needs_pair(self) -> bool:
        return any(q in PAIR_QUANTITIES for q in self.quantities)


def _floor_omega(x: np.ndarray, floor: float) -> np.ndarray:
    zero = x == 0.0
    if np.any(zero):
        warnings.warn(f"omega_over_B = 0 excluded (degenerate two-level truncation); using {floor!r}")
        x = x.copy()
        x[zero] = floor
    return x


class PointResult(NamedTuple):
    x: float
    params: dict
    rotor: object
    factors: object
    pair: object


def _rotor_params(p: dict, m_max: int) -> RotorParams:
    return RotorParams(p["omega_over_B"], math.radians(p["theta_t_deg"]), m_max)


def _evaluate(spec: SweepSpec, x: float) -> PointResult:
    p = spec.point(x)
    rotor_params = _rotor_params(p, spec.m_max)
    rotor = solve_rotor(rotor_params)
    factors = pair = None
    try:
        if "factors" in spec.quantities:
            factors = dipole_factors(rotor, spec.guard_tol)
        if spec.needs_pair:
            pair = solve_pair(PairParams(rotor_params, p["coupling_over_B"]), spec.guard_tol, rotor)
    except GuardRejected as exc:
        raise GuardRejected(f"at {spec.axis}={float(x)!r}: {exc}") from exc
    return PointResult(float(x), p, rotor, factors, pair)


def _tracked(results: list) -> list:
    """Ordered post-pass carrying pair labels along the sweep.

    Labels start in ascending-energy order at the first point that has no
    exactly degenerate levels and are propagated outward from there.
    """
    out = list(results)
    if not out or out[0].pair is None:
        return out
    seed = next((k for k, r in enumerate(out) if not r.pair.degenerate), 0)
    order = list(range(seed + 1, len(out))) + list(range(seed - 1, -1, -1))
    for k in order:
        ref = out[k - 1].pair if k > seed else out[k + 1].pair
        match = track_labels(ref, out[k].pair)
        out[k] = out[k]._replace(pair=out[k].pair.relabel(match.labels, match.ambiguous))
    return out


def solve_grid(spec: SweepSpec, workers: int = 1) -> list:
    xs = spec.grid()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda x: _evaluate(spec, x), xs))
    else:
        results = [_evaluate(spec, x) for x in xs]
    return _tracked(results)


def _columns(spec: SweepSpec) -> list:
    cols = [spec.axis]
    for q in spec.quantities:
        if q == "rotor_energies":
            cols += [f"eps_{l}" for l in range(spec.n_levels)]
        elif q == "rotor_gap":
            cols.append("gap_01")
        elif q == "factors":
            cols += [f"{n}_{part}" for n in FACTOR_NAMES for part in ("re", "im")]
        elif q == "pair_energies":
            cols += [f"E{n}" for n in range(1, 5)]
        elif q == "pure_concurrences":
            cols += [f"C{n}" for n in range(1, 5)]
        elif q == "thermal_concurrence":
            if spec.axis == "kT_over_B":
                cols.append("C_thermal")
            else:
                cols += [f"C_thermal_kT={t!r}" for t in spec.point(spec.start)["temperatures"]]
    if spec.needs_pair:
        cols += ["degenerate", "label_ambiguous"]
    return cols


def _row(spec: SweepSpec, r: PointResult) -> list:
    row = [r.x]
    pair = r.pair
    for q in spec.quantities:
        if q == "rotor_energies":
            row += list(r.rotor.energies[: spec.n_levels])
        elif q == "rotor_gap":
            row.append(r.rotor.energies[1] - r.rotor.energies[0])
        elif q == "factors":
            for n in FACTOR_NAMES:
                value = getattr(r.factors, n)
                row += [value.real, value.imag]
        elif q == "pair_energies":
            row += [pair.energy(n) for n in range(1, 5)]
        elif q == "pure_concurrences":
            row += [pure_concurrence(pair.state(n)) for n in range(1, 5)]
        elif q == "thermal_concurrence":
            temps = [r.x] if spec.axis == "kT_over_B" else r.params["temperatures"]
            row += [thermal_concurrence(pair, t) for t in temps]
    if spec.needs_pair:
        row += [float(pair.degenerate), float(pair.ambiguous)]
    return row


def sweep_metadata(spec: SweepSpec) -> dict:
    fixed = {k: v for k, v in spec.point(spec.start).items() if k != spec.axis}
    return {
        "artifact": f"planar_dipoles {__version__}",
        "axis": spec.axis,
        "grid": f"{spec.start!r}:{spec.stop!r}:{spec.count}",
        "fixed": ", ".join(f"{k}={v!r}" for k, v in sorted(fixed.items())),
        "quantities": ",".join(spec.quantities),
        "m_max": str(spec.m_max),
        "guard_tol": repr(spec.guard_tol),
        "omega_floor": repr(spec.omega_floor),
        "degeneracy_tol": repr(DEGENERACY_TOL),
        "ambiguity_tol": repr(AMBIGUITY_TOL),
    }


def run_sweep(spec: SweepSpec, workers: int = 1) -> Dataset:
    """One row per grid point, one column per requested scalar.

    Pair-level labels (E1..E4, C1..C4) follow states by overlap continuity from
    ascending-energy order at the first grid point.
    """
    results = solve_grid(spec, workers)
    rows = [_row(spec, r) for r in results]
    if spec.needs_pair and any(r.pair.degenerate for r in results):
        warnings.warn("sweep contains exactly degenerate pair levels; see the 'degenerate' column", DegeneracyWarning)
    return Dataset(_columns(spec), np.array(rows, dtype=float), sweep_metadata(spec))


def evaluate_point(
    fixed: dict,
    quantities,
    m_max: int = DEFAULT_M_MAX,
    n_levels: int = 6,
    guard_tol: float = DEFAULT_GUARD_TOL,
    omega_floor: float = OMEGA_FLOOR,
) -> Dataset:
    """Single-row dataset at one parameter point (no sweep axis)."""
    p = dict(DEFAULT_FIXED)
    p.update(fixed)
    omega = float(_floor_omega(np.array([float(p.pop("omega_over_B"))]), omega_floor)[0])
    spec = SweepSpec(
        "omega_over_B", omega, omega + 1.0, 2, p, tuple(quantities),
        m_max=m_max, n_levels=n_levels, guard_tol=guard_tol, omega_floor=omega_floor,
    )
    row = _row(spec, _evaluate(spec, omega))
    point = spec.point(omega)
    extra = ["coupling_over_B", "theta_t_deg"]
    meta = sweep_metadata(spec)
    meta.pop("grid")
    meta["axis"] = "none"
    meta["fixed"] = ", ".join(f"{k}={v!r}" for k, v in sorted(point.items()))
    return Dataset(
        _columns(spec)[:1] + extra + _columns(spec)[1:],
        np.array([row[:1] + [point[k] for k in extra] + row[1:]], dtype=float),
        meta,
    )


class FeatureResult(NamedTuple):
    axis_value: float
    feature_value: float


def _feature_function(kind, labels):
    if kind == "crossing":
        i, j = labels
        return lambda pair: pair.energy(i) - pair.energy(j)
    if kind == "anticrossing":
        i, j = labels
        return lambda pair: pair.energy(j) - pair.energy(i)
    (n,) = labels
    return lambda pair: pure_concurrence(pair.state(n))


def locate_feature(kind: str, labels, spec: SweepSpec, xtol: float = FEATURE_XTOL) -> FeatureResult:
    """Find a crossing, anticrossing or concurrence minimum along ``spec.axis``.

    The sweep grid is the coarse scan. crossing: zero of E_i - E_j;
    anticrossing: interior minimum of E_j - E_i > 0; concurrence_minimum:
    interior minimum of C of the tracked state. Labels are 1-based and
    tracked from ascending order at the first grid point. Refinement
    re-solves inside the bracketing grid cell and labels by overlap with the
    nearest coarse point.
    """
    if kind not in FEATURE_KINDS:
        raise ValueError(f"unknown feature kind {kind!r}; expected one of {FEATURE_KINDS}")
    labels = (labels,) if isinstance(labels, int) else tuple(int(l) for l in labels)
    if len(labels) != (1 if kind == "concurrence_minimum" else 2) or not all(1 <= l <= 4 for l in labels):
        raise ValueError(f"bad labels {labels!r} for {kind}")
    if spec.axis == "kT_over_B":
        raise ValueError("features are located along omega_over_B, coupling_over_B or theta_t_deg")
    if "pair_energies" not in spec.quantities:
        spec = dataclasses.replace(spec, quantities=("pair_energies",))

    results = solve_grid(spec)
    xs = np.array([r.x for r in results])
    feature = _feature_function(kind, labels)
    values = np.array([feature(r.pair) for r in results])

    def at(x, reference):
        pair = _evaluate(spec, x).pair
        match = track_labels(reference, pair)
        return feature(pair.relabel(match.labels, match.ambiguous))

    if kind == "crossing":
        sign_change = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)
        if sign_change.size == 0:
            raise FeatureNotFound(f"E{labels[0]} - E{labels[1]} keeps its sign on [{spec.start!r}, {spec.stop!r}]")
        k = int(sign_change[0])
        if values[k] == 0.0:
            x_star = xs[k]
        elif values[k + 1] == 0.0:
            x_star = xs[k + 1]
        else:
            ref = results[k].pair
            x_star = optimize.brentq(lambda x: at(x, ref), xs[k], xs[k + 1], xtol=xtol)
        pair = _evaluate(spec, x_star).pair
        nearest = results[k].pair
        pair = pair.relabel(track_labels(nearest, pair).labels)
        return FeatureResult(float(x_star), pair.energy(labels[0]))

    k = int(np.argmin(values))
    if k == 0 or k == len(xs) - 1:
        raise FeatureNotFound(f"{kind} minimum lies on the sweep boundary ({spec.axis}={xs[k]!r})")
    if kind == "anticrossing" and values[k] <= 0:
        raise FeatureNotFound(f"E{labels[1]} - E{labels[0]} reaches {values[k]!r} <= 0: levels cross")
    ref = results[k].pair
    res = optimize.minimize_scalar(
        lambda x: at(x, ref), bounds=(xs[k - 1], xs[k + 1]), method="bounded", options={"xatol": xtol}
    )
    x_star, f_star = float(res.x), float(res.fun)
    if values[k] < f_star:
        x_star, f_star = float(xs[k]), float(values[k])
    return FeatureResult(x_star, f_star)


# figure data -----------------------------------------------------------------


def _sweep(axis, start, stop, fixed, quantities, n_points, m_max, **kw):
    spec = SweepSpec(axis, start, stop, n_points, fixed, tuple(quantities), m_max=m_max, **kw)
    return run_sweep(spec)


def _select(ds: Dataset, columns, extra_meta=None) -> Dataset:
    meta = dict(ds.metadata)
    meta.update(extra_meta or {})
    return Dataset(list(columns), np.column_stack([ds[c] for c in columns]), meta)


def _factor(ds: Dataset, name: str) -> np.ndarray:
    return ds[f"{name}_re"] + 1j * ds[f"{name}_im"]


def _factor_table(axis, x, columns, meta) -> Dataset:
    names = list(columns)
    return Dataset([axis] + names, np.column_stack([x] + [columns[n] for n in names]), meta)


def _figure2(n_points, m_max, temperatures):
    energies = _sweep("omega_over_B", 0.0, 10.0, {"theta_t_deg": 0.0}, ["rotor_energies", "rotor_gap"], n_points, m_max)
    rotor = solve_rotor(RotorParams(2.0, 0.0, m_max))
    theta = np.linspace(0.0, 2 * np.pi, 512, endpoint=False)
    density = Dataset(
        ["theta_rad", "density_0", "density_1"],
        np.column_stack([theta, probability_density(rotor, 0, theta), probability_density(rotor, 1, theta)]),
        {"artifact": f"planar_dipoles {__version__}", "fixed": "omega_over_B=2.0, theta_t_deg=0.0", "m_max": str(m_max)},
    )
    return {
        "a": _select(energies, ["omega_over_B"] + [f"eps_{l}" for l in range(6)]),
        "b": _select(energies, ["omega_over_B", "gap_01"]),
        "c": density,
    }


def _figure3(n_points, m_max, temperatures):
    tilt = _sweep("theta_t_deg", 0.0, 180.0, {"omega_over_B": 2.0}, ["factors"], n_points, m_max)
    t = tilt["theta_t_deg"]
    a = _factor_table("theta_t_deg", t, {f"abs_{n}": np.abs(_factor(tilt, n)) for n in ("c0", "c1", "cx")}, tilt.metadata)
    b = _factor_table("theta_t_deg", t, {f"abs_{n}": np.abs(_factor(tilt, n)) for n in ("s0", "s1", "sx")}, tilt.metadata)

    par = _sweep("omega_over_B", 0.01, 10.0, {"theta_t_deg": 0.0}, ["factors"], n_points, m_max)
    perp = _sweep("omega_over_B", 0.01, 10.0, {"theta_t_deg": 90.0}, ["factors"], n_points, m_max)
    w = par["omega_over_B"]
    meta = {**par.metadata, "fixed": "theta_t_deg=0.0 (c0, c1, sx) and 90.0 (s0, s1, cx); squares are Re of the gauge-fixed complex square"}
    c = _factor_table("omega_over_B", w, {
        "c0_sq_0deg": (_factor(par, "c0") ** 2).real,
        "c1_sq_0deg": (_factor(par, "c1") ** 2).real,
        "cx_sq_90deg": (_factor(perp, "cx") ** 2).real,
    }, meta)
    d = _factor_table("omega_over_B", w, {
        "s0_sq_90deg": (_factor(perp, "s0") ** 2).real,
        "s1_sq_90deg": (_factor(perp, "s1") ** 2).real,
        "sx_sq_0deg": (_factor(par, "sx") ** 2).real,
    }, meta)
    return {"a": a, "b": b, "c": c, "d": d}


def _energy_concurrence_panels(axis, start, stop, fixed_common, n_points, m_max):
    panels = {}
    for (e_name, c_name), tilt in ((("a", "b"), 0.0), (("c", "d"), 90.0)):
        ds = _sweep(axis, start, stop, {**fixed_common, "theta_t_deg": tilt}, ["pair_energies", "pure_concurrences"], n_points, m_max)
        panels[e_name] = _select(ds, [axis, "E1", "E2", "E3", "E4", "degenerate", "label_ambiguous"])
        panels[c_name] = _select(ds, [axis, "C1", "C2", "C3", "C4", "degenerate", "label_ambiguous"])
        panels[f"{e_name}_inset"] = Dataset([axis, "E2_minus_E1"], np.column_stack([ds[axis], ds["E2"] - ds["E1"]]), ds.metadata)
    return panels


def _figure4(n_points, m_max, temperatures):
    return _energy_concurrence_panels("omega_over_B", 0.01, 4.0, {"coupling_over_B": 0.8}, n_points, m_max)


def _figure5(n_points, m_max, temperatures):
    panels = _energy_concurrence_panels("coupling_over_B", 0.0, 5.0, {"omega_over_B": 2.0}, n_points, m_max)
    return {k: v for k, v in panels.items() if not k.endswith("_inset")}


def _figure6(n_points, m_max, temperatures):
    ds = _sweep("theta_t_deg", 0.0, 90.0, {"omega_over_B": 2.0, "coupling_over_B": 0.8}, ["pair_energies", "pure_concurrences"], n_points, m_max)
    return {
        "a": _select(ds, ["theta_t_deg", "E1", "E2", "E3", "E4", "degenerate", "label_ambiguous"]),
        "b": _select(ds, ["theta_t_deg", "C1", "C2", "C3", "C4", "degenerate", "label_ambiguous"]),
    }


def _figure7(n_points, m_max, temperatures):
    temps = tuple(float(t) for t in temperatures)
    panels = {}
    layout = {
        "a": ("omega_over_B", 0.01, 4.0, {"coupling_over_B": 0.8, "theta_t_deg": 0.0}),
        "b": ("omega_over_B", 0.01, 4.0, {"coupling_over_B": 0.8, "theta_t_deg": 90.0}),
        "c": ("coupling_over_B", 0.0, 5.0, {"omega_over_B": 2.0, "theta_t_deg": 0.0}),
        "d": ("coupling_over_B", 0.0, 5.0, {"omega_over_B": 2.0, "theta_t_deg": 90.0}),
    }
    for name, (axis, start, stop, fixed) in layout.items():
        panels[name] = _sweep(axis, start, stop, {**fixed, "temperatures": temps}, ["thermal_concurrence"], n_points, m_max)
    return panels


_FIGURES = {2: _figure2, 3: _figure3, 4: _figure4, 5: _figure5, 6: _figure6, 7: _figure7}


def figure(n: int, n_points: int = FIGURE_POINTS, m_max: int = DEFAULT_M_MAX, temperatures=DEFAULT_TEMPERATURES) -> dict:
    """Datasets behind figure ``n`` (2..7), keyed by panel name."""
    if n not in _FIGURES:
        raise ValueError(f"figure number must be in 2..7, got {n!r}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return _FIGURES[n](n_points, m_max, temperatures)
