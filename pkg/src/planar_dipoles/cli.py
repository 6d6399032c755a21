"""Command-line front end.

Exit codes: 0 success, 2 invalid arguments, 3 guard rejection (degenerate
two-level truncation), 4 feature not found.
"""

import argparse
import datetime
import os
import sys
from pathlib import Path

from planar_dipoles import __version__
from planar_dipoles.dataset import Dataset
from planar_dipoles.errors import FeatureNotFound, GuardRejected
from planar_dipoles.rotor import DEFAULT_GUARD_TOL, DEFAULT_M_MAX
from planar_dipoles.sweep import (
    AXES,
    DEFAULT_TEMPERATURES,
    FEATURE_KINDS,
    FIGURE_POINTS,
    QUANTITIES,
    SweepSpec,
    evaluate_point,
    figure,
    locate_feature,
    run_sweep,
)
from planar_dipoles.units import PhysicalParams, convert_units

OUTPUT_DIR_ENV = "PLANAR_DIPOLES_OUTPUT_DIR"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_NOT_FOUND = 4

DEFAULT_QUANTITIES = {
    "spectrum": ("rotor_energies", "rotor_gap"),
    "factors": ("factors",),
    "pair": ("pair_energies",),
    "concurrence": ("pure_concurrences",),
    "thermal": ("thermal_concurrence",),
}


def _sweep_arg(text):
    parts = text.split(":")
    if len(parts) != 4 or parts[0] not in AXES:
        raise argparse.ArgumentTypeError(f"expected <axis>:<start>:<stop>:<count> with axis in {AXES}, got {text!r}")
    try:
        return parts[0], float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _quantities_arg(text):
    names = tuple(q.strip() for q in text.split(",") if q.strip())
    bad = [q for q in names if q not in QUANTITIES]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown quantities {bad}; choose from {', '.join(QUANTITIES)}")
    return names


def _labels_arg(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated level labels, got {text!r}") from exc


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters")
    g.add_argument("--omega", type=float, default=2.0, help="dipole-field strength ω/B (default 2.0)")
    g.add_argument("--coupling", type=float, default=0.8, help="dipole-dipole strength Ω/B (default 0.8)")
    g.add_argument("--theta-t", type=float, default=0.0, help="field tilt angle in degrees (default 0)")
    g.add_argument("--temperature", type=float, action="append", help="kT/B; repeatable (default 0.1 0.2 0.5 1.0)")
    g.add_argument("--m-max", type=int, default=DEFAULT_M_MAX, help="rotor basis truncation |m| <= m_max")
    g.add_argument("--guard-tol", type=float, default=DEFAULT_GUARD_TOL, help="relative degeneracy tolerance")
    g.add_argument("--sweep", type=_sweep_arg, help="<axis>:<start>:<stop>:<count>")
    g.add_argument("--quantities", type=_quantities_arg, help=f"comma list from {', '.join(QUANTITIES)}")
    o = common.add_argument_group("output")
    o.add_argument("--output", help="output file (figure: directory); default stdout")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.add_argument("--timestamp", action="store_true", help="add a generation-time comment line")
    o.add_argument("--workers", type=int, default=1, help="threads for grid evaluation")
    return common


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="planar-dipoles",
        description="Spectra and entanglement of two planar polar molecules in a tilted static field.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectrum", "single-rotor energies and ground/first-excited gap"),
        ("factors", "cos/sin dipole matrix elements between the lowest two rotor states"),
        ("pair", "two-molecule energies E1..E4"),
        ("concurrence", "pure-state concurrences of the four eigenstates"),
        ("thermal", "concurrence of the thermal state"),
    ):
        sub.add_parser(name, parents=[common], help=help_text)
    fig = sub.add_parser("figure", parents=[common], help="write the datasets behind a figure, one file per panel")
    fig.add_argument("n", type=int, choices=range(2, 8), metavar="N", help="figure number 2..7")
    fig.add_argument("--points", type=int, default=FIGURE_POINTS, help="grid points per axis")
    loc = sub.add_parser("locate", parents=[common], help="locate a crossing, anticrossing or concurrence minimum")
    loc.add_argument("kind", choices=FEATURE_KINDS)
    loc.add_argument("--levels", type=_labels_arg, help="level labels, e.g. 1,2 (crossing/anticrossing)")
    loc.add_argument("--state", type=int, help="state label (concurrence_minimum)")
    conv = sub.add_parser("convert", help="laboratory units to ω/B and Ω/B")
    conv.add_argument("--dipole", type=float, required=True, help="dipole moment [D]")
    conv.add_argument("--field", type=float, required=True, help="field strength [kV/cm]")
    conv.add_argument("--separation", type=float, required=True, help="intermolecular distance [nm]")
    conv.add_argument("--rotational-constant", type=float, required=True, help="B [cm^-1]")
    conv.add_argument("--output")
    conv.add_argument("--format", choices=("csv", "json"), default="csv")
    conv.add_argument("--timestamp", action="store_true")
    return parser


def _fixed(args, axis=None):
    fixed = {"omega_over_B": args.omega, "coupling_over_B": args.coupling, "theta_t_deg": args.theta_t}
    fixed.pop(axis, None)
    fixed["temperatures"] = tuple(args.temperature) if args.temperature else DEFAULT_TEMPERATURES
    return fixed


def _spec(args, quantities):
    axis, start, stop, count = args.sweep
    return SweepSpec(
        axis, start, stop, count, _fixed(args, axis), quantities,
        output=args.output, m_max=args.m_max, guard_tol=args.guard_tol,
    )


def _comments(args):
    if getattr(args, "timestamp", False):
        return [f"generated: {datetime.datetime.now(datetime.timezone.utc).isoformat()}"]
    return []


def _emit(ds: Dataset, args, stdout):
    text = ds.dumps(args.format, _comments(args))
    if args.output:
        Path(args.output).write_text(text)
    else:
        stdout.write(text)


def _run_quantities(args, stdout):
    quantities = args.quantities or DEFAULT_QUANTITIES[args.command]
    if args.sweep:
        ds = run_sweep(_spec(args, quantities), workers=args.workers)
    else:
        ds = evaluate_point(_fixed(args), quantities, m_max=args.m_max, guard_tol=args.guard_tol)
    _emit(ds, args, stdout)


def _run_figure(args, stdout):
    temps = tuple(args.temperature) if args.temperature else DEFAULT_TEMPERATURES
    panels = figure(args.n, n_points=args.points, m_max=args.m_max, temperatures=temps)
    outdir = Path(args.output or os.environ.get(OUTPUT_DIR_ENV, "."))
    outdir.mkdir(parents=True, exist_ok=True)
    for panel, ds in panels.items():
        path = outdir / f"fig{args.n}{panel}.{args.format}"
        path.write_text(ds.dumps(args.format, _comments(args)))
        stdout.write(f"{path}\n")


def _run_locate(args, stdout):
    if args.sweep is None:
        raise ValueError("locate needs --sweep <axis>:<start>:<stop>:<count>")
    if args.kind == "concurrence_minimum":
        if args.state is None:
            raise ValueError("concurrence_minimum needs --state")
        labels = (args.state,)
    else:
        if args.levels is None:
            raise ValueError(f"{args.kind} needs --levels i,j")
        labels = args.levels
    spec = _spec(args, ("pair_energies",))
    result = locate_feature(args.kind, labels, spec)
    meta = {
        "artifact": f"planar_dipoles {__version__}",
        "kind": args.kind,
        "labels": ",".join(str(l) for l in labels),
        "scan": f"{spec.axis}={spec.start!r}:{spec.stop!r}:{spec.count}",
        "fixed": ", ".join(f"{k}={v!r}" for k, v in sorted(spec.fixed.items())),
        "m_max": str(spec.m_max),
    }
    _emit(Dataset([spec.axis, "feature_value"], [[result.axis_value, result.feature_value]], meta), args, stdout)


def _run_convert(args, stdout):
    phys = PhysicalParams(args.dipole, args.field, args.separation, args.rotational_constant)
    omega, coupling = convert_units(phys)
    meta = {
        "artifact": f"planar_dipoles {__version__}",
        "inputs": f"dipole_D={args.dipole!r}, field_kV_per_cm={args.field!r}, "
        f"separation_nm={args.separation!r}, B_per_cm={args.rotational_constant!r}",
        "constants": "scipy.constants",
    }
    _emit(Dataset(["omega_over_B", "coupling_over_B"], [[omega, coupling]], meta), args, stdout)


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "figure":
            _run_figure(args, stdout)
        elif args.command == "locate":
            _run_locate(args, stdout)
        elif args.command == "convert":
            _run_convert(args, stdout)
        else:
            _run_quantities(args, stdout)
    except GuardRejected as exc:
        stderr.write(f"error: two-level truncation rejected: {exc}\n")
        return EXIT_GUARD
    except FeatureNotFound as exc:
        stderr.write(f"error: feature not found: {exc}\n")
        return EXIT_NOT_FOUND
    except ValueError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
