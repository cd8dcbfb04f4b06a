"""Command-line front end.

Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 4 I/O failure,
5 inverse problem without solution.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .analytic import diamagnetic_shift, field_point, transverse_energy
from .constants import MEV, NM
from .core import Parabolic
from .errors import ConfigError, DomainError, NoSolutionError, NumericalError
from .occupancy import depopulation_field_closed_form
from .schrodinger import dispersion as numeric_dispersion
from .schrodinger import locate_minima
from .serialize import dispersion_csv, fmt, sweep_csv, sweep_json, to_json
from .sweep import design_drive, design_width, device_N1, sweep

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO, EXIT_NO_SOLUTION = 0, 2, 3, 4, 5
CLOSED_FORM_TOL = 1e-6  # T


class CommandFailed(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CommandFailed(EXIT_IO, f"cannot write {path}: {exc}") from exc


def _kx_grid(values):
    """--kx-range KMAX N (symmetric) or MIN MAX N."""
    try:
        if len(values) == 2:
            lo, hi, n = -float(values[0]), float(values[0]), int(values[1])
        elif len(values) == 3:
            lo, hi, n = float(values[0]), float(values[1]), int(values[2])
        else:
            raise ValueError
    except ValueError:
        raise ConfigError("--kx-range takes KMAX N or MIN MAX N") from None
    if n < 2 or not hi > lo:
        raise ConfigError("--kx-range needs MIN < MAX and N >= 2")
    return np.linspace(lo, hi, n)


def cmd_subbands(args, cfg):
    device = cfg.device(F=0.0)
    ladder = device.ladder(args.B)
    fp = device.field_point(args.B)
    shown = max(device.reference.occupied_count, 1)
    lines = [
        f"B = {fmt(args.B)} T",
        f"E_F = {ladder.fermi_energy / MEV:.6f} meV",
        f"occupied subbands = {ladder.occupied_count}",
        "n,E_n_meV,dE_n_meV,N_n_per_m2",
    ]
    for n in range(shown):
        lines.append(
            f"{n},{transverse_energy(n, 0.0, fp) / MEV:.6f},{diamagnetic_shift(n, fp) / MEV:.6f},"
            f"{fmt(ladder.densities[n])}"
        )
    sys.stdout.write("\n".join(lines) + "\n")
    if args.dispersion_csv:
        kx = _kx_grid(args.kx_range)
        energies = np.array([[transverse_energy(n, k, fp) for n in range(shown)] for k in kx])
        _emit(dispersion_csv(kx, energies), args.dispersion_csv)


def cmd_depopulate(args, cfg):
    device = cfg.device(F=0.0)
    events = device.events
    ref = device.reference
    lines = [f"occupied subbands at B = 0: {ref.occupied_count}"]
    for j, b in enumerate(events):
        emptied = ref.occupied_count - 1 - j
        lines.append(f"B{emptied} = {b:.2f} T ({fmt(b)} T)")
    if not events:
        lines.append("no depopulation fields (single occupied subband)")
    status = EXIT_OK
    if ref.occupied_count == 2:
        closed = depopulation_field_closed_form(ref.densities[1], device.confinement.omega0, device.material)
        diff = abs(closed - events[0])
        lines.append(f"closed form B1 = {closed:.2f} T ({fmt(closed)} T), |difference| = {diff:.3e} T")
        if diff > CLOSED_FORM_TOL:
            lines.append(f"ERROR: numeric and closed-form B1 disagree by more than {CLOSED_FORM_TOL} T")
            status = EXIT_NUMERIC
    sys.stdout.write("\n".join(lines) + "\n")
    return status


def _plot_data(records, device, n_sub):
    series = {
        "B_T": [r.B for r in records],
        "n_occupied": [r.occupied_count for r in records],
        "theta_deg": [r.theta for r in records],
        "frac_C": [r.detector_fractions["C"] for r in records],
        "frac_D1": [r.detector_fractions["D1"] for r in records],
        "frac_D2": [r.detector_fractions["D2"] for r in records],
        "resistance_proxy": [r.resistance_proxy for r in records],
    }
    panels = []
    fields = [0.0] + list(device.events)
    for b in fields:
        fp = device.field_point(b)
        kmax = 2.0 * max(1e7, max((abs(beam.kx) for r in records for beam in r.beams.beams), default=0.0))
        kx = np.linspace(-kmax, kmax, 101)
        panel = {"B_T": b, "kx_per_m": kx.tolist()}
        for n in range(max(n_sub, 2)):
            panel[f"E{n}_meV"] = [transverse_energy(n, k, fp) / MEV for k in kx]
        panels.append(panel)
    return {"sweep": series, "dispersion_panels": panels}


def cmd_sweep(args, cfg):
    device = cfg.device()
    workers = args.workers or cfg.workers
    records = sweep(args.B_range[0], args.B_range[1], args.steps, device, workers=workers)
    n_sub = max(device.reference.occupied_count, 1)
    text = sweep_csv(records, n_sub) if args.out == "csv" else sweep_json(records, n_sub, device.events)
    _emit(text, args.output)
    if args.plot_data:
        _emit(to_json(_plot_data(records, device, n_sub)) + "\n", args.plot_data)


def cmd_design(args, cfg):
    if args.target_theta_deg is not None:
        device = cfg.device(F=0.0)
        F, residual = design_drive(args.target_theta_deg, device)
        sys.stdout.write(
            f"F = {F:.2f} V/m ({fmt(F)} V/m)\n"
            f"B1 = {fmt(device.events[0])} T\n"
            f"forward theta residual = {residual:.3e} deg\n"
        )
    else:
        device = cfg.device(F=0.0)
        z0, residual = design_width(args.target_B1_T, device)
        sys.stdout.write(
            f"z0 = {z0 / NM:.4f} nm ({fmt(z0 / NM)} nm)\n"
            f"N1 = {fmt(device_N1(device))} per_m2\n"
            f"forward B1 residual = {residual:.3e} T\n"
        )


def cmd_dispersion(args, cfg):
    kx = _kx_grid(args.kx_range)
    parabolic = isinstance(cfg.confinement, Parabolic)
    if (args.solver == "analytic" or args.compare) and not parabolic:
        raise ConfigError("analytic solver needs parabolic confinement; use --solver numeric", "confinement.type")

    def analytic():
        fp = field_point(args.B, cfg.material, cfg.confinement)
        return np.array([[transverse_energy(n, k, fp) for n in range(args.bands)] for k in kx])

    if args.solver == "numeric":
        curve = numeric_dispersion(kx, args.B, cfg.confinement, cfg.material, cfg.grid(), args.bands,
                                   workers=args.workers or cfg.workers)
        energies, minima, tol = curve.energies, curve.minima_kx, curve.interpolation_tolerance
        for w in curve.warnings:
            sys.stderr.write(f"warning: {w}\n")
    else:
        energies = analytic()
        minima = locate_minima(kx, energies)
        tol = 1e-3 * float(np.min(np.diff(kx)))
    _emit(dispersion_csv(kx, energies), args.output)
    sys.stderr.write("minima_kx_per_m = " + ",".join(fmt(m) for m in minima) + "\n")
    sys.stderr.write(f"interpolation_tolerance_per_m = {fmt(tol)}\n")
    if args.compare:
        other = analytic() if args.solver == "numeric" else numeric_dispersion(
            kx, args.B, cfg.confinement, cfg.material, cfg.grid(), args.bands).energies
        dev = float(np.max(np.abs(energies - other) / np.abs(other)))
        sys.stderr.write(f"max_relative_deviation = {dev:.3e}\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="momentum-jumps", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("subbands", help="subband energies, shifts and densities at one field")
    s.add_argument("config")
    s.add_argument("--B", type=float, default=0.0, help="in-plane field, T")
    s.add_argument("--dispersion-csv", metavar="PATH")
    s.add_argument("--kx-range", nargs="+", metavar="V", default=["1e8", "201"],
                   help="KMAX N for [-KMAX, KMAX], or MIN MAX N (per m)")
    s.set_defaults(func=cmd_subbands)

    s = sub.add_parser("depopulate", help="fields at which subbands empty")
    s.add_argument("config")
    s.set_defaults(func=cmd_depopulate)

    s = sub.add_parser("sweep", help="B-field sweep with beams and detector currents")
    s.add_argument("config")
    s.add_argument("--B-range", nargs=2, type=float, metavar=("START", "END"), default=[0.0, 8.0])
    s.add_argument("--steps", type=int, default=81)
    s.add_argument("--out", choices=["csv", "json"], default="csv")
    s.add_argument("--output", metavar="PATH", help="default: stdout")
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--plot-data", metavar="PATH", help="write binned series for plotting as JSON")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("design", help="solve for the drive field or the well width")
    s.add_argument("config")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--target-theta-deg", type=float)
    g.add_argument("--target-B1-T", type=float)
    s.set_defaults(func=cmd_design)

    s = sub.add_parser("dispersion", help="subband dispersion E_n(kx) as CSV")
    s.add_argument("config")
    s.add_argument("--B", type=float, default=0.0)
    s.add_argument("--kx-range", nargs="+", metavar="V", default=["1e8", "41"],
                   help="KMAX N for [-KMAX, KMAX], or MIN MAX N (per m)")
    s.add_argument("--bands", type=int, default=3)
    s.add_argument("--solver", choices=["analytic", "numeric"], default="numeric")
    s.add_argument("--compare", action="store_true", help="report max relative deviation between solvers")
    s.add_argument("--output", metavar="PATH")
    s.add_argument("--workers", type=int, default=None)
    s.set_defaults(func=cmd_dispersion)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = cfgmod.load(args.config)
    except OSError as exc:
        sys.stderr.write(f"error: cannot read config: {exc}\n")
        return EXIT_IO
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    try:
        status = args.func(args, cfg)
    except CommandFailed as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except (ConfigError, DomainError) as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except NoSolutionError as exc:
        sys.stderr.write(f"no solution: {exc}\n")
        return EXIT_NO_SOLUTION
    except NumericalError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        sys.stderr.write(f"I/O failure: {exc}\n")
        return EXIT_IO
    return status or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
