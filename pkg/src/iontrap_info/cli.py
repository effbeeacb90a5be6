"""Command-line interface.

Exit codes: 0 success, 1 domain error, 2 unconverged numerics present
(rows are still written, with an ``unconverged`` flag).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np
from scipy import constants

from .eigenstates import Eigenstate, fourier_check, momentum_density, position_density
from .figures import FIGURE_IDS, emit_figure_data
from .measures import CLOSED, QUADRATURE
from .oscillator import DomainError, TrapConfig, effective_oscillator, energy_level
from .sweep import OUTPUTS, SweepSpec, export, profiles_to_csv, run_sweep, table1_spec
from .truncation import validate_truncation

EXIT_OK, EXIT_DOMAIN, EXIT_UNCONVERGED = 0, 1, 2
_METHODS = {"closed": (CLOSED,), "quadrature": (QUADRATURE,), "both": (CLOSED, QUADRATURE)}


def _floats(text: str) -> list[float]:
    """Comma list ``1,2,3`` or range ``start:stop:count`` (inclusive)."""
    if ":" in text:
        start, stop, count = text.split(":")
        return np.linspace(float(start), float(stop), int(count)).tolist()
    return [float(v) for v in text.split(",") if v]


def _ints(text: str) -> list[int]:
    """Comma list ``0,1,2`` or inclusive range ``0-3``."""
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--units", choices=("natural", "si"), default="natural",
                   help="natural: m = hbar = a = 1; si: hbar from CODATA, --mass and --period required")
    p.add_argument("--mass", type=float, default=None)
    p.add_argument("--period", type=float, default=None, help="lattice period a")
    p.add_argument("--hbar", type=float, default=None)
    p.add_argument("--method", choices=tuple(_METHODS), default="closed")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--tol", type=float, default=1e-10, help="adaptive quadrature tolerance")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="iontrap-info", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="energy ladder E_n")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--levels", type=int, default=6)

    p = sub.add_parser("state", parents=[common], help="sampled density of one eigenstate")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--space", choices=("x", "p"), default="x")
    p.add_argument("--half-width", type=float, default=6.0, help="in oscillator lengths")
    p.add_argument("--points", type=int, default=121)
    p.add_argument("--fourier-check", action="store_true",
                   help="add the directly Fourier-transformed momentum density (space p only)")

    p = sub.add_parser("measures", parents=[common], help="information measures at one or more points")
    p.add_argument("--omega", type=_floats, default=[1.0])
    p.add_argument("--kappa", type=_floats, default=[0.0])
    p.add_argument("--n", type=_ints, default=[0])

    p = sub.add_parser("sweep", parents=[common], help="grid sweep over omega, kappa, n")
    p.add_argument("--omega", type=_floats, required=True)
    p.add_argument("--kappa", type=_floats, required=True)
    p.add_argument("--n", type=_ints, default=[0])
    p.add_argument("--outputs", default=",".join(OUTPUTS[:-1]),
                   help=f"comma subset of {','.join(OUTPUTS)}")
    p.add_argument("--density-grid", nargs=2, type=float, metavar=("HALF_WIDTH", "POINTS"),
                   default=None, help="needed with density-profiles; half width in oscillator lengths")

    p = sub.add_parser("table1", parents=[common], help="regenerate the reference table with errata")
    p.add_argument("--block", choices=("kappa", "omega", "both"), default="both")

    p = sub.add_parser("figure", parents=[common], help="plot-ready data for one figure")
    p.add_argument("figure_id", choices=FIGURE_IDS)
    p.add_argument("--omega-range", nargs=3, type=float, metavar=("LO", "HI", "COUNT"), default=None)
    p.add_argument("--kappa-range", nargs=3, type=float, metavar=("LO", "HI", "COUNT"), default=None)

    p = sub.add_parser("validate-truncation", parents=[common],
                       help="finite-difference comparison of full and truncated potentials")
    p.add_argument("--omega", type=float, default=2.0)
    p.add_argument("--kappa", type=float, default=0.2)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--points", type=int, default=4001)
    return parser


def _units(args) -> dict:
    if args.units == "si":
        if args.mass is None or args.period is None:
            raise DomainError("units", "si", "--mass (kg) and --period (m) are required")
        hbar = args.hbar if args.hbar is not None else constants.hbar
        return {"mass": args.mass, "period": args.period, "hbar": hbar}
    return {"mass": 1.0 if args.mass is None else args.mass,
            "period": 1.0 if args.period is None else args.period,
            "hbar": 1.0 if args.hbar is None else args.hbar}


def _table_text(columns: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(columns, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = list(columns)
    writer.writerow(names)
    for values in zip(*(columns[n] for n in names)):
        writer.writerow([f"{v:.9g}" if isinstance(v, float) else v for v in values])
    return buf.getvalue()


def _emit(text: str | bytes, out) -> None:
    if isinstance(text, str):
        text = text.encode()
    if out is None:
        sys.stdout.buffer.write(text)
        sys.stdout.flush()
        return
    try:
        with open(out, "wb") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror or exc}") from exc


def _cmd_spectrum(args, units):
    eff = effective_oscillator(TrapConfig(args.omega, args.kappa, **units))
    levels = [energy_level(eff, n) for n in range(args.levels)]
    cols = {"n": list(range(args.levels)), "E_n": levels,
            "spacing": [b - a for a, b in zip(levels, levels[1:])] + [float("nan")]}
    _emit(_table_text(cols, args.format), args.out)
    return EXIT_OK


def _cmd_state(args, units):
    state = Eigenstate(effective_oscillator(TrapConfig(args.omega, args.kappa, **units)), args.n)
    beta = state.beta_x if args.space == "x" else state.beta_p
    axis = np.linspace(-args.half_width, args.half_width, args.points) / np.sqrt(beta)
    cols = {args.space: axis.tolist()}
    converged = True
    if args.space == "x":
        cols["psi"] = state.psi(axis).tolist()
        cols["rho"] = position_density(state, axis).tolist()
    else:
        cols["rho"] = momentum_density(state, axis).tolist()
        if args.fourier_check:
            rho_ft, converged = fourier_check(state, axis, tol=args.tol)
            cols["rho_fourier"] = rho_ft.tolist()
    _emit(_table_text(cols, args.format), args.out)
    return EXIT_OK if converged else EXIT_UNCONVERGED


def _run(spec: SweepSpec, args):
    result = run_sweep(spec)
    _emit(export(result, args.format), args.out)
    if result.profiles and args.format == "csv":
        if args.out is None:
            sys.stdout.write(profiles_to_csv(result))
        else:
            _emit(profiles_to_csv(result), f"{args.out}.profiles.csv")
    for flag in result.errata_flags:
        print(f"erratum: {flag.describe()}", file=sys.stderr)
    return EXIT_UNCONVERGED if result.unconverged else EXIT_OK


def _cmd_measures(args, units):
    spec = SweepSpec(args.omega, args.kappa, args.n, methods=_METHODS[args.method],
                     export_format=args.format, tol=args.tol, **units)
    return _run(spec, args)


def _cmd_sweep(args, units):
    outputs = tuple(o for o in args.outputs.split(",") if o)
    grid = tuple(args.density_grid) if args.density_grid else None
    spec = SweepSpec(args.omega, args.kappa, args.n, methods=_METHODS[args.method], outputs=outputs,
                     export_format=args.format, density_grid=grid, tol=args.tol, **units)
    return _run(spec, args)


def _cmd_table1(args, units):
    if args.units != "natural" or any(v != 1.0 for v in units.values()):
        raise DomainError("units", args.units, "the reference table is defined in natural units")
    blocks = ("kappa", "omega") if args.block == "both" else (args.block,)
    specs = [table1_spec(b, _METHODS[args.method]) for b in blocks]
    if len(specs) == 1:
        return _run(specs[0], args)
    results = [run_sweep(s) for s in specs]
    merged = type(results[0])(
        rows=sum((r.rows for r in results), ()),
        provenance={**results[0].provenance,
                    "config_hash": [r.provenance["config_hash"] for r in results]},
        errata_flags=sum((r.errata_flags for r in results), ()),
    )
    _emit(export(merged, args.format), args.out)
    for flag in merged.errata_flags:
        print(f"erratum: {flag.describe()}", file=sys.stderr)
    return EXIT_UNCONVERGED if merged.unconverged else EXIT_OK


def _cmd_figure(args, units):
    params = dict(units)
    if args.figure_id in ("fig6", "fig7", "fig8"):
        if args.omega_range:
            params["omega_range"] = tuple(args.omega_range)
        if args.kappa_range:
            params["kappa_range"] = tuple(args.kappa_range)
        params["method"] = _METHODS[args.method][-1]
    data = emit_figure_data(args.figure_id, **params)
    _emit(data.to_json() if args.format == "json" else data.to_csv(), args.out)
    return EXIT_OK


def _cmd_validate(args, units):
    cmp = validate_truncation(TrapConfig(args.omega, args.kappa, **units), args.levels, args.points)
    rows = list(cmp.rows())
    cols = {key: [r[key] for r in rows] for key in rows[0]}
    if args.format == "json":
        payload = {"levels": rows, "ground_density_l2_error": cmp.ground_density_l2_error,
                   "regime_ratio": cmp.regime_ratio, "converged": cmp.converged}
        _emit(json.dumps(payload, indent=1) + "\n", args.out)
    else:
        text = (f"# regime_ratio={cmp.regime_ratio:.9g} "
                f"ground_density_l2_error={cmp.ground_density_l2_error:.9g}\n")
        _emit(text + _table_text(cols, "csv"), args.out)
    return EXIT_OK if cmp.converged else EXIT_UNCONVERGED


_COMMANDS = {
    "spectrum": _cmd_spectrum, "state": _cmd_state, "measures": _cmd_measures,
    "sweep": _cmd_sweep, "table1": _cmd_table1, "figure": _cmd_figure,
    "validate-truncation": _cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        units = _units(args)
        return _COMMANDS[args.command](args, units)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
