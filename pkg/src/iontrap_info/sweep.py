"""Parameter sweeps over (omega, kappa, n) and their CSV/JSON serialization."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from . import __version__
from .eigenstates import Eigenstate, momentum_density, position_density
from .measures import CLOSED, QUADRATURE, MeasureSet, compute_measures, entropic_bound
from .oscillator import DomainError, TrapConfig, effective_oscillator, energy_level
from .table1 import ErratumFlag, check_row

METHODS = (CLOSED, QUADRATURE)
OUTPUTS = ("fisher", "entropy", "moments", "complexity", "energy", "density-profiles")
FORMATS = ("csv", "json")
CSV_HEADER = ("omega", "kappa", "n", "method", "I_x", "I_p", "IxIp", "x2", "p2", "dxdp",
              "S_x", "S_p", "J_x", "J_p", "P_x", "P_p", "E_n", "flags")

_OUTPUT_FIELDS = {
    "fisher": ("I_x", "I_p"),
    "entropy": ("S_x", "S_p"),
    "moments": ("x2_mean", "p2_mean", "uncertainty"),
    "complexity": ("J_x", "J_p", "P_x", "P_p"),
}
_INVARIANT_RTOL = 1e-6


@dataclass(frozen=True)
class SweepSpec:
    omega_values: tuple
    kappa_values: tuple
    n_values: tuple
    methods: tuple = (CLOSED,)
    outputs: tuple = OUTPUTS[:-1]
    export_format: str = "csv"
    density_grid: tuple | None = None
    mass: float = 1.0
    hbar: float = 1.0
    period: float = 1.0
    tol: float = 1e-10

    def __post_init__(self):
        for name in ("omega_values", "kappa_values", "n_values", "methods", "outputs"):
            value = tuple(getattr(self, name))
            object.__setattr__(self, name, value)
            if not value:
                raise DomainError(name, value, "must be non-empty")
        object.__setattr__(self, "omega_values", tuple(float(w) for w in self.omega_values))
        object.__setattr__(self, "kappa_values", tuple(float(k) for k in self.kappa_values))
        for w in self.omega_values:
            for k in self.kappa_values:
                self.config(w, k)
        for n in self.n_values:
            if int(n) != n or n < 0:
                raise DomainError("n", n, "quantum numbers must be non-negative integers")
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise DomainError("methods", bad, f"choose from {METHODS}")
        bad = [o for o in self.outputs if o not in OUTPUTS]
        if bad:
            raise DomainError("outputs", bad, f"choose from {OUTPUTS}")
        if self.export_format not in FORMATS:
            raise DomainError("export_format", self.export_format, f"choose from {FORMATS}")
        wants_profiles = "density-profiles" in self.outputs
        if wants_profiles != (self.density_grid is not None):
            raise DomainError("density_grid", self.density_grid,
                              "required exactly when density-profiles are requested")
        if self.density_grid is not None:
            half_width, num_points = self.density_grid
            if not half_width > 0 or int(num_points) < 2:
                raise DomainError("density_grid", self.density_grid,
                                  "needs half_width > 0 (oscillator lengths) and num_points >= 2")
            object.__setattr__(self, "density_grid", (float(half_width), int(num_points)))

    def config(self, omega: float, kappa: float) -> TrapConfig:
        return TrapConfig(omega, kappa, self.mass, self.period, self.hbar)

    @property
    def natural_units(self) -> bool:
        return self.mass == 1.0 and self.hbar == 1.0 and self.period == 1.0

    def as_dict(self) -> dict:
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    def digest(self) -> str:
        payload = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class SweepRow:
    omega: float
    kappa: float
    n: int
    measures: MeasureSet
    energy: float | None
    flags: tuple = ()

    @property
    def method(self) -> str:
        return self.measures.method_tag


@dataclass(frozen=True)
class DensityProfile:
    omega: float
    kappa: float
    n: int
    x: tuple
    rho_x: tuple
    p: tuple
    rho_p: tuple


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    provenance: dict
    errata_flags: tuple = ()
    profiles: tuple = ()

    @property
    def unconverged(self) -> bool:
        return any("unconverged" in row.flags for row in self.rows)


def _filter_outputs(m: MeasureSet, outputs) -> MeasureSet:
    blank = {}
    for key, names in _OUTPUT_FIELDS.items():
        if key not in outputs:
            blank.update(dict.fromkeys(names))
    return replace(m, **blank) if blank else m


def _invariant_flags(m: MeasureSet, n: int, hbar: float) -> list[str]:
    flags = []
    expected = 4.0 * (2 * n + 1) ** 2 / hbar**2
    if abs(m.I_x * m.I_p - expected) > _INVARIANT_RTOL * expected:
        flags.append("invariant:fisher-product")
    if abs(m.uncertainty - hbar * (n + 0.5)) > _INVARIANT_RTOL * hbar * (n + 0.5):
        flags.append("invariant:uncertainty")
    if m.S_x is not None and m.S_p is not None and m.S_x + m.S_p < entropic_bound(hbar) - 1e-10:
        flags.append("invariant:entropic-bound")
    if not m.converged:
        flags.append("unconverged")
    return flags


def _profile(spec: SweepSpec, omega: float, kappa: float, n: int) -> DensityProfile:
    state = Eigenstate(effective_oscillator(spec.config(omega, kappa)), n)
    half_width, num_points = spec.density_grid
    x = np.linspace(-half_width, half_width, num_points) / math.sqrt(state.beta_x)
    p = np.linspace(-half_width, half_width, num_points) / math.sqrt(state.beta_p)
    return DensityProfile(omega, kappa, n, tuple(x.tolist()), tuple(position_density(state, x).tolist()),
                          tuple(p.tolist()), tuple(momentum_density(state, p).tolist()))


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every grid point in omega-major, kappa, n, method order."""
    rows = []
    errata: list[ErratumFlag] = []
    profiles = []
    for omega in spec.omega_values:
        for kappa in spec.kappa_values:
            eff = effective_oscillator(spec.config(omega, kappa))
            for n in spec.n_values:
                point_errata = check_row(omega, kappa, n) if spec.natural_units else []
                errata.extend(point_errata)
                energy = energy_level(eff, n) if "energy" in spec.outputs else None
                for method in spec.methods:
                    m = compute_measures(eff, n, method, spec.tol)
                    flags = _invariant_flags(m, n, spec.hbar)
                    flags += [f"erratum:{e.column}" for e in point_errata]
                    rows.append(SweepRow(omega, kappa, n, _filter_outputs(m, spec.outputs),
                                         energy, tuple(flags)))
                if "density-profiles" in spec.outputs:
                    profiles.append(_profile(spec, omega, kappa, n))
    provenance = {
        "tool": "iontrap-info",
        "version": __version__,
        "config_hash": spec.digest(),
        "methods": list(spec.methods),
        "units": {"mass": spec.mass, "hbar": spec.hbar, "period": spec.period},
    }
    return SweepResult(tuple(rows), provenance, tuple(errata), tuple(profiles))


# -- serialization -----------------------------------------------------------

def _row_record(row: SweepRow) -> dict:
    m = row.measures
    product = m.I_x * m.I_p if m.I_x is not None and m.I_p is not None else None
    return {
        "omega": row.omega, "kappa": row.kappa, "n": row.n, "method": m.method_tag,
        "I_x": m.I_x, "I_p": m.I_p, "IxIp": product,
        "x2": m.x2_mean, "p2": m.p2_mean, "dxdp": m.uncertainty,
        "S_x": m.S_x, "S_p": m.S_p, "J_x": m.J_x, "J_p": m.J_p, "P_x": m.P_x, "P_p": m.P_p,
        "E_n": row.energy, "flags": list(row.flags),
    }


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        if value == 0.0:
            return "0"
        return f"{value:.9g}"
    return str(value)


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in result.rows:
        record = _row_record(row)
        record["flags"] = ";".join(record["flags"])
        writer.writerow([_fmt(record[key]) for key in CSV_HEADER])
    return buf.getvalue()


def to_json(result: SweepResult) -> str:
    payload = {
        "provenance": result.provenance,
        "rows": [_row_record(row) for row in result.rows],
        "errata": [e.as_dict() for e in result.errata_flags],
    }
    if result.profiles:
        payload["profiles"] = [asdict(p) for p in result.profiles]
    return json.dumps(payload, indent=1) + "\n"


def export(result: SweepResult, fmt: str = "csv") -> bytes:
    if fmt == "csv":
        return to_csv(result).encode()
    if fmt == "json":
        return to_json(result).encode()
    raise DomainError("format", fmt, f"choose from {FORMATS}")


def write_export(result: SweepResult, path, fmt: str = "csv") -> None:
    data = export(result, fmt)
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def profiles_to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("omega", "kappa", "n", "x", "rho_x", "p", "rho_p"))
    for prof in result.profiles:
        for x, rx, p, rp in zip(prof.x, prof.rho_x, prof.p, prof.rho_p):
            writer.writerow([_fmt(v) for v in (prof.omega, prof.kappa, prof.n, x, rx, p, rp)])
    return buf.getvalue()


def from_json(text: str | bytes) -> SweepResult:
    payload = json.loads(text)
    rows = []
    for r in payload["rows"]:
        flags = tuple(r["flags"])
        m = MeasureSet(r["I_x"], r["I_p"], r["S_x"], r["S_p"], r["x2"], r["p2"], r["dxdp"],
                       r["J_x"], r["J_p"], r["P_x"], r["P_p"], r["method"],
                       "unconverged" not in flags)
        rows.append(SweepRow(r["omega"], r["kappa"], r["n"], m, r["E_n"], flags))
    errata = tuple(ErratumFlag(**e) for e in payload.get("errata", ()))
    names = [f.name for f in fields(DensityProfile)]
    profiles = tuple(
        DensityProfile(**{k: tuple(v) if isinstance(v, list) else v for k, v in p.items() if k in names})
        for p in payload.get("profiles", ())
    )
    return SweepResult(tuple(rows), payload["provenance"], errata, profiles)


def table1_spec(block: str, methods=(CLOSED,)) -> SweepSpec:
    from .table1 import BLOCKS

    grid = BLOCKS[block]
    return SweepSpec(grid["omega"], grid["kappa"], grid["n"], methods=tuple(methods))
