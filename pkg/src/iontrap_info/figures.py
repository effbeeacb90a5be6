"""Plot-ready tables for the spectrum, density and information-measure figures.

No plotting backend is used; each dataset is a set of named columns that any
external plotter can consume.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .eigenstates import Eigenstate, momentum_density, position_density
from .measures import CLOSED, compute_measures
from .oscillator import DomainError, TrapConfig, effective_oscillator, energy_level, truncated_potential

FIGURE_IDS = ("fig2", "fig3", "fig4", "fig4a", "fig4b", "fig5", "fig5a", "fig5b",
              "fig6", "fig7", "fig8")

DEFAULT_OMEGA_RANGE = (0.5, 3.0, 11)
DEFAULT_KAPPA_RANGE = (0.0, 0.9, 10)
RANGE_NOTE = ("omega/kappa ranges are tool-chosen defaults "
              "(omega in [0.5, 3], kappa in [0, 0.9]); override with --omega-range/--kappa-range")
COMPLEXITY_NOTE = ("ground-state Fisher-Shannon complexity is identically 1 for a Gaussian density; "
                   "a surface growing across the (omega, kappa) plane is not reproducible with "
                   "consistent closed forms, so these surfaces are flat by construction")

_DENSITY_PANELS = {
    "fig4a": ("x", 2.0, (0.1, 0.5, 0.7), "kappa"),
    "fig4b": ("x", (1.0, 2.0, 3.0), 0.5, "omega"),
    "fig5a": ("p", 2.0, (0.1, 0.5, 0.7), "kappa"),
    "fig5b": ("p", (1.0, 2.0, 3.0), 0.5, "omega"),
}


@dataclass
class FigureData:
    figure_id: str
    columns: dict
    notes: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        for note in self.notes:
            buf.write(f"# {note}\n")
        writer = csv.writer(buf, lineterminator="\n")
        names = list(self.columns)
        writer.writerow(names)
        for values in zip(*(self.columns[n] for n in names)):
            writer.writerow([f"{v:.9g}" if isinstance(v, float) else v for v in values])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"figure": self.figure_id, "notes": self.notes,
                           "columns": self.columns}, indent=1) + "\n"


def _grid(spec) -> np.ndarray:
    lo, hi, count = spec
    return np.linspace(float(lo), float(hi), int(count))


def _fig2(omega=2.0, kappa=0.2, levels=4, half_width_lengths=6.0, num_points=241, **units):
    eff = effective_oscillator(TrapConfig(omega, kappa, **units))
    state_x = np.linspace(-half_width_lengths, half_width_lengths, num_points) * eff.osc_length
    cols = {"x": state_x.tolist(), "V_truncated": truncated_potential(eff, state_x).tolist()}
    notes = []
    for n in range(levels):
        e_n = energy_level(eff, n)
        cols[f"psi_{n}+E_{n}"] = (Eigenstate(eff, n).psi(state_x) + e_n).tolist()
        notes.append(f"E_{n}={e_n:.9g}")
    return FigureData("fig2", cols, notes)


def _fig3(levels=6, omega_values=(1.5, 2.0, 2.5, 3.0), fixed_kappa=0.1,
          kappa_values=(0.1, 0.3, 0.5, 0.7, 0.9), fixed_omega=1.0, **units):
    cols = {"series": [], "omega": [], "kappa": [], "n": [], "E_n": []}

    def add(series, omega, kappa, eff_energy):
        for n in range(levels):
            cols["series"].append(series)
            cols["omega"].append(float(omega))
            cols["kappa"].append(float(kappa))
            cols["n"].append(n)
            cols["E_n"].append(eff_energy(n))

    hbar = units.get("hbar", 1.0)
    add("reference", 1.0, 0.0, lambda n: hbar * 1.0 * (n + 0.5))
    for omega in omega_values:
        eff = effective_oscillator(TrapConfig(omega, fixed_kappa, **units))
        add("omega-sweep", omega, fixed_kappa, lambda n, eff=eff: energy_level(eff, n))
    for kappa in kappa_values:
        eff = effective_oscillator(TrapConfig(fixed_omega, kappa, **units))
        add("kappa-sweep", fixed_omega, kappa, lambda n, eff=eff: energy_level(eff, n))
    notes = ["reference line: omega=1, kappa=0, lambda=0"]
    return FigureData("fig3", cols, notes)


def _density(panel_ids, half_width_lengths=6.0, num_points=241, **units):
    configs = []
    for pid in panel_ids:
        space, omegas, kappas, _ = _DENSITY_PANELS[pid]
        omegas = omegas if isinstance(omegas, tuple) else (omegas,)
        kappas = kappas if isinstance(kappas, tuple) else (kappas,)
        for w in omegas:
            for k in kappas:
                configs.append((pid, space, w, k))
    scales = []
    for _, space, w, k in configs:
        st = Eigenstate(effective_oscillator(TrapConfig(w, k, **units)), 0)
        scales.append(1.0 / math.sqrt(st.beta_x if space == "x" else st.beta_p))
    axis = np.linspace(-half_width_lengths, half_width_lengths, num_points) * max(scales)
    space = configs[0][1]
    cols = {space: axis.tolist()}
    for pid, sp, w, k in configs:
        st = Eigenstate(effective_oscillator(TrapConfig(w, k, **units)), 0)
        density = position_density(st, axis) if sp == "x" else momentum_density(st, axis)
        cols[f"{pid}:rho_{sp}[omega={w:g},kappa={k:g}]"] = density.tolist()
    fig_id = panel_ids[0][:4] if len(panel_ids) > 1 else panel_ids[0]
    return FigureData(fig_id, cols, [])


def _surface(fig_id, names, omega_range=DEFAULT_OMEGA_RANGE, kappa_range=DEFAULT_KAPPA_RANGE,
             method=CLOSED, **units):
    cols = {"omega": [], "kappa": []}
    for name in names:
        cols[name] = []
    for w in _grid(omega_range):
        for k in _grid(kappa_range):
            m = compute_measures(effective_oscillator(TrapConfig(float(w), float(k), **units)), 0, method)
            cols["omega"].append(float(w))
            cols["kappa"].append(float(k))
            for name in names:
                cols[name].append(getattr(m, name))
    notes = [RANGE_NOTE]
    if fig_id == "fig8":
        notes.append(COMPLEXITY_NOTE)
    return FigureData(fig_id, cols, notes)


def emit_figure_data(figure_id: str, **params) -> FigureData:
    """Build the dataset for one figure; ``params`` override caption defaults."""
    if figure_id not in FIGURE_IDS:
        raise DomainError("figure_id", figure_id, f"choose from {', '.join(FIGURE_IDS)}")
    if figure_id == "fig2":
        return _fig2(**params)
    if figure_id == "fig3":
        return _fig3(**params)
    if figure_id in ("fig4", "fig5"):
        return _density((figure_id + "a", figure_id + "b"), **params)
    if figure_id in _DENSITY_PANELS:
        return _density((figure_id,), **params)
    names = {"fig6": ("I_x", "I_p"), "fig7": ("S_x", "S_p"), "fig8": ("P_x", "P_p")}[figure_id]
    return _surface(figure_id, names, **params)
