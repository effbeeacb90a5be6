"""Acceptance gate: every numbered criterion at its stated tolerance.

Each test is one part of a criterion; the terminal summary prints a single
PASS/FAIL line per criterion (all parts must pass).
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from iontrap_info.eigenstates import Eigenstate, fourier_check, momentum_density
from iontrap_info.figures import emit_figure_data
from iontrap_info.measures import (BBM_BOUND, QUADRATURE, closed_measures, compute_measures,
                                   fisher_numeric, moments_numeric, normalization_numeric,
                                   shannon_numeric)
from iontrap_info.oscillator import TrapConfig, effective_oscillator, energy_levels
from iontrap_info.sweep import export, run_sweep, table1_spec, to_csv
from iontrap_info.table1 import COLUMNS, lookup, matches_printed
from iontrap_info.truncation import (TRUNCATED, discretize, lowest_eigenpairs,
                                     validate_truncation)

GRID = [(w, k) for w in (1.0, 2.0, 3.0) for k in (0.0, 0.2, 0.5, 0.8)]
N_MAX = 10
GOLDEN = Path(__file__).parent / "golden" / "table1_kappa.csv"

# The six misprinted cells and their replacements, as stated by the criterion
# (independent of the tool's own flagging logic).
ERRATA = {
    (1.0, 0.2, 0, "p2"): "0.447214", (1.0, 0.4, 0, "p2"): "0.387298", (1.0, 0.8, 0, "p2"): "0.223607",
    (1.0, 0.2, 3, "I_x"): "12.52198", (1.0, 0.4, 3, "I_x"): "10.84435", (1.0, 0.8, 3, "I_x"): "6.26099",
}


def _agrees_with_printed(value, text):
    """Within half a unit of the last printed decimal of ``text``."""
    decimals = len(text.split(".")[1])
    return abs(value - float(text)) <= 0.5 * 10.0 ** -decimals * (1 + 1e-9)


def criterion(number, title):
    return pytest.mark.acceptance(number, title)


def eff(omega, kappa, **units):
    return effective_oscillator(TrapConfig(omega, kappa, **units))


def _quadrature(omega, kappa, n, cache={}):
    key = (omega, kappa, n)
    if key not in cache:
        cache[key] = compute_measures(eff(omega, kappa), n, QUADRATURE)
    return cache[key]


# -- 1 ---------------------------------------------------------------------

C1 = criterion(1, "Table 1 reproduction (consistent cells, 5 s.f., < 1 s)")


@C1
def test_c1_consistent_cells_to_five_figures():
    checked, misses = 0, []
    for block in ("kappa", "omega"):
        for row in run_sweep(table1_spec(block)).rows:
            m = row.measures
            cells = {"I_x": m.I_x, "I_p": m.I_p, "IxIp": m.I_x * m.I_p,
                     "x2": m.x2_mean, "p2": m.p2_mean, "dxdp": m.uncertainty}
            ref = lookup(row.omega, row.kappa, row.n)
            for col in COLUMNS:
                if (row.omega, row.kappa, row.n, col) in ERRATA:
                    continue
                checked += 1
                if not matches_printed(cells[col], ref[col]):
                    misses.append((row.omega, row.kappa, row.n, col, cells[col], ref[col]))
    assert checked == 24 * 6 - 6
    assert misses == []


@C1
def test_c1_runtime_under_one_second():
    start = time.perf_counter()
    for block in ("kappa", "omega"):
        export(run_sweep(table1_spec(block)))
    assert time.perf_counter() - start < 1.0


# -- 2 ---------------------------------------------------------------------

C2 = criterion(2, "Errata detection (exactly 6 cells, justified replacements)")


@C2
def test_c2_exactly_the_six_cells_are_flagged():
    flags = run_sweep(table1_spec("kappa")).errata_flags + run_sweep(table1_spec("omega")).errata_flags
    assert {(f.omega, f.kappa, f.n, f.column) for f in flags} == set(ERRATA)
    assert len(flags) == 6


@C2
def test_c2_replacements_and_row_justification():
    flags = run_sweep(table1_spec("kappa")).errata_flags
    for f in flags:
        stated = ERRATA[(f.omega, f.kappa, f.n, f.column)]
        assert _agrees_with_printed(f.computed, stated)
        # the row's own product / uncertainty cells force the same replacement
        assert matches_printed(f.implied, float(stated), digits=5)
        assert ("I_x*I_p" if f.column == "I_x" else "dx*dp") in f.justification


# -- 3 ---------------------------------------------------------------------

C3 = criterion(3, "Fisher product I_x*I_p = 4(2n+1)^2")


@C3
def test_c3_closed_form_product():
    for omega, kappa in GRID:
        for n in range(N_MAX + 1):
            m = closed_measures(eff(omega, kappa), n)
            assert abs(m.I_x * m.I_p - 4 * (2 * n + 1) ** 2) < 1e-10
            assert m.I_x * m.I_p >= 4


@C3
def test_c3_quadrature_product():
    for omega, kappa in GRID:
        for n in range(N_MAX + 1):
            m = _quadrature(omega, kappa, n)
            expected = 4 * (2 * n + 1) ** 2
            assert abs(m.I_x * m.I_p - expected) <= 1e-6 * expected


# -- 4 ---------------------------------------------------------------------

C4 = criterion(4, "Uncertainty product dx*dp = hbar(n+1/2)")


@C4
def test_c4_closed_form_uncertainty():
    for omega, kappa in GRID:
        for n in range(N_MAX + 1):
            assert abs(closed_measures(eff(omega, kappa), n).uncertainty - (n + 0.5)) < 1e-10


@C4
def test_c4_quadrature_uncertainty():
    for omega, kappa in GRID:
        for n in range(N_MAX + 1):
            assert abs(_quadrature(omega, kappa, n).uncertainty - (n + 0.5)) < 1e-8


# -- 5 ---------------------------------------------------------------------

C5 = criterion(5, "Entropy sum and entropic uncertainty bound")


@C5
def test_c5_ground_entropy_sum_on_grid():
    for omega, kappa in GRID:
        m = closed_measures(eff(omega, kappa), 0)
        assert abs(m.S_x + m.S_p - BBM_BOUND) < 1e-10
        q = _quadrature(omega, kappa, 0)
        assert abs(q.S_x + q.S_p - BBM_BOUND) < 1e-10


@C5
@settings(max_examples=200, deadline=None)
@given(st.floats(1e-3, 1e3), st.floats(0.0, 0.999999))
def test_c5_ground_entropy_sum_everywhere(omega, kappa):
    m = closed_measures(eff(omega, kappa), 0)
    assert abs(m.S_x + m.S_p - BBM_BOUND) < 1e-10


@C5
def test_c5_excited_states_exceed_bound():
    for omega, kappa in GRID:
        for n in range(1, 6):
            m = _quadrature(omega, kappa, n)
            assert m.converged and m.S_x + m.S_p > BBM_BOUND


@C5
def test_c5_entropy_scaling_law():
    for n in range(0, 6):
        ref = shannon_numeric(Eigenstate(eff(1.0, 0.0), n))
        for omega, kappa in GRID:
            e = eff(omega, kappa)
            s = _quadrature(omega, kappa, n)
            half_log = 0.5 * math.log(e.omega_eff)
            assert abs(s.S_x - (ref.x - half_log)) < 1e-8
            assert abs(s.S_p - (ref.p + half_log)) < 1e-8


# -- 6 ---------------------------------------------------------------------

C6 = criterion(6, "Fisher-Shannon complexity (P = 1 ground, P > 1 and scale-free excited)")


@C6
def test_c6_ground_state_complexity_is_one():
    for omega, kappa in GRID:
        for m in (closed_measures(eff(omega, kappa), 0), _quadrature(omega, kappa, 0)):
            assert abs(m.P_x - 1) < 1e-8 and abs(m.P_p - 1) < 1e-8


@C6
@settings(max_examples=100, deadline=None)
@given(st.floats(1e-2, 1e2), st.floats(0.0, 0.9999))
def test_c6_ground_state_complexity_everywhere(omega, kappa):
    m = closed_measures(eff(omega, kappa), 0)
    assert abs(m.P_x - 1) < 1e-8 and abs(m.P_p - 1) < 1e-8


@C6
def test_c6_excited_complexity_exceeds_one_and_is_scale_free():
    for n in range(1, N_MAX + 1):
        values = [(_quadrature(w, k, n).P_x, _quadrature(w, k, n).P_p) for w, k in GRID]
        arr = np.array(values)
        assert np.all(arr > 1)
        assert np.max(np.abs(arr - arr[0])) < 1e-8


# -- 7 ---------------------------------------------------------------------

C7 = criterion(7, "Oracle equivalence (Gauss-Hermite vs trapezoid vs closed; Fourier check)")


def _rel(a, b):
    return abs(a - b) / abs(b)


@C7
def test_c7_quadrature_paths_agree_with_closed_forms():
    worst = 0.0
    for omega, kappa in GRID:
        e = eff(omega, kappa)
        for n in range(N_MAX + 1):
            state = Eigenstate(e, n)
            closed = closed_measures(e, n)
            for scheme in ("gauss", "trapezoid"):
                fisher = fisher_numeric(state, scheme)
                moments = moments_numeric(state, scheme)
                norm = normalization_numeric(state, scheme)
                pairs = [(fisher.x, closed.I_x), (fisher.p, closed.I_p),
                         (moments.x2_mean, closed.x2_mean), (moments.p2_mean, closed.p2_mean),
                         (norm.x, 1.0), (norm.p, 1.0)]
                worst = max(worst, *(_rel(a, b) for a, b in pairs))
    assert worst < 1e-8


@C7
def test_c7_gauss_and_trapezoid_agree_with_each_other():
    for omega, kappa in GRID:
        for n in range(N_MAX + 1):
            state = Eigenstate(eff(omega, kappa), n)
            g, t = fisher_numeric(state, "gauss"), fisher_numeric(state, "trapezoid")
            assert _rel(g.x, t.x) < 1e-8 and _rel(g.p, t.p) < 1e-8
            g, t = moments_numeric(state, "gauss"), moments_numeric(state, "trapezoid")
            assert _rel(g.x2_mean, t.x2_mean) < 1e-8 and _rel(g.p2_mean, t.p2_mean) < 1e-8


@C7
def test_c7_momentum_closed_form_matches_fourier_transform():
    p = np.linspace(-4.0, 4.0, 33)
    for omega, kappa in GRID:
        for n in range(5):
            state = Eigenstate(eff(omega, kappa), n)
            values, ok = fourier_check(state, p / math.sqrt(state.beta_p))
            assert ok
            assert np.max(np.abs(values - momentum_density(state, p / math.sqrt(state.beta_p)))) < 1e-8


# -- 8 ---------------------------------------------------------------------

C8 = criterion(8, "Truncation validator (coincidence, 1e-6 levels at 4001 pts, 2nd order, < 10 s)")
CASE = TrapConfig(2.0, 0.2, period=1.0)


@C8
def test_c8_spectra_coincide_without_lattice():
    for omega in (1.0, 2.0, 3.0):
        res = validate_truncation(TrapConfig(omega, 0.0))
        assert np.max(np.abs(res.numeric_levels - res.truncated_levels)) < 1e-10


@C8
def test_c8_truncated_levels_within_1e6_relative_at_4001_points():
    pairs = lowest_eigenpairs(discretize(CASE, TRUNCATED, num_points=4001), 4)
    exact = energy_levels(effective_oscillator(CASE), 4)
    rel = np.abs(pairs.energies - exact) / exact
    assert np.all(rel < 1e-6), f"relative level errors {rel}"


@C8
def test_c8_second_order_convergence():
    exact = energy_levels(effective_oscillator(CASE), 4)
    err = [np.abs(lowest_eigenpairs(discretize(CASE, TRUNCATED, num_points=num), 4).energies - exact)
           for num in (2001, 4001)]
    ratios = err[0] / err[1]
    assert np.all(np.abs(ratios - 4.0) <= 0.5), f"ratios {ratios}"


@C8
def test_c8_runtime_per_config():
    for config in (CASE, TrapConfig(1.0, 0.0), TrapConfig(3.0, 0.8, period=1.0)):
        start = time.perf_counter()
        validate_truncation(config)
        assert time.perf_counter() - start < 10.0


# -- 9 ---------------------------------------------------------------------

C9 = criterion(9, "Energy spectrum behaviour (reference line, collapse gap < 1e-4 at kappa = 1-1e-8)")


def _series(data, name):
    cols = data.columns
    return [(cols["omega"][i], cols["kappa"][i], cols["n"][i], cols["E_n"][i])
            for i, s in enumerate(cols["series"]) if s == name]


@C9
def test_c9_above_reference_for_stiffer_trap():
    data = emit_figure_data("fig3", omega_values=(1.5, 2.0, 2.5, 3.0), fixed_kappa=0.1)
    ref = {n: e for _, _, n, e in _series(data, "reference")}
    rows = _series(data, "omega-sweep")
    assert rows and all(e > ref[n] for _, _, n, e in rows)


@C9
def test_c9_below_reference_as_kappa_grows():
    data = emit_figure_data("fig3", kappa_values=(0.5, 0.7, 0.9), fixed_omega=1.0)
    ref = {n: e for _, _, n, e in _series(data, "reference")}
    assert all(e < ref[n] for _, k, n, e in _series(data, "kappa-sweep") if k == 0.9)


@C9
def test_c9_spacing_shrinks_toward_unit_kappa():
    kappas = (0.9, 0.99, 0.999, 0.9999)
    data = emit_figure_data("fig3", kappa_values=kappas, fixed_omega=1.0)
    rows = _series(data, "kappa-sweep")
    spacing = [np.mean(np.diff([e for _, kk, _, e in rows if kk == k])) for k in kappas]
    assert all(b < a for a, b in zip(spacing, spacing[1:]))


@C9
def test_c9_gap_below_1e4_at_kappa_one_minus_1e8():
    omega = 1.0
    data = emit_figure_data("fig3", kappa_values=(1.0 - 1e-8,), fixed_omega=omega, levels=2)
    levels = [e for _, _, _, e in _series(data, "kappa-sweep")]
    gap = levels[1] - levels[0]
    assert gap < 1e-4 * omega, f"gap = {gap!r}"


# -- 10 --------------------------------------------------------------------

C10 = criterion(10, "Determinism (byte-identical Table 1 golden CSV)")


@C10
def test_c10_two_runs_are_byte_identical():
    a = to_csv(run_sweep(table1_spec("kappa"))).encode()
    b = to_csv(run_sweep(table1_spec("kappa"))).encode()
    assert a == b
    assert a == GOLDEN.read_bytes()
