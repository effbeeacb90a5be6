"""Finite-difference check of the harmonic truncation against the full lattice.

The Hamiltonian -hbar^2/(2m) d^2/dx^2 + V(x) is discretized with the
3-point Laplacian on a symmetric grid with Dirichlet walls one step beyond
the outermost points. The lowest levels come from Sturm-count multisection,
the vectors from inverse iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_banded

from .hermite import hermite_function
from .oscillator import (DomainError, TrapConfig, effective_oscillator, energy_levels,
                         full_potential, truncated_potential)

FULL = "full"
TRUNCATED = "truncated"
MIN_POINTS = 101
MIN_WINDOW_LENGTHS = 8.0
MAX_LEVELS = 20


class EigensolverError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class GridHamiltonian:
    config: TrapConfig
    x_min: float
    x_max: float
    num_points: int
    potential_kind: str
    diagonal: np.ndarray
    off_diagonal: float

    @property
    def x(self) -> np.ndarray:
        return _symmetric_grid(self.x_max, self.num_points)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.num_points - 1)

    @property
    def norm_bound(self) -> float:
        return float(np.max(np.abs(self.diagonal)) + 2.0 * abs(self.off_diagonal))


def _symmetric_grid(half_width: float, num_points: int) -> np.ndarray:
    x = np.linspace(-half_width, half_width, num_points)
    # exact mirror symmetry of the grid, so V(x_i) == V(-x_i) bit for bit
    return 0.5 * (x - x[::-1])


def default_half_width(config: TrapConfig) -> float:
    eff = effective_oscillator(config)
    return max(10.0 * eff.osc_length, 1.5 * config.period)


def discretize(config: TrapConfig, kind: str = FULL, x_half_width: float | None = None,
               num_points: int = 4001) -> GridHamiltonian:
    eff = effective_oscillator(config)
    if x_half_width is None:
        x_half_width = default_half_width(config)
    if num_points < MIN_POINTS or num_points % 2 == 0:
        raise DomainError("num_points", num_points, f"must be odd and >= {MIN_POINTS}")
    if x_half_width < MIN_WINDOW_LENGTHS * eff.osc_length * (1.0 - 1e-12):
        raise DomainError("x_half_width", x_half_width,
                          f"must be at least {MIN_WINDOW_LENGTHS:g} oscillator lengths "
                          f"({MIN_WINDOW_LENGTHS * eff.osc_length:.6g})")
    x = _symmetric_grid(x_half_width, num_points)
    if kind == FULL:
        v = full_potential(config, x)
    elif kind == TRUNCATED:
        v = truncated_potential(eff, x)
    else:
        raise ValueError(f"unknown potential kind {kind!r}")
    dx = 2.0 * x_half_width / (num_points - 1)
    kinetic = config.hbar**2 / (config.mass * dx * dx)
    return GridHamiltonian(config, -x_half_width, x_half_width, num_points, kind,
                           kinetic + v, -0.5 * kinetic)


def sturm_count(h: GridHamiltonian, shifts) -> np.ndarray:
    """Number of eigenvalues strictly below each shift."""
    shifts = np.asarray(shifts, dtype=float)
    e2 = h.off_diagonal**2
    pivmin = np.finfo(float).tiny / np.finfo(float).eps * max(1.0, e2)
    count = np.zeros(shifts.shape, dtype=np.int64)
    q = np.ones_like(shifts)
    first = True
    for d in h.diagonal:
        q = d - shifts if first else d - shifts - e2 / q
        first = False
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def _lowest_eigenvalues(h: GridHamiltonian, k: int, sections: int = 32, max_sweeps: int = 40):
    e = abs(h.off_diagonal)
    lo = np.full(k, float(np.min(h.diagonal)) - 2.0 * e)
    hi = np.full(k, float(np.max(h.diagonal)) + 2.0 * e)
    levels = np.arange(k)
    frac = np.arange(1, sections) / sections
    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        width = hi - lo
        if np.all(width <= 2.0 * eps * np.maximum(np.abs(lo), np.abs(hi)) + 1e-300):
            break
        shifts = lo[:, None] + width[:, None] * frac[None, :]
        counts = sturm_count(h, shifts)
        above = counts > levels[:, None]
        # first shift with more than j eigenvalues below it bounds level j from above
        first = np.where(above.any(axis=1), above.argmax(axis=1), sections - 1)
        ext = np.concatenate((lo[:, None], shifts, hi[:, None]), axis=1)
        lo, hi = ext[levels, first], ext[levels, first + 1]
    return 0.5 * (lo + hi)


class Eigenpairs(NamedTuple):
    energies: np.ndarray
    vectors: np.ndarray
    x: np.ndarray
    converged: tuple


def _fix_sign(v: np.ndarray) -> np.ndarray:
    # leftmost lobe positive
    i = int(np.argmax(np.abs(v) > 1e-3 * np.max(np.abs(v))))
    return v if v[i] > 0 else -v


def lowest_eigenpairs(h: GridHamiltonian, k: int, max_iterations: int = 6) -> Eigenpairs:
    if not 1 <= k <= MAX_LEVELS or k >= h.num_points // 10:
        raise DomainError("k", k, f"must satisfy 1 <= k <= {MAX_LEVELS} and k << num_points")
    energies = _lowest_eigenvalues(h, k)
    n = h.num_points
    off = h.off_diagonal
    tol = 1e-10 * h.norm_bound
    rng = np.random.default_rng(0)
    start = 1.0 + 0.1 * rng.standard_normal(n)
    vectors = np.empty((k, n))
    converged = []
    for j, lam in enumerate(energies):
        ab = np.empty((3, n))
        ab[0, :] = off
        ab[1, :] = h.diagonal - lam
        ab[2, :] = off
        y = start.copy()
        ok = False
        for _ in range(max_iterations):
            y = solve_banded((1, 1), ab, y, check_finite=False)
            for prev in vectors[:j]:
                y -= np.dot(prev, y) * prev
            y /= np.linalg.norm(y)
            residual = h.diagonal * y - lam * y
            residual[1:] += off * y[:-1]
            residual[:-1] += off * y[1:]
            if np.linalg.norm(residual) <= tol:
                ok = True
                break
        vectors[j] = y
        converged.append(ok)
    vectors = np.array([_fix_sign(v) for v in vectors]) / math.sqrt(h.dx)
    return Eigenpairs(energies, vectors, h.x, tuple(converged))


def sign_changes(v: np.ndarray, rel_floor: float = 1e-8) -> int:
    s = np.sign(v[np.abs(v) > rel_floor * np.max(np.abs(v))])
    return int(np.count_nonzero(s[1:] != s[:-1]))


@dataclass(frozen=True, eq=False)
class SpectrumComparison:
    analytic_levels: np.ndarray
    numeric_levels: np.ndarray
    truncated_levels: np.ndarray
    level_errors: np.ndarray
    ground_density_l2_error: float
    regime_ratio: float
    converged: bool = True

    def rows(self):
        for n in range(len(self.analytic_levels)):
            yield {
                "n": n,
                "E_analytic": float(self.analytic_levels[n]),
                "E_full": float(self.numeric_levels[n]),
                "E_truncated": float(self.truncated_levels[n]),
                "level_error": float(self.level_errors[n]),
            }


def validate_truncation(config: TrapConfig, k: int = 4, num_points: int = 4001,
                        x_half_width: float | None = None) -> SpectrumComparison:
    """Solve the full and truncated potentials on one grid and compare them."""
    eff = effective_oscillator(config)
    if x_half_width is None:
        x_half_width = default_half_width(config)
    full = lowest_eigenpairs(discretize(config, FULL, x_half_width, num_points), k)
    trunc = lowest_eigenpairs(discretize(config, TRUNCATED, x_half_width, num_points), k)
    dx = 2.0 * x_half_width / (num_points - 1)
    errors = np.abs(full.energies - trunc.energies) / (config.hbar * eff.omega_eff)
    drho = full.vectors[0] ** 2 - trunc.vectors[0] ** 2
    return SpectrumComparison(
        analytic_levels=energy_levels(eff, k),
        numeric_levels=full.energies,
        truncated_levels=trunc.energies,
        level_errors=errors,
        ground_density_l2_error=float(math.sqrt(np.sum(drho * drho) * dx)),
        regime_ratio=eff.regime_ratio,
        converged=all(full.converged) and all(trunc.converged),
    )


def richardson_levels(config: TrapConfig, kind: str = TRUNCATED, k: int = 4,
                      num_points: int = 4001, x_half_width: float | None = None) -> np.ndarray:
    """Levels extrapolated from grids with spacing dx and 2 dx (second-order error model)."""
    if x_half_width is None:
        x_half_width = default_half_width(config)
    fine = lowest_eigenpairs(discretize(config, kind, x_half_width, num_points), k).energies
    coarse = lowest_eigenpairs(discretize(config, kind, x_half_width, (num_points + 1) // 2), k).energies
    return (4.0 * fine - coarse) / 3.0


def analytic_ground_on_grid(config: TrapConfig, x: np.ndarray) -> np.ndarray:
    eff = effective_oscillator(config)
    return hermite_function(0, x, config.mass * eff.omega_eff / config.hbar)[0]
